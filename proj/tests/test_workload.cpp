#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "greenplace/workload.hpp"

using namespace greenplace;

TEST_CASE("swf parsing: comments, positional fields, field-count errors") {
    SUBCASE("comment-only stream yields no jobs") {
        std::istringstream in("; UnixStartTime: 0\n;\n");
        CHECK(parse_swf(in).empty());
    }

    SUBCASE("18-field data line is read positionally") {
        std::istringstream in(
            "1 0 0 3600 4 -1 -1 4 -1 -1 1 1 1 1 1 1 -1 -1\n");
        auto jobs = parse_swf(in);
        REQUIRE(jobs.size() == 1);
        CHECK(jobs[0].job_id == 1);
        CHECK(jobs[0].submit_time_s == 0.0);
        CHECK(jobs[0].run_time_s == 3600.0);
        CHECK(jobs[0].pes == 4);
    }

    SUBCASE("allocated processors -1 falls back to requested processors") {
        std::istringstream in(
            "7 60 0 100 -1 -1 -1 8 -1 -1 1 1 1 1 1 1 -1 -1\n");
        auto jobs = parse_swf(in);
        REQUIRE(jobs.size() == 1);
        CHECK(jobs[0].pes == 8);
    }

    SUBCASE("short line raises a parse error naming the line") {
        std::istringstream in("; header\n1 2 3\n");
        CHECK_THROWS_AS(parse_swf(in), SwfParseError);
        std::istringstream again("; header\n1 2 3\n");
        try {
            parse_swf(again);
        } catch (const SwfParseError& e) {
            CHECK(e.line == 2);
        }
    }

    SUBCASE("non-positive run time or processors dropped with a count") {
        std::istringstream in(
            "1 0 0 0 4 -1 -1 4 -1 -1 1 1 1 1 1 1 -1 -1\n"
            "2 0 0 100 -1 -1 -1 -1 -1 -1 1 1 1 1 1 1 -1 -1\n"
            "3 0 0 100 2 -1 -1 2 -1 -1 1 1 1 1 1 1 -1 -1\n");
        SwfParseStats stats;
        auto jobs = parse_swf(in, &stats);
        CHECK(jobs.size() == 1);
        CHECK(stats.dropped == 2);
    }
}

TEST_CASE("emitted traces re-parse to the same job list") {
    std::vector<Job> jobs;
    for (int i = 0; i < 40; ++i) {
        Job j;
        j.job_id = i;
        j.submit_time_s = i * 37.5;
        j.run_time_s = 600 + i * 13;
        j.pes = 1 + i % 9;
        if (i % 3 == 0)
            j.mem_req_gb = 0.5 * (i + 1);
        jobs.push_back(j);
    }
    std::istringstream in(emit_swf(jobs));
    auto parsed = parse_swf(in);
    REQUIRE(parsed.size() == jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        CHECK(parsed[i].job_id == jobs[i].job_id);
        CHECK(parsed[i].submit_time_s == jobs[i].submit_time_s);
        CHECK(parsed[i].run_time_s == jobs[i].run_time_s);
        CHECK(parsed[i].pes == jobs[i].pes);
        CHECK(parsed[i].mem_req_gb.has_value() == jobs[i].mem_req_gb.has_value());
        if (jobs[i].mem_req_gb)
            CHECK(*parsed[i].mem_req_gb == *jobs[i].mem_req_gb);
    }
}

TEST_CASE("job-to-instance-type mapping rounds up and caps") {
    CHECK(vm_type_for(1) == VmType::Type1);
    CHECK(vm_type_for(2) == VmType::Type2);
    CHECK(vm_type_for(3) == VmType::Type3); // round up to the next covering type
    CHECK(vm_type_for(4) == VmType::Type3);
    CHECK(vm_type_for(8) == VmType::Type4);
    CHECK(vm_type_for(16) == VmType::Type5);
    CHECK(vm_type_for(64) == VmType::Type5); // cap
}

TEST_CASE("synthesizer hits the type mix, windows, and determinism") {
    SUBCASE("n=1000 gives the exact 40/30/20/8/2 split") {
        auto cloudlets = synthesize(1000, 86400, 42);
        REQUIRE(cloudlets.size() == 1000);
        std::map<VmType, int> hist;
        for (const Cloudlet& c : cloudlets)
            ++hist[c.vm_type];
        CHECK(hist[VmType::Type1] == 400);
        CHECK(hist[VmType::Type2] == 300);
        CHECK(hist[VmType::Type3] == 200);
        CHECK(hist[VmType::Type4] == 80);
        CHECK(hist[VmType::Type5] == 20);
    }

    SUBCASE("n=1 gives one Type 1 cloudlet (largest share wins the remainder)") {
        auto cloudlets = synthesize(1, 3600, 7);
        REQUIRE(cloudlets.size() == 1);
        CHECK(cloudlets[0].vm_type == VmType::Type1);
    }

    SUBCASE("same (n, seed) twice is identical") {
        auto a = synthesize(250, 86400, 9);
        auto b = synthesize(250, 86400, 9);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].job.job_id == b[i].job.job_id);
            CHECK(a[i].job.submit_time_s == b[i].job.submit_time_s);
            CHECK(a[i].job.run_time_s == b[i].job.run_time_s);
            CHECK(a[i].vm_type == b[i].vm_type);
        }
    }

    SUBCASE("every cloudlet's batch index matches its submit window, sorted, run times bounded") {
        auto cloudlets = synthesize(500, 86400, 3);
        double prev = 0;
        for (const Cloudlet& c : cloudlets) {
            CHECK(c.batch_index == static_cast<int>(c.job.submit_time_s / 600.0));
            CHECK(c.job.submit_time_s >= prev);
            prev = c.job.submit_time_s;
            CHECK(c.job.run_time_s >= 600.0);
            CHECK(c.job.run_time_s <= 6 * 3600.0);
            CHECK(c.job.submit_time_s < 86400.0);
        }
    }

    SUBCASE("type histogram deviates from the shares by less than 1/n per type") {
        const int n = 977; // awkward size forces remainder rounding
        auto cloudlets = synthesize(n, 86400, 5);
        std::map<VmType, int> hist;
        for (const Cloudlet& c : cloudlets)
            ++hist[c.vm_type];
        const double shares[] = {0.40, 0.30, 0.20, 0.08, 0.02};
        for (int t = 0; t < kVmTypeCount; ++t) {
            double frac = static_cast<double>(hist[static_cast<VmType>(t)]) / n;
            CHECK(std::abs(frac - shares[t]) < 1.0 / n);
        }
    }
}

TEST_CASE("jsonl round trip preserves cloudlets") {
    auto cloudlets = synthesize(50, 7200, 11);
    std::istringstream in(cloudlets_to_jsonl(cloudlets));
    auto back = cloudlets_from_jsonl(in);
    REQUIRE(back.size() == cloudlets.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].job.job_id == cloudlets[i].job.job_id);
        CHECK(back[i].job.submit_time_s == cloudlets[i].job.submit_time_s);
        CHECK(back[i].job.run_time_s == cloudlets[i].job.run_time_s);
        CHECK(back[i].vm_type == cloudlets[i].vm_type);
        CHECK(back[i].batch_index == cloudlets[i].batch_index);
    }
}
