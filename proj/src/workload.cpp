#include "greenplace/workload.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "greenplace/rng.hpp"

namespace greenplace {

namespace {

constexpr int kSwfFieldCount = 18;
constexpr double kWindowS = 600.0;
constexpr double kKbPerGb = 1048576.0;

// Table mix: shares of Types 1..5.
constexpr std::array<double, kVmTypeCount> kTypeShares{0.40, 0.30, 0.20, 0.08, 0.02};

constexpr double kMinRunS = 600.0;
constexpr double kMaxRunS = 6.0 * 3600.0;

} // namespace

SwfParseError::SwfParseError(int line_, const std::string& what)
    : std::runtime_error("SWF parse error at line " + std::to_string(line_) + ": " + what),
      line(line_) {}

std::vector<Job> parse_swf(std::istream& in, SwfParseStats* stats) {
    std::vector<Job> jobs;
    std::string line;
    int line_no = 0;
    int dropped = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue; // blank
        if (line[first] == ';')
            continue; // header/comment

        std::istringstream fields(line);
        std::array<double, kSwfFieldCount> f{};
        int count = 0;
        double v;
        while (count < kSwfFieldCount && fields >> v)
            f[count++] = v;
        if (count < kSwfFieldCount)
            throw SwfParseError(line_no, "expected " + std::to_string(kSwfFieldCount) +
                                             " fields, got " + std::to_string(count));

        Job job;
        job.job_id = static_cast<long>(f[0]);
        job.submit_time_s = f[1];
        job.run_time_s = f[3];
        double procs = f[4] == -1.0 ? f[7] : f[4]; // allocated, else requested
        job.pes = static_cast<int>(procs);
        if (f[9] > 0)
            job.mem_req_gb = f[9] / kKbPerGb;

        if (job.run_time_s <= 0 || job.pes <= 0) {
            ++dropped;
            continue;
        }
        jobs.push_back(job);
    }
    if (stats)
        stats->dropped = dropped;
    return jobs;
}

std::string emit_swf(const std::vector<Job>& jobs) {
    std::string out;
    char buf[256];
    for (const Job& j : jobs) {
        double mem_kb = j.mem_req_gb ? *j.mem_req_gb * kKbPerGb : -1.0;
        std::snprintf(buf, sizeof buf,
                      "%ld %.17g 0 %.17g %d -1 -1 %d -1 %.17g -1 -1 -1 -1 -1 -1 -1 -1\n",
                      j.job_id, j.submit_time_s, j.run_time_s, j.pes, j.pes, mem_kb);
        out += buf;
    }
    return out;
}

VmType vm_type_for(int pes) {
    if (pes <= 1) return VmType::Type1;
    if (pes <= 2) return VmType::Type2;
    if (pes <= 4) return VmType::Type3;
    if (pes <= 8) return VmType::Type4;
    return VmType::Type5;
}

std::vector<Cloudlet> synthesize(int n, double duration_s, std::uint64_t seed) {
    if (n < 1)
        throw std::invalid_argument("synthesize: n must be >= 1");
    if (duration_s <= 0)
        throw std::invalid_argument("synthesize: duration must be positive");

    // Largest-remainder apportionment of n over the type shares.
    std::array<int, kVmTypeCount> counts{};
    std::array<double, kVmTypeCount> remainder{};
    int assigned = 0;
    for (int t = 0; t < kVmTypeCount; ++t) {
        double quota = n * kTypeShares[t];
        counts[t] = static_cast<int>(std::floor(quota));
        remainder[t] = quota - counts[t];
        assigned += counts[t];
    }
    std::array<int, kVmTypeCount> by_rem{0, 1, 2, 3, 4};
    std::stable_sort(by_rem.begin(), by_rem.end(),
                     [&](int a, int b) { return remainder[a] > remainder[b]; });
    for (int i = 0; assigned < n; ++i, ++assigned)
        ++counts[by_rem[i % kVmTypeCount]];

    RngStream rng = derive_stream(seed, 0x574C4F41); // workload stream
    std::vector<Cloudlet> out;
    out.reserve(n);
    long id = 0;
    for (int t = 0; t < kVmTypeCount; ++t) {
        VmType type = static_cast<VmType>(t);
        for (int k = 0; k < counts[t]; ++k) {
            Cloudlet c;
            c.job.job_id = id++;
            double raw = rng.uniform(0.0, duration_s);
            c.job.submit_time_s = std::floor(raw / kWindowS) * kWindowS;
            c.job.run_time_s = rng.log_uniform(kMinRunS, kMaxRunS);
            c.job.pes = vm_type_pes(type);
            c.vm_type = type;
            c.batch_index = static_cast<int>(c.job.submit_time_s / kWindowS);
            out.push_back(c);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Cloudlet& a, const Cloudlet& b) {
        if (a.job.submit_time_s != b.job.submit_time_s)
            return a.job.submit_time_s < b.job.submit_time_s;
        return a.job.job_id < b.job.job_id;
    });
    return out;
}

std::vector<Cloudlet> cloudlets_from_jobs(const std::vector<Job>& jobs, double step_s) {
    std::vector<Cloudlet> out;
    out.reserve(jobs.size());
    for (const Job& j : jobs) {
        Cloudlet c;
        c.job = j;
        c.vm_type = vm_type_for(j.pes);
        c.batch_index = static_cast<int>(std::floor(j.submit_time_s / step_s));
        out.push_back(c);
    }
    std::stable_sort(out.begin(), out.end(), [](const Cloudlet& a, const Cloudlet& b) {
        if (a.job.submit_time_s != b.job.submit_time_s)
            return a.job.submit_time_s < b.job.submit_time_s;
        return a.job.job_id < b.job.job_id;
    });
    return out;
}

std::string cloudlets_to_jsonl(const std::vector<Cloudlet>& cloudlets) {
    std::string out;
    for (const Cloudlet& c : cloudlets) {
        nlohmann::json j{{"job_id", c.job.job_id},
                         {"submit_s", c.job.submit_time_s},
                         {"run_s", c.job.run_time_s},
                         {"pes", c.job.pes},
                         {"vm_type", static_cast<int>(c.vm_type) + 1},
                         {"batch", c.batch_index}};
        if (c.job.mem_req_gb)
            j["mem_gb"] = *c.job.mem_req_gb;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<Cloudlet> cloudlets_from_jsonl(std::istream& in) {
    std::vector<Cloudlet> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Cloudlet c;
        c.job.job_id = j.at("job_id").get<long>();
        c.job.submit_time_s = j.at("submit_s").get<double>();
        c.job.run_time_s = j.at("run_s").get<double>();
        c.job.pes = j.at("pes").get<int>();
        if (j.contains("mem_gb"))
            c.job.mem_req_gb = j.at("mem_gb").get<double>();
        c.vm_type = static_cast<VmType>(j.at("vm_type").get<int>() - 1);
        c.batch_index = j.at("batch").get<int>();
        out.push_back(c);
    }
    return out;
}

} // namespace greenplace
