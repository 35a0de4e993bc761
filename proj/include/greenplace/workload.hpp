// Workload acquisition: Standard Workload Format trace parsing, synthetic
// generation with the published type mix, and the job -> instance-type map.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenplace/hosts.hpp"

namespace greenplace {

class SwfParseError : public std::runtime_error {
public:
    SwfParseError(int line, const std::string& what);
    int line;
};

struct Job {
    long job_id = 0;
    double submit_time_s = 0.0;
    double run_time_s = 0.0;
    int pes = 1;
    std::optional<double> mem_req_gb; // recorded, unused for type mapping
};

struct Cloudlet {
    Job job;
    VmType vm_type = VmType::Type1;
    int batch_index = 0; // floor(submit / 600 s) submission window
};

struct SwfParseStats {
    int dropped = 0; // non-positive run time or processor count
};

// Lines starting with ';' are header/comments. Data lines are positional and
// need all 18 standard fields; allocated processors (field 5) fall back to
// requested processors (field 8) when -1.
std::vector<Job> parse_swf(std::istream& in, SwfParseStats* stats = nullptr);

// Inverse of parse_swf for the fields this project uses; unknown fields are
// emitted as -1 so emitted traces re-parse to the same job list.
std::string emit_swf(const std::vector<Job>& jobs);

// Smallest instance type whose PE count covers the request, capped at the
// largest type.
VmType vm_type_for(int pes);

// n cloudlets with the 40/30/20/8/2 type mix (largest-remainder rounding),
// submit times uniform over [0, duration_s) quantized to 600 s windows, run
// times log-uniform in [600 s, 6 h]. Output sorted by submit time.
std::vector<Cloudlet> synthesize(int n, double duration_s, std::uint64_t seed);

// Maps parsed jobs to cloudlets and sorts them by submit time.
std::vector<Cloudlet> cloudlets_from_jobs(const std::vector<Job>& jobs,
                                          double step_s = 600.0);

std::string cloudlets_to_jsonl(const std::vector<Cloudlet>& cloudlets);
std::vector<Cloudlet> cloudlets_from_jsonl(std::istream& in);

} // namespace greenplace
