#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netbandit/env.hpp"
#include "netbandit/policy.hpp"

namespace netbandit {

struct RunConfig {
  const Environment* env = nullptr;
  std::string policy;
  PolicyParams params;           // zstar/c/d filled by the caller
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::int64_t stride = 100;
  // verify M_i = sum_{S_i} T_j at every checkpoint (non-sporadic runs)
  bool check_accounting = false;
};

// Cumulative pseudo-regret sum_j Delta_j T_j(t) sampled at stride points
// and at the horizon. Fully determined by (config, seed): fixed-order
// compensated accumulation, counter-based randomness.
struct RegretTrace {
  std::string policy;
  std::vector<std::int64_t> times;
  std::vector<double> regret;
  std::vector<std::int64_t> final_plays;  // T_j(T)
  int empirical_best = -1;                // argmax f-bar at the horizon
  bool accounting_ok = true;
};

RegretTrace run(const RunConfig& config);

struct PolicySummary {
  std::string policy;
  std::vector<std::int64_t> times;
  std::vector<double> mean_regret;
  std::vector<double> std_regret;  // sample standard deviation across seeds
  int reps = 0;
};

// Runs seeds base_seed+1 .. base_seed+reps for every policy, paired: all
// policies face identical base-arm realizations per seed. Replications run
// on `parallelism` threads (0 = hardware concurrency); aggregation is a
// deterministic reduction in seed order.
std::vector<PolicySummary> replicate(const Environment& env,
                                     const std::vector<std::string>& policies,
                                     const PolicyParams& shared_params,
                                     std::int64_t horizon, int reps,
                                     std::uint64_t base_seed,
                                     std::int64_t stride, int parallelism,
                                     bool check_accounting = false);

// CSV schema: policy,t,mean_regret,std_regret,reps
void write_summary_csv(std::ostream& out,
                       const std::vector<PolicySummary>& summaries);

struct ComparisonRow {
  std::int64_t t = 0;
  std::vector<double> mean;   // per policy
  std::vector<double> stddev;
  std::vector<double> ratio_to_baseline;  // mean / mean(first policy)
};

struct ComparisonReport {
  std::vector<std::string> policies;
  std::vector<ComparisonRow> rows;
};

// Ordering report at each shared checkpoint; the first summary is the
// baseline for ratios.
ComparisonReport compare(const std::vector<PolicySummary>& summaries);

std::string format_comparison(const ComparisonReport& report);

}  // namespace netbandit
