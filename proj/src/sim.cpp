#include "netbandit/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "netbandit/errors.hpp"

namespace netbandit {

namespace {

// Kahan accumulator: replications must be bit-identical across platforms,
// so regret sums use compensated addition in a fixed order.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

RegretTrace run(const RunConfig& config) {
  if (config.env == nullptr) throw ParamError("run: missing environment");
  if (config.horizon < 1) throw ParamError("run: horizon must be >= 1");
  if (config.stride < 1) throw ParamError("run: stride must be >= 1");
  const Environment& env = *config.env;
  const Gaps g = gaps(env);

  PolicyParams params = config.params;
  params.seed = config.seed;
  params.horizon = config.horizon;
  auto policy = make_policy(config.policy, env, params);

  RegretTrace trace;
  trace.policy = config.policy;
  Kahan regret;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const int action = policy->select(t);
    const PullResult result = pull(env, action, config.seed, t);
    policy->observe(t, action, result);
    regret.add(g.delta[action]);
    if (t % config.stride == 0 || t == config.horizon) {
      trace.times.push_back(t);
      trace.regret.push_back(regret.sum);
      if (config.check_accounting && !env.sporadic() &&
          !accounting_identity_holds(policy->stats(), env.graph))
        trace.accounting_ok = false;
    }
  }
  trace.final_plays.resize(env.graph.num_actions);
  for (int j = 0; j < env.graph.num_actions; ++j)
    trace.final_plays[j] = policy->stats().plays(j);
  trace.empirical_best = policy->stats().empirical_best();
  return trace;
}

std::vector<PolicySummary> replicate(const Environment& env,
                                     const std::vector<std::string>& policies,
                                     const PolicyParams& shared_params,
                                     std::int64_t horizon, int reps,
                                     std::uint64_t base_seed,
                                     std::int64_t stride, int parallelism,
                                     bool check_accounting) {
  if (reps < 1) throw ParamError("replicate: reps must be >= 1");
  const int jobs = static_cast<int>(policies.size()) * reps;
  std::vector<RegretTrace> traces(jobs);
  std::atomic<int> next{0};
  int workers = parallelism > 0
                    ? parallelism
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, jobs));

  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= jobs) return;
      RunConfig cfg;
      cfg.env = &env;
      cfg.policy = policies[idx / reps];
      cfg.params = shared_params;
      cfg.horizon = horizon;
      cfg.seed = base_seed + 1 + static_cast<std::uint64_t>(idx % reps);
      cfg.stride = stride;
      cfg.check_accounting = check_accounting;
      traces[idx] = run(cfg);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<PolicySummary> out;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    PolicySummary summary;
    summary.policy = policies[p];
    summary.reps = reps;
    summary.times = traces[p * reps].times;
    const std::size_t points = summary.times.size();
    summary.mean_regret.resize(points);
    summary.std_regret.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
      Kahan mean_acc;
      for (int r = 0; r < reps; ++r)
        mean_acc.add(traces[p * reps + r].regret[k]);
      const double mean = mean_acc.sum / reps;
      Kahan var_acc;
      for (int r = 0; r < reps; ++r) {
        const double d = traces[p * reps + r].regret[k] - mean;
        var_acc.add(d * d);
      }
      summary.mean_regret[k] = mean;
      summary.std_regret[k] =
          reps > 1 ? std::sqrt(var_acc.sum / (reps - 1)) : 0.0;
    }
    if (check_accounting) {
      for (int r = 0; r < reps; ++r)
        if (!traces[p * reps + r].accounting_ok)
          throw ValidationError("replicate: accounting identity violated (" +
                                policies[p] + ")");
    }
    out.push_back(std::move(summary));
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_summary_csv(std::ostream& out,
                       const std::vector<PolicySummary>& summaries) {
  out << "policy,t,mean_regret,std_regret,reps\n";
  for (const auto& s : summaries) {
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      out << s.policy << ',' << s.times[k] << ','
          << format_double(s.mean_regret[k]) << ','
          << format_double(s.std_regret[k]) << ',' << s.reps << '\n';
    }
  }
}

ComparisonReport compare(const std::vector<PolicySummary>& summaries) {
  if (summaries.empty()) throw ParamError("compare: no summaries");
  ComparisonReport report;
  for (const auto& s : summaries) report.policies.push_back(s.policy);
  const auto& times = summaries.front().times;
  for (const auto& s : summaries)
    if (s.times != times)
      throw ParamError("compare: summaries disagree on checkpoints");
  for (std::size_t k = 0; k < times.size(); ++k) {
    ComparisonRow row;
    row.t = times[k];
    const double base = summaries.front().mean_regret[k];
    for (const auto& s : summaries) {
      row.mean.push_back(s.mean_regret[k]);
      row.stddev.push_back(s.std_regret[k]);
      row.ratio_to_baseline.push_back(base != 0.0 ? s.mean_regret[k] / base
                                                  : 1.0);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string format_comparison(const ComparisonReport& report) {
  std::ostringstream out;
  out << "t";
  for (const auto& p : report.policies)
    out << '\t' << p << "(mean/std/ratio)";
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.t;
    for (std::size_t p = 0; p < report.policies.size(); ++p) {
      out << '\t' << format_double(row.mean[p]) << '/'
          << format_double(row.stddev[p]) << '/'
          << format_double(row.ratio_to_baseline[p]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace netbandit
