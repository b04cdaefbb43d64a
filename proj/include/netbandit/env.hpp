#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netbandit/graph.hpp"

namespace netbandit {

// Per-action reward over the K_j-restricted observations. All three forms
// are affine in the base-arm values, so action means have a closed form.
//   identity     f_j(x) = x_i            requires |K_j| = 1
//   mean-of-set  f_j(x) = avg_{i in K_j} x_i
//   scaled-delay f_j(x) = 1 - sum_{i in K_j} x_i / B
enum class RewardKind { kIdentity, kMeanOfSet, kScaledDelay };

struct RewardFn {
  RewardKind kind = RewardKind::kIdentity;
  double delay_bound = 0.0;  // B, scaled-delay only
};

// Immutable stochastic environment over Bernoulli base-arms. The base-arm
// draw at (t, i) depends only on (run seed, t, i), never on the policy's
// history, so different policies paired on one seed face identical
// realizations.
struct Environment {
  BipartiteGraph graph;
  std::vector<double> theta;     // Bernoulli mean per base-arm
  RewardFn reward;
  std::vector<double> obs_prob;  // sporadic p_j per action; empty = always

  bool sporadic() const { return !obs_prob.empty(); }
};

// Throws ValidationError unless rewards are guaranteed to stay in [0,1]:
// theta in [0,1], identity needs |K_j| = 1, mean-of-set needs K_j nonempty,
// scaled-delay needs |K_j| <= B.
void check_env(const Environment& env);

struct Observation {
  int arm = 0;
  double value = 0.0;    // realized X_i in {0,1}
  bool delivered = true; // side-observations can fail to appear in sporadic mode
};

struct PullResult {
  double reward = 0.0;
  std::vector<Observation> observations;  // one per arm of V_j, arm-sorted
};

// Samples X_i ~ Bernoulli(theta_i) for every i in V_j and applies f_j to
// the K_j-restricted values. In sporadic mode each observation outside K_j
// is delivered independently with probability p_j; reward-set observations
// always arrive.
PullResult pull(const Environment& env, int action, std::uint64_t run_seed,
                std::int64_t t);

// Exact mean reward of an action.
double true_mean(const Environment& env, int action);

struct Gaps {
  double mu_star = 0.0;
  std::vector<double> mu;       // per action
  std::vector<double> delta;    // mu_star - mu_j
  std::vector<int> optimal;     // ties resolved exactly to 1e-12
  std::vector<int> suboptimal;
};

Gaps gaps(const Environment& env);

// Social-promotion style instance on a one-hop graph (K_j = {j}): theta_j
// uniform on [0.3, 0.8] except min(50, ceil(K/20)) randomly chosen actions
// pinned at 0.9. Identity reward.
Environment flixster_style_env(const BipartiteGraph& graph,
                               std::uint64_t seed);

// Link-delay instance over a routing graph: theta_i ~ Uniform(0,1) per
// directed link, scaled-delay reward with bound B (default 5).
Environment routing_env(const RoutingGraph& routing, std::uint64_t seed,
                        double delay_bound = 5.0);

// Fixture format, '#' comments allowed:
//   graph: <path relative to the fixture file>
//   theta: <N reals>
//   reward: identity | mean | delay B=<real>
//   sporadic: <K reals>          (optional)
Environment load_env_file(const std::string& path);
std::string save_env(const Environment& env, const std::string& graph_path);

}  // namespace netbandit
