#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netbandit/env.hpp"
#include "netbandit/graph.hpp"

namespace netbandit {

// Bernoulli KL divergence D(theta || sigma) in nats, 0 log 0 = 0.
// sigma in {0,1} is only allowed when theta == sigma (divergence would be
// infinite otherwise; ParamError).
double bernoulli_kl(double theta, double sigma);

// J_i for identity rewards: the infimum KL distance moving base-arm i's
// parameter past mu*, attained at the boundary, i.e. D(theta_i || mu*).
// nullopt for optimal base-arms (theta_i == mu*): their constraint is
// infinite and gets dropped from the lower-bound program.
std::optional<double> j_constant_identity(const Environment& env,
                                          int base_arm);

// All finite-J constants at once (the caller-side filter for build_p1).
std::vector<std::optional<double>> j_constants_identity(const Environment& env);

// Optimal value of the lower-bound program: the asymptotic regret
// coefficient per log t. Identity rewards only.
double lower_bound_c_mu(const Environment& env);

struct EpsGreedyBound {
  double log_coeff = 0.0;      // (c/d^2) sum_U Delta_j z*_j
  double constant = 0.0;       // explicit additive term
  double value_at_horizon = 0.0;
};

// Regret bound for eps-greedy-LP at horizon T. Enforces the parameter
// window 0 < d < min_U Delta_j and c > max(2 alpha d^2 / r, 4 alpha) for
// the supplied alpha > 1 with r = 3(alpha-1)^2 / (8 alpha - 2); violations
// raise ParamError naming the failed inequality.
EpsGreedyBound eps_greedy_bound(const Environment& env,
                                const std::vector<double>& zstar, double c,
                                double d, std::int64_t horizon,
                                double alpha = 2.0);

struct UcbLpBound {
  double value_at_horizon = 0.0;       // the two log-term sums
  double const_per_action = 0.0;       // sum_U 64 / Delta_j^2
  double const_pairs = 0.0;            // sum_U Delta_j * sum_U 32 / Delta_a^2
  int m_bar = 0;
  std::vector<int> m_j;                // per action; -1 for optimal actions
  std::vector<int> late_set;           // B: suboptimal j with m_j > m_bar
  std::vector<double> delta_hat;       // per action; 0 where unused
};

// Regret bound for UCB-LP at horizon T, with the explicit constant sums
// reported separately.
UcbLpBound ucb_lp_bound(const Environment& env,
                        const std::vector<double>& zstar,
                        std::int64_t horizon);

struct CliqueCoverBound {
  double greedy_coeff = 0.0;            // greedy clique cover
  std::optional<double> exact_coeff;    // exact infimum when K <= 12
};

// Coefficient of log T in the UCB-N clique-cover bound
// sum_C 8 max_{j in C} Delta_j / min_{j in C} Delta_j^2 over clique covers
// of the suboptimal subnetwork.
CliqueCoverBound ucb_n_clique_bound(const Environment& env);

struct BoundReport {
  double c_mu = 0.0;
  EpsGreedyBound eps_greedy;
  UcbLpBound ucb_lp;
  CliqueCoverBound ucb_n_clique;
};

}  // namespace netbandit
