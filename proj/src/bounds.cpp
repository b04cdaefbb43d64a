#include "netbandit/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "netbandit/errors.hpp"
#include "netbandit/lp.hpp"

namespace netbandit {

double bernoulli_kl(double theta, double sigma) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ParamError("bernoulli_kl: theta must lie in [0,1]");
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw ParamError("bernoulli_kl: sigma must lie in [0,1]");
  if (theta == sigma) return 0.0;
  if (sigma == 0.0 || sigma == 1.0)
    throw ParamError("bernoulli_kl: infinite divergence for sigma in {0,1}");
  double kl = 0.0;
  if (theta > 0.0) kl += theta * std::log(theta / sigma);
  if (theta < 1.0) kl += (1.0 - theta) * std::log((1.0 - theta) / (1.0 - sigma));
  return kl;
}

namespace {

constexpr double kTieTol = 1e-12;

void require_identity(const Environment& env, const char* who) {
  if (env.reward.kind != RewardKind::kIdentity)
    throw ParamError(std::string(who) + ": identity rewards only");
}

}  // namespace

std::optional<double> j_constant_identity(const Environment& env,
                                          int base_arm) {
  require_identity(env, "j_constant_identity");
  const Gaps g = gaps(env);
  const double theta = env.theta[base_arm];
  if (theta >= g.mu_star - kTieTol) return std::nullopt;
  return bernoulli_kl(theta, g.mu_star);
}

std::vector<std::optional<double>> j_constants_identity(
    const Environment& env) {
  require_identity(env, "j_constants_identity");
  const Gaps g = gaps(env);
  std::vector<std::optional<double>> out(env.graph.num_base_arms);
  for (int i = 0; i < env.graph.num_base_arms; ++i) {
    const double theta = env.theta[i];
    if (theta < g.mu_star - kTieTol)
      out[i] = bernoulli_kl(theta, g.mu_star);
  }
  return out;
}

double lower_bound_c_mu(const Environment& env) {
  require_identity(env, "lower_bound_c_mu");
  const Gaps g = gaps(env);
  if (g.suboptimal.empty()) return 0.0;
  const auto lp =
      build_p1(env.graph, g.delta, j_constants_identity(env), g.suboptimal);
  const auto sol = solve_generic(lp);
  if (sol.status != SolveStatus::kOptimal)
    throw ValidationError("lower_bound_c_mu: solver failed");
  return sol.objective_value;
}

EpsGreedyBound eps_greedy_bound(const Environment& env,
                                const std::vector<double>& zstar, double c,
                                double d, std::int64_t horizon, double alpha) {
  const Gaps g = gaps(env);
  EpsGreedyBound out;
  if (g.suboptimal.empty()) return out;
  if (!(alpha > 1.0)) throw ParamError("eps_greedy_bound: need alpha > 1");
  double min_gap = std::numeric_limits<double>::infinity();
  for (int j : g.suboptimal) min_gap = std::min(min_gap, g.delta[j]);
  if (!(d > 0.0 && d < min_gap))
    throw ParamError("eps_greedy_bound: need 0 < d < min_U Delta_j (d=" +
                     std::to_string(d) + ", min gap=" +
                     std::to_string(min_gap) + ")");
  const double r = 3.0 * (alpha - 1.0) * (alpha - 1.0) / (8.0 * alpha - 2.0);
  const double c_floor = std::max(2.0 * alpha * d * d / r, 4.0 * alpha);
  if (!(c > c_floor))
    throw ParamError("eps_greedy_bound: need c > max(2 alpha d^2/r, 4 alpha) = " +
                     std::to_string(c_floor));

  const GraphStats st = graph_stats(env.graph);
  double zsum = 0.0;
  for (double z : zstar) zsum += z;
  const double t_prime = c * zsum / (d * d);
  const double e = std::numbers::e;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int j : g.suboptimal) {
    out.log_coeff += c / (d * d) * g.delta[j] * zstar[j];
    out.constant +=
        pi2 * st.lambda * c * st.delta * g.delta[j] / (3.0 * alpha * d * d) *
            std::pow(e * t_prime, c * r / (alpha * d * d)) +
        2.0 * pi2 / (3.0 * g.delta[j]) *
            std::pow(e * t_prime,
                     c * g.delta[j] * g.delta[j] / (2.0 * alpha * d * d));
  }
  out.value_at_horizon =
      out.log_coeff * std::log(static_cast<double>(horizon)) + out.constant;
  return out;
}

UcbLpBound ucb_lp_bound(const Environment& env,
                        const std::vector<double>& zstar,
                        std::int64_t horizon) {
  const Gaps g = gaps(env);
  const int k = env.graph.num_actions;
  UcbLpBound out;
  out.m_j.assign(k, -1);
  out.delta_hat.assign(k, 0.0);

  // m_j = min{ m : 2^-m < Delta_j / 2 }; optimal actions never cross
  for (int j : g.suboptimal) {
    int m = 0;
    while (std::pow(2.0, -m) >= g.delta[j] / 2.0) ++m;
    out.m_j[j] = m;
  }
  double zsum = 0.0;
  for (double z : zstar) zsum += z;
  if (!(zsum > 0.0)) throw ParamError("ucb_lp_bound: sum z* must be > 0");

  // m_bar = min{ m : sum z* > |{a : m_a > m}| 2^(-m+1) }
  int m_bar = 0;
  for (;; ++m_bar) {
    int count = 0;
    for (int a = 0; a < k; ++a)
      if (out.m_j[a] < 0 || out.m_j[a] > m_bar) ++count;
    if (zsum > static_cast<double>(count) * std::pow(2.0, -m_bar + 1)) break;
  }
  out.m_bar = m_bar;
  for (int j : g.suboptimal)
    if (out.m_j[j] > m_bar) out.late_set.push_back(j);

  const double t = static_cast<double>(horizon);
  for (int j : g.suboptimal) {
    if (out.m_j[j] > m_bar) {
      // j in B: pays its own gap
      out.value_at_horizon +=
          32.0 * std::log(t * g.delta[j] * g.delta[j]) / g.delta[j];
    } else {
      // Delta-hat via the smallest gap among actions whose observation
      // neighborhood G_a covers j
      double min_neighbor_gap = std::numeric_limits<double>::infinity();
      for (int a = 0; a < k; ++a) {
        bool covers = false;
        for (int i : env.graph.reward_sets[a]) {
          if (std::binary_search(env.graph.observe_sets[j].begin(),
                                 env.graph.observe_sets[j].end(), i)) {
            // j in S_i <=> i in V_j
            covers = true;
            break;
          }
        }
        if (covers) min_neighbor_gap = std::min(min_neighbor_gap, g.delta[a]);
      }
      const double dh =
          std::max(std::pow(2.0, -m_bar + 2), min_neighbor_gap);
      out.delta_hat[j] = dh;
      out.value_at_horizon +=
          g.delta[j] * zstar[j] * 32.0 * std::log(t * dh * dh) / (dh * dh);
    }
  }
  for (int j : g.suboptimal) {
    out.const_per_action += 64.0 / (g.delta[j] * g.delta[j]);
    double inner = 0.0;
    for (int a : g.suboptimal) inner += 32.0 / (g.delta[a] * g.delta[a]);
    out.const_pairs += g.delta[j] * inner;
  }
  return out;
}

namespace {

bool clique_compatible(const BipartiteGraph& graph, int a, int b) {
  const auto& va = graph.observe_sets[a];
  const auto& vb = graph.observe_sets[b];
  const auto& ka = graph.reward_sets[a];
  const auto& kb = graph.reward_sets[b];
  return std::includes(va.begin(), va.end(), kb.begin(), kb.end()) &&
         std::includes(vb.begin(), vb.end(), ka.begin(), ka.end());
}

double clique_cost(const Gaps& g, const std::vector<int>& members) {
  double max_gap = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (int j : members) {
    max_gap = std::max(max_gap, g.delta[j]);
    min_gap = std::min(min_gap, g.delta[j]);
  }
  return 8.0 * max_gap / (min_gap * min_gap);
}

}  // namespace

CliqueCoverBound ucb_n_clique_bound(const Environment& env) {
  const Gaps g = gaps(env);
  CliqueCoverBound out;
  const auto& sub = g.suboptimal;
  if (sub.empty()) {
    out.exact_coeff = 0.0;
    return out;
  }

  // greedy cover: grow a clique around each uncovered action in index order
  std::vector<bool> covered(env.graph.num_actions, false);
  for (int j : sub) {
    if (covered[j]) continue;
    std::vector<int> clique{j};
    covered[j] = true;
    for (int a : sub) {
      if (covered[a]) continue;
      bool fits = true;
      for (int b : clique)
        if (!clique_compatible(env.graph, a, b)) {
          fits = false;
          break;
        }
      if (fits) {
        clique.push_back(a);
        covered[a] = true;
      }
    }
    out.greedy_coeff += clique_cost(g, clique);
  }

  if (sub.size() <= 12) {
    // exact infimum over partitions of the suboptimal subnetwork
    const int n = static_cast<int>(sub.size());
    std::vector<std::uint32_t> compatible(n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (clique_compatible(env.graph, sub[a], sub[b]))
          compatible[a] |= 1u << b;
    const std::uint32_t full = (1u << n) - 1;
    std::vector<bool> is_clique(full + 1, false);
    std::vector<double> cost(full + 1, 0.0);
    is_clique[0] = true;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int low = std::countr_zero(mask);
      const std::uint32_t rest = mask & (mask - 1);
      is_clique[mask] = is_clique[rest] && ((rest & ~compatible[low]) == 0);
      if (is_clique[mask]) {
        std::vector<int> members;
        for (std::uint32_t m = mask; m != 0; m &= m - 1)
          members.push_back(sub[std::countr_zero(m)]);
        cost[mask] = clique_cost(g, members);
      }
    }
    std::vector<double> dp(full + 1,
                           std::numeric_limits<double>::infinity());
    dp[0] = 0.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const std::uint32_t pivot = mask & (~mask + 1);
      for (std::uint32_t s = mask; s != 0; s = (s - 1) & mask) {
        if (!(s & pivot) || !is_clique[s]) continue;
        dp[mask] = std::min(dp[mask], dp[mask ^ s] + cost[s]);
      }
    }
    out.exact_coeff = dp[full];
  }
  return out;
}

}  // namespace netbandit
