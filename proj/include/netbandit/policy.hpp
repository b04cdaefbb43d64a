#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "netbandit/env.hpp"
#include "netbandit/graph.hpp"

namespace netbandit {

// Shared observation bookkeeping. M_i counts delivered observations of
// base-arm i regardless of which action produced them; T_j counts plays.
// The action estimate plugs per-base-arm empirical means into f_j, which
// is unbiased for the affine reward forms used here.
class ObservationStats {
 public:
  explicit ObservationStats(const Environment& env);

  void record(int action, const PullResult& result);

  std::int64_t plays(int j) const { return play_count_[j]; }
  std::int64_t total_plays() const { return total_plays_; }
  std::int64_t arm_obs(int i) const { return arm_count_[i]; }
  double arm_mean(int i) const { return arm_sum_[i] / arm_count_[i]; }

  // T^obs_j: usable observations for the action estimate, the minimum
  // observation count over the reward set.
  std::int64_t action_obs(int j) const;
  bool estimate_defined(int j) const { return action_obs(j) > 0; }
  // f_j over base-arm empirical means; only meaningful when defined.
  double action_estimate(int j) const;

  // own-play reward average, what a side-observation-blind policy sees
  double own_mean(int j) const { return own_sum_[j] / play_count_[j]; }

  int num_actions() const { return static_cast<int>(play_count_.size()); }
  int num_base_arms() const { return static_cast<int>(arm_count_.size()); }

  // argmax of the defined action estimates, ties to the lowest index;
  // -1 when nothing is defined yet
  int empirical_best() const;

  const Environment& env() const { return *env_; }

 private:
  const Environment* env_;
  std::vector<std::int64_t> arm_count_;
  std::vector<double> arm_sum_;
  std::vector<std::int64_t> play_count_;
  std::vector<double> own_sum_;
  std::int64_t total_plays_ = 0;
};

// Checks M_i = sum_{j in S_i} T_j, which holds exactly whenever every
// side-observation is delivered (non-sporadic mode).
bool accounting_identity_holds(const ObservationStats& stats,
                               const BipartiteGraph& graph);

class Policy {
 public:
  virtual ~Policy() = default;
  // t is the 1-based global step; select must be followed by observe(t,...)
  virtual int select(std::int64_t t) = 0;
  virtual void observe(std::int64_t t, int action, const PullResult& result) = 0;
  virtual const ObservationStats& stats() const = 0;
  virtual std::string_view name() const = 0;
};

// Exploration-allocation randomized policy. With probability
// eps(t) = min(1, c * sum z* / (d^2 t)) samples an action proportional to
// z*, otherwise exploits argmax f-bar. Estimates are initialized by one
// forced sweep of a greedy hitting set before the epsilon schedule starts.
class EpsGreedyLpPolicy : public Policy {
 public:
  EpsGreedyLpPolicy(const Environment& env, std::vector<double> zstar,
                    double c, double d, std::uint64_t seed);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "eps-greedy-lp"; }

  double epsilon(std::int64_t formula_t) const;
  // draws taken through the exploration branch, per action (chi^2 checks)
  const std::vector<std::int64_t>& exploration_draws() const {
    return explore_draws_;
  }
  // O^R_i: observations obtained from exploration steps only
  const std::vector<std::int64_t>& exploration_arm_obs() const {
    return explore_arm_obs_;
  }

 private:
  const Environment* env_;
  ObservationStats stats_;
  std::vector<double> zstar_;
  std::vector<double> zstar_cdf_;
  double zsum_;
  double c_;
  double d_;
  std::uint64_t seed_;
  std::vector<int> sweep_;
  bool last_was_exploration_ = false;
  std::vector<std::int64_t> explore_draws_;
  std::vector<std::int64_t> explore_arm_obs_;
};

// Round-based elimination policy. Keeps a play schedule per round: the
// LP branch spreads ceil(z*_j (n(m) - n(m-1))) plays over the exploration
// set A_m, the fallback branch plays every survivor n(m) - n(m-1) times.
// Survivors are eliminated on round boundaries by confidence-interval
// comparison at radius sqrt(log(T dt^2) / (2 T_j(m))), where T_j(m) counts
// every observation of action j, side-observations included.
class UcbLpPolicy : public Policy {
 public:
  UcbLpPolicy(const Environment& env, std::vector<double> zstar,
              std::int64_t horizon);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "ucb-lp"; }

  int round() const { return round_; }
  const std::vector<int>& active_set() const { return active_; }
  // true iff every survivor reached its quota at every finished round
  bool coverage_held() const { return coverage_held_; }
  std::int64_t round_quota(int m) const;  // n(m)

 private:
  void start_round();
  void finish_round();

  const Environment* env_;
  ObservationStats stats_;
  std::vector<double> zstar_;
  double zsum_;
  std::int64_t horizon_;
  int max_round_;

  int round_ = 0;
  double delta_tilde_ = 1.0;
  std::vector<int> active_;    // B_m
  std::vector<int> explore_;   // A_m
  std::int64_t quota_prev_ = 0;  // n(m-1)
  std::vector<std::pair<int, std::int64_t>> schedule_;
  std::size_t schedule_pos_ = 0;
  bool exhausted_rounds_ = false;
  bool coverage_held_ = true;
};

// Unknown-horizon wrapper: the horizon guess starts at 2 and squares when
// the global clock reaches it, so epoch l spans t in (T_{l-1}, T_l] with
// T_l = 2^(2^l). Each epoch runs a fresh UCB-LP instance with horizon T_l,
// discarding learned state at the boundary.
class UcbLpDoublingPolicy : public Policy {
 public:
  UcbLpDoublingPolicy(const Environment& env, std::vector<double> zstar);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "ucb-lp-doubling"; }

  std::int64_t epoch_horizon() const { return epoch_len_; }
  int epoch() const { return epoch_; }

 private:
  void next_epoch();

  const Environment* env_;
  ObservationStats stats_;  // global accounting across epochs
  std::vector<double> zstar_;
  std::unique_ptr<UcbLpPolicy> inner_;
  int epoch_ = 0;
  std::int64_t epoch_len_ = 2;    // T_l, the global t where this epoch ends
  std::int64_t epoch_start_ = 1;  // global t of current epoch's first step
};

// Side-observation-blind UCB baseline: index over own-play rewards only.
class Ucb1Policy : public Policy {
 public:
  explicit Ucb1Policy(const Environment& env);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "ucb1"; }

 private:
  ObservationStats stats_;
};

// UCB over all observations: empirical estimate and count include side
// observations.
class UcbNPolicy : public Policy {
 public:
  explicit UcbNPolicy(const Environment& env);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "ucb-n"; }

  // shared with UCB-MaxN
  static int ucb_n_argmax(const ObservationStats& stats, std::int64_t t);

 private:
  ObservationStats stats_;
};

// UCB-N argmax, then the empirically best action within its clique
// neighborhood { a : K_a within V_i }.
class UcbMaxNPolicy : public Policy {
 public:
  explicit UcbMaxNPolicy(const Environment& env);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "ucb-maxn"; }

  const std::vector<int>& neighborhood(int j) const {
    return neighborhoods_[j];
  }

 private:
  ObservationStats stats_;
  std::vector<std::vector<int>> neighborhoods_;
};

class UniformRandomPolicy : public Policy {
 public:
  UniformRandomPolicy(const Environment& env, std::uint64_t seed);

  int select(std::int64_t t) override;
  void observe(std::int64_t t, int action, const PullResult& result) override;
  const ObservationStats& stats() const override { return stats_; }
  std::string_view name() const override { return "uniform"; }

 private:
  ObservationStats stats_;
  std::uint64_t seed_;
};

struct PolicyParams {
  double c = 5.0;   // eps-greedy-lp
  double d = 0.2;   // eps-greedy-lp
  std::int64_t horizon = 0;
  std::vector<double> zstar;  // required by the LP-guided policies
  std::uint64_t seed = 0;     // run seed for policy-internal randomness
};

// Names: eps-greedy-lp, ucb-lp, ucb-lp-doubling, ucb1, ucb-n, ucb-maxn,
// uniform. Throws ParamError for anything else.
std::unique_ptr<Policy> make_policy(const std::string& name,
                                    const Environment& env,
                                    const PolicyParams& params);

}  // namespace netbandit
