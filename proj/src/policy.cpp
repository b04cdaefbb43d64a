#include "netbandit/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netbandit/errors.hpp"
#include "netbandit/rng.hpp"

namespace netbandit {

ObservationStats::ObservationStats(const Environment& env)
    : env_(&env),
      arm_count_(env.graph.num_base_arms, 0),
      arm_sum_(env.graph.num_base_arms, 0.0),
      play_count_(env.graph.num_actions, 0),
      own_sum_(env.graph.num_actions, 0.0) {}

void ObservationStats::record(int action, const PullResult& result) {
  ++play_count_[action];
  ++total_plays_;
  own_sum_[action] += result.reward;
  for (const auto& obs : result.observations) {
    if (!obs.delivered) continue;
    ++arm_count_[obs.arm];
    arm_sum_[obs.arm] += obs.value;
  }
}

std::int64_t ObservationStats::action_obs(int j) const {
  std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
  for (int i : env_->graph.reward_sets[j])
    lowest = std::min(lowest, arm_count_[i]);
  return lowest;
}

double ObservationStats::action_estimate(int j) const {
  const auto& kj = env_->graph.reward_sets[j];
  if (env_->reward.kind == RewardKind::kIdentity) return arm_mean(kj[0]);
  double sum = 0.0;
  for (int i : kj) sum += arm_mean(i);
  if (env_->reward.kind == RewardKind::kMeanOfSet)
    return sum / static_cast<double>(kj.size());
  return 1.0 - sum / env_->reward.delay_bound;
}

int ObservationStats::empirical_best() const {
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < num_actions(); ++j) {
    if (!estimate_defined(j)) continue;
    const double v = action_estimate(j);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  return best;
}

bool accounting_identity_holds(const ObservationStats& stats,
                               const BipartiteGraph& graph) {
  const auto s = supports(graph);
  for (int i = 0; i < graph.num_base_arms; ++i) {
    std::int64_t expected = 0;
    for (int j : s[i]) expected += stats.plays(j);
    if (stats.arm_obs(i) != expected) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// eps-greedy-LP

EpsGreedyLpPolicy::EpsGreedyLpPolicy(const Environment& env,
                                     std::vector<double> zstar, double c,
                                     double d, std::uint64_t seed)
    : env_(&env),
      stats_(env),
      zstar_(std::move(zstar)),
      c_(c),
      d_(d),
      seed_(seed),
      explore_draws_(env.graph.num_actions, 0),
      explore_arm_obs_(env.graph.num_base_arms, 0) {
  if (!(c_ > 0.0)) throw ParamError("eps-greedy-lp: c must be > 0");
  if (!(d_ > 0.0 && d_ < 1.0)) throw ParamError("eps-greedy-lp: d in (0,1)");
  if (static_cast<int>(zstar_.size()) != env.graph.num_actions)
    throw ParamError("eps-greedy-lp: z* must have one entry per action");
  zsum_ = 0.0;
  for (double z : zstar_) zsum_ += z;
  if (!(zsum_ > 0.0)) throw ParamError("eps-greedy-lp: sum z* must be > 0");
  zstar_cdf_.resize(zstar_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < zstar_.size(); ++j) {
    acc += zstar_[j] / zsum_;
    zstar_cdf_[j] = acc;
  }
  zstar_cdf_.back() = 1.0;
  sweep_ = greedy_hitting_set(env.graph);
}

double EpsGreedyLpPolicy::epsilon(std::int64_t formula_t) const {
  return std::min(1.0, c_ * zsum_ / (d_ * d_ * static_cast<double>(formula_t)));
}

int EpsGreedyLpPolicy::select(std::int64_t t) {
  // forced initialization sweep happens before the schedule's t = 1
  if (t <= static_cast<std::int64_t>(sweep_.size())) {
    last_was_exploration_ = false;
    return sweep_[t - 1];
  }
  const std::int64_t formula_t = t - static_cast<std::int64_t>(sweep_.size());
  const double coin = rng::uniform(seed_, rng::kPurposePolicy,
                                   static_cast<std::uint64_t>(t), 0);
  if (coin < epsilon(formula_t)) {
    last_was_exploration_ = true;
    const double u = rng::uniform(seed_, rng::kPurposePolicy,
                                  static_cast<std::uint64_t>(t), 1);
    // action j owns [cdf_{j-1}, cdf_j); zero-weight actions own nothing
    const int a = static_cast<int>(
        std::upper_bound(zstar_cdf_.begin(), zstar_cdf_.end(), u) -
        zstar_cdf_.begin());
    return std::min(a, static_cast<int>(zstar_.size()) - 1);
  }
  last_was_exploration_ = false;
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < stats_.num_actions(); ++j) {
    if (!stats_.estimate_defined(j)) continue;
    const double v = stats_.action_estimate(j);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  return best;
}

void EpsGreedyLpPolicy::observe(std::int64_t, int action,
                                const PullResult& result) {
  stats_.record(action, result);
  if (last_was_exploration_) {
    ++explore_draws_[action];
    for (const auto& obs : result.observations)
      if (obs.delivered) ++explore_arm_obs_[obs.arm];
  }
}

// ---------------------------------------------------------------------------
// UCB-LP

namespace {

std::int64_t quota_n(std::int64_t horizon, double delta_tilde) {
  const double v = 2.0 * std::log(static_cast<double>(horizon) * delta_tilde *
                                  delta_tilde) /
                   (delta_tilde * delta_tilde);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(v)));
}

}  // namespace

UcbLpPolicy::UcbLpPolicy(const Environment& env, std::vector<double> zstar,
                         std::int64_t horizon)
    : env_(&env),
      stats_(env),
      zstar_(std::move(zstar)),
      horizon_(horizon) {
  if (horizon_ < 1) throw ParamError("ucb-lp: horizon must be >= 1");
  if (static_cast<int>(zstar_.size()) != env.graph.num_actions)
    throw ParamError("ucb-lp: z* must have one entry per action");
  zsum_ = 0.0;
  for (double z : zstar_) zsum_ += z;
  max_round_ = static_cast<int>(std::floor(
      0.5 * std::log2(static_cast<double>(horizon_) / std::exp(1.0))));
  active_.resize(env.graph.num_actions);
  for (int j = 0; j < env.graph.num_actions; ++j) active_[j] = j;
  explore_ = active_;
  start_round();
}

std::int64_t UcbLpPolicy::round_quota(int m) const {
  return quota_n(horizon_, std::pow(2.0, -m));
}

void UcbLpPolicy::start_round() {
  schedule_.clear();
  schedule_pos_ = 0;
  if (static_cast<int>(active_.size()) == 1 || round_ > max_round_ ||
      exhausted_rounds_) {
    exhausted_rounds_ = true;
    return;  // single-survivor / post-final-round mode, handled in select
  }
  const std::int64_t n_m = quota_n(horizon_, delta_tilde_);
  const std::int64_t increment = std::max<std::int64_t>(0, n_m - quota_prev_);
  quota_prev_ = std::max(quota_prev_, n_m);
  if (increment == 0) {
    finish_round();
    return;
  }
  if (zsum_ <= 2.0 * static_cast<double>(active_.size()) * delta_tilde_) {
    for (int j : explore_) {
      if (zstar_[j] <= 1e-12) continue;  // solver noise is not a play quota
      const auto plays = static_cast<std::int64_t>(
          std::ceil(zstar_[j] * static_cast<double>(increment)));
      if (plays > 0) schedule_.emplace_back(j, plays);
    }
  } else {
    for (int j : active_) schedule_.emplace_back(j, increment);
  }
  if (schedule_.empty()) finish_round();
}

void UcbLpPolicy::finish_round() {
  const std::int64_t n_m = quota_n(horizon_, delta_tilde_);
  const double log_term =
      std::log(static_cast<double>(horizon_) * delta_tilde_ * delta_tilde_);
  // radius over the full observation count T_j(m), side-observations
  // included; the analysis only needs T_j(m) >= n(m), which the play
  // schedule guarantees
  auto radius = [&](int j) {
    const std::int64_t count = stats_.action_obs(j);
    if (count <= 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(log_term / (2.0 * static_cast<double>(count)));
  };
  for (int j : active_) {
    if (stats_.action_obs(j) < n_m) coverage_held_ = false;
  }
  double best_lower = -std::numeric_limits<double>::infinity();
  for (int a : active_) {
    if (!stats_.estimate_defined(a)) continue;
    best_lower = std::max(best_lower, stats_.action_estimate(a) - radius(a));
  }
  std::vector<int> survivors;
  for (int j : active_) {
    const double upper = stats_.estimate_defined(j)
                             ? stats_.action_estimate(j) + radius(j)
                             : std::numeric_limits<double>::infinity();
    if (!(upper < best_lower)) survivors.push_back(j);
  }
  active_ = std::move(survivors);
  // Reset: A_{m+1} = union of supports of the surviving reward arms
  std::vector<bool> arm_in(env_->graph.num_base_arms, false);
  for (int j : active_)
    for (int i : env_->graph.reward_sets[j]) arm_in[i] = true;
  std::vector<bool> action_in(env_->graph.num_actions, false);
  const auto s = supports(env_->graph);
  for (int i = 0; i < env_->graph.num_base_arms; ++i)
    if (arm_in[i])
      for (int j : s[i]) action_in[j] = true;
  explore_.clear();
  for (int j = 0; j < env_->graph.num_actions; ++j)
    if (action_in[j]) explore_.push_back(j);
  delta_tilde_ /= 2.0;
  ++round_;
  start_round();
}

int UcbLpPolicy::select(std::int64_t) {
  if (exhausted_rounds_) {
    if (active_.size() == 1) return active_.front();
    // rounds ran out with several survivors: play the empirically best
    int best = active_.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (int j : active_) {
      if (!stats_.estimate_defined(j)) continue;
      const double v = stats_.action_estimate(j);
      if (v > best_value) {
        best_value = v;
        best = j;
      }
    }
    return best;
  }
  return schedule_[schedule_pos_].first;
}

void UcbLpPolicy::observe(std::int64_t, int action, const PullResult& result) {
  stats_.record(action, result);
  if (exhausted_rounds_) return;
  auto& [scheduled, remaining] = schedule_[schedule_pos_];
  (void)scheduled;
  if (--remaining == 0) ++schedule_pos_;
  if (schedule_pos_ == schedule_.size()) finish_round();
}

// ---------------------------------------------------------------------------
// doubling wrapper

UcbLpDoublingPolicy::UcbLpDoublingPolicy(const Environment& env,
                                         std::vector<double> zstar)
    : env_(&env), stats_(env), zstar_(std::move(zstar)) {
  inner_ = std::make_unique<UcbLpPolicy>(*env_, zstar_, epoch_len_);
}

void UcbLpDoublingPolicy::next_epoch() {
  ++epoch_;
  epoch_start_ = epoch_len_ + 1;  // epoch l ends when global t reaches T_l
  // T_{l+1} = T_l^2; past 2^32 the next square cannot be reached anyway
  epoch_len_ = epoch_len_ < (std::int64_t{1} << 31)
                   ? epoch_len_ * epoch_len_
                   : std::numeric_limits<std::int64_t>::max() / 2;
  inner_ = std::make_unique<UcbLpPolicy>(*env_, zstar_, epoch_len_);
}

int UcbLpDoublingPolicy::select(std::int64_t t) {
  while (t > epoch_len_) next_epoch();
  return inner_->select(t - epoch_start_ + 1);
}

void UcbLpDoublingPolicy::observe(std::int64_t t, int action,
                                  const PullResult& result) {
  stats_.record(action, result);
  inner_->observe(t - epoch_start_ + 1, action, result);
}

// ---------------------------------------------------------------------------
// UCB baselines

Ucb1Policy::Ucb1Policy(const Environment& env) : stats_(env) {}

int Ucb1Policy::select(std::int64_t t) {
  for (int j = 0; j < stats_.num_actions(); ++j)
    if (stats_.plays(j) == 0) return j;  // infinite-index convention
  int best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  const double lt = std::log(static_cast<double>(t));
  for (int j = 0; j < stats_.num_actions(); ++j) {
    const double index =
        stats_.own_mean(j) +
        std::sqrt(2.0 * lt / static_cast<double>(stats_.plays(j)));
    if (index > best_index) {
      best_index = index;
      best = j;
    }
  }
  return best;
}

void Ucb1Policy::observe(std::int64_t, int action, const PullResult& result) {
  stats_.record(action, result);
}

UcbNPolicy::UcbNPolicy(const Environment& env) : stats_(env) {}

int UcbNPolicy::ucb_n_argmax(const ObservationStats& stats, std::int64_t t) {
  for (int j = 0; j < stats.num_actions(); ++j)
    if (stats.action_obs(j) == 0) return j;  // infinite-index convention
  int best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  const double lt = std::log(static_cast<double>(t));
  for (int j = 0; j < stats.num_actions(); ++j) {
    const double index =
        stats.action_estimate(j) +
        std::sqrt(2.0 * lt / static_cast<double>(stats.action_obs(j)));
    if (index > best_index) {
      best_index = index;
      best = j;
    }
  }
  return best;
}

int UcbNPolicy::select(std::int64_t t) { return ucb_n_argmax(stats_, t); }

void UcbNPolicy::observe(std::int64_t, int action, const PullResult& result) {
  stats_.record(action, result);
}

UcbMaxNPolicy::UcbMaxNPolicy(const Environment& env)
    : stats_(env), neighborhoods_(env.graph.num_actions) {
  for (int i = 0; i < env.graph.num_actions; ++i) {
    const auto& vi = env.graph.observe_sets[i];
    for (int a = 0; a < env.graph.num_actions; ++a) {
      const auto& ka = env.graph.reward_sets[a];
      if (std::includes(vi.begin(), vi.end(), ka.begin(), ka.end()))
        neighborhoods_[i].push_back(a);
    }
  }
}

int UcbMaxNPolicy::select(std::int64_t t) {
  const int i = UcbNPolicy::ucb_n_argmax(stats_, t);
  int best = i;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int a : neighborhoods_[i]) {
    // unobserved neighbors rank below every valid empirical mean
    const double v = stats_.estimate_defined(a) ? stats_.action_estimate(a)
                                                : -1.0;
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

void UcbMaxNPolicy::observe(std::int64_t, int action,
                            const PullResult& result) {
  stats_.record(action, result);
}

UniformRandomPolicy::UniformRandomPolicy(const Environment& env,
                                         std::uint64_t seed)
    : stats_(env), seed_(seed) {}

int UniformRandomPolicy::select(std::int64_t t) {
  const double u = rng::uniform(seed_, rng::kPurposePolicy,
                                static_cast<std::uint64_t>(t), 0);
  return std::min(static_cast<int>(u * stats_.num_actions()),
                  stats_.num_actions() - 1);
}

void UniformRandomPolicy::observe(std::int64_t, int action,
                                  const PullResult& result) {
  stats_.record(action, result);
}

std::unique_ptr<Policy> make_policy(const std::string& name,
                                    const Environment& env,
                                    const PolicyParams& params) {
  if (name == "eps-greedy-lp")
    return std::make_unique<EpsGreedyLpPolicy>(env, params.zstar, params.c,
                                               params.d, params.seed);
  if (name == "ucb-lp")
    return std::make_unique<UcbLpPolicy>(env, params.zstar, params.horizon);
  if (name == "ucb-lp-doubling")
    return std::make_unique<UcbLpDoublingPolicy>(env, params.zstar);
  if (name == "ucb1") return std::make_unique<Ucb1Policy>(env);
  if (name == "ucb-n") return std::make_unique<UcbNPolicy>(env);
  if (name == "ucb-maxn") return std::make_unique<UcbMaxNPolicy>(env);
  if (name == "uniform")
    return std::make_unique<UniformRandomPolicy>(env, params.seed);
  throw ParamError("unknown policy '" + name + "'");
}

}  // namespace netbandit
