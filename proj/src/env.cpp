#include "netbandit/env.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "netbandit/errors.hpp"
#include "netbandit/rng.hpp"

namespace netbandit {

void check_env(const Environment& env) {
  if (auto violations = validate(env.graph); !violations.empty())
    throw ValidationError("environment graph invalid: " + violations.front());
  if (static_cast<int>(env.theta.size()) != env.graph.num_base_arms)
    throw ValidationError("theta must have one entry per base-arm");
  for (double th : env.theta)
    if (!(th >= 0.0 && th <= 1.0))
      throw ValidationError("theta entries must lie in [0,1]");
  for (int j = 0; j < env.graph.num_actions; ++j) {
    const auto size = env.graph.reward_sets[j].size();
    switch (env.reward.kind) {
      case RewardKind::kIdentity:
        if (size != 1)
          throw ValidationError("identity reward requires |K_j| = 1");
        break;
      case RewardKind::kMeanOfSet:
        if (size == 0)
          throw ValidationError("mean-of-set reward requires K_j nonempty");
        break;
      case RewardKind::kScaledDelay:
        if (!(env.reward.delay_bound > 0.0) ||
            static_cast<double>(size) > env.reward.delay_bound)
          throw ValidationError(
              "scaled-delay reward requires |K_j| <= B for every action");
        break;
    }
  }
  if (env.sporadic()) {
    if (static_cast<int>(env.obs_prob.size()) != env.graph.num_actions)
      throw ValidationError("sporadic p must have one entry per action");
    for (double p : env.obs_prob)
      if (!(p > 0.0 && p <= 1.0))
        throw ValidationError("sporadic p entries must lie in (0,1]");
  }
}

namespace {

double reward_of(const RewardFn& fn, const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  switch (fn.kind) {
    case RewardKind::kIdentity:
      return values[0];
    case RewardKind::kMeanOfSet:
      return sum / static_cast<double>(values.size());
    case RewardKind::kScaledDelay:
      return 1.0 - sum / fn.delay_bound;
  }
  return 0.0;
}

}  // namespace

PullResult pull(const Environment& env, int action, std::uint64_t run_seed,
                std::int64_t t) {
  if (action < 0 || action >= env.graph.num_actions)
    throw ParamError("pull: action index out of range");
  const auto& vj = env.graph.observe_sets[action];
  const auto& kj = env.graph.reward_sets[action];
  PullResult out;
  out.observations.reserve(vj.size());
  std::vector<double> reward_values;
  reward_values.reserve(kj.size());
  for (int i : vj) {
    Observation obs;
    obs.arm = i;
    obs.value = rng::bernoulli(env.theta[i], run_seed, rng::kPurposeBaseArm,
                               static_cast<std::uint64_t>(t), i)
                    ? 1.0
                    : 0.0;
    const bool in_reward = std::binary_search(kj.begin(), kj.end(), i);
    if (in_reward) {
      reward_values.push_back(obs.value);
    } else if (env.sporadic()) {
      obs.delivered = rng::bernoulli(env.obs_prob[action], run_seed,
                                     rng::kPurposeDelivery,
                                     static_cast<std::uint64_t>(t), i);
    }
    out.observations.push_back(obs);
  }
  out.reward = reward_of(env.reward, reward_values);
  return out;
}

double true_mean(const Environment& env, int action) {
  if (action < 0 || action >= env.graph.num_actions)
    throw ParamError("true_mean: action index out of range");
  std::vector<double> means;
  for (int i : env.graph.reward_sets[action]) means.push_back(env.theta[i]);
  return reward_of(env.reward, means);
}

Gaps gaps(const Environment& env) {
  constexpr double kTieTol = 1e-12;
  Gaps out;
  out.mu.resize(env.graph.num_actions);
  for (int j = 0; j < env.graph.num_actions; ++j)
    out.mu[j] = true_mean(env, j);
  out.mu_star = *std::max_element(out.mu.begin(), out.mu.end());
  out.delta.resize(out.mu.size());
  for (int j = 0; j < env.graph.num_actions; ++j) {
    out.delta[j] = out.mu_star - out.mu[j];
    if (out.delta[j] <= kTieTol) {
      out.delta[j] = 0.0;
      out.optimal.push_back(j);
    } else {
      out.suboptimal.push_back(j);
    }
  }
  return out;
}

Environment flixster_style_env(const BipartiteGraph& graph,
                               std::uint64_t seed) {
  const int k = graph.num_actions;
  Environment env;
  env.graph = graph;
  env.reward.kind = RewardKind::kIdentity;
  env.theta.resize(k);
  SequentialRng rng(seed, rng::kPurposeEnvSetup, 0);
  for (int j = 0; j < k; ++j) env.theta[j] = 0.3 + 0.5 * rng.uniform();
  const int num_optimal = std::min<int>(50, (k + 19) / 20);
  // partial Fisher-Yates over action ids picks the optimal users
  std::vector<int> ids(k);
  for (int j = 0; j < k; ++j) ids[j] = j;
  for (int j = 0; j < num_optimal; ++j) {
    const int pick = j + static_cast<int>(rng.below(k - j));
    std::swap(ids[j], ids[pick]);
    env.theta[ids[j]] = 0.9;
  }
  check_env(env);
  return env;
}

Environment routing_env(const RoutingGraph& routing, std::uint64_t seed,
                        double delay_bound) {
  Environment env;
  env.graph = routing.graph;
  env.reward.kind = RewardKind::kScaledDelay;
  env.reward.delay_bound = delay_bound;
  env.theta.resize(routing.graph.num_base_arms);
  SequentialRng rng(seed, rng::kPurposeEnvSetup, 0);
  for (double& th : env.theta) th = rng.uniform();
  check_env(env);
  return env;
}

Environment load_env_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open env fixture: " + path, 0);
  Environment env;
  bool have_graph = false;
  bool have_theta = false;
  bool have_reward = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string s = raw;
    if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    const auto colon = s.find(':');
    if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (colon == std::string::npos)
      throw ParseError("expected 'key: value'", line_no);
    std::string key = s.substr(0, colon);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    std::string value = s.substr(colon + 1);
    if (key == "graph") {
      std::istringstream vs(value);
      std::string rel;
      vs >> rel;
      if (rel.empty()) throw ParseError("graph: path missing", line_no);
      const auto dir = std::filesystem::path(path).parent_path();
      env.graph = load_graph_file((dir / rel).string());
      have_graph = true;
    } else if (key == "theta") {
      std::istringstream vs(value);
      double th;
      while (vs >> th) env.theta.push_back(th);
      have_theta = true;
    } else if (key == "reward") {
      std::istringstream vs(value);
      std::string kind;
      vs >> kind;
      if (kind == "identity") {
        env.reward.kind = RewardKind::kIdentity;
      } else if (kind == "mean") {
        env.reward.kind = RewardKind::kMeanOfSet;
      } else if (kind == "delay") {
        env.reward.kind = RewardKind::kScaledDelay;
        std::string b;
        vs >> b;
        if (b.rfind("B=", 0) != 0)
          throw ParseError("delay reward needs 'B=<real>'", line_no);
        env.reward.delay_bound = std::stod(b.substr(2));
      } else {
        throw ParseError("unknown reward kind '" + kind + "'", line_no);
      }
      have_reward = true;
    } else if (key == "sporadic") {
      std::istringstream vs(value);
      double p;
      while (vs >> p) env.obs_prob.push_back(p);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }
  if (!have_graph) throw ParseError("fixture missing 'graph:' line", line_no);
  if (!have_theta) throw ParseError("fixture missing 'theta:' line", line_no);
  if (!have_reward) throw ParseError("fixture missing 'reward:' line", line_no);
  check_env(env);
  return env;
}

std::string save_env(const Environment& env, const std::string& graph_path) {
  std::ostringstream out;
  out << "graph: " << graph_path << '\n';
  out << "theta:";
  out.precision(17);
  for (double th : env.theta) out << ' ' << th;
  out << '\n';
  switch (env.reward.kind) {
    case RewardKind::kIdentity:
      out << "reward: identity\n";
      break;
    case RewardKind::kMeanOfSet:
      out << "reward: mean\n";
      break;
    case RewardKind::kScaledDelay:
      out << "reward: delay B=" << env.reward.delay_bound << '\n';
      break;
  }
  if (env.sporadic()) {
    out << "sporadic:";
    for (double p : env.obs_prob) out << ' ' << p;
    out << '\n';
  }
  return out.str();
}

}  // namespace netbandit
