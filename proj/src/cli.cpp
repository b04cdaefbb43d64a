#include "netbandit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netbandit/bounds.hpp"
#include "netbandit/env.hpp"
#include "netbandit/errors.hpp"
#include "netbandit/graph.hpp"
#include "netbandit/lp.hpp"
#include "netbandit/policy.hpp"
#include "netbandit/rng.hpp"
#include "netbandit/sim.hpp"

namespace netbandit {

void er_tau_csv(std::ostream& out, const std::vector<int>& sizes, double p,
                int reps, std::uint64_t seed);

namespace {

constexpr const char* kVersion = "netbandit 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitInternal = 4;

std::vector<double> load_value_file(const std::string& path, int expected) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path, 0);
  std::vector<double> values;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
    std::istringstream vs(raw);
    double v;
    while (vs >> v) values.push_back(v);
  }
  if (expected >= 0 && static_cast<int>(values.size()) != expected)
    throw ParseError("expected " + std::to_string(expected) + " values in " +
                         path + ", found " + std::to_string(values.size()),
                     line_no);
  return values;
}

// ---------------------------------------------------------------------------
// solve-lp

int cmd_solve_lp(const std::string& graph_file,
                 const std::string& sporadic_file) {
  const BipartiteGraph graph = load_graph_file(graph_file);
  AllocationLP lp;
  if (sporadic_file.empty()) {
    lp = build_p2(graph);
  } else {
    lp = build_p2_prime(graph,
                        load_value_file(sporadic_file, graph.num_actions));
  }
  const AllocationSolution sol = solve_generic(lp);
  if (sol.status != SolveStatus::kOptimal) {
    std::cerr << "LP did not solve to optimality\n";
    return kExitInternal;
  }
  std::cout << "graph: K=" << graph.num_actions
            << " N=" << graph.num_base_arms << '\n';
  std::cout << "z*:";
  for (double z : sol.x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.6g", z);
    std::cout << buf;
  }
  std::cout << '\n';
  std::cout << "lp_optimum: " << sol.objective_value << '\n';
  std::cout << "greedy_hitting_set_size: " << greedy_hitting_set(graph).size()
            << '\n';
  if (graph.num_actions <= 12) {
    std::cout << "hitting_number: " << brute_force_hitting_number(graph)
              << '\n';
    std::cout << "clique_partition_number: "
              << brute_force_clique_partition(graph) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment configs (flat key = value files)

std::map<std::string, std::string> parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config: " + path, 0);
  std::map<std::string, std::string> kv;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.erase(pos);
    const auto eq = raw.find('=');
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string()
                                    : s.substr(a, b - a + 1);
    };
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    kv[key] = value;
  }
  return kv;
}

class ConfigReader {
 public:
  ConfigReader(std::map<std::string, std::string> kv, std::string path)
      : kv_(std::move(kv)), path_(std::move(path)) {}

  std::string get(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end())
      throw ValidationError("config: missing key '" + key + "'");
    used_.push_back(key);
    return it->second;
  }
  std::string get_or(const std::string& key, const std::string& fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.push_back(key);
    return it->second;
  }
  double number(const std::string& key) { return std::stod(get(key)); }
  double number_or(const std::string& key, double fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.push_back(key);
    return std::stod(it->second);
  }
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.push_back(key);
    return std::stoll(it->second);
  }

  // fail fast on typos: every key present must have been consumed
  void check_all_used() const {
    for (const auto& [key, value] : kv_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        throw ValidationError("config: unknown key '" + key + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string> used_;
  std::string path_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::int64_t> horizon;
  std::optional<std::string> out;
  std::optional<int> parallel;
};

int cmd_run(const std::string& config_file, const RunOverrides& overrides) {
  ConfigReader cfg(parse_config(config_file), config_file);
  const std::string experiment = cfg.get("experiment");

  const std::uint64_t seed = overrides.seed.value_or(
      static_cast<std::uint64_t>(cfg.integer_or("seed", 1)));
  const int reps =
      overrides.reps.value_or(static_cast<int>(cfg.integer_or("reps", 1)));
  const std::int64_t horizon =
      overrides.horizon.value_or(cfg.integer_or("T", 10000));
  const std::string out_path = overrides.out.value_or(cfg.get("out"));
  const int parallel = overrides.parallel.value_or(
      static_cast<int>(cfg.integer_or("parallel", 0)));
  const std::int64_t stride = cfg.integer_or("stride", 100);

  if (experiment == "er-tau") {
    // delegated to the er-tau machinery; config supplies its parameters
    const auto n_list = split_list(cfg.get("N_list"));
    const double p = cfg.number("p");
    cfg.check_all_used();
    std::vector<int> sizes;
    for (const auto& item : n_list) sizes.push_back(std::stoi(item));
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write " + out_path);
    er_tau_csv(out, sizes, p, reps, seed);
    std::ofstream manifest(out_path + ".manifest");
    manifest << "version = " << kVersion << '\n';
    manifest << "config = " << config_file << '\n';
    manifest << "experiment = er-tau\n";
    manifest << "seed = " << seed << '\n';
    manifest << "reps = " << reps << '\n';
    manifest << "N_list = " << cfg.get_or("N_list", "") << '\n';
    manifest << "p = " << p << '\n';
    return kExitOk;
  }

  Environment env;
  if (experiment == "flixster-style") {
    const int k = static_cast<int>(cfg.integer_or("K", 1000));
    const double exponent = cfg.number_or("exponent", 2.5);
    env = flixster_style_env(gen_powerlaw(k, exponent, seed), seed);
  } else if (experiment == "routing") {
    const double b = cfg.number_or("B", 5.0);
    env = routing_env(gen_routing(routing_example_topology(), 0, 5, 1000),
                      seed, b);
  } else if (experiment == "custom") {
    const auto dir = std::filesystem::path(config_file).parent_path();
    env = load_env_file((dir / cfg.get("env_file")).string());
  } else {
    throw ValidationError("config: unknown experiment '" + experiment + "'");
  }

  const auto policies = split_list(cfg.get("policies"));
  if (policies.empty()) throw ValidationError("config: empty policy list");
  PolicyParams params;
  params.c = cfg.number_or("c", 5.0);
  params.d = cfg.number_or("d", 0.2);
  cfg.check_all_used();

  const auto lp = env.sporadic() ? build_p2_prime(env.graph, env.obs_prob)
                                 : build_p2(env.graph);
  const auto sol = solve_generic(presolve_rows(lp));
  if (sol.status != SolveStatus::kOptimal)
    throw ValidationError("exploration LP did not solve");
  params.zstar = sol.x;

  const auto summaries =
      replicate(env, policies, params, horizon, reps, seed, stride, parallel,
                /*check_accounting=*/!env.sporadic());
  std::ofstream out(out_path);
  if (!out) throw ValidationError("cannot write " + out_path);
  write_summary_csv(out, summaries);

  std::ofstream manifest(out_path + ".manifest");
  manifest << "version = " << kVersion << '\n';
  manifest << "config = " << config_file << '\n';
  manifest << "experiment = " << experiment << '\n';
  manifest << "seed = " << seed << '\n';
  manifest << "reps = " << reps << '\n';
  manifest << "T = " << horizon << '\n';
  manifest << "stride = " << stride << '\n';
  manifest << "policies =";
  for (const auto& p : policies) manifest << ' ' << p;
  manifest << '\n';
  manifest << "c = " << params.c << '\n';
  manifest << "d = " << params.d << '\n';
  manifest << "lp_optimum = " << sol.objective_value << '\n';

  std::cout << format_comparison(compare(summaries));
  return kExitOk;
}

}  // namespace

// Shared by cmd_run's er-tau path and the er-tau subcommand. For each seed
// the coverage process yields tau and a bipartite graph whose K = tau
// actions are the drawn subsets; the P2 optimum and greedy hitting set of
// that graph sit below tau by construction.
void er_tau_csv(std::ostream& out, const std::vector<int>& sizes, double p,
                int reps, std::uint64_t seed) {
  out << "N,mean_tau,std_tau,log_bound,mean_lp_opt,mean_greedy\n";
  for (int n : sizes) {
    double sum_tau = 0.0, sum_tau2 = 0.0, sum_lp = 0.0, sum_greedy = 0.0;
    for (int r = 0; r < reps; ++r) {
      const std::uint64_t s = seed + 1 + static_cast<std::uint64_t>(r);
      const BipartiteGraph g = er_stopping_graph(n, p, s);
      const double tau = static_cast<double>(g.num_actions);
      sum_tau += tau;
      sum_tau2 += tau * tau;
      const auto sol = solve_generic(presolve_rows(build_p2(g)));
      if (sol.status != SolveStatus::kOptimal)
        throw ValidationError("er-tau: LP did not solve");
      sum_lp += sol.objective_value;
      sum_greedy += static_cast<double>(greedy_hitting_set(g).size());
    }
    const double mean_tau = sum_tau / reps;
    const double var_tau =
        reps > 1 ? (sum_tau2 - reps * mean_tau * mean_tau) / (reps - 1) : 0.0;
    const double log_bound =
        std::log(static_cast<double>(n)) / std::log(1.0 / (1.0 - p));
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g,%.10g\n", n,
                  mean_tau, std::sqrt(std::max(0.0, var_tau)), log_bound,
                  sum_lp / reps, sum_greedy / reps);
    out << buf;
  }
}

namespace {

int cmd_er_tau(const std::string& n_list, double p, int reps,
               std::uint64_t seed, const std::string& out_path) {
  std::vector<int> sizes;
  for (const auto& item : split_list(n_list)) sizes.push_back(std::stoi(item));
  if (sizes.empty()) throw ValidationError("er-tau: empty N list");
  if (out_path.empty()) {
    er_tau_csv(std::cout, sizes, p, reps, seed);
  } else {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write " + out_path);
    er_tau_csv(out, sizes, p, reps, seed);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bounds

int cmd_bounds(const std::string& env_file, double c, double d, double alpha,
               std::int64_t horizon, const std::string& csv_path) {
  const Environment env = load_env_file(env_file);
  const auto lp = env.sporadic() ? build_p2_prime(env.graph, env.obs_prob)
                                 : build_p2(env.graph);
  const auto sol = solve_generic(presolve_rows(lp));
  if (sol.status != SolveStatus::kOptimal)
    throw ValidationError("bounds: exploration LP did not solve");

  BoundReport report;
  report.c_mu = env.reward.kind == RewardKind::kIdentity
                    ? lower_bound_c_mu(env)
                    : std::nan("");
  report.eps_greedy = eps_greedy_bound(env, sol.x, c, d, horizon, alpha);
  report.ucb_lp = ucb_lp_bound(env, sol.x, horizon);
  report.ucb_n_clique = ucb_n_clique_bound(env);

  double zsum = 0.0;
  for (double z : sol.x) zsum += z;
  std::ostringstream text;
  text.precision(10);
  text << "lp_optimum = " << zsum << '\n';
  text << "c_mu = " << report.c_mu << '\n';
  text << "eps_greedy_log_coeff = " << report.eps_greedy.log_coeff << '\n';
  text << "eps_greedy_constant = " << report.eps_greedy.constant << '\n';
  text << "eps_greedy_bound_at_T = " << report.eps_greedy.value_at_horizon
       << '\n';
  text << "ucb_lp_bound_at_T = " << report.ucb_lp.value_at_horizon << '\n';
  text << "ucb_lp_const_per_action = " << report.ucb_lp.const_per_action
       << '\n';
  text << "ucb_lp_const_pairs = " << report.ucb_lp.const_pairs << '\n';
  text << "ucb_lp_m_bar = " << report.ucb_lp.m_bar << '\n';
  text << "ucb_lp_late_set =";
  for (int j : report.ucb_lp.late_set) text << ' ' << (j + 1);
  text << '\n';
  text << "ucb_lp_m_j =";
  for (int m : report.ucb_lp.m_j) text << ' ' << m;
  text << '\n';
  text << "ucb_lp_delta_hat =";
  for (double dh : report.ucb_lp.delta_hat) text << ' ' << dh;
  text << '\n';
  text << "ucb_n_clique_coeff_greedy = " << report.ucb_n_clique.greedy_coeff
       << '\n';
  if (report.ucb_n_clique.exact_coeff)
    text << "ucb_n_clique_coeff_exact = " << *report.ucb_n_clique.exact_coeff
         << '\n';
  std::cout << text.str();

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw ValidationError("cannot write " + csv_path);
    out << "c_mu,eps_greedy_log_coeff,eps_greedy_bound_at_T,ucb_lp_bound_at_T,"
           "ucb_n_clique_coeff_greedy,T,c,d,alpha\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%.10g,%.10g,%.10g,%.10g,%.10g,%lld,%.10g,%.10g,%.10g\n",
                  report.c_mu, report.eps_greedy.log_coeff,
                  report.eps_greedy.value_at_horizon,
                  report.ucb_lp.value_at_horizon,
                  report.ucb_n_clique.greedy_coeff,
                  static_cast<long long>(horizon), c, d, alpha);
    out << buf;
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Bandits with bipartite side-observations: allocation LPs, "
               "network-aware policies, and desk-scale experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* solve = app.add_subcommand(
      "solve-lp", "Solve the exploration LP for a graph file");
  std::string graph_file;
  std::string sporadic_file;
  solve->add_option("graph", graph_file, "bipartite graph file")->required();
  solve->add_option("--sporadic", sporadic_file,
                    "file of per-action observation probabilities (switches "
                    "to the sporadic LP)");

  auto* runcmd = app.add_subcommand("run", "Run an experiment config");
  std::string config_file;
  RunOverrides overrides;
  runcmd->add_option("config", config_file, "experiment config file")
      ->required();
  std::uint64_t seed_flag = 0;
  int reps_flag = 0;
  std::int64_t horizon_flag = 0;
  std::string out_flag;
  int parallel_flag = -1;
  auto* seed_opt = runcmd->add_option("--seed", seed_flag, "override seed");
  auto* reps_opt = runcmd->add_option("--reps", reps_flag, "override reps");
  auto* horizon_opt =
      runcmd->add_option("--horizon", horizon_flag, "override horizon T");
  auto* out_opt = runcmd->add_option("--out", out_flag, "override output CSV");
  auto* parallel_opt = runcmd->add_option("--parallel", parallel_flag,
                                          "worker threads (0 = all cores)");

  auto* ertau = app.add_subcommand(
      "er-tau", "Coverage stopping time vs LP optimum on random graphs");
  std::string n_list = "64,256,1024";
  double p = 0.5;
  int reps = 1000;
  std::uint64_t seed = 1;
  std::string out_path;
  ertau->add_option("--N", n_list, "comma-separated base-arm counts");
  ertau->add_option("--p", p, "edge probability");
  ertau->add_option("--reps", reps, "replications per N");
  ertau->add_option("--seed", seed, "base seed");
  ertau->add_option("--out", out_path, "output CSV (default stdout)");

  auto* bounds = app.add_subcommand(
      "bounds", "Evaluate the closed-form regret bounds for an environment");
  std::string env_file;
  double bc = 9.0, bd = 0.05, balpha = 2.0;
  std::int64_t bT = 100000;
  std::string bcsv;
  bounds->add_option("env", env_file, "environment fixture")->required();
  bounds->add_option("--c", bc, "exploration scale c");
  bounds->add_option("--d", bd, "gap parameter d");
  bounds->add_option("--alpha", balpha, "analysis parameter alpha > 1");
  bounds->add_option("--T", bT, "horizon");
  bounds->add_option("--out", bcsv, "also write a CSV row here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve_lp(graph_file, sporadic_file);
    if (runcmd->parsed()) {
      if (*seed_opt) overrides.seed = seed_flag;
      if (*reps_opt) overrides.reps = reps_flag;
      if (*horizon_opt) overrides.horizon = horizon_flag;
      if (*out_opt) overrides.out = out_flag;
      if (*parallel_opt) overrides.parallel = parallel_flag;
      return cmd_run(config_file, overrides);
    }
    if (ertau->parsed()) return cmd_er_tau(n_list, p, reps, seed, out_path);
    if (bounds->parsed()) return cmd_bounds(env_file, bc, bd, balpha, bT, bcsv);
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace netbandit
