#include "netbandit/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>

#include "netbandit/errors.hpp"
#include "netbandit/rng.hpp"

namespace netbandit {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  // both sorted
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::vector<std::string> validate(const BipartiteGraph& graph) {
  std::vector<std::string> violations;
  const int k = graph.num_actions;
  const int n = graph.num_base_arms;
  if (k <= 0) violations.push_back("num_actions must be positive");
  if (n <= 0) violations.push_back("num_base_arms must be positive");
  if (static_cast<int>(graph.observe_sets.size()) != k)
    violations.push_back("observe_sets size differs from num_actions");
  if (static_cast<int>(graph.reward_sets.size()) != k)
    violations.push_back("reward_sets size differs from num_actions");
  if (!violations.empty()) return violations;

  std::vector<bool> used(n, false);
  for (int j = 0; j < k; ++j) {
    for (int i : graph.observe_sets[j]) {
      if (i < 0 || i >= n)
        violations.push_back("V_" + std::to_string(j + 1) +
                             " contains out-of-range base-arm " +
                             std::to_string(i + 1));
    }
    if (!is_subset(graph.reward_sets[j], graph.observe_sets[j]))
      violations.push_back("K_" + std::to_string(j + 1) +
                           " is not contained in V_" + std::to_string(j + 1));
    for (int i : graph.reward_sets[j])
      if (i >= 0 && i < n) used[i] = true;
  }
  for (int i = 0; i < n; ++i)
    if (!used[i])
      violations.push_back("base-arm " + std::to_string(i + 1) +
                           " unused: it is in no reward set");
  return violations;
}

std::vector<std::vector<int>> supports(const BipartiteGraph& graph) {
  std::vector<std::vector<int>> s(graph.num_base_arms);
  for (int j = 0; j < graph.num_actions; ++j)
    for (int i : graph.observe_sets[j]) s[i].push_back(j);
  return s;
}

GraphStats graph_stats(const BipartiteGraph& graph) {
  GraphStats st;
  for (const auto& kj : graph.reward_sets)
    st.lambda = std::max(st.lambda, static_cast<int>(kj.size()));
  for (const auto& si : supports(graph))
    st.delta = std::max(st.delta, static_cast<int>(si.size()));
  return st;
}

std::vector<int> greedy_hitting_set(const BipartiteGraph& graph) {
  const int k = graph.num_actions;
  const int n = graph.num_base_arms;
  std::vector<bool> covered(n, false);
  int remaining = n;
  std::vector<int> result;
  while (remaining > 0) {
    int best = -1;
    int best_gain = 0;
    for (int j = 0; j < k; ++j) {
      int gain = 0;
      for (int i : graph.observe_sets[j])
        if (!covered[i]) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    if (best < 0) break;  // uncoverable arm; validate() reports this case
    result.push_back(best);
    for (int i : graph.observe_sets[best]) {
      if (!covered[i]) {
        covered[i] = true;
        --remaining;
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

int brute_force_hitting_number(const BipartiteGraph& graph) {
  const int k = graph.num_actions;
  const int n = graph.num_base_arms;
  if (k > 24)
    throw ParamError("brute_force_hitting_number: K > 24 enumeration cap");
  if (n > 64)
    throw ParamError("brute_force_hitting_number: N > 64 enumeration cap");
  const std::uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
  std::vector<std::uint64_t> cover(k, 0);
  for (int j = 0; j < k; ++j)
    for (int i : graph.observe_sets[j]) cover[j] |= 1ULL << i;
  int best = k + 1;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const int size = std::popcount(mask);
    if (size >= best) continue;
    std::uint64_t u = 0;
    for (std::uint32_t m = mask; m != 0; m &= m - 1)
      u |= cover[std::countr_zero(m)];
    if (u == full) best = size;
  }
  if (best > k)
    throw ValidationError("no hitting set exists: some support is empty");
  return best;
}

int brute_force_clique_partition(const BipartiteGraph& graph) {
  const int k = graph.num_actions;
  if (k > 12)
    throw ParamError("brute_force_clique_partition: K > 12 enumeration cap");
  // pairwise clique compatibility: {a,b} is a clique iff K_a within V_b
  // and K_b within V_a; larger sets are cliques iff all pairs are.
  std::vector<std::uint32_t> compatible(k, 0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (is_subset(graph.reward_sets[b], graph.observe_sets[a]) &&
          is_subset(graph.reward_sets[a], graph.observe_sets[b]))
        compatible[a] |= 1u << b;
    }
  }
  const std::uint32_t full = (k == 32) ? ~0u : ((1u << k) - 1);
  std::vector<bool> is_clique(full + 1, false);
  is_clique[0] = true;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    is_clique[mask] =
        is_clique[rest] && ((rest & ~compatible[low]) == 0);
  }
  std::vector<int> dp(full + 1, k + 1);
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t pivot = mask & (~mask + 1);  // lowest set bit
    for (std::uint32_t sub = mask; sub != 0; sub = (sub - 1) & mask) {
      if (!(sub & pivot)) continue;  // every part containing the pivot once
      if (is_clique[sub]) dp[mask] = std::min(dp[mask], dp[mask ^ sub] + 1);
    }
  }
  return dp[full];
}

BipartiteGraph gen_identity(int num_actions) {
  if (num_actions < 1) throw ParamError("gen_identity: K must be >= 1");
  BipartiteGraph g;
  g.num_actions = num_actions;
  g.num_base_arms = num_actions;
  g.observe_sets.resize(num_actions);
  g.reward_sets.resize(num_actions);
  for (int j = 0; j < num_actions; ++j) {
    g.observe_sets[j] = {j};
    g.reward_sets[j] = {j};
  }
  return g;
}

BipartiteGraph gen_erdos_renyi(int num_base_arms, int num_actions, double p,
                               std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0))
    throw ParamError("gen_erdos_renyi: p must lie in (0,1)");
  if (num_base_arms < 1 || num_actions < 1)
    throw ParamError("gen_erdos_renyi: sizes must be >= 1");
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SequentialRng rng(seed, rng::kPurposeGraphGen, attempt);
    BipartiteGraph g;
    g.num_actions = num_actions;
    g.num_base_arms = num_base_arms;
    g.observe_sets.assign(num_actions, {});
    std::vector<bool> arm_used(num_base_arms, false);
    for (int j = 0; j < num_actions; ++j) {
      for (int i = 0; i < num_base_arms; ++i) {
        if (rng.bernoulli(p)) {
          g.observe_sets[j].push_back(i);
          arm_used[i] = true;
        }
      }
    }
    bool ok = std::all_of(arm_used.begin(), arm_used.end(),
                          [](bool b) { return b; });
    for (const auto& vj : g.observe_sets)
      if (vj.empty()) ok = false;
    if (!ok) continue;
    g.reward_sets = g.observe_sets;
    return g;
  }
  throw ValidationError(
      "gen_erdos_renyi: no valid graph after 1000 attempts");
}

BipartiteGraph gen_powerlaw(int num_actions, double exponent,
                            std::uint64_t seed) {
  if (num_actions < 2) throw ParamError("gen_powerlaw: K must be >= 2");
  if (!(exponent > 1.0)) throw ParamError("gen_powerlaw: exponent must be > 1");
  const int k = num_actions;
  SequentialRng rng(seed, rng::kPurposeGraphGen, 0);

  // degree sequence: P(d) proportional to d^-exponent on [dmin, dmax].
  // Social subgraphs keep a floor on connectivity, so the power law starts
  // at dmin rather than 1 (the usual x_min cutoff when fitting).
  const int dmin = std::min(5, k - 1);
  const int dmax = k - 1;
  const int span = dmax - dmin + 1;
  std::vector<double> cdf(span);
  double total = 0.0;
  for (int d = dmin; d <= dmax; ++d) total += std::pow(d, -exponent);
  double acc = 0.0;
  for (int d = dmin; d <= dmax; ++d) {
    acc += std::pow(d, -exponent) / total;
    cdf[d - dmin] = acc;
  }
  cdf[span - 1] = 1.0;
  std::vector<int> degree(k);
  for (int j = 0; j < k; ++j) {
    const double u = rng.uniform();
    degree[j] =
        dmin + static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) -
                                cdf.begin());
  }
  if (std::accumulate(degree.begin(), degree.end(), 0) % 2 != 0) {
    if (degree[0] < dmax)
      ++degree[0];
    else
      --degree[0];
  }

  // configuration model: shuffle stubs, pair them, drop loops/duplicates
  std::vector<int> stubs;
  for (int j = 0; j < k; ++j) stubs.insert(stubs.end(), degree[j], j);
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[rng.below(i)]);
  std::set<std::pair<int, int>> edges;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const int a = std::min(stubs[i], stubs[i + 1]);
    const int b = std::max(stubs[i], stubs[i + 1]);
    if (a != b) edges.insert({a, b});
  }

  BipartiteGraph g;
  g.num_actions = k;
  g.num_base_arms = k;
  g.observe_sets.assign(k, {});
  g.reward_sets.assign(k, {});
  for (int j = 0; j < k; ++j) {
    g.observe_sets[j].push_back(j);
    g.reward_sets[j] = {j};
  }
  for (const auto& [a, b] : edges) {
    g.observe_sets[a].push_back(b);
    g.observe_sets[b].push_back(a);
  }
  for (auto& vj : g.observe_sets) vj = sorted_unique(std::move(vj));
  return g;
}

LinkGraph routing_example_topology() {
  // Layered six-node network: 0-{1,2}-{3,4}-5 with rungs 1-2 and 3-4 and
  // cross links 1-3, 2-3, 2-4. Thirteen simple 0->5 paths over twelve
  // used directed links.
  LinkGraph g;
  g.num_nodes = 6;
  g.edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3},
             {2, 4}, {3, 4}, {3, 5}, {4, 5}};
  return g;
}

RoutingGraph gen_routing(const LinkGraph& links, int source, int dest,
                         int path_cap) {
  const int n = links.num_nodes;
  if (source < 0 || source >= n || dest < 0 || dest >= n || source == dest)
    throw ParamError("gen_routing: bad source/dest");
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : links.edges) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b)
      throw ParamError("gen_routing: bad edge");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& row : adj) row = sorted_unique(std::move(row));

  std::vector<std::vector<int>> paths;
  std::vector<int> current{source};
  std::vector<bool> visited(n, false);
  visited[source] = true;
  std::function<void(int)> dfs = [&](int u) {
    if (u == dest) {
      if (static_cast<int>(paths.size()) >= path_cap)
        throw ParamError("gen_routing: path count exceeds cap");
      paths.push_back(current);
      return;
    }
    for (int v : adj[u]) {
      if (visited[v]) continue;
      visited[v] = true;
      current.push_back(v);
      dfs(v);
      current.pop_back();
      visited[v] = false;
    }
  };
  dfs(source);
  if (paths.empty())
    throw ValidationError("gen_routing: no path from source to dest");

  // base-arms = directed links used by at least one path, sorted
  std::set<std::pair<int, int>> used;
  for (const auto& p : paths)
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      used.insert({p[i], p[i + 1]});
  RoutingGraph out;
  out.links.assign(used.begin(), used.end());
  out.paths = paths;
  auto link_id = [&](int a, int b) {
    return static_cast<int>(std::lower_bound(out.links.begin(),
                                             out.links.end(),
                                             std::make_pair(a, b)) -
                            out.links.begin());
  };
  out.graph.num_actions = static_cast<int>(paths.size());
  out.graph.num_base_arms = static_cast<int>(out.links.size());
  out.graph.observe_sets.resize(paths.size());
  for (std::size_t j = 0; j < paths.size(); ++j) {
    for (std::size_t i = 0; i + 1 < paths[j].size(); ++i)
      out.graph.observe_sets[j].push_back(
          link_id(paths[j][i], paths[j][i + 1]));
    out.graph.observe_sets[j] = sorted_unique(out.graph.observe_sets[j]);
  }
  out.graph.reward_sets = out.graph.observe_sets;
  return out;
}

std::int64_t er_stopping_time(int num_base_arms, double p,
                              std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0))
    throw ParamError("er_stopping_time: p must lie in (0,1)");
  if (num_base_arms < 1) throw ParamError("er_stopping_time: N must be >= 1");
  const int n = num_base_arms;
  std::vector<bool> covered(n, false);
  int remaining = n;
  std::int64_t draws = 0;
  while (remaining > 0) {
    ++draws;
    for (int i = 0; i < n; ++i) {
      if (rng::bernoulli(p, seed, rng::kPurposeGraphGen,
                         static_cast<std::uint64_t>(draws), i) &&
          !covered[i]) {
        covered[i] = true;
        --remaining;
      }
    }
  }
  return draws;
}

BipartiteGraph er_stopping_graph(int num_base_arms, double p,
                                 std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0))
    throw ParamError("er_stopping_graph: p must lie in (0,1)");
  if (num_base_arms < 1)
    throw ParamError("er_stopping_graph: N must be >= 1");
  const int n = num_base_arms;
  BipartiteGraph g;
  g.num_base_arms = n;
  std::vector<bool> covered(n, false);
  int remaining = n;
  std::int64_t draws = 0;
  while (remaining > 0) {
    ++draws;
    std::vector<int> subset;
    for (int i = 0; i < n; ++i) {
      if (rng::bernoulli(p, seed, rng::kPurposeGraphGen,
                         static_cast<std::uint64_t>(draws), i)) {
        subset.push_back(i);
        if (!covered[i]) {
          covered[i] = true;
          --remaining;
        }
      }
    }
    g.observe_sets.push_back(subset);
    g.reward_sets.push_back(std::move(subset));
  }
  g.num_actions = static_cast<int>(draws);
  return g;
}

namespace {

// strips '#' comments and surrounding whitespace; empty result = skip
std::string clean_line(const std::string& raw) {
  std::string s = raw;
  if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_index_list(const std::string& text, int line_no,
                                  const char* what) {
  std::vector<int> out;
  std::istringstream in(text);
  long v = 0;
  while (in >> v) {
    if (v < 1)
      throw ParseError(std::string(what) + ": indices are 1-based", line_no);
    out.push_back(static_cast<int>(v - 1));
  }
  if (!in.eof())
    throw ParseError(std::string(what) + ": expected integer list", line_no);
  return sorted_unique(std::move(out));
}

}  // namespace

BipartiteGraph load_graph(std::istream& in) {
  BipartiteGraph g;
  std::string raw;
  int line_no = 0;
  int header_line = 0;
  // header
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string s = clean_line(raw);
    if (s.empty()) continue;
    std::istringstream hs(s);
    if (!(hs >> g.num_actions >> g.num_base_arms) ||
        g.num_actions < 1 || g.num_base_arms < 1)
      throw ParseError("expected header line 'K N'", line_no);
    std::string rest;
    if (hs >> rest) throw ParseError("trailing tokens after 'K N'", line_no);
    header_line = line_no;
    break;
  }
  if (header_line == 0) throw ParseError("missing header line 'K N'", line_no);

  g.observe_sets.resize(g.num_actions);
  g.reward_sets.resize(g.num_actions);
  int next_action = 0;
  while (next_action < g.num_actions && std::getline(in, raw)) {
    ++line_no;
    const std::string s = clean_line(raw);
    if (s.empty()) continue;
    // layout: j | V: ... | R: ...
    const auto bar1 = s.find('|');
    const auto bar2 = (bar1 == std::string::npos) ? std::string::npos
                                                  : s.find('|', bar1 + 1);
    if (bar1 == std::string::npos || bar2 == std::string::npos)
      throw ParseError("expected 'j | V: ... | R: ...'", line_no);
    std::istringstream js(s.substr(0, bar1));
    long j = 0;
    if (!(js >> j) || j != next_action + 1)
      throw ParseError("action lines must be numbered 1..K in order",
                       line_no);
    std::string vpart = clean_line(s.substr(bar1 + 1, bar2 - bar1 - 1));
    std::string rpart = clean_line(s.substr(bar2 + 1));
    if (vpart.rfind("V:", 0) != 0)
      throw ParseError("expected 'V:' section", line_no);
    if (rpart.rfind("R:", 0) != 0)
      throw ParseError("expected 'R:' section", line_no);
    g.observe_sets[next_action] =
        parse_index_list(vpart.substr(2), line_no, "V");
    g.reward_sets[next_action] =
        parse_index_list(rpart.substr(2), line_no, "R");
    ++next_action;
  }
  if (next_action < g.num_actions)
    throw ParseError("file ends before all K action lines", line_no);

  if (auto violations = validate(g); !violations.empty()) {
    std::string msg = "invalid graph:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }
  return g;
}

BipartiteGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path, 0);
  return load_graph(in);
}

std::string save_graph(const BipartiteGraph& graph) {
  std::ostringstream out;
  out << graph.num_actions << ' ' << graph.num_base_arms << '\n';
  for (int j = 0; j < graph.num_actions; ++j) {
    out << (j + 1) << " | V:";
    for (int i : graph.observe_sets[j]) out << ' ' << (i + 1);
    out << " | R:";
    for (int i : graph.reward_sets[j]) out << ' ' << (i + 1);
    out << '\n';
  }
  return out.str();
}

}  // namespace netbandit
