#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace netbandit {

// Bipartite side-observation structure between K actions and N base-arms.
// Playing action j yields one observation for every base-arm in its
// observe-set V_j; the action's reward depends only on the subset K_j of
// V_j. Indices are 0-based in memory and 1-based in the text format.
//
// Values are immutable after construction/generation and safe to share
// across threads. All member sets are kept sorted ascending.
struct BipartiteGraph {
  int num_actions = 0;                          // K
  int num_base_arms = 0;                        // N
  std::vector<std::vector<int>> observe_sets;   // V_j per action
  std::vector<std::vector<int>> reward_sets;    // K_j per action, K_j subset of V_j
};

struct GraphStats {
  int lambda = 0;  // max_j |K_j|
  int delta = 0;   // max_i |S_i|
};

// Empty result means the graph is valid. Otherwise one human-readable
// message per violated invariant (K_j not within V_j, unused base-arm,
// out-of-range index, ...). Indices in messages are 1-based.
std::vector<std::string> validate(const BipartiteGraph& graph);

// S_i = { j : i in V_j } for every base-arm i.
std::vector<std::vector<int>> supports(const BipartiteGraph& graph);

GraphStats graph_stats(const BipartiteGraph& graph);

// Greedy hitting set: repeatedly add the action covering the most
// still-uncovered base-arms, ties broken by lowest action index.
// The result always hits every support.
std::vector<int> greedy_hitting_set(const BipartiteGraph& graph);

// Exact minimum hitting-set cardinality by subset enumeration.
// Requires K <= 24 and N <= 64.
int brute_force_hitting_number(const BipartiteGraph& graph);

// Exact minimum clique-partition cardinality. A set C of actions is a
// clique when K_j is contained in V_i for every pair i,j in C. Requires
// K <= 12 (subset DP).
int brute_force_clique_partition(const BipartiteGraph& graph);

// Classical bandit as the degenerate case: N=K, V_j = K_j = {j}.
BipartiteGraph gen_identity(int num_actions);

// Each e_ij is 1 independently with probability p; K_j = V_j. Resamples
// the whole matrix until there is no useless base-arm and no empty
// observe-set (at most 1000 attempts, then ValidationError).
BipartiteGraph gen_erdos_renyi(int num_base_arms, int num_actions, double p,
                               std::uint64_t seed);

// Undirected social graph with a power-law degree sequence sampled from
// P(d) ~ d^-exponent on [5, K-1] (configuration model, self-loops and
// multi-edges dropped). N=K, V_j = one-hop neighborhood of j including j,
// K_j = {j}.
BipartiteGraph gen_powerlaw(int num_actions, double exponent,
                            std::uint64_t seed);

// Undirected multigraph-free link network for the routing generator.
// Nodes are 0-based; edges are unordered pairs.
struct LinkGraph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

struct RoutingGraph {
  BipartiteGraph graph;                        // actions = paths, arms = links
  std::vector<std::vector<int>> paths;         // node sequences, source..dest
  std::vector<std::pair<int, int>> links;      // directed link per base-arm
};

// Enumerates all simple source->dest paths (depth-first, lexicographic
// node order). Actions are paths; base-arms are the directed links used
// by at least one path; V_j = K_j = links of path j. Errors when no path
// exists or more than `path_cap` paths are found.
RoutingGraph gen_routing(const LinkGraph& links, int source, int dest,
                         int path_cap);

// The six-node network used by the routing experiment: 13 simple paths
// between nodes 0 and 5 touching 12 directed links.
LinkGraph routing_example_topology();

// Draws i.i.d. subsets of {1..N} (each base-arm included with probability
// p) until their union covers everything; returns how many draws it took.
std::int64_t er_stopping_time(int num_base_arms, double p,
                              std::uint64_t seed);

// Incremental form of the same process: the generated subsets become the
// observe/reward sets of a bipartite graph with K = tau actions.
BipartiteGraph er_stopping_graph(int num_base_arms, double p,
                                 std::uint64_t seed);

// Text format (UTF-8, LF, '#' comments):
//   line 1:  K N
//   K lines: j | V: i1 i2 ... | R: i1 i2 ...
// with 1-based indices and j running 1..K in order.
BipartiteGraph load_graph(std::istream& in);
BipartiteGraph load_graph_file(const std::string& path);
std::string save_graph(const BipartiteGraph& graph);

}  // namespace netbandit
