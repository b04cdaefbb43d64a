#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "netbandit/errors.hpp"
#include "netbandit/graph.hpp"
#include "test_helpers.hpp"

using namespace netbandit;
using netbandit::testing::make_graph;
using netbandit::testing::random_graph;

TEST_CASE("validate accepts the identity graph") {
  CHECK(validate(gen_identity(3)).empty());
}

TEST_CASE("validate reports reward set escaping the observe set") {
  const auto g = make_graph(1, 2, {{1}}, {{2}});
  const auto violations = validate(g);
  REQUIRE(!violations.empty());
  bool found = false;
  for (const auto& v : violations)
    if (v.find("K_1") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("validate reports unused base-arms") {
  const auto g = make_graph(2, 2, {{1}, {1}}, {{1}, {1}});
  const auto violations = validate(g);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("base-arm 2") != std::string::npos);
}

TEST_CASE("supports inverts the observe sets") {
  SUBCASE("identity") {
    const auto s = supports(gen_identity(3));
    for (int i = 0; i < 3; ++i) CHECK(s[i] == std::vector<int>{i});
  }
  SUBCASE("star") {
    const auto g = make_graph(3, 3, {{1, 2, 3}, {2}, {3}}, {{1}, {2}, {3}});
    const auto s = supports(g);
    CHECK(s[0] == std::vector<int>{0});
    CHECK(s[1] == std::vector<int>{0, 1});
    CHECK(s[2] == std::vector<int>{0, 2});
  }
  SUBCASE("complete bipartite") {
    const auto g = make_graph(4, 2,
                              {{1, 2}, {1, 2}, {1, 2}, {1, 2}},
                              {{1, 2}, {1, 2}, {1, 2}, {1, 2}});
    const auto s = supports(g);
    for (int i = 0; i < 2; ++i) CHECK(s[i] == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("greedy hitting set") {
  SUBCASE("identity forces everything") {
    CHECK(greedy_hitting_set(gen_identity(3)) == std::vector<int>{0, 1, 2});
  }
  SUBCASE("a full-coverage hub wins alone") {
    const auto g = make_graph(3, 3, {{1, 2, 3}, {2}, {3}}, {{1}, {2}, {3}});
    CHECK(greedy_hitting_set(g) == std::vector<int>{0});
  }
  SUBCASE("two disjoint hubs") {
    const auto g = make_graph(4, 4, {{1, 2}, {3, 4}, {1}, {3}},
                              {{1, 2}, {3, 4}, {1}, {3}});
    CHECK(greedy_hitting_set(g) == std::vector<int>{0, 1});
    CHECK(brute_force_hitting_number(g) == 2);
  }
}

TEST_CASE("brute-force hitting number") {
  CHECK(brute_force_hitting_number(gen_identity(5)) == 5);
  const auto star = make_graph(3, 3, {{1, 2, 3}, {2}, {3}}, {{1}, {2}, {3}});
  CHECK(brute_force_hitting_number(star) == 1);
  const auto complete = make_graph(4, 3,
                                   {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}},
                                   {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  CHECK(brute_force_hitting_number(complete) == 1);
  CHECK_THROWS_AS(brute_force_hitting_number(gen_identity(25)), ParamError);
}

TEST_CASE("brute-force clique partition") {
  CHECK(brute_force_clique_partition(gen_identity(3)) == 3);
  // both actions observe everything, reward sets are their own arms
  const auto pair = make_graph(2, 2, {{1, 2}, {1, 2}}, {{1}, {2}});
  CHECK(brute_force_clique_partition(pair) == 1);
  CHECK_THROWS_AS(brute_force_clique_partition(gen_identity(13)), ParamError);
}

TEST_CASE("hitting number never exceeds clique partition number") {
  // exhaustive over random instances, the structural sandwich
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 7;
    const int n = 2 + (trial / 3) % 7;
    const auto g = random_graph(k, n, 500 + trial);
    CHECK(brute_force_hitting_number(g) <= brute_force_clique_partition(g));
  }
}

TEST_CASE("greedy hitting set is valid and no smaller than the optimum") {
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(3 + trial % 6, 3 + (trial / 2) % 6,
                                900 + trial);
    const auto greedy = greedy_hitting_set(g);
    const auto s = supports(g);
    for (const auto& si : s) {
      bool hit = false;
      for (int j : si)
        if (std::find(greedy.begin(), greedy.end(), j) != greedy.end())
          hit = true;
      CHECK(hit);
    }
    CHECK(static_cast<int>(greedy.size()) >= brute_force_hitting_number(g));
  }
}

TEST_CASE("gen_identity") {
  const auto g1 = gen_identity(1);
  CHECK(g1.num_actions == 1);
  CHECK(validate(g1).empty());
  CHECK(brute_force_hitting_number(gen_identity(5)) == 5);
}

TEST_CASE("gen_erdos_renyi") {
  CHECK_THROWS_AS(gen_erdos_renyi(4, 4, 0.0, 1), ParamError);
  CHECK_THROWS_AS(gen_erdos_renyi(4, 4, 1.0, 1), ParamError);
  const auto a = gen_erdos_renyi(4, 4, 0.5, 11);
  const auto b = gen_erdos_renyi(4, 4, 0.5, 11);
  CHECK(a.observe_sets == b.observe_sets);  // same seed, same graph
  const auto c = gen_erdos_renyi(4, 4, 0.5, 12);
  CHECK(a.observe_sets != c.observe_sets);
  for (int seed = 0; seed < 50; ++seed)
    CHECK(validate(gen_erdos_renyi(5, 6, 0.4, seed)).empty());
}

TEST_CASE("gen_powerlaw structure") {
  const auto g = gen_powerlaw(50, 2.5, 3);
  CHECK(validate(g).empty());
  for (int j = 0; j < g.num_actions; ++j) {
    CHECK(std::binary_search(g.observe_sets[j].begin(),
                             g.observe_sets[j].end(), j));
    CHECK(g.reward_sets[j] == std::vector<int>{j});
  }
  // undirected adjacency: i in V_j <=> j in V_i
  for (int j = 0; j < g.num_actions; ++j)
    for (int i : g.observe_sets[j])
      CHECK(std::binary_search(g.observe_sets[i].begin(),
                               g.observe_sets[i].end(), j));
  CHECK_THROWS_AS(gen_powerlaw(10, 1.0, 1), ParamError);
  CHECK_THROWS_AS(gen_powerlaw(1, 2.5, 1), ParamError);
}

TEST_CASE("gen_powerlaw degree histogram slope") {
  const double exponent = 2.5;
  const auto g = gen_powerlaw(2000, exponent, 17);
  std::map<int, int> histogram;
  for (int j = 0; j < g.num_actions; ++j) {
    const int degree = static_cast<int>(g.observe_sets[j].size()) - 1;
    if (degree >= 1) ++histogram[degree];
  }
  // least squares on log-log over degrees with enough mass; sparse tail
  // cells carry a strong upward selection bias and are excluded
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int points = 0;
  for (const auto& [degree, count] : histogram) {
    if (count < 30) continue;
    const double x = std::log(degree);
    const double y = std::log(count);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += y * x;
    ++points;
  }
  REQUIRE(points >= 3);
  const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
  CHECK(std::abs(slope - (-exponent)) < 0.5);
}

TEST_CASE("routing graph from the six-node example") {
  const auto routing = gen_routing(routing_example_topology(), 0, 5, 1000);
  CHECK(routing.graph.num_actions == 13);
  CHECK(routing.graph.num_base_arms == 12);
  CHECK(validate(routing.graph).empty());
  for (const auto& path : routing.paths) {
    CHECK(path.front() == 0);
    CHECK(path.back() == 5);
    std::set<int> nodes(path.begin(), path.end());
    CHECK(nodes.size() == path.size());  // simple
  }
}

TEST_CASE("routing corner cases") {
  LinkGraph two;
  two.num_nodes = 2;
  two.edges = {{0, 1}};
  const auto r = gen_routing(two, 0, 1, 10);
  CHECK(r.graph.num_actions == 1);
  CHECK(r.graph.num_base_arms == 1);

  LinkGraph triangle;
  triangle.num_nodes = 3;
  triangle.edges = {{0, 1}, {1, 2}, {0, 2}};
  CHECK(gen_routing(triangle, 0, 2, 10).graph.num_actions == 2);

  LinkGraph disconnected;
  disconnected.num_nodes = 4;
  disconnected.edges = {{0, 1}, {2, 3}};
  CHECK_THROWS_AS(gen_routing(disconnected, 0, 3, 10), ValidationError);
  CHECK_THROWS_AS(gen_routing(triangle, 0, 2, 1), ParamError);  // cap
}

TEST_CASE("er stopping time") {
  CHECK_THROWS_AS(er_stopping_time(1, 0.0, 1), ParamError);
  CHECK_THROWS_AS(er_stopping_time(0, 0.5, 1), ParamError);
  CHECK(er_stopping_time(8, 0.5, 123) == er_stopping_time(8, 0.5, 123));
  CHECK(er_stopping_time(8, 0.5, 123) >= 1);

  // N=1: geometric with success probability p, mean 1/p
  const double p = 0.37;
  double sum = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r)
    sum += static_cast<double>(er_stopping_time(1, p, 10000 + r));
  CHECK(sum / reps == doctest::Approx(1.0 / p).epsilon(0.05));
}

TEST_CASE("er stopping graph matches the stopping time") {
  for (int seed = 0; seed < 20; ++seed) {
    const auto g = er_stopping_graph(16, 0.5, seed);
    CHECK(g.num_actions == er_stopping_time(16, 0.5, seed));
    CHECK(validate(g).empty());
  }
}

TEST_CASE("graph file round trip") {
  const auto g = gen_identity(3);
  std::istringstream in(save_graph(g));
  const auto reloaded = load_graph(in);
  CHECK(reloaded.num_actions == g.num_actions);
  CHECK(reloaded.observe_sets == g.observe_sets);
  CHECK(reloaded.reward_sets == g.reward_sets);
  CHECK(save_graph(reloaded) == save_graph(g));
}

TEST_CASE("random graphs round trip through the text format") {
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = random_graph(2 + trial % 6, 2 + trial % 5, 7000 + trial);
    std::istringstream in(save_graph(g));
    const auto reloaded = load_graph(in);
    CHECK(reloaded.observe_sets == g.observe_sets);
    CHECK(reloaded.reward_sets == g.reward_sets);
  }
}

TEST_CASE("malformed graph files raise parse errors with line numbers") {
  SUBCASE("bad header") {
    std::istringstream in("banana\n");
    CHECK_THROWS_AS(load_graph(in), ParseError);
  }
  SUBCASE("missing R section") {
    std::istringstream in("1 1\n1 | V: 1\n");
    CHECK_THROWS_AS(load_graph(in), ParseError);
  }
  SUBCASE("lines out of order") {
    std::istringstream in("2 2\n2 | V: 2 | R: 2\n1 | V: 1 | R: 1\n");
    try {
      load_graph(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("truncated file") {
    std::istringstream in("2 2\n1 | V: 1 | R: 1\n");
    CHECK_THROWS_AS(load_graph(in), ParseError);
  }
  SUBCASE("structurally invalid graph") {
    std::istringstream in("1 2\n1 | V: 1 | R: 1\n");  // arm 2 unused
    CHECK_THROWS_AS(load_graph(in), ValidationError);
  }
}

TEST_CASE("the routing fixture file loads to K=13, N=12") {
  const auto g =
      load_graph_file(netbandit::testing::fixture_path("routing_fig5.txt"));
  CHECK(g.num_actions == 13);
  CHECK(g.num_base_arms == 12);
  // identical to the generated graph
  const auto generated = gen_routing(routing_example_topology(), 0, 5, 1000);
  CHECK(g.observe_sets == generated.graph.observe_sets);
  CHECK(g.reward_sets == generated.graph.reward_sets);
}

TEST_CASE("graph stats stay within their bounds") {
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_graph(2 + trial % 6, 2 + (trial / 2) % 6,
                                61000 + trial);
    const auto st = graph_stats(g);
    CHECK(st.lambda >= 1);
    CHECK(st.lambda <= g.num_base_arms);
    CHECK(st.delta >= 1);
    CHECK(st.delta <= g.num_actions);
  }
  const auto st = graph_stats(gen_identity(4));
  CHECK(st.lambda == 1);
  CHECK(st.delta == 1);
}

TEST_CASE("generated graphs always validate") {
  for (int seed = 0; seed < 30; ++seed) {
    CHECK(validate(gen_erdos_renyi(6, 5, 0.5, seed)).empty());
    CHECK(validate(gen_powerlaw(30, 2.2, seed)).empty());
  }
}
