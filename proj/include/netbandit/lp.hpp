#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netbandit/graph.hpp"

namespace netbandit {

// Linear program  min c.x  subject to  A x >= b,  x >= 0,
// stored dense. Right-hand sides must be non-negative (the allocation
// programs built below always have b > 0).
struct AllocationLP {
  std::vector<double> objective;          // c_j, one per action/variable
  std::vector<std::vector<double>> rows;  // a_i, one per constrained base-arm
  std::vector<double> rhs;                // b_i
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

struct AllocationSolution {
  SolveStatus status = SolveStatus::kOptimal;
  std::vector<double> x;         // basic feasible (vertex) solution
  double objective_value = 0.0;  // c.x
};

// Two-phase dense simplex with Bland's rule: deterministic pivoting,
// identical inputs give bit-identical solutions. Pivot/feasibility
// tolerance is 1e-9.
AllocationSolution solve_generic(const AllocationLP& lp);

// Drops duplicate and dominated rows (row r is implied by row s when
// a_r >= a_s componentwise and b_r <= b_s). The feasible region, and so
// the optimum, is unchanged; useful before solving programs with many
// redundant covering rows.
AllocationLP presolve_rows(const AllocationLP& lp);

// LP relaxation of minimum hitting set: min sum z_j subject to
// sum_{j in S_i} z_j >= 1 for every base-arm i.
AllocationLP build_p2(const BipartiteGraph& graph);

// Sporadic-observation variant: the coefficient of z_j in row i is 1 when
// i is in K_j and p_j otherwise. obs_prob must have one entry per action,
// each in (0,1].
AllocationLP build_p2_prime(const BipartiteGraph& graph,
                            const std::vector<double>& obs_prob);

// Distribution-dependent lower-bound program: min sum_{j in U} Delta_j w_j
// subject to sum_{j in S_i} w_j >= 1/J_i over base-arms with a finite
// constraint. j_const[i] == nullopt excludes row i (the caller's finite-J
// filter); supplied values must be > 0. Variables exist for all K actions;
// optimal actions carry zero objective cost.
AllocationLP build_p1(const BipartiteGraph& graph,
                      const std::vector<double>& delta,
                      const std::vector<std::optional<double>>& j_const,
                      const std::vector<int>& suboptimal);

// P1 with the sporadic coefficients of P2'.
AllocationLP build_p1_prime(const BipartiteGraph& graph,
                            const std::vector<double>& delta,
                            const std::vector<std::optional<double>>& j_const,
                            const std::vector<double>& obs_prob,
                            const std::vector<int>& suboptimal);

}  // namespace netbandit
