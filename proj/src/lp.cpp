#include "netbandit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netbandit/errors.hpp"

namespace netbandit {

namespace {

constexpr double kTol = 1e-9;

// Dense simplex tableau over columns [structural | surplus | artificial].
class Tableau {
 public:
  Tableau(const AllocationLP& lp)
      : m_(static_cast<int>(lp.rows.size())),
        n_(static_cast<int>(lp.objective.size())) {
    rows_.assign(m_, std::vector<double>(n_ + 2 * m_, 0.0));
    rhs_.assign(m_, 0.0);
    basis_.assign(m_, 0);
    for (int r = 0; r < m_; ++r) {
      if (static_cast<int>(lp.rows[r].size()) != n_)
        throw ParamError("solve_generic: ragged constraint matrix");
      if (lp.rhs[r] < 0.0)
        throw ParamError("solve_generic: right-hand sides must be >= 0");
      for (int j = 0; j < n_; ++j) rows_[r][j] = lp.rows[r][j];
      rows_[r][n_ + r] = -1.0;       // surplus
      rows_[r][n_ + m_ + r] = 1.0;   // artificial
      rhs_[r] = lp.rhs[r];
      basis_[r] = n_ + m_ + r;
    }
  }

  // Phase 1: drive artificials to zero. Returns false when infeasible.
  bool phase1() {
    std::vector<double> cost(n_ + 2 * m_, 0.0);
    for (int r = 0; r < m_; ++r) cost[n_ + m_ + r] = 1.0;
    load_objective(cost);
    pivot_until_optimal(n_ + 2 * m_);
    if (obj_value() > kTol) return false;
    evict_artificials();
    return true;
  }

  // Phase 2 over structural + surplus columns only. Returns false when
  // unbounded.
  bool phase2(const std::vector<double>& c) {
    std::vector<double> cost(n_ + 2 * m_, 0.0);
    for (int j = 0; j < n_; ++j) cost[j] = c[j];
    load_objective(cost);
    return pivot_until_optimal(n_ + m_);
  }

  std::vector<double> solution() const {
    std::vector<double> x(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = rhs_[r];
    return x;
  }

 private:
  void load_objective(const std::vector<double>& cost) {
    obj_ = cost;
    obj_rhs_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j < n_ + 2 * m_; ++j) obj_[j] -= cb * rows_[r][j];
      obj_rhs_ -= cb * rhs_[r];
    }
  }

  double obj_value() const { return -obj_rhs_; }

  // Entering column: steepest reduced cost while the objective is moving,
  // Bland's lowest-index rule after a degenerate stall (the anti-cycling
  // guarantee). Both choices break ties by lowest index, so pivoting stays
  // fully deterministic. Leaving row: min ratio, ties to the lowest basic
  // variable.
  bool pivot_until_optimal(int usable_cols) {
    constexpr int kStallLimit = 50;
    int stalled = 0;
    double last_obj = obj_value();
    for (;;) {
      int enter = -1;
      if (stalled < kStallLimit) {
        double best = -kTol;
        for (int j = 0; j < usable_cols; ++j) {
          if (obj_[j] < best) {
            best = obj_[j];
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < usable_cols; ++j) {
          if (obj_[j] < -kTol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return true;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r)
        if (rows_[r][enter] > kTol)
          min_ratio = std::min(min_ratio, rhs_[r] / rows_[r][enter]);
      if (min_ratio == std::numeric_limits<double>::infinity())
        return false;  // unbounded
      int leave = -1;
      for (int r = 0; r < m_; ++r) {
        if (rows_[r][enter] > kTol &&
            rhs_[r] / rows_[r][enter] <= min_ratio + kTol &&
            (leave < 0 || basis_[r] < basis_[leave]))
          leave = r;
      }
      pivot(leave, enter);
      const double now = obj_value();
      if (now < last_obj - kTol) {
        stalled = 0;
        last_obj = now;
      } else {
        ++stalled;
      }
    }
  }

  void pivot(int r, int c) {
    const double p = rows_[r][c];
    for (double& v : rows_[r]) v /= p;
    rhs_[r] /= p;
    rows_[r][c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = rows_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < n_ + 2 * m_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][c] = 0.0;
      rhs_[i] -= f * rhs_[r];
      if (rhs_[i] < 0.0 && rhs_[i] > -kTol) rhs_[i] = 0.0;
    }
    const double f = obj_[c];
    if (f != 0.0) {
      for (int j = 0; j < n_ + 2 * m_; ++j) obj_[j] -= f * rows_[r][j];
      obj_[c] = 0.0;
      obj_rhs_ -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  // Pivot degenerate artificials out of the basis so phase 2 never touches
  // them; rows with no real column left are redundant and get disabled by
  // zeroing them out.
  void evict_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_ + m_) continue;
      int col = -1;
      for (int j = 0; j < n_ + m_; ++j) {
        if (std::abs(rows_[r][j]) > kTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(r, col);
      } else {
        std::fill(rows_[r].begin(), rows_[r].end(), 0.0);
        rows_[r][basis_[r]] = 1.0;
        rhs_[r] = 0.0;
      }
    }
  }

  int m_;
  int n_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
  std::vector<double> obj_;
  double obj_rhs_ = 0.0;
};

// Simplex over the dual packing form: with c >= 0 the system
// A^T y + s = c starts feasible at y = 0, so no artificials are needed and
// the covering programs that dominate this codebase solve in a few hundred
// pivots instead of crawling through a degenerate phase 1. The optimal
// primal vertex is the vector of reduced costs on the slack columns.
class DualTableau {
 public:
  explicit DualTableau(const AllocationLP& lp)
      : m_(static_cast<int>(lp.objective.size())),   // dual rows
        n_(static_cast<int>(lp.rows.size())) {       // dual variables y
    rows_.assign(m_, std::vector<double>(n_ + m_, 0.0));
    rhs_.assign(m_, 0.0);
    basis_.assign(m_, 0);
    obj_.assign(n_ + m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) rows_[r][j] = lp.rows[j][r];
      rows_[r][n_ + r] = 1.0;
      rhs_[r] = lp.objective[r];
      basis_[r] = n_ + r;
    }
    for (int j = 0; j < n_; ++j) obj_[j] = -lp.rhs[j];
  }

  // returns false when the dual is unbounded, i.e. the primal infeasible
  bool solve() {
    constexpr int kStallLimit = 50;
    int stalled = 0;
    double last_obj = obj_rhs_;
    for (;;) {
      int enter = -1;
      if (stalled < kStallLimit) {
        double best = -kTol;
        for (int j = 0; j < n_ + m_; ++j) {
          if (obj_[j] < best) {
            best = obj_[j];
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < n_ + m_; ++j) {
          if (obj_[j] < -kTol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return true;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r)
        if (rows_[r][enter] > kTol)
          min_ratio = std::min(min_ratio, rhs_[r] / rows_[r][enter]);
      if (min_ratio == std::numeric_limits<double>::infinity()) return false;
      int leave = -1;
      for (int r = 0; r < m_; ++r) {
        if (rows_[r][enter] > kTol &&
            rhs_[r] / rows_[r][enter] <= min_ratio + kTol &&
            (leave < 0 || basis_[r] < basis_[leave]))
          leave = r;
      }
      pivot(leave, enter);
      if (obj_rhs_ > last_obj + kTol) {
        stalled = 0;
        last_obj = obj_rhs_;
      } else {
        ++stalled;
      }
    }
  }

  // primal solution: reduced costs over the slack block
  std::vector<double> primal() const {
    std::vector<double> x(m_);
    for (int r = 0; r < m_; ++r) x[r] = std::max(0.0, obj_[n_ + r]);
    return x;
  }

 private:
  void pivot(int r, int c) {
    const double p = rows_[r][c];
    for (double& v : rows_[r]) v /= p;
    rhs_[r] /= p;
    rows_[r][c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = rows_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < n_ + m_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][c] = 0.0;
      rhs_[i] -= f * rhs_[r];
      if (rhs_[i] < 0.0 && rhs_[i] > -kTol) rhs_[i] = 0.0;
    }
    const double f = obj_[c];
    if (f != 0.0) {
      for (int j = 0; j < n_ + m_; ++j) obj_[j] -= f * rows_[r][j];
      obj_[c] = 0.0;
      obj_rhs_ -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  int m_;
  int n_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
  std::vector<double> obj_;
  double obj_rhs_ = 0.0;
};

}  // namespace

AllocationSolution solve_generic(const AllocationLP& lp) {
  if (lp.rows.size() != lp.rhs.size())
    throw ParamError("solve_generic: rows/rhs size mismatch");
  AllocationSolution out;
  if (lp.rows.empty()) {
    // nothing constrains x; the minimum of a non-negative objective is 0
    out.x.assign(lp.objective.size(), 0.0);
    out.objective_value = 0.0;
    for (double c : lp.objective)
      if (c < 0.0) out.status = SolveStatus::kUnbounded;
    return out;
  }

  const bool nonnegative_cost = std::all_of(
      lp.objective.begin(), lp.objective.end(), [](double c) { return c >= 0.0; });
  if (nonnegative_cost) {
    DualTableau dual(lp);
    if (!dual.solve()) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    out.x = dual.primal();
  } else {
    Tableau tab(lp);
    if (!tab.phase1()) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    if (!tab.phase2(lp.objective)) {
      out.status = SolveStatus::kUnbounded;
      return out;
    }
    out.x = tab.solution();
  }
  out.objective_value = 0.0;
  for (std::size_t j = 0; j < out.x.size(); ++j)
    out.objective_value += lp.objective[j] * out.x[j];
  return out;
}

AllocationLP presolve_rows(const AllocationLP& lp) {
  const int m = static_cast<int>(lp.rows.size());
  std::vector<bool> keep(m, true);
  auto implied_by = [&](int r, int s) {
    // row r follows from row s for x >= 0
    if (lp.rhs[r] > lp.rhs[s]) return false;
    for (std::size_t j = 0; j < lp.rows[r].size(); ++j)
      if (lp.rows[r][j] < lp.rows[s][j]) return false;
    return true;
  };
  for (int r = 0; r < m; ++r) {
    if (!keep[r]) continue;
    for (int s = 0; s < m; ++s) {
      if (s == r || !keep[s]) continue;
      if (implied_by(r, s) && !(implied_by(s, r) && s > r)) {
        keep[r] = false;
        break;
      }
    }
  }
  AllocationLP out;
  out.objective = lp.objective;
  for (int r = 0; r < m; ++r) {
    if (keep[r]) {
      out.rows.push_back(lp.rows[r]);
      out.rhs.push_back(lp.rhs[r]);
    }
  }
  return out;
}

AllocationLP build_p2(const BipartiteGraph& graph) {
  AllocationLP lp;
  lp.objective.assign(graph.num_actions, 1.0);
  const auto s = supports(graph);
  for (int i = 0; i < graph.num_base_arms; ++i) {
    std::vector<double> row(graph.num_actions, 0.0);
    for (int j : s[i]) row[j] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(1.0);
  }
  return lp;
}

namespace {

void check_obs_prob(const std::vector<double>& obs_prob, int k) {
  if (static_cast<int>(obs_prob.size()) != k)
    throw ParamError("obs_prob must have one entry per action");
  for (double p : obs_prob)
    if (!(p > 0.0 && p <= 1.0))
      throw ParamError("obs_prob entries must lie in (0,1]");
}

double sporadic_coef(const BipartiteGraph& graph,
                     const std::vector<double>& obs_prob, int i, int j) {
  const auto& kj = graph.reward_sets[j];
  const bool in_reward = std::binary_search(kj.begin(), kj.end(), i);
  return in_reward ? 1.0 : obs_prob[j];
}

}  // namespace

AllocationLP build_p2_prime(const BipartiteGraph& graph,
                            const std::vector<double>& obs_prob) {
  check_obs_prob(obs_prob, graph.num_actions);
  AllocationLP lp;
  lp.objective.assign(graph.num_actions, 1.0);
  const auto s = supports(graph);
  for (int i = 0; i < graph.num_base_arms; ++i) {
    std::vector<double> row(graph.num_actions, 0.0);
    for (int j : s[i]) row[j] = sporadic_coef(graph, obs_prob, i, j);
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(1.0);
  }
  return lp;
}

namespace {

AllocationLP build_p1_impl(const BipartiteGraph& graph,
                           const std::vector<double>& delta,
                           const std::vector<std::optional<double>>& j_const,
                           const std::vector<double>* obs_prob,
                           const std::vector<int>& suboptimal) {
  if (static_cast<int>(delta.size()) != graph.num_actions)
    throw ParamError("build_p1: delta must have one entry per action");
  if (static_cast<int>(j_const.size()) != graph.num_base_arms)
    throw ParamError("build_p1: j_const must have one entry per base-arm");
  AllocationLP lp;
  lp.objective.assign(graph.num_actions, 0.0);
  for (int j : suboptimal) {
    if (!(delta[j] > 0.0))
      throw ParamError("build_p1: Delta_j must be > 0 on the suboptimal set");
    lp.objective[j] = delta[j];
  }
  const auto s = supports(graph);
  for (int i = 0; i < graph.num_base_arms; ++i) {
    if (!j_const[i].has_value()) continue;
    const double ji = *j_const[i];
    if (!(ji > 0.0))
      throw ParamError("build_p1: J_i must be > 0 for constrained base-arms");
    std::vector<double> row(graph.num_actions, 0.0);
    for (int j : s[i])
      row[j] = obs_prob ? sporadic_coef(graph, *obs_prob, i, j) : 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(1.0 / ji);
  }
  return lp;
}

}  // namespace

AllocationLP build_p1(const BipartiteGraph& graph,
                      const std::vector<double>& delta,
                      const std::vector<std::optional<double>>& j_const,
                      const std::vector<int>& suboptimal) {
  return build_p1_impl(graph, delta, j_const, nullptr, suboptimal);
}

AllocationLP build_p1_prime(const BipartiteGraph& graph,
                            const std::vector<double>& delta,
                            const std::vector<std::optional<double>>& j_const,
                            const std::vector<double>& obs_prob,
                            const std::vector<int>& suboptimal) {
  check_obs_prob(obs_prob, graph.num_actions);
  return build_p1_impl(graph, delta, j_const, &obs_prob, suboptimal);
}

}  // namespace netbandit
