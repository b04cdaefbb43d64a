#pragma once

// Test-only LP oracles, deliberately independent of the production simplex:
// the optimum of  min c.x, A x >= b, x >= 0  with c > 0 is attained at a
// vertex, so enumerating all n-subsets of the m + n constraint hyperplanes
// and keeping the feasible intersection points finds it by exhaustion.
// Instantiated with double (tolerance compare) and with boost's arbitrary
// precision rationals (exact compare).

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace netbandit::testing {

using Rational = boost::multiprecision::cpp_rational;

template <typename Field>
struct OracleLp {
  std::vector<Field> objective;
  std::vector<std::vector<Field>> rows;
  std::vector<Field> rhs;
};

inline double abs_value(double v) { return v < 0 ? -v : v; }
inline Rational abs_value(const Rational& v) { return v < 0 ? -v : v; }

// Gaussian elimination with partial (magnitude) pivoting for doubles and
// nonzero pivoting for rationals. Returns nullopt for singular systems.
template <typename Field>
std::optional<std::vector<Field>> solve_square(
    std::vector<std::vector<Field>> a, std::vector<Field> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (a[r][col] != Field(0) &&
          (pivot < 0 || abs_value(a[r][col]) > abs_value(a[pivot][col])))
        pivot = r;
    }
    if (pivot < 0) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == Field(0)) continue;
      const Field f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Field> x(n);
  for (int i = 0; i < n; ++i) {
    if (a[i][i] == Field(0)) return std::nullopt;
    x[i] = b[i] / a[i][i];
  }
  return x;
}

// Best rational approximation of v with denominator at most max_den,
// by continued-fraction convergents. A double within ~1e-13 of a rational
// with denominator q <= max_den << 1e6 recovers that rational exactly.
inline Rational best_rational(double v, long long max_den) {
  using Int = boost::multiprecision::cpp_int;
  const bool negative = v < 0;
  if (negative) v = -v;
  double x = v;
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double floor_x = std::floor(x);
    const Int a = static_cast<long long>(floor_x);
    Int p2 = a * p1 + p0;
    Int q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - floor_x;
    if (frac < 1e-14) break;
    x = 1.0 / frac;
  }
  Rational out(p1, q1 == 0 ? Int(1) : q1);
  return negative ? -out : out;
}

// Minimum objective over all feasible vertices; nullopt when infeasible.
template <typename Field>
std::optional<Field> vertex_enumeration_optimum(const OracleLp<Field>& lp,
                                                const Field& feas_tol) {
  const int n = static_cast<int>(lp.objective.size());
  const int m = static_cast<int>(lp.rows.size());
  // constraint list: m inequality rows then n nonnegativity rows
  auto row_of = [&](int idx) {
    std::vector<Field> row(n, Field(0));
    if (idx < m) {
      row = lp.rows[idx];
    } else {
      row[idx - m] = Field(1);
    }
    return row;
  };
  auto rhs_of = [&](int idx) { return idx < m ? lp.rhs[idx] : Field(0); };

  std::optional<Field> best;
  std::vector<int> pick(n);
  // iterate all n-combinations of the m+n constraints
  for (int i = 0; i < n; ++i) pick[i] = i;
  const int total = m + n;
  if (n > total) return std::nullopt;
  for (;;) {
    std::vector<std::vector<Field>> a;
    std::vector<Field> b;
    for (int idx : pick) {
      a.push_back(row_of(idx));
      b.push_back(rhs_of(idx));
    }
    if (auto x = solve_square<Field>(a, b)) {
      bool feasible = true;
      for (int j = 0; j < n && feasible; ++j)
        if ((*x)[j] < -feas_tol) feasible = false;
      for (int r = 0; r < m && feasible; ++r) {
        Field lhs(0);
        for (int j = 0; j < n; ++j) lhs += lp.rows[r][j] * (*x)[j];
        if (lhs < lp.rhs[r] - feas_tol) feasible = false;
      }
      if (feasible) {
        Field value(0);
        for (int j = 0; j < n; ++j) value += lp.objective[j] * (*x)[j];
        if (!best || value < *best) best = value;
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && pick[i] == total - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace netbandit::testing
