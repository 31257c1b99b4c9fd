// SPDX-License-Identifier: Apache-2.0
#include "satrrm/simplex.hpp"

#include <cmath>
#include <limits>

#include "satrrm/errors.hpp"

namespace satrrm {

namespace {

// Dense tableau with an extra cost row; minimizes internally. Bland's rule
// picks the lowest-index improving column and breaks ratio-test ties by the
// lowest basic variable index, which rules out cycling.
struct Tableau {
  int m = 0;       // constraint rows
  int ncols = 0;   // structural + slack + artificial columns
  std::vector<std::vector<double>> t;  // m+1 rows, ncols+1 cols (rhs last)
  std::vector<int> basis;              // basic variable per row
  double tol = 1e-9;

  double& rhs(int i) { return t[i][ncols]; }

  void pivot(int row, int col) {
    double inv = 1.0 / t[row][col];
    for (int j = 0; j <= ncols; ++j) t[row][j] *= inv;
    t[row][col] = 1.0;
    for (int i = 0; i <= m; ++i) {
      if (i == row) continue;
      double f = t[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;
    }
    basis[row] = col;
  }

  // Returns false when the problem is unbounded in the current phase.
  bool run(const std::vector<char>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (allowed[j] && t[m][j] < -tol) {
          enter = j;
          break;  // Bland: lowest index
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] > tol) {
          double ratio = rhs(i) / t[i][enter];
          if (ratio < best_ratio - tol ||
              (ratio < best_ratio + tol && (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult lp_maximize(const std::vector<double>& objective,
                     const std::vector<LinearConstraint>& constraints,
                     double tol) {
  const int n = static_cast<int>(objective.size());
  const int m = static_cast<int>(constraints.size());
  for (const auto& c : constraints)
    if (static_cast<int>(c.coeffs.size()) != n)
      throw ValidationError("lp", "constraint length differs from objective length");

  int num_slack = 0, num_art = 0;
  for (const auto& c : constraints) {
    // Sign-normalization can flip the relation, so count after normalizing.
    Relation rel = c.rel;
    if (c.rhs < 0.0) {
      if (rel == Relation::LessEq) rel = Relation::GreaterEq;
      else if (rel == Relation::GreaterEq) rel = Relation::LessEq;
    }
    if (rel != Relation::Equal) ++num_slack;
    if (rel != Relation::LessEq) ++num_art;
  }

  Tableau tab;
  tab.m = m;
  tab.ncols = n + num_slack + num_art;
  tab.tol = tol;
  tab.t.assign(m + 1, std::vector<double>(tab.ncols + 1, 0.0));
  tab.basis.assign(m, -1);

  int slack_at = n;
  int art_at = n + num_slack;
  std::vector<char> is_art(tab.ncols, 0);

  for (int i = 0; i < m; ++i) {
    double sign = constraints[i].rhs < 0.0 ? -1.0 : 1.0;
    Relation rel = constraints[i].rel;
    if (sign < 0.0) {
      if (rel == Relation::LessEq) rel = Relation::GreaterEq;
      else if (rel == Relation::GreaterEq) rel = Relation::LessEq;
    }
    for (int j = 0; j < n; ++j) tab.t[i][j] = sign * constraints[i].coeffs[j];
    tab.rhs(i) = sign * constraints[i].rhs;
    if (rel == Relation::LessEq) {
      tab.t[i][slack_at] = 1.0;
      tab.basis[i] = slack_at++;
    } else if (rel == Relation::GreaterEq) {
      tab.t[i][slack_at++] = -1.0;
      tab.t[i][art_at] = 1.0;
      is_art[art_at] = 1;
      tab.basis[i] = art_at++;
    } else {
      tab.t[i][art_at] = 1.0;
      is_art[art_at] = 1;
      tab.basis[i] = art_at++;
    }
  }

  std::vector<char> allowed(tab.ncols, 1);

  // Phase 1: minimize the sum of artificials.
  if (num_art > 0) {
    for (int j = 0; j < tab.ncols; ++j) tab.t[m][j] = is_art[j] ? 1.0 : 0.0;
    tab.t[m][tab.ncols] = 0.0;
    for (int i = 0; i < m; ++i) {
      if (is_art[tab.basis[i]]) {
        for (int j = 0; j <= tab.ncols; ++j) tab.t[m][j] -= tab.t[i][j];
      }
    }
    if (!tab.run(allowed))
      return {LpStatus::Infeasible, {}, 0.0};  // phase-1 objective is bounded below by 0
    double art_sum = -tab.t[m][tab.ncols];
    if (art_sum > 1e3 * tol) return {LpStatus::Infeasible, {}, 0.0};

    // Drive leftover artificials out of the basis (or drop redundant rows).
    for (int i = 0; i < m; ++i) {
      if (!is_art[tab.basis[i]]) continue;
      int col = -1;
      for (int j = 0; j < tab.ncols; ++j) {
        if (!is_art[j] && std::fabs(tab.t[i][j]) > tol) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(i, col);
    }
    for (int j = 0; j < tab.ncols; ++j)
      if (is_art[j]) allowed[j] = 0;
  }

  // Phase 2: minimize -objective.
  for (int j = 0; j <= tab.ncols; ++j) tab.t[m][j] = 0.0;
  for (int j = 0; j < n; ++j) tab.t[m][j] = -objective[j];
  for (int i = 0; i < m; ++i) {
    int b = tab.basis[i];
    double cb = (b < n) ? -objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= tab.ncols; ++j) tab.t[m][j] -= cb * tab.t[i][j];
  }
  if (!tab.run(allowed)) return {LpStatus::Unbounded, {}, 0.0};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) res.x[tab.basis[i]] = std::max(0.0, tab.rhs(i));
    // A basic artificial can only remain on a redundant row with value ~0.
  }
  res.objective = 0.0;
  for (int j = 0; j < n; ++j) res.objective += objective[j] * res.x[j];
  return res;
}

}  // namespace satrrm
