// SPDX-License-Identifier: Apache-2.0
#include "satrrm/assignment.hpp"

#include <limits>

#include "satrrm/errors.hpp"

namespace satrrm {

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& utility) {
  const int rows = static_cast<int>(utility.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(utility[0].size());
  for (const auto& r : utility)
    if (static_cast<int>(r.size()) != cols)
      throw ValidationError("utility", "ragged utility matrix");
  if (cols == 0) return std::vector<int>(rows, -1);

  // Pad to an n x n min-cost matrix, n = rows + cols, where dummy entries
  // cost 0. A real pair enters the matching only when it beats skipping.
  const int n = rows + cols;
  auto cost = [&](int i, int j) -> double {
    if (i < rows && j < cols) return -utility[i][j];
    return 0.0;
  };

  const double inf = std::numeric_limits<double>::infinity();
  // Potentials-based Hungarian (1-indexed internals, classic formulation).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[j] = row matched to column j
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = match[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> result(rows, -1);
  for (int j = 1; j <= n; ++j) {
    int i = match[j];
    if (i >= 1 && i <= rows && j <= cols) result[i - 1] = j - 1;
  }
  return result;
}

}  // namespace satrrm
