// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace satrrm {

/// Maximum-weight rectangular assignment with skips allowed: each row is
/// matched to at most one column and vice versa, and leaving a pair
/// unmatched contributes zero weight. Returns, per row, the matched column
/// or -1. Ties resolve toward lower indices, so results are deterministic.
///
/// Hungarian algorithm with potentials on a (rows+cols) square padding,
/// O(n^3); plenty for the carrier-by-beam matrices this project builds.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& utility);

}  // namespace satrrm
