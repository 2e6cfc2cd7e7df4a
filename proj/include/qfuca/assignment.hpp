// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <vector>

namespace qfuca {

// Square maximum-weight assignment (Hungarian method, O(n^3)).
// Returns col[i], the column assigned to row i.
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& score);

}  // namespace qfuca
