// SPDX-License-Identifier: Apache-2.0
#include "qfuca/assignment.hpp"

#include "qfuca/errors.hpp"

#include <limits>

namespace qfuca {

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& score) {
    const int n = static_cast<int>(score.rows());
    if (score.cols() != n) throw ParameterError("assignment needs a square score matrix");
    if (n == 0) return {};
    // minimise cost = max - score with row/column potentials (1-based arrays)
    const double top = score.maxCoeff();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = (top - score(i0 - 1, j - 1)) - u[i0] - v[j];
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
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col(n, -1);
    for (int j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
    return col;
}

}  // namespace qfuca
