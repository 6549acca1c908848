#ifndef MLSGC_ASSIGNMENT_HPP
#define MLSGC_ASSIGNMENT_HPP

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"

namespace mlsgc {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with row/column potentials, O(n^3)). Returns col_of_row.
inline std::vector<int> solve_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw InvalidArgument("solve_assignment: cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internal indexing; index 0 is the virtual column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of_col(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = row_of_col[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
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
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j)
    if (row_of_col[j] != 0) col_of_row[row_of_col[j] - 1] = j - 1;
  return col_of_row;
}

/// Confusion counts: entry (a, b) counts nodes with predicted label a+1 and true label b+1.
inline Matrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& truth, int size) {
  Matrix C = Matrix::Zero(size, size);
  for (std::size_t u = 0; u < predicted.size(); ++u) C(predicted[u] - 1, truth[u] - 1) += 1.0;
  return C;
}

/// Fraction of nodes correctly labelled under the best relabelling of the
/// predicted clusters, found by optimal assignment on the confusion matrix.
inline double detectability(const std::vector<int>& predicted, const ClusterAssignment& truth) {
  if (predicted.size() != truth.num_nodes()) throw InvalidArgument("detectability: label vectors differ in length");
  int size = truth.num_clusters();
  for (int p : predicted) {
    if (p < 1) throw InvalidArgument("detectability: predicted cluster ids must be >= 1");
    size = std::max(size, p);
  }
  const Matrix C = confusion_matrix(predicted, truth.labels(), size);
  const std::vector<int> match = solve_assignment(-C);
  double correct = 0.0;
  for (int a = 0; a < size; ++a) correct += C(a, match[static_cast<std::size_t>(a)]);
  return correct / static_cast<double>(predicted.size());
}

}  // namespace mlsgc

#endif  // MLSGC_ASSIGNMENT_HPP
