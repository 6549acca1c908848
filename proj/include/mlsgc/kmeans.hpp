#ifndef MLSGC_KMEANS_HPP
#define MLSGC_KMEANS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlsgc/errors.hpp"
#include "mlsgc/graph.hpp"
#include "mlsgc/random.hpp"

namespace mlsgc {

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double shift_tolerance = 1e-8;  // stop once every centroid moves less than this
};

struct KMeansResult {
  std::vector<int> labels;  // 1-based
  Matrix centroids;         // K x d
  double inertia = 0.0;
  int iterations = 0;       // Lloyd iterations of the selected restart
  int restarts_used = 0;
  int empty_cluster_repairs = 0;
  std::vector<double> inertia_history;  // per iteration, selected restart
};

namespace detail {

/// Careful seeding: first centre uniform, the rest drawn with probability
/// proportional to squared distance to the nearest chosen centre.
inline Matrix careful_seeding(const Matrix& X, int K, Rng& rng) {
  const Eigen::Index n = X.rows();
  Matrix centres(K, X.cols());
  Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());
  auto pick = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
  for (int c = 0; c < K; ++c) {
    centres.row(c) = X.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      nearest(i) = std::min(nearest(i), (X.row(i) - centres.row(c)).squaredNorm());
    if (c + 1 == K) break;
    const double total = nearest.sum();
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
      continue;
    }
    double target = uniform01(rng) * total;
    pick = n - 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      target -= nearest(i);
      if (target < 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centres;
}

struct LloydRun {
  std::vector<int> assign;  // 0-based
  Matrix centroids;
  double inertia = 0.0;
  int iterations = 0;
  int repairs = 0;
  std::vector<double> history;
};

inline double assign_points(const Matrix& X, const Matrix& centroids, std::vector<int>& assign, Vector& dist) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (X.row(i) - centroids.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    assign[static_cast<std::size_t>(i)] = best;
    dist(i) = best_d;
    inertia += best_d;
  }
  return inertia;
}

/// Moves the point farthest from its centroid into each empty cluster.
/// A farthest distance of zero means no move can lower inertia; the cluster stays empty.
inline int repair_empty(const Matrix& X, std::vector<int>& assign, Vector& dist, std::vector<Eigen::Index>& counts,
                        Matrix& centroids) {
  int repairs = 0;
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    if (counts[static_cast<std::size_t>(c)] != 0) continue;
    ++repairs;
    Eigen::Index far = -1;
    double far_d = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])] > 1 && dist(i) > far_d) {
        far_d = dist(i);
        far = i;
      }
    }
    if (far < 0) continue;
    --counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(far)])];
    assign[static_cast<std::size_t>(far)] = static_cast<int>(c);
    ++counts[static_cast<std::size_t>(c)];
    dist(far) = 0.0;
    centroids.row(c) = X.row(far);
  }
  return repairs;
}

inline LloydRun lloyd(const Matrix& X, int K, Rng& rng, const KMeansOptions& opt) {
  const Eigen::Index n = X.rows();
  LloydRun run;
  run.centroids = careful_seeding(X, K, rng);
  run.assign.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(K));

  for (run.iterations = 1; run.iterations <= opt.max_iterations; ++run.iterations) {
    assign_points(X, run.centroids, run.assign, dist);
    std::fill(counts.begin(), counts.end(), 0);
    for (int a : run.assign) ++counts[static_cast<std::size_t>(a)];
    run.repairs += repair_empty(X, run.assign, dist, counts, run.centroids);

    Matrix updated = Matrix::Zero(K, X.cols());
    for (Eigen::Index i = 0; i < n; ++i) updated.row(run.assign[static_cast<std::size_t>(i)]) += X.row(i);
    for (int c = 0; c < K; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0)
        updated.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      else
        updated.row(c) = run.centroids.row(c);
    }
    double shift = 0.0;
    for (int c = 0; c < K; ++c) shift = std::max(shift, (updated.row(c) - run.centroids.row(c)).norm());
    run.centroids = std::move(updated);

    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      inertia += (X.row(i) - run.centroids.row(run.assign[static_cast<std::size_t>(i)])).squaredNorm();
    run.history.push_back(inertia);
    run.inertia = inertia;
    if (shift < opt.shift_tolerance) break;
  }
  run.iterations = std::min(run.iterations, opt.max_iterations);
  return run;
}

}  // namespace detail

/// Lloyd's algorithm with careful seeding and restarts. Restart r draws from
/// its own stream derive_seed(seed, {r}); the lowest inertia wins, ties going
/// to the earlier restart.
inline KMeansResult kmeans(const Matrix& points, int K, std::uint64_t seed, const KMeansOptions& opt = {}) {
  if (K < 2) throw InvalidArgument("kmeans: K must be >= 2");
  if (points.rows() < K)
    throw InvalidArgument("kmeans: " + std::to_string(points.rows()) + " points for K=" + std::to_string(K));
  if (opt.restarts < 1 || opt.max_iterations < 1) throw InvalidArgument("kmeans: restarts and iterations must be >= 1");

  detail::LloydRun best;
  int repairs = 0;
  for (int r = 0; r < opt.restarts; ++r) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    detail::LloydRun run = detail::lloyd(points, K, rng, opt);
    repairs += run.repairs;
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }

  KMeansResult out;
  out.labels.reserve(best.assign.size());
  for (int a : best.assign) out.labels.push_back(a + 1);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  out.iterations = best.iterations;
  out.restarts_used = opt.restarts;
  out.empty_cluster_repairs = repairs;
  out.inertia_history = std::move(best.history);
  return out;
}

}  // namespace mlsgc

#endif  // MLSGC_KMEANS_HPP
