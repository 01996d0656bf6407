#include "aispath/ensemble/kmeans.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "aispath/util/random.hpp"

namespace aispath {

std::size_t nearest_centroid(const RowMatrix& centroids,
                             const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::size_t>(c);
    }
  }
  return best;
}

KMeansResult cluster_samples(const RowMatrix& rows, std::size_t k, std::uint64_t seed,
                             std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (k > n)
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds sample count " +
                                std::to_string(n));
  const Eigen::Index d = rows.cols();

  KMeansResult out;
  out.centroids.resize(static_cast<Eigen::Index>(k), d);

  // farthest-point seeding
  Rng rng(seed);
  std::size_t first = rng.index(n);
  out.centroids.row(0) = rows.row(static_cast<Eigen::Index>(first));
  std::vector<double> min_d(n);
  for (std::size_t i = 0; i < n; ++i)
    min_d[i] = (rows.row(static_cast<Eigen::Index>(i)) - out.centroids.row(0)).squaredNorm();
  for (std::size_t c = 1; c < k; ++c) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (min_d[i] > min_d[pick]) pick = i;
    out.centroids.row(static_cast<Eigen::Index>(c)) = rows.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i) {
      const double dd =
          (rows.row(static_cast<Eigen::Index>(i)) - out.centroids.row(static_cast<Eigen::Index>(c)))
              .squaredNorm();
      if (dd < min_d[i]) min_d[i] = dd;
    }
  }

  out.labels.assign(n, -1);
  std::vector<double> dist(n, 0.0);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = rows.row(static_cast<Eigen::Index>(i));
      const auto c = static_cast<int>(nearest_centroid(out.centroids, row));
      dist[i] = (out.centroids.row(c) - row).squaredNorm();
      if (c != out.labels[i]) {
        out.labels[i] = c;
        changed = true;
      }
    }
    out.iterations = it + 1;

    std::vector<std::size_t> count(k, 0);
    RowMatrix sums = RowMatrix::Zero(static_cast<Eigen::Index>(k), d);
    for (std::size_t i = 0; i < n; ++i) {
      ++count[static_cast<std::size_t>(out.labels[i])];
      sums.row(out.labels[i]) += rows.row(static_cast<Eigen::Index>(i));
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) {
        out.centroids.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) /
                                                           static_cast<double>(count[c]);
        continue;
      }
      // empty: take the sample farthest from its centroid, from a cluster
      // that can spare it
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (count[static_cast<std::size_t>(out.labels[i])] < 2) continue;
        if (pick == n || dist[i] > dist[pick]) pick = i;
      }
      if (pick == n) continue;
      --count[static_cast<std::size_t>(out.labels[pick])];
      out.labels[pick] = static_cast<int>(c);
      count[c] = 1;
      dist[pick] = 0.0;
      out.centroids.row(static_cast<Eigen::Index>(c)) = rows.row(static_cast<Eigen::Index>(pick));
      ++out.reseeded;
      changed = true;
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace aispath
