#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aispath/ensemble/matrix.hpp"

namespace aispath {

struct KMeansResult {
  std::vector<int> labels;
  RowMatrix centroids;  // k x d
  std::size_t iterations = 0;
  std::size_t reseeded = 0;  // empty-cluster repairs
};

/// Lloyd's k-means. Seeding: one seeded random sample, then greedy
/// farthest-point picks. Ties in every argmin/argmax go to the lowest index,
/// so the result depends only on (rows, k, seed).
KMeansResult cluster_samples(const RowMatrix& rows, std::size_t k, std::uint64_t seed,
                             std::size_t max_iterations = 100);

/// Index of the nearest centroid (squared Euclidean, lowest index on ties).
std::size_t nearest_centroid(const RowMatrix& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& x);

}  // namespace aispath
