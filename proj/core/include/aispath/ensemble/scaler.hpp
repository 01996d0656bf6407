#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "aispath/ensemble/matrix.hpp"
#include "aispath/featurize/features.hpp"

namespace aispath {

class Scaler;

/// A feature vector that went through Scaler::apply. Only the scaler can
/// construct one, so a raw vector can't reach kNN or the models unscaled and
/// a scaled one can't be scaled again.
class StandardizedVector {
 public:
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

 private:
  friend class Scaler;
  explicit StandardizedVector(Eigen::VectorXd v) : values_(std::move(v)) {}
  Eigen::VectorXd values_;
};

class Scaler {
 public:
  Scaler() = default;
  Scaler(Eigen::VectorXd mean, Eigen::VectorXd std);

  /// Population mean/std per column; constant columns get std 1.
  static Scaler fit(const RowMatrix& rows);

  StandardizedVector apply(const FeatureVector& fv) const;
  RowMatrix apply(const RowMatrix& rows) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& std() const { return std_; }
  std::size_t dims() const { return static_cast<std::size_t>(mean_.size()); }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd std_;
};

/// Stacks feature vectors into a row matrix; rejects ragged or NaN input.
RowMatrix stack_features(std::span<const FeatureVector> rows);

struct Standardized {
  Scaler scaler;
  RowMatrix rows;
};

Standardized standardize(std::span<const FeatureVector> features);
Standardized standardize(const RowMatrix& rows);

}  // namespace aispath
