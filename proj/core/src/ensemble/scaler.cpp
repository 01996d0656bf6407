#include "aispath/ensemble/scaler.hpp"

#include <cmath>
#include <string>

#include "aispath/domain/errors.hpp"

namespace aispath {

Scaler::Scaler(Eigen::VectorXd mean, Eigen::VectorXd std) : mean_(std::move(mean)), std_(std::move(std)) {
  if (mean_.size() != std_.size()) throw std::invalid_argument("scaler mean/std size mismatch");
  for (Eigen::Index j = 0; j < std_.size(); ++j) {
    if (!(std_[j] > 0.0) || !std::isfinite(std_[j]))
      throw std::invalid_argument("scaler std must be positive and finite");
  }
}

Scaler Scaler::fit(const RowMatrix& rows) {
  if (rows.rows() == 0) throw DataError("cannot standardize an empty set");
  const double n = static_cast<double>(rows.rows());
  Eigen::VectorXd mean = rows.colwise().sum().transpose() / n;
  Eigen::VectorXd sd(rows.cols());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const double var = (rows.col(j).array() - mean[j]).square().sum() / n;
    const double s = std::sqrt(var);
    // constant up to rounding counts as constant
    sd[j] = s > 1e-12 * std::max(1.0, std::abs(mean[j])) ? s : 1.0;
  }
  return Scaler(std::move(mean), std::move(sd));
}

StandardizedVector Scaler::apply(const FeatureVector& fv) const {
  if (fv.size() != dims())
    throw DataError("feature vector has " + std::to_string(fv.size()) + " entries, scaler expects " +
                    std::to_string(dims()));
  Eigen::VectorXd v(dims());
  for (std::size_t j = 0; j < dims(); ++j) {
    if (std::isnan(fv.values[j])) throw DataError("feature " + std::to_string(j) + " is NaN");
    v[static_cast<Eigen::Index>(j)] = (fv.values[j] - mean_[static_cast<Eigen::Index>(j)]) /
                                      std_[static_cast<Eigen::Index>(j)];
  }
  return StandardizedVector(std::move(v));
}

RowMatrix Scaler::apply(const RowMatrix& rows) const {
  if (static_cast<std::size_t>(rows.cols()) != dims()) throw DataError("column count mismatch");
  RowMatrix out = rows;
  out.rowwise() -= mean_.transpose();
  out.array().rowwise() /= std_.transpose().array();
  return out;
}

RowMatrix stack_features(std::span<const FeatureVector> rows) {
  if (rows.empty()) return RowMatrix(0, 0);
  const std::size_t d = rows.front().size();
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw DataError("ragged feature set at row " + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j) {
      const double v = rows[i].values[j];
      if (std::isnan(v))
        throw DataError("NaN feature at row " + std::to_string(i) + ", column " + std::to_string(j));
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return m;
}

Standardized standardize(const RowMatrix& rows) {
  Scaler s = Scaler::fit(rows);
  RowMatrix z = s.apply(rows);
  return {std::move(s), std::move(z)};
}

Standardized standardize(std::span<const FeatureVector> features) {
  if (features.empty()) throw DataError("cannot standardize an empty set");
  return standardize(stack_features(features));
}

}  // namespace aispath
