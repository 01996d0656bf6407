#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "aispath/ensemble/matrix.hpp"

namespace aispath {

/// Solves (H^T H + ridge I) W = H^T Y.
Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& h, const Eigen::MatrixXd& y, double ridge);

/// Single-hidden-layer network with fixed random input weights and
/// least-squares output weights.
class ElmRegressor {
 public:
  ElmRegressor() = default;
  ElmRegressor(Eigen::MatrixXd input_weights, Eigen::VectorXd biases,
               Eigen::MatrixXd output_weights);

  /// Input weights and biases ~ U(-1, 1) from `seed`, sigmoid activations.
  static ElmRegressor train(const RowMatrix& x, const Eigen::MatrixXd& y, std::size_t hidden,
                            double ridge, std::uint64_t seed);

  Eigen::MatrixXd hidden_layer(const RowMatrix& x) const;  // n x h
  Eigen::MatrixXd predict_batch(const RowMatrix& x) const;  // n x outputs
  Eigen::Vector2d predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  const Eigen::MatrixXd& input_weights() const { return input_weights_; }  // h x d
  const Eigen::VectorXd& biases() const { return biases_; }
  const Eigen::MatrixXd& output_weights() const { return output_weights_; }  // h x 2
  std::size_t hidden() const { return static_cast<std::size_t>(biases_.size()); }
  std::size_t inputs() const { return static_cast<std::size_t>(input_weights_.cols()); }

 private:
  Eigen::MatrixXd input_weights_;
  Eigen::VectorXd biases_;
  Eigen::MatrixXd output_weights_;
};

}  // namespace aispath
