#include "aispath/ensemble/elm.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>

#include "aispath/util/random.hpp"

namespace aispath {

Eigen::MatrixXd ridge_solve(const Eigen::MatrixXd& h, const Eigen::MatrixXd& y, double ridge) {
  if (!(ridge > 0.0)) throw std::invalid_argument("ridge must be positive");
  if (h.rows() != y.rows()) throw std::invalid_argument("H and Y row counts differ");
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(h.cols(), h.cols()) * ridge;
  a.selfadjointView<Eigen::Lower>().rankUpdate(h.transpose());
  const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(a);
  if (llt.info() != Eigen::Success) throw std::runtime_error("ridge system not positive definite");
  return llt.solve(h.transpose() * y);
}

ElmRegressor::ElmRegressor(Eigen::MatrixXd input_weights, Eigen::VectorXd biases,
                           Eigen::MatrixXd output_weights)
    : input_weights_(std::move(input_weights)),
      biases_(std::move(biases)),
      output_weights_(std::move(output_weights)) {
  if (input_weights_.rows() != biases_.size() || output_weights_.rows() != biases_.size())
    throw std::invalid_argument("inconsistent ELM dimensions");
}

ElmRegressor ElmRegressor::train(const RowMatrix& x, const Eigen::MatrixXd& y, std::size_t hidden,
                                 double ridge, std::uint64_t seed) {
  if (hidden == 0) throw std::invalid_argument("hidden layer must be non-empty");
  if (x.rows() == 0 || x.rows() != y.rows()) throw std::invalid_argument("bad training shapes");
  const auto h = static_cast<Eigen::Index>(hidden);
  Rng rng(seed);
  ElmRegressor m;
  m.input_weights_.resize(h, x.cols());
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) m.input_weights_(i, j) = rng.uniform(-1.0, 1.0);
  m.biases_.resize(h);
  for (Eigen::Index i = 0; i < h; ++i) m.biases_[i] = rng.uniform(-1.0, 1.0);
  m.output_weights_ = ridge_solve(m.hidden_layer(x), y, ridge);
  return m;
}

Eigen::MatrixXd ElmRegressor::hidden_layer(const RowMatrix& x) const {
  Eigen::MatrixXd z = x * input_weights_.transpose();
  z.rowwise() += biases_.transpose();
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

Eigen::MatrixXd ElmRegressor::predict_batch(const RowMatrix& x) const {
  return hidden_layer(x) * output_weights_;
}

Eigen::Vector2d ElmRegressor::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != input_weights_.cols()) throw std::invalid_argument("input size mismatch");
  Eigen::VectorXd z = input_weights_ * x + biases_;
  Eigen::VectorXd a = (1.0 / (1.0 + (-z.array()).exp())).matrix();
  return output_weights_.transpose() * a;
}

}  // namespace aispath
