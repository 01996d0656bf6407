#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "aispath/domain/types.hpp"
#include "aispath/ensemble/elm.hpp"
#include "aispath/ensemble/matrix.hpp"
#include "aispath/ensemble/scaler.hpp"
#include "aispath/featurize/dataset.hpp"
#include "aispath/featurize/features.hpp"

namespace aispath {

struct EnsembleConfig {
  std::size_t k_clusters = 32;
  std::size_t h_hidden = 200;
  double ridge = 1e-4;
  std::size_t k_nn = 50;
  std::size_t r_select = 3;
  std::optional<double> sigma;  // fixed fusion bandwidth; median of e_i when empty
  std::optional<std::size_t> min_cluster_size;  // default max(20, h/5)
  std::size_t jobs = 1;  // training threads; does not affect the result

  std::size_t minimum_cluster_size() const;
  void validate() const;
};

struct ClusterModel {
  Eigen::VectorXd centroid;
  ElmRegressor regressor;
  std::size_t train_count = 0;
};

/// Standardized training samples with their local-frame targets and cluster
/// labels, kept for neighbor lookup at prediction time.
struct TrainingStore {
  RowMatrixF features;  // n x d
  RowMatrixF targets;   // n x 2
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

struct FeatureLayout {
  std::vector<std::string> names;
  std::string time_unit = "s";
  std::string position_unit = "deg";
};

struct ModelBundle {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  SampleConfig sample;
  SideInfoConfig side_info;
  FeatureLayout layout;
  EnsembleConfig config;
  StaticImputer imputer;
  Scaler scaler;
  std::vector<ClusterModel> models;
  TrainingStore store;
  std::uint64_t seed = 0;

  // Not persisted: error of each stored sample under its own cluster model.
  std::vector<double> residuals;

  void refresh_residuals();
  void validate() const;
};

struct TrainReport {
  std::size_t samples = 0;
  std::size_t initial_clusters = 0;
  std::size_t merged_clusters = 0;
  std::size_t kmeans_iterations = 0;
  double mean_training_residual = 0.0;
};

/// Full training path: impute, standardize, cluster, merge undersized
/// clusters, fit one ELM per cluster and fill the neighbor store.
ModelBundle train_ensemble(std::span<const TrainingPair> pairs, const SampleConfig& sample,
                           const SideInfoConfig& side, const EnsembleConfig& cfg,
                           std::uint64_t seed, TrainReport* report = nullptr);

/// As above from already-built features and targets (n x 2).
ModelBundle train_ensemble(std::span<const FeatureVector> features, const Eigen::MatrixXd& targets,
                           const SampleConfig& sample, const SideInfoConfig& side,
                           const EnsembleConfig& cfg, std::uint64_t seed,
                           TrainReport* report = nullptr);

/// Fits one model to the given rows; the ClusterModel centroid is their mean.
ClusterModel train_cluster_model(const RowMatrix& x, const Eigen::MatrixXd& y,
                                 const EnsembleConfig& cfg, std::uint64_t seed);

struct ModelSelection {
  std::size_t model = 0;
  double error = 0.0;     // mean neighbor error (local degrees)
  std::size_t neighbors = 0;
};

/// Nearest stored samples, grouped by their cluster, ranked by mean residual.
std::vector<ModelSelection> select_models(const StandardizedVector& x, const ModelBundle& bundle);

struct Fusion {
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  std::vector<double> weights;  // normalized to sum 1
  double sigma = 0.0;
  bool unweighted_fallback = false;
};

/// Weighted mean with w_i = exp(-e_i^2 / (2 sigma^2)).
Fusion fuse_predictions(std::span<const Eigen::Vector2d> preds, std::span<const double> errors,
                        double sigma);

/// Bandwidth for a selection: the fixed override, or the median error
/// floored at 1e-6.
double fusion_sigma(std::span<const double> errors, const EnsembleConfig& cfg);

struct Prediction {
  GeoPoint position;
  Eigen::Vector2d local = Eigen::Vector2d::Zero();
  std::vector<ModelSelection> selected;
  std::vector<Eigen::Vector2d> model_outputs;
  Fusion fusion;
};

/// Prediction from already-encoded raw features and the window's frame.
Prediction predict_features(FeatureVector raw, const LocalFrame& frame, const ModelBundle& bundle);

/// End-to-end prediction from a raw l-message window. Throws DataError for
/// a window that fails validation or whose direction is undefined.
Prediction predict_position(std::span<const AisMessage> window, const VesselMeta& meta,
                            const ModelBundle& bundle);

}  // namespace aispath
