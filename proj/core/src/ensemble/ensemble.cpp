#include "aispath/ensemble/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/ensemble/kmeans.hpp"
#include "aispath/util/parallel.hpp"
#include "aispath/util/random.hpp"

namespace aispath {

std::size_t EnsembleConfig::minimum_cluster_size() const {
  return min_cluster_size.value_or(std::max<std::size_t>(20, 2 * h_hidden / 10));
}

void EnsembleConfig::validate() const {
  if (k_clusters < 1) throw ConfigError("ensemble.k_clusters must be at least 1");
  if (h_hidden < 1) throw ConfigError("ensemble.h_hidden must be at least 1");
  if (!(ridge > 0.0) || !std::isfinite(ridge)) throw ConfigError("ensemble.ridge must be positive");
  if (k_nn < 1) throw ConfigError("ensemble.k_nn must be at least 1");
  if (r_select < 1 || r_select > k_clusters)
    throw ConfigError("ensemble.r_select must lie in [1, k_clusters]");
  if (sigma && !(*sigma > 0.0)) throw ConfigError("ensemble.sigma must be positive");
  if (min_cluster_size && *min_cluster_size < 1)
    throw ConfigError("ensemble.min_cluster_size must be at least 1");
}

void ModelBundle::refresh_residuals() {
  residuals.resize(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::VectorXd x = store.features.row(row).cast<double>().transpose();
    const Eigen::Vector2d y = store.targets.row(row).cast<double>().transpose();
    const auto& m = models[static_cast<std::size_t>(store.labels[i])];
    residuals[i] = (m.regressor.predict(x) - y).norm();
  }
}

void ModelBundle::validate() const {
  const std::size_t d = scaler.dims();
  if (layout.names.size() != d) throw DataError("bundle: feature layout does not match scaler");
  if (models.empty()) throw DataError("bundle: no cluster models");
  for (const auto& m : models) {
    if (static_cast<std::size_t>(m.centroid.size()) != d || m.regressor.inputs() != d ||
        m.regressor.output_weights().cols() != 2)
      throw DataError("bundle: model dimensions inconsistent with feature layout");
  }
  if (static_cast<std::size_t>(store.features.rows()) != store.size() ||
      static_cast<std::size_t>(store.targets.rows()) != store.size() ||
      (store.size() > 0 && (static_cast<std::size_t>(store.features.cols()) != d ||
                            store.targets.cols() != 2)))
    throw DataError("bundle: training store shape mismatch");
  for (int label : store.labels)
    if (label < 0 || static_cast<std::size_t>(label) >= models.size())
      throw DataError("bundle: store label out of range");
}

ClusterModel train_cluster_model(const RowMatrix& x, const Eigen::MatrixXd& y,
                                 const EnsembleConfig& cfg, std::uint64_t seed) {
  ClusterModel m;
  m.centroid = x.colwise().mean().transpose();
  m.regressor = ElmRegressor::train(x, y, cfg.h_hidden, cfg.ridge, seed);
  m.train_count = static_cast<std::size_t>(x.rows());
  return m;
}

namespace {

// Folds clusters smaller than `min_size` into the cluster with the nearest
// centroid, smallest first, until none remain or one cluster is left.
// Returns compact labels in [0, alive) and the number of merges.
std::size_t merge_small_clusters(const RowMatrix& z, std::vector<int>& labels, RowMatrix centroids,
                                 std::size_t min_size) {
  const auto k = static_cast<std::size_t>(centroids.rows());
  std::vector<std::size_t> count(k, 0);
  for (int l : labels) ++count[static_cast<std::size_t>(l)];
  std::vector<bool> alive(k);
  std::size_t n_alive = 0;
  for (std::size_t c = 0; c < k; ++c) {
    alive[c] = count[c] > 0;
    n_alive += alive[c];
  }
  std::size_t merges = 0;
  while (n_alive > 1) {
    std::size_t victim = k;
    for (std::size_t c = 0; c < k; ++c)
      if (alive[c] && count[c] < min_size && (victim == k || count[c] < count[victim])) victim = c;
    if (victim == k) break;
    std::size_t into = k;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (!alive[c] || c == victim) continue;
      const double d = (centroids.row(static_cast<Eigen::Index>(c)) -
                        centroids.row(static_cast<Eigen::Index>(victim)))
                           .squaredNorm();
      if (d < best) {
        best = d;
        into = c;
      }
    }
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(z.cols());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == static_cast<int>(victim)) labels[i] = static_cast<int>(into);
      if (labels[i] == static_cast<int>(into)) sum += z.row(static_cast<Eigen::Index>(i));
    }
    count[into] += count[victim];
    count[victim] = 0;
    alive[victim] = false;
    centroids.row(static_cast<Eigen::Index>(into)) = sum / static_cast<double>(count[into]);
    --n_alive;
    ++merges;
  }
  std::vector<int> remap(k, -1);
  int next = 0;
  for (std::size_t c = 0; c < k; ++c)
    if (alive[c]) remap[c] = next++;
  for (int& l : labels) l = remap[static_cast<std::size_t>(l)];
  return merges;
}

}  // namespace

ModelBundle train_ensemble(std::span<const FeatureVector> features, const Eigen::MatrixXd& targets,
                           const SampleConfig& sample, const SideInfoConfig& side,
                           const EnsembleConfig& cfg, std::uint64_t seed, TrainReport* report) {
  sample.validate();
  side.validate();
  cfg.validate();
  const std::size_t n = features.size();
  if (n == 0) throw DataError("no training samples");
  if (static_cast<std::size_t>(targets.rows()) != n || targets.cols() != 2)
    throw DataError("targets must be an n x 2 matrix");
  if (n < cfg.k_clusters)
    throw DataError(std::to_string(n) + " training samples but ensemble.k_clusters = " +
                    std::to_string(cfg.k_clusters) +
                    "; lower k_clusters or featurize more trajectories");

  ModelBundle b;
  b.sample = sample;
  b.side_info = side;
  b.config = cfg;
  b.seed = seed;
  b.layout.names = feature_names(side.enabled());

  std::vector<FeatureVector> rows(features.begin(), features.end());
  b.imputer.fit(rows);
  for (auto& fv : rows) {
    if (fv.size() != b.layout.names.size())
      throw DataError("feature vector length " + std::to_string(fv.size()) +
                      " does not match the layout (" + std::to_string(b.layout.names.size()) + ")");
    b.imputer.apply(fv);
  }
  Standardized st = standardize(rows);
  b.scaler = st.scaler;
  const RowMatrix& z = st.rows;

  KMeansResult km = cluster_samples(z, cfg.k_clusters, mix_seed(seed, 1));
  std::vector<int> labels = km.labels;
  const std::size_t merges =
      merge_small_clusters(z, labels, km.centroids, cfg.minimum_cluster_size());
  const std::size_t k = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;

  std::vector<std::vector<Eigen::Index>> members(k);
  for (std::size_t i = 0; i < n; ++i)
    members[static_cast<std::size_t>(labels[i])].push_back(static_cast<Eigen::Index>(i));

  b.models.resize(k);
  parallel_for(k, cfg.jobs, [&](std::size_t c) {
    const auto& idx = members[c];
    RowMatrix x(static_cast<Eigen::Index>(idx.size()), z.cols());
    Eigen::MatrixXd y(static_cast<Eigen::Index>(idx.size()), 2);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      x.row(static_cast<Eigen::Index>(r)) = z.row(idx[r]);
      y.row(static_cast<Eigen::Index>(r)) = targets.row(idx[r]);
    }
    b.models[c] = train_cluster_model(x, y, cfg, mix_seed(seed, 1000 + c));
  });

  b.store.features = z.cast<float>();
  b.store.targets = targets.cast<float>();
  b.store.labels = std::move(labels);
  b.refresh_residuals();

  if (report) {
    report->samples = n;
    report->initial_clusters = cfg.k_clusters;
    report->merged_clusters = merges;
    report->kmeans_iterations = km.iterations;
    report->mean_training_residual =
        std::accumulate(b.residuals.begin(), b.residuals.end(), 0.0) / static_cast<double>(n);
  }
  return b;
}

ModelBundle train_ensemble(std::span<const TrainingPair> pairs, const SampleConfig& sample,
                           const SideInfoConfig& side, const EnsembleConfig& cfg,
                           std::uint64_t seed, TrainReport* report) {
  std::vector<FeatureVector> features;
  features.reserve(pairs.size());
  Eigen::MatrixXd targets(static_cast<Eigen::Index>(pairs.size()), 2);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    features.push_back(pairs[i].features);
    targets.row(static_cast<Eigen::Index>(i)) = pairs[i].target.transpose();
  }
  return train_ensemble(features, targets, sample, side, cfg, seed, report);
}

std::vector<ModelSelection> select_models(const StandardizedVector& x, const ModelBundle& bundle) {
  const std::size_t n = bundle.store.size();
  if (n == 0) throw DataError("bundle has an empty training store");
  if (bundle.residuals.size() != n) throw std::logic_error("bundle residuals not computed");
  if (x.size() != static_cast<std::size_t>(bundle.store.features.cols()))
    throw DataError("query dimension does not match the bundle");

  std::vector<std::pair<double, std::size_t>> dist(n);
  const Eigen::VectorXd& q = x.values();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = bundle.store.features.row(static_cast<Eigen::Index>(i));
    double s = 0.0;
    for (Eigen::Index j = 0; j < q.size(); ++j) {
      const double dj = static_cast<double>(row[j]) - q[j];
      s += dj * dj;
    }
    dist[i] = {s, i};
  }
  const std::size_t kn = std::min(bundle.config.k_nn, n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kn), dist.end());

  std::map<int, std::pair<double, std::size_t>> per_model;
  for (std::size_t r = 0; r < kn; ++r) {
    const std::size_t i = dist[r].second;
    auto& acc = per_model[bundle.store.labels[i]];
    acc.first += bundle.residuals[i];
    ++acc.second;
  }
  std::vector<ModelSelection> out;
  for (const auto& [model, acc] : per_model)
    out.push_back({static_cast<std::size_t>(model), acc.first / static_cast<double>(acc.second),
                   acc.second});
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.error < b.error; });
  if (out.size() > bundle.config.r_select) out.resize(bundle.config.r_select);
  return out;
}

Fusion fuse_predictions(std::span<const Eigen::Vector2d> preds, std::span<const double> errors,
                        double sigma) {
  if (preds.empty()) throw std::invalid_argument("fuse_predictions: no predictions");
  if (preds.size() != errors.size())
    throw std::invalid_argument("fuse_predictions: predictions and errors differ in length");
  if (!(sigma > 0.0)) throw std::invalid_argument("fuse_predictions: sigma must be positive");
  Fusion f;
  f.sigma = sigma;
  f.weights.resize(preds.size());
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    f.weights[i] = std::exp(-errors[i] * errors[i] / (2.0 * sigma * sigma));
    total += f.weights[i];
  }
  if (!(total > 0.0)) {
    f.unweighted_fallback = true;
    std::fill(f.weights.begin(), f.weights.end(), 1.0);
    total = static_cast<double>(preds.size());
  }
  const bool equal = std::all_of(f.weights.begin(), f.weights.end(),
                                 [&](double w) { return w == f.weights.front(); });
  for (double& w : f.weights) w /= total;
  if (equal) {
    // equal weights cancel: plain mean, which also passes a lone model through
    for (const auto& p : preds) f.value += p;
    f.value /= static_cast<double>(preds.size());
  } else {
    for (std::size_t i = 0; i < preds.size(); ++i) f.value += f.weights[i] * preds[i];
  }
  return f;
}

double fusion_sigma(std::span<const double> errors, const EnsembleConfig& cfg) {
  if (cfg.sigma) return *cfg.sigma;
  if (errors.empty()) return 1e-6;
  std::vector<double> v(errors.begin(), errors.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return std::max(med, 1e-6);
}

Prediction predict_features(FeatureVector raw, const LocalFrame& frame, const ModelBundle& bundle) {
  bundle.imputer.apply(raw);
  const StandardizedVector z = bundle.scaler.apply(raw);
  Prediction p;
  p.selected = select_models(z, bundle);
  std::vector<double> errors;
  for (const auto& s : p.selected) {
    p.model_outputs.push_back(bundle.models[s.model].regressor.predict(z.values()));
    errors.push_back(s.error);
  }
  p.fusion = fuse_predictions(p.model_outputs, errors, fusion_sigma(errors, bundle.config));
  p.local = p.fusion.value;
  p.position = inverse_transform(frame, p.local);
  return p;
}

Prediction predict_position(std::span<const AisMessage> window, const VesselMeta& meta,
                            const ModelBundle& bundle) {
  if (window.size() != bundle.sample.l)
    throw DataError("window has " + std::to_string(window.size()) + " messages, bundle expects " +
                    std::to_string(bundle.sample.l));
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto& m = window[i];
    if (!valid_coordinates(m.position()) || !std::isfinite(m.tau))
      throw DataError("window message " + std::to_string(i) + " has invalid position or time");
    if (i > 0 && !(m.tau > window[i - 1].tau))
      throw DataError("window timestamps must strictly increase");
  }
  auto enc = featurize_window(window, meta, bundle.sample, bundle.side_info);
  if (!enc) throw DataError("degenerate window: first two positions coincide");
  return predict_features(std::move(enc->first), enc->second, bundle);
}

}  // namespace aispath
