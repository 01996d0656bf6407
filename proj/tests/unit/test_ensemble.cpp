#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "aispath/domain/errors.hpp"
#include "aispath/domain/geo.hpp"
#include "aispath/ensemble/elm.hpp"
#include "aispath/ensemble/ensemble.hpp"
#include "aispath/ensemble/kmeans.hpp"
#include "aispath/ensemble/scaler.hpp"
#include "aispath/harness/baselines.hpp"
#include "aispath/harness/synth.hpp"
#include "aispath/util/random.hpp"
#include "support.hpp"

using namespace aispath;

namespace {

RowMatrix random_matrix(test::Gen& g, Eigen::Index r, Eigen::Index c, double lo = -1, double hi = 1) {
  RowMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = g.uniform(lo, hi);
  return m;
}

std::vector<TrainingPair> fleet_pairs(RouteFamily family, std::size_t count, std::uint64_t seed,
                                      const SampleConfig& cfg, double noise = 0.0) {
  SynthConfig sc;
  sc.family = family;
  sc.count = count;
  sc.seed = seed;
  sc.position_noise = noise;
  std::vector<TrainingPair> pairs;
  for (const auto& t : synth_generate(sc).trajectories) {
    auto p = make_training_pairs(t, cfg, {});
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  return pairs;
}

EnsembleConfig small_config() {
  EnsembleConfig c;
  c.k_clusters = 4;
  c.h_hidden = 40;
  c.ridge = 1e-3;
  c.k_nn = 20;
  c.r_select = 2;
  return c;
}

}  // namespace

TEST(Scaler, TwoPointColumn) {
  RowMatrix x(2, 1);
  x << 0.0, 2.0;
  const auto st = standardize(x);
  EXPECT_DOUBLE_EQ(st.scaler.mean()[0], 1.0);
  EXPECT_DOUBLE_EQ(st.scaler.std()[0], 1.0);
  EXPECT_DOUBLE_EQ(st.rows(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(st.rows(1, 0), 1.0);
}

TEST(Scaler, ConstantColumnStdOne) {
  RowMatrix x(3, 2);
  x << 5, 1, 5, 2, 5, 3;
  const auto st = standardize(x);
  EXPECT_EQ(st.scaler.std()[0], 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(st.rows(i, 0), 0.0);
}

TEST(Scaler, StandardizedInputUnchanged) {
  test::Gen g(51);
  RowMatrix x = random_matrix(g, 200, 4);
  const auto once = standardize(x);
  const auto twice = standardize(once.rows);
  EXPECT_NEAR(twice.scaler.mean().cwiseAbs().maxCoeff(), 0.0, 1e-12);
  EXPECT_NEAR((twice.scaler.std().array() - 1.0).abs().maxCoeff(), 0.0, 1e-12);
  EXPECT_LT((twice.rows - once.rows).cwiseAbs().maxCoeff(), 1e-12);
  // column moments of the output
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double m = once.rows.col(j).mean();
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR((once.rows.col(j).array() - m).square().mean(), 1.0, 1e-12);
  }
}

TEST(Scaler, ErrorsAndTypedApply) {
  EXPECT_THROW(standardize(std::span<const FeatureVector>{}), DataError);
  EXPECT_THROW(Scaler(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)), std::invalid_argument);
  const Scaler s(Eigen::Vector2d(1, 2), Eigen::Vector2d(2, 4));
  const auto z = s.apply(FeatureVector{{3, 10}});
  EXPECT_EQ(z.values(), Eigen::Vector2d(1, 2));
  EXPECT_THROW(s.apply(FeatureVector{{1, 2, 3}}), DataError);
  EXPECT_THROW(s.apply(FeatureVector{{1, NAN}}), DataError);
  std::vector<FeatureVector> ragged{{{1, 2}}, {{1}}};
  EXPECT_THROW(stack_features(ragged), DataError);
}

TEST(KMeans, IdenticalSamplesOneCluster) {
  RowMatrix x(5, 3);
  x.rowwise() = Eigen::RowVector3d(1, 2, 3);
  const auto km = cluster_samples(x, 1, 7);
  EXPECT_EQ(km.centroids.row(0), Eigen::RowVector3d(1, 2, 3));
  for (int l : km.labels) EXPECT_EQ(l, 0);
}

TEST(KMeans, TwoBlobs) {
  test::Gen g(52);
  RowMatrix x(60, 2);
  std::vector<int> blob(60);
  for (int i = 0; i < 60; ++i) {
    blob[static_cast<std::size_t>(i)] = (i * 7) % 2;
    const double cx = blob[static_cast<std::size_t>(i)] ? 50.0 : -50.0;
    x(i, 0) = cx + g.uniform(-1, 1);
    x(i, 1) = g.uniform(-1, 1);
  }
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto km = cluster_samples(x, 2, seed);
    for (int i = 0; i < 60; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (int j = 0; j < 60; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        EXPECT_EQ(km.labels[ui] == km.labels[uj], blob[ui] == blob[uj]);
      }
    }
  }
}

TEST(KMeans, KEqualsNSingletons) {
  test::Gen g(53);
  RowMatrix x = random_matrix(g, 12, 3);
  const auto km = cluster_samples(x, 12, 1);
  std::vector<int> seen(12, 0);
  for (int i = 0; i < 12; ++i) {
    const int c = km.labels[static_cast<std::size_t>(i)];
    ++seen[static_cast<std::size_t>(c)];
    EXPECT_EQ((km.centroids.row(c) - x.row(i)).norm(), 0.0);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(KMeans, ErrorsAndDeterminism) {
  test::Gen g(54);
  RowMatrix x = random_matrix(g, 30, 2);
  EXPECT_THROW(cluster_samples(x, 31, 1), std::invalid_argument);
  EXPECT_THROW(cluster_samples(x, 0, 1), std::invalid_argument);
  const auto a = cluster_samples(x, 5, 9);
  const auto b = cluster_samples(x, 5, 9);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids, b.centroids);
  // every sample sits with its nearest centroid at convergence
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    EXPECT_EQ(static_cast<int>(nearest_centroid(a.centroids, x.row(i))), a.labels[static_cast<std::size_t>(i)]);
}

TEST(Ridge, MatchesGaussianElimination) {
  test::Gen g(55);
  for (int rep = 0; rep < 20; ++rep) {
    const auto n = static_cast<Eigen::Index>(g.size(8, 40));
    const auto h = static_cast<Eigen::Index>(g.size(2, 12));
    const double ridge = std::pow(10.0, g.uniform(-6, 0));
    Eigen::MatrixXd H = random_matrix(g, n, h);
    Eigen::MatrixXd Y = random_matrix(g, n, 2);
    const Eigen::MatrixXd W = ridge_solve(H, Y, ridge);

    std::vector<std::vector<double>> a(static_cast<std::size_t>(h), std::vector<double>(static_cast<std::size_t>(h)));
    std::vector<std::vector<double>> b(static_cast<std::size_t>(h), std::vector<double>(2));
    for (Eigen::Index i = 0; i < h; ++i) {
      for (Eigen::Index j = 0; j < h; ++j) {
        double s = i == j ? ridge : 0.0;
        for (Eigen::Index r = 0; r < n; ++r) s += H(r, i) * H(r, j);
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
      }
      for (Eigen::Index c = 0; c < 2; ++c) {
        double s = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) s += H(r, i) * Y(r, c);
        b[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = s;
      }
    }
    const auto ref = test::gauss_solve(a, b);
    Eigen::MatrixXd Wref(h, 2);
    for (Eigen::Index i = 0; i < h; ++i)
      for (Eigen::Index c = 0; c < 2; ++c) Wref(i, c) = ref[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    EXPECT_LT((W - Wref).norm() / Wref.norm(), 1e-8);

    const Eigen::MatrixXd A = H.transpose() * H + ridge * Eigen::MatrixXd::Identity(h, h);
    const Eigen::MatrixXd rhs = H.transpose() * Y;
    EXPECT_LT((A * W - rhs).norm() / rhs.norm(), 1e-8);
  }
}

TEST(Elm, ZeroTargetsZeroWeights) {
  test::Gen g(56);
  const RowMatrix x = random_matrix(g, 50, 3);
  const auto elm = ElmRegressor::train(x, Eigen::MatrixXd::Zero(50, 2), 20, 1e-4, 1);
  EXPECT_EQ(elm.output_weights().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Elm, RecoversLinearFunction) {
  RowMatrix x(101, 1);
  Eigen::MatrixXd y(101, 2);
  for (int i = 0; i <= 100; ++i) {
    x(i, 0) = -1.0 + 0.02 * i;
    y(i, 0) = 2.0 * x(i, 0);
    y(i, 1) = 2.0 * x(i, 0);
  }
  const auto elm = ElmRegressor::train(x, y, 50, 1e-8, 3);
  const Eigen::MatrixXd pred = elm.predict_batch(x);
  EXPECT_LT((pred - y).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_EQ(elm.hidden(), 50u);
  EXPECT_EQ(elm.inputs(), 1u);
  EXPECT_LE(elm.input_weights().cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(elm.biases().cwiseAbs().maxCoeff(), 1.0);
}

TEST(Elm, HiddenLayerIsSigmoid) {
  test::Gen g(57);
  const RowMatrix x = random_matrix(g, 10, 3);
  const auto elm = ElmRegressor::train(x, random_matrix(g, 10, 2), 5, 1e-2, 4);
  const Eigen::MatrixXd h = elm.hidden_layer(x);
  for (Eigen::Index i = 0; i < 10; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double a = elm.input_weights().row(j).dot(x.row(i)) + elm.biases()[j];
      EXPECT_NEAR(h(i, j), 1.0 / (1.0 + std::exp(-a)), 1e-15);
    }
  // single-row prediction agrees with the batch path
  const Eigen::MatrixXd batch = elm.predict_batch(x);
  for (Eigen::Index i = 0; i < 10; ++i) {
    const Eigen::VectorXd row = x.row(i).transpose();
    EXPECT_LT((elm.predict(row) - batch.row(i).transpose()).norm(), 1e-12);
  }
}

TEST(Elm, DuplicateRowsSamePrediction) {
  test::Gen g(58);
  RowMatrix x = random_matrix(g, 30, 4);
  x.row(7) = x.row(3);
  const auto elm = ElmRegressor::train(x, random_matrix(g, 30, 2), 10, 1e-3, 5);
  const Eigen::MatrixXd p = elm.predict_batch(x);
  EXPECT_EQ(p.row(7), p.row(3));
}

TEST(Fusion, BruteForceAndHull) {
  test::Gen g(59);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t r = g.size(1, 6);
    std::vector<Eigen::Vector2d> preds;
    std::vector<double> errs;
    for (std::size_t i = 0; i < r; ++i) {
      preds.emplace_back(g.uniform(-1, 1), g.uniform(-1, 1));
      errs.push_back(g.uniform(0, 0.5));
    }
    const double sigma = g.uniform(0.01, 1.0);
    const auto f = fuse_predictions(preds, errs, sigma);
    double num0 = 0, num1 = 0, den = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const double w = std::exp(-errs[i] * errs[i] / (2 * sigma * sigma));
      num0 += w * preds[i].x();
      num1 += w * preds[i].y();
      den += w;
    }
    if (f.unweighted_fallback) continue;
    EXPECT_NEAR(f.value.x(), num0 / den, 1e-12);
    EXPECT_NEAR(f.value.y(), num1 / den, 1e-12);
    for (int c = 0; c < 2; ++c) {
      double lo = 1e9, hi = -1e9;
      for (const auto& p : preds) {
        lo = std::min(lo, p[c]);
        hi = std::max(hi, p[c]);
      }
      EXPECT_GE(f.value[c], lo - 1e-15);
      EXPECT_LE(f.value[c], hi + 1e-15);
    }
    double total = 0;
    for (double w : f.weights) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Fusion, SingleAndEqualAndHandExample) {
  const std::vector<Eigen::Vector2d> one{{0.3, -0.7}};
  EXPECT_EQ(fuse_predictions(one, std::vector<double>{0.2}, 0.1).value, one[0]);

  const std::vector<Eigen::Vector2d> three{{1, 2}, {3, 4}, {8, 0}};
  const auto eq = fuse_predictions(three, std::vector<double>{0.4, 0.4, 0.4}, 0.3);
  EXPECT_EQ(eq.value, Eigen::Vector2d(4.0, 2.0));
  const std::vector<Eigen::Vector2d> thirds{{0.1, 0.7}, {0.2, 0.3}, {0.4, 0.9}};
  const auto m = fuse_predictions(thirds, std::vector<double>{0.05, 0.05, 0.05}, 0.3);
  EXPECT_EQ(m.value, (thirds[0] + thirds[1] + thirds[2]) / 3.0);

  const std::vector<Eigen::Vector2d> two{{1, 0}, {0, 1}};
  const double sigma = 0.25;
  const auto f = fuse_predictions(two, std::vector<double>{0.0, sigma}, sigma);
  const double w2 = std::exp(-0.5);
  EXPECT_NEAR(w2, 0.6065, 1e-4);
  EXPECT_NEAR(f.value.x(), 1.0 / (1.0 + w2), 1e-15);
  EXPECT_NEAR(f.value.y(), w2 / (1.0 + w2), 1e-15);
  EXPECT_NEAR(f.weights[0], 1.0 / 1.6065, 1e-4);
}

TEST(Fusion, WeightsDecreaseWithError) {
  const std::vector<Eigen::Vector2d> p(4, Eigen::Vector2d::Zero());
  const auto f = fuse_predictions(p, std::vector<double>{0.0, 0.1, 0.2, 0.3}, 0.15);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(f.weights[i], f.weights[i - 1]);
  for (double w : f.weights) EXPECT_GT(w, 0.0);
}

TEST(Fusion, UnderflowFallsBackToMean) {
  const std::vector<Eigen::Vector2d> p{{1, 1}, {3, 5}};
  const auto f = fuse_predictions(p, std::vector<double>{100.0, 200.0}, 1e-6);
  EXPECT_TRUE(f.unweighted_fallback);
  EXPECT_EQ(f.value, Eigen::Vector2d(2, 3));
  EXPECT_EQ(f.weights, (std::vector<double>{0.5, 0.5}));
}

TEST(Fusion, BadInput) {
  const std::vector<Eigen::Vector2d> p{{1, 1}};
  EXPECT_THROW(fuse_predictions({}, {}, 1.0), std::invalid_argument);
  EXPECT_THROW(fuse_predictions(p, std::vector<double>{1, 2}, 1.0), std::invalid_argument);
  EXPECT_THROW(fuse_predictions(p, std::vector<double>{1}, 0.0), std::invalid_argument);
}

TEST(FusionSigma, MedianFloorAndOverride) {
  EnsembleConfig c;
  EXPECT_DOUBLE_EQ(fusion_sigma(std::vector<double>{0.3, 0.1, 0.2}, c), 0.2);
  EXPECT_DOUBLE_EQ(fusion_sigma(std::vector<double>{0.3, 0.1}, c), 0.2);
  EXPECT_DOUBLE_EQ(fusion_sigma(std::vector<double>{0.0, 0.0}, c), 1e-6);
  c.sigma = 0.7;
  EXPECT_DOUBLE_EQ(fusion_sigma(std::vector<double>{0.3}, c), 0.7);
}

namespace {

// Bundle with a hand-filled neighbor store; only what select_models reads.
ModelBundle store_bundle(const std::vector<std::array<float, 2>>& pts, const std::vector<int>& labels,
                         const std::vector<double>& residuals, std::size_t k_nn, std::size_t r) {
  ModelBundle b;
  b.config.k_nn = k_nn;
  b.config.r_select = r;
  b.store.features.resize(static_cast<Eigen::Index>(pts.size()), 2);
  b.store.targets = RowMatrixF::Zero(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    b.store.features(static_cast<Eigen::Index>(i), 0) = pts[i][0];
    b.store.features(static_cast<Eigen::Index>(i), 1) = pts[i][1];
  }
  b.store.labels = labels;
  b.residuals = residuals;
  b.scaler = Scaler(Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones());
  return b;
}

}  // namespace

TEST(SelectModels, SingleNeighbor) {
  auto b = store_bundle({{0, 0}, {1, 0}, {5, 5}}, {0, 1, 2}, {0.1, 0.2, 0.3}, 1, 3);
  const auto sel = select_models(b.scaler.apply(FeatureVector{{0.9, 0.1}}), b);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0].model, 1u);
  EXPECT_DOUBLE_EQ(sel[0].error, 0.2);
  EXPECT_EQ(sel[0].neighbors, 1u);
}

TEST(SelectModels, OneClusterAmongNeighbors) {
  auto b = store_bundle({{0, 0}, {0.1, 0}, {0.2, 0}, {9, 9}}, {2, 2, 2, 0}, {0.1, 0.2, 0.6, 0.0}, 3, 3);
  const auto sel = select_models(b.scaler.apply(FeatureVector{{0.05, 0}}), b);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0].model, 2u);
  EXPECT_NEAR(sel[0].error, 0.3, 1e-15);
}

TEST(SelectModels, LowerMeanErrorWins) {
  auto b = store_bundle({{0, 0}, {0.1, 0}, {0.2, 0}, {0.3, 0}}, {0, 1, 0, 1}, {0.5, 0.1, 0.3, 0.2}, 4, 1);
  const auto sel = select_models(b.scaler.apply(FeatureVector{{0, 0}}), b);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0].model, 1u);
  EXPECT_NEAR(sel[0].error, 0.15, 1e-15);
}

TEST(SelectModels, MatchesBruteForce) {
  test::Gen g(60);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = g.size(5, 80);
    std::vector<std::array<float, 2>> pts;
    std::vector<int> labels;
    std::vector<double> res;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({static_cast<float>(g.uniform(-1, 1)), static_cast<float>(g.uniform(-1, 1))});
      labels.push_back(static_cast<int>(g.size(0, 5)));
      res.push_back(g.uniform(0, 1));
    }
    const std::size_t k = g.size(1, n), r = g.size(1, 4);
    auto b = store_bundle(pts, labels, res, k, r);
    const double qx = g.uniform(-1, 1), qy = g.uniform(-1, 1);
    const auto sel = select_models(b.scaler.apply(FeatureVector{{qx, qy}}), b);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto d2 = [&](std::size_t i) {
      const double dx = pts[i][0] - qx, dy = pts[i][1] - qy;
      return dx * dx + dy * dy;
    };
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto c) { return d2(a) < d2(c); });
    std::map<int, std::pair<double, int>> acc;
    for (std::size_t i = 0; i < k; ++i) {
      acc[labels[order[i]]].first += res[order[i]];
      acc[labels[order[i]]].second += 1;
    }
    std::vector<std::pair<double, int>> ranked;
    for (auto& [m, a] : acc) ranked.push_back({a.first / a.second, m});
    std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& c) { return a.first < c.first; });
    ASSERT_EQ(sel.size(), std::min(r, ranked.size()));
    for (std::size_t i = 0; i < sel.size(); ++i) {
      EXPECT_EQ(static_cast<int>(sel[i].model), ranked[i].second);
      EXPECT_NEAR(sel[i].error, ranked[i].first, 1e-12);
    }
  }
}

TEST(Train, TooFewSamples) {
  SampleConfig sc;
  std::vector<FeatureVector> f(3, FeatureVector{std::vector<double>(29, 1.0)});
  EnsembleConfig c;
  EXPECT_THROW(train_ensemble(f, Eigen::MatrixXd::Zero(3, 2), sc, {}, c, 1), DataError);
}

TEST(Train, ClustersAboveMinimumAndLabelsValid) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 30, 3, sc, 0.01);
  EnsembleConfig c = small_config();
  c.k_clusters = 12;
  TrainReport rep;
  const auto b = train_ensemble(pairs, sc, {}, c, 5, &rep);
  EXPECT_NO_THROW(b.validate());
  ASSERT_FALSE(b.models.empty());
  std::size_t total = 0;
  for (const auto& m : b.models) {
    if (b.models.size() > 1) {
      EXPECT_GE(m.train_count, c.minimum_cluster_size());
    }
    total += m.train_count;
  }
  EXPECT_EQ(total, pairs.size());
  EXPECT_EQ(b.store.size(), pairs.size());
  for (int l : b.store.labels) EXPECT_LT(static_cast<std::size_t>(l), b.models.size());
  EXPECT_EQ(rep.samples, pairs.size());
  EXPECT_EQ(b.layout.names, feature_names(false));
}

TEST(Train, UndersizedClustersMerge) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 10, 4, sc, 0.01);
  EnsembleConfig c = small_config();
  c.k_clusters = static_cast<std::size_t>(pairs.size() / 5);
  c.min_cluster_size = 40;
  TrainReport rep;
  const auto b = train_ensemble(pairs, sc, {}, c, 5, &rep);
  EXPECT_GT(rep.merged_clusters, 0u);
  EXPECT_LT(b.models.size(), c.k_clusters);
  for (const auto& m : b.models) {
    if (b.models.size() > 1) {
      EXPECT_GE(m.train_count, 40u);
    }
  }
}

TEST(Train, JobsDoNotChangeResult) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 20, 6, sc, 0.01);
  EnsembleConfig c = small_config();
  const auto a = train_ensemble(pairs, sc, {}, c, 9);
  c.jobs = 3;
  const auto b = train_ensemble(pairs, sc, {}, c, 9);
  ASSERT_EQ(a.models.size(), b.models.size());
  for (std::size_t i = 0; i < a.models.size(); ++i)
    EXPECT_EQ(a.models[i].regressor.output_weights(), b.models[i].regressor.output_weights());
}

TEST(Train, SingleClusterEqualsPlainElm) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 15, 7, sc, 0.01);
  EnsembleConfig c = small_config();
  c.k_clusters = 1;
  c.r_select = 1;
  const std::uint64_t seed = 11;
  const auto b = train_ensemble(pairs, sc, {}, c, seed);
  ASSERT_EQ(b.models.size(), 1u);

  std::vector<FeatureVector> f;
  Eigen::MatrixXd y(static_cast<Eigen::Index>(pairs.size()), 2);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    f.push_back(pairs[i].features);
    y.row(static_cast<Eigen::Index>(i)) = pairs[i].target.transpose();
  }
  StaticImputer imp;
  imp.fit(f);
  for (auto& v : f) imp.apply(v);
  const auto st = standardize(f);
  const auto elm = ElmRegressor::train(st.rows, y, c.h_hidden, c.ridge, mix_seed(seed, 1000));
  for (std::size_t i = 0; i < pairs.size(); i += 7) {
    const auto p = predict_features(pairs[i].features, pairs[i].frame, b);
    const Eigen::VectorXd z = st.rows.row(static_cast<Eigen::Index>(i)).transpose();
    EXPECT_EQ(p.local, elm.predict(z));
  }
}

TEST(Predict, StraightTracksWithinOnePercent) {
  SampleConfig sc;
  SynthConfig train;
  train.family = RouteFamily::straight;
  train.count = 200;
  train.seed = 8;
  train.interval_jitter = 0.0;  // targets land exactly on the horizon
  std::vector<TrainingPair> pairs;
  for (const auto& t : synth_generate(train).trajectories) {
    auto p = make_training_pairs(t, sc, {});
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  EnsembleConfig c = small_config();
  c.k_clusters = 8;
  c.h_hidden = 100;
  c.ridge = 1e-2;
  const auto b = train_ensemble(pairs, sc, {}, c, 3);

  SynthConfig q = train;
  q.count = 10;
  q.seed = 99;
  std::size_t misses = 0, queries = 0;
  double worst = 0.0;
  for (const auto& t : synth_generate(q).trajectories) {
    for (const auto& w : window_samples(t, sc)) {
      const std::span<const AisMessage> win(t.messages.data() + w.start, sc.l);
      const auto p = predict_position(win, t.meta, b);
      // target sits up to the tolerance off the horizon; dead-reckon to the horizon itself
      const AisMessage& last = win.back();
      const AisMessage& target = t.messages[w.target];
      const double speed = geo_distance(last.position(), target.position()) / (target.tau - last.tau);
      const double travelled = speed * sc.tau_t;
      const GeoPoint truth = destination(last.position(), initial_bearing(last.position(), target.position()), travelled);
      const double rel = geo_distance(p.position, truth) / travelled;
      worst = std::max(worst, rel);
      if (rel >= 0.01) ++misses;
      ++queries;
    }
  }
  EXPECT_EQ(misses, 0u) << "of " << queries << " queries; worst relative error " << worst;
}

TEST(Predict, DeterministicAndReplaysTrainingWindow) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 25, 9, sc, 0.01);
  const auto b = train_ensemble(pairs, sc, {}, small_config(), 4);
  std::size_t own_hits = 0, replays = 0;
  for (std::size_t i = 0; i < pairs.size(); i += 11) {
    const auto p1 = predict_features(pairs[i].features, pairs[i].frame, b);
    const auto p2 = predict_features(pairs[i].features, pairs[i].frame, b);
    EXPECT_EQ(p1.position, p2.position);
    double spread = 0.0;
    for (const auto& o : p1.model_outputs) spread = std::max(spread, (o - p1.local).norm());
    const double err = (p1.local - pairs[i].target).norm();
    // the bound needs the sample's own model among the fused ones
    const auto own = static_cast<std::size_t>(b.store.labels[i]);
    const bool fused_own = std::any_of(p1.selected.begin(), p1.selected.end(),
                                       [&](const ModelSelection& m) { return m.model == own; });
    if (fused_own) {
      EXPECT_LE(err, b.residuals[i] + spread + 1e-6);
      ++own_hits;
    }
    ++replays;
    double total = 0.0;
    for (double w : p1.fusion.weights) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_LE(p1.selected.size(), b.config.r_select);
  }
  EXPECT_GT(own_hits * 4, replays * 3) << own_hits << " of " << replays;
}

TEST(Predict, FrameInvariance) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 25, 10, sc, 0.01);
  const auto b = train_ensemble(pairs, sc, {}, small_config(), 4);
  SynthConfig q;
  q.family = RouteFamily::arc;
  q.count = 5;
  q.seed = 77;
  test::Gen g(61);
  for (const auto& t : synth_generate(q).trajectories) {
    std::vector<AisMessage> w(t.messages.begin() + 20, t.messages.begin() + 28);
    const auto base = predict_position(w, t.meta, b);
    const double angle = g.uniform(-3, 3), c = std::cos(angle), s = std::sin(angle);
    const GeoPoint shift{g.uniform(-2, 2), g.uniform(-2, 2)};
    const GeoPoint pivot = w[0].position();
    auto move = [&](GeoPoint p) {
      const double dx = p.lat - pivot.lat, dy = p.lon - pivot.lon;
      return GeoPoint{pivot.lat + c * dx - s * dy + shift.lat, pivot.lon + s * dx + c * dy + shift.lon};
    };
    // positions move; speeds and courses are kept, so features are identical
    auto moved = w;
    for (auto& m : moved) {
      const GeoPoint p = move(m.position());
      m.lat = p.lat;
      m.lon = p.lon;
    }
    const auto other = predict_position(moved, t.meta, b);
    const GeoPoint want = move(base.position);
    EXPECT_NEAR(other.position.lat, want.lat, 1e-6);
    EXPECT_NEAR(other.position.lon, want.lon, 1e-6);
  }
}

TEST(Predict, RefusesBadWindows) {
  SampleConfig sc;
  const auto pairs = fleet_pairs(RouteFamily::arc, 10, 11, sc, 0.01);
  const auto b = train_ensemble(pairs, sc, {}, small_config(), 4);
  auto t = synth_generate(SynthConfig{}).trajectories[0];
  std::vector<AisMessage> w(t.messages.begin(), t.messages.begin() + 8);
  EXPECT_NO_THROW(predict_position(w, t.meta, b));
  auto bad = w;
  bad[1].lat = bad[0].lat;
  bad[1].lon = bad[0].lon;
  EXPECT_THROW(predict_position(bad, t.meta, b), DataError);
  bad = w;
  bad[3].tau = bad[2].tau;
  EXPECT_THROW(predict_position(bad, t.meta, b), DataError);
  bad = w;
  bad[4].lat = 123.0;
  EXPECT_THROW(predict_position(bad, t.meta, b), DataError);
  bad.assign(w.begin(), w.begin() + 7);
  EXPECT_THROW(predict_position(bad, t.meta, b), DataError);
}

TEST(EnsembleConfig, Validation) {
  EnsembleConfig c;
  EXPECT_EQ(c.minimum_cluster_size(), 40u);
  c.h_hidden = 50;
  EXPECT_EQ(c.minimum_cluster_size(), 20u);
  c.r_select = 40;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.ridge = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.k_nn = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}
