#include "aispath/ensemble/bundle_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aispath/domain/errors.hpp"

namespace aispath {

static_assert(std::endian::native == std::endian::little, "bundle blocks assume a little-endian host");

namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "aispath-bundle";

json nan_to_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
double null_to_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json header_of(const ModelBundle& b) {
  json h;
  h["format_version"] = b.format_version;
  h["seed"] = b.seed;
  json s = {{"l", b.sample.l},
            {"stride", b.sample.stride},
            {"tau_t", b.sample.tau_t},
            {"k_tail", b.sample.k_tail}};
  s["horizon_tol"] = b.sample.horizon_tol ? json(*b.sample.horizon_tol) : json(nullptr);
  h["sample"] = s;
  h["side_info"] = {{"mode", std::string(to_string(b.side_info.mode))},
                    {"region_cell_deg", b.side_info.region_cell_deg}};
  const auto& c = b.config;
  json e = {{"k_clusters", c.k_clusters}, {"h_hidden", c.h_hidden}, {"ridge", c.ridge},
            {"k_nn", c.k_nn},             {"r_select", c.r_select}};
  e["sigma"] = c.sigma ? json(*c.sigma) : json(nullptr);
  e["min_cluster_size"] = c.min_cluster_size ? json(*c.min_cluster_size) : json(nullptr);
  h["ensemble"] = e;
  h["layout"] = {{"names", b.layout.names},
                 {"time_unit", b.layout.time_unit},
                 {"position_unit", b.layout.position_unit}};
  json per_type = json::array();
  for (const auto& [type, med] : b.imputer.per_type())
    per_type.push_back({{"vessel_type", type},
                        {"medians", {nan_to_null(med[0]), nan_to_null(med[1]), nan_to_null(med[2])}}});
  const auto& g = b.imputer.global();
  h["imputer"] = {{"global", {g[0], g[1], g[2]}}, {"per_type", per_type}};
  json counts = json::array();
  for (const auto& m : b.models) counts.push_back(m.train_count);
  h["models"] = {{"count", b.models.size()}, {"train_counts", counts}};
  h["store"] = {{"samples", b.store.size()}};
  return h;
}

// Block: u32 name length, name, u8 dtype ('d' f64, 'f' f32, 'i' i32),
// u64 rows, u64 cols, row-major payload.
template <typename T>
void put_raw(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename Scalar>
constexpr char dtype_code() {
  if constexpr (std::is_same_v<Scalar, double>) return 'd';
  else if constexpr (std::is_same_v<Scalar, float>) return 'f';
  else return 'i';
}

template <typename Scalar>
void put_block(std::string& out, std::string_view name, const Scalar* data, std::uint64_t rows,
               std::uint64_t cols) {
  put_raw(out, static_cast<std::uint32_t>(name.size()));
  out.append(name);
  out.push_back(dtype_code<Scalar>());
  put_raw(out, rows);
  put_raw(out, cols);
  out.append(reinterpret_cast<const char*>(data), rows * cols * sizeof(Scalar));
}

template <typename Derived>
void put_matrix(std::string& out, std::string_view name, const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  put_block(out, name, rm.data(), static_cast<std::uint64_t>(rm.rows()),
            static_cast<std::uint64_t>(rm.cols()));
}

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  template <typename T>
  T raw() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> matrix(
      std::string_view expected_name) {
    const auto len = raw<std::uint32_t>();
    need(len);
    const std::string name = bytes_.substr(pos_, len);
    pos_ += len;
    if (name != expected_name)
      throw DataError("bundle: expected block '" + std::string(expected_name) + "', found '" + name + "'");
    const char code = raw<char>();
    if (code != dtype_code<Scalar>()) throw DataError("bundle: block '" + name + "' has wrong dtype");
    const auto rows = raw<std::uint64_t>();
    const auto cols = raw<std::uint64_t>();
    if (cols != 0 && rows > (bytes_.size() - pos_) / cols / sizeof(Scalar))
      throw DataError("bundle: block '" + name + "' is truncated");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(
        static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    const std::size_t n = rows * cols * sizeof(Scalar);
    need(n);
    if (n > 0) std::memcpy(m.data(), bytes_.data() + pos_, n);
    pos_ += n;
    return m;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw DataError("bundle: unexpected end of file");
  }
  const std::string& bytes_;
  std::size_t pos_;
};

template <typename T>
std::optional<T> opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

std::string serialize_bundle(const ModelBundle& b) {
  b.validate();
  const std::string header = header_of(b).dump();
  std::string out;
  out.append(kMagic);
  out.append(" " + std::to_string(b.format_version) + "\n");
  out.append(std::to_string(header.size()) + "\n");
  out.append(header);
  out.push_back('\n');

  put_matrix(out, "scaler.mean", b.scaler.mean().transpose());
  put_matrix(out, "scaler.std", b.scaler.std().transpose());
  for (std::size_t i = 0; i < b.models.size(); ++i) {
    const auto& m = b.models[i];
    const std::string p = "model." + std::to_string(i) + ".";
    put_matrix(out, p + "centroid", m.centroid.transpose());
    put_matrix(out, p + "input_weights", m.regressor.input_weights());
    put_matrix(out, p + "biases", m.regressor.biases().transpose());
    put_matrix(out, p + "output_weights", m.regressor.output_weights());
  }
  put_matrix(out, "store.features", b.store.features);
  put_matrix(out, "store.targets", b.store.targets);
  put_block(out, "store.labels", b.store.labels.data(), b.store.labels.size(), 1);
  return out;
}

ModelBundle deserialize_bundle(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != kMagic) throw DataError("not a model bundle");
  if (version != ModelBundle::kFormatVersion)
    throw DataError("unsupported bundle format version " + std::to_string(version));
  std::size_t header_len = 0;
  in >> header_len;
  if (!in || in.get() != '\n') throw DataError("bundle: malformed preamble");
  const auto header_pos = static_cast<std::size_t>(in.tellg());
  if (header_pos + header_len + 1 > bytes.size()) throw DataError("bundle: truncated header");

  ModelBundle b;
  try {
    const json h = json::parse(bytes.substr(header_pos, header_len));
    b.format_version = h.at("format_version").get<int>();
    b.seed = h.at("seed").get<std::uint64_t>();
    const auto& s = h.at("sample");
    b.sample.l = s.at("l").get<std::size_t>();
    b.sample.stride = s.at("stride").get<std::size_t>();
    b.sample.tau_t = s.at("tau_t").get<double>();
    b.sample.k_tail = s.at("k_tail").get<std::size_t>();
    b.sample.horizon_tol = opt<double>(s.at("horizon_tol"));
    const auto& si = h.at("side_info");
    const auto mode = parse_side_info_mode(si.at("mode").get<std::string>());
    if (!mode) throw DataError("bundle: unknown side_info mode");
    b.side_info.mode = *mode;
    b.side_info.region_cell_deg = si.at("region_cell_deg").get<double>();
    const auto& e = h.at("ensemble");
    b.config.k_clusters = e.at("k_clusters").get<std::size_t>();
    b.config.h_hidden = e.at("h_hidden").get<std::size_t>();
    b.config.ridge = e.at("ridge").get<double>();
    b.config.k_nn = e.at("k_nn").get<std::size_t>();
    b.config.r_select = e.at("r_select").get<std::size_t>();
    b.config.sigma = opt<double>(e.at("sigma"));
    b.config.min_cluster_size = opt<std::size_t>(e.at("min_cluster_size"));
    const auto& lay = h.at("layout");
    b.layout.names = lay.at("names").get<std::vector<std::string>>();
    b.layout.time_unit = lay.at("time_unit").get<std::string>();
    b.layout.position_unit = lay.at("position_unit").get<std::string>();
    std::map<int, StaticImputer::Medians> per_type;
    for (const auto& pt : h.at("imputer").at("per_type")) {
      const auto& m = pt.at("medians");
      per_type[pt.at("vessel_type").get<int>()] = {null_to_nan(m.at(0)), null_to_nan(m.at(1)),
                                                   null_to_nan(m.at(2))};
    }
    const auto& g = h.at("imputer").at("global");
    b.imputer.set(std::move(per_type), {g.at(0).get<double>(), g.at(1).get<double>(),
                                        g.at(2).get<double>()});
    const auto& models = h.at("models");
    const auto counts = models.at("train_counts").get<std::vector<std::size_t>>();
    b.models.resize(models.at("count").get<std::size_t>());
    if (counts.size() != b.models.size()) throw DataError("bundle: model count mismatch");

    Reader r(bytes, header_pos + header_len + 1);
    const Eigen::VectorXd mean = r.matrix<double>("scaler.mean").row(0).transpose();
    const Eigen::VectorXd sd = r.matrix<double>("scaler.std").row(0).transpose();
    b.scaler = Scaler(mean, sd);
    for (std::size_t i = 0; i < b.models.size(); ++i) {
      const std::string p = "model." + std::to_string(i) + ".";
      auto& m = b.models[i];
      m.centroid = r.matrix<double>(p + "centroid").row(0).transpose();
      Eigen::MatrixXd w = r.matrix<double>(p + "input_weights");
      Eigen::VectorXd bias = r.matrix<double>(p + "biases").row(0).transpose();
      Eigen::MatrixXd beta = r.matrix<double>(p + "output_weights");
      m.regressor = ElmRegressor(std::move(w), std::move(bias), std::move(beta));
      m.train_count = counts[i];
    }
    b.store.features = r.matrix<float>("store.features");
    b.store.targets = r.matrix<float>("store.targets");
    const auto labels = r.matrix<std::int32_t>("store.labels");
    b.store.labels.assign(labels.data(), labels.data() + labels.size());
    if (!r.done()) throw DataError("bundle: trailing bytes");
  } catch (const json::exception& ex) {
    throw DataError(std::string("bundle: bad header: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw DataError(std::string("bundle: ") + ex.what());
  }
  b.validate();
  b.refresh_residuals();
  return b;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  const std::string bytes = serialize_bundle(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open bundle " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_bundle(ss.str());
}

}  // namespace aispath
