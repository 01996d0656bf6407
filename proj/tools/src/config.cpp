#include "aispath/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "aispath/domain/errors.hpp"

namespace aispath::cli {

using nlohmann::json;

namespace {

json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

void IngestConfig::validate() const {
  if (!(split_gap > 0.0)) throw ConfigError("ingest.split_gap must be positive");
  if (min_length < 1) throw ConfigError("ingest.min_length must be at least 1");
}

void AppConfig::validate() const {
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  ingest.validate();
  preprocess.validate();
  outlier.validate();
  sample.validate();
  side_info.validate();
  ensemble.validate();
  eval.validate();
  synth.validate();
}

json to_json(const AppConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  const auto& col = c.ingest.columns;
  j["ingest"] = {{"split_gap", c.ingest.split_gap},
                 {"min_length", c.ingest.min_length},
                 {"columns",
                  {{"mmsi", col.mmsi},
                   {"time", col.time},
                   {"lat", col.lat},
                   {"lon", col.lon},
                   {"sog", col.sog},
                   {"cog", col.cog},
                   {"heading", col.heading},
                   {"vessel_type", col.vessel_type},
                   {"length", col.length},
                   {"width", col.width},
                   {"draft", col.draft}}}};
  json caps;
  for (const auto& [cat, v] : c.preprocess.s_max.caps) caps[std::string(to_string(cat))] = v;
  j["preprocess"] = {{"s0", c.preprocess.s0},
                     {"d0_filter", c.preprocess.d0_filter},
                     {"t0", c.preprocess.t0},
                     {"t_ref", c.preprocess.t_ref},
                     {"min_messages", c.preprocess.min_messages},
                     {"s_max", caps}};
  j["outlier"] = {{"d0_rdp", c.outlier.d0_rdp},
                  {"delta_a", num(c.outlier.delta_a)},
                  {"delta_theta", c.outlier.delta_theta},
                  {"loop_len_max", c.outlier.loop_len_max},
                  {"removal_window", c.outlier.removal_window},
                  {"min_fragment", c.outlier.min_fragment}};
  j["sample"] = {{"l", c.sample.l},
                 {"stride", c.sample.stride},
                 {"tau_t", c.sample.tau_t},
                 {"horizon_tol", opt_json(c.sample.horizon_tol)},
                 {"k_tail", c.sample.k_tail}};
  j["side_info"] = {{"mode", std::string(to_string(c.side_info.mode))},
                    {"region_cell_deg", c.side_info.region_cell_deg}};
  j["ensemble"] = {{"k_clusters", c.ensemble.k_clusters},
                   {"h_hidden", c.ensemble.h_hidden},
                   {"ridge", c.ensemble.ridge},
                   {"k_nn", c.ensemble.k_nn},
                   {"r_select", c.ensemble.r_select},
                   {"sigma", opt_json(c.ensemble.sigma)},
                   {"min_cluster_size", opt_json(c.ensemble.min_cluster_size)}};
  j["eval"] = {{"horizons", c.eval.horizons},
               {"folds", c.eval.folds},
               {"methods", c.eval.methods},
               {"plot_data", c.eval.plot_data}};
  const auto& s = c.synth;
  j["synth"] = {{"family", std::string(to_string(s.family))},
                {"count", s.count},
                {"duration_s", s.duration_s},
                {"speed_mean", s.speed_mean},
                {"speed_jitter", s.speed_jitter},
                {"interval_mean", s.interval_mean},
                {"interval_jitter", s.interval_jitter},
                {"position_noise", s.position_noise},
                {"course_noise", s.course_noise},
                {"speed_noise", s.speed_noise},
                {"lat_min", s.lat_min},
                {"lat_max", s.lat_max},
                {"lon_min", s.lon_min},
                {"lon_max", s.lon_max},
                {"turn_radius_min", s.turn_radius_min},
                {"turn_radius_max", s.turn_radius_max},
                {"turn_sign", s.turn_sign},
                {"sway_amplitude", s.sway_amplitude},
                {"sway_wavelength_min", s.sway_wavelength_min},
                {"sway_wavelength_max", s.sway_wavelength_max},
                {"loop_radius", s.loop_radius},
                {"loop_gap", s.loop_gap},
                {"apex_angle", s.apex_angle},
                {"vessel_type", s.vessel_type},
                {"mmsi_base", s.mmsi_base},
                {"id_prefix", s.id_prefix},
                {"start_time", s.start_time}};
  return j;
}

AppConfig from_json(const json& j) {
  AppConfig c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.jobs = get_count(j, "jobs");

    const auto& in = j.at("ingest");
    c.ingest.split_gap = get_num(in, "split_gap");
    c.ingest.min_length = get_count(in, "min_length");
    const auto& col = in.at("columns");
    auto& m = c.ingest.columns;
    m.mmsi = col.at("mmsi").get<std::string>();
    m.time = col.at("time").get<std::string>();
    m.lat = col.at("lat").get<std::string>();
    m.lon = col.at("lon").get<std::string>();
    m.sog = col.at("sog").get<std::string>();
    m.cog = col.at("cog").get<std::string>();
    m.heading = col.at("heading").get<std::string>();
    m.vessel_type = col.at("vessel_type").get<std::string>();
    m.length = col.at("length").get<std::string>();
    m.width = col.at("width").get<std::string>();
    m.draft = col.at("draft").get<std::string>();

    const auto& p = j.at("preprocess");
    c.preprocess.s0 = get_num(p, "s0");
    c.preprocess.d0_filter = get_num(p, "d0_filter");
    c.preprocess.t0 = get_num(p, "t0");
    c.preprocess.t_ref = get_num(p, "t_ref");
    c.preprocess.min_messages = get_count(p, "min_messages");
    for (const auto& [name, v] : p.at("s_max").items()) {
      const auto cat = parse_vessel_category(name);
      if (!cat) throw ConfigError("unknown vessel category '" + name + "' in preprocess.s_max");
      c.preprocess.s_max.caps[*cat] = get_num(p.at("s_max"), name.c_str());
    }

    const auto& o = j.at("outlier");
    c.outlier.d0_rdp = get_num(o, "d0_rdp");
    c.outlier.delta_a = get_num(o, "delta_a");
    c.outlier.delta_theta = get_num(o, "delta_theta");
    c.outlier.loop_len_max = get_num(o, "loop_len_max");
    c.outlier.removal_window = get_count(o, "removal_window");
    c.outlier.min_fragment = get_count(o, "min_fragment");

    const auto& s = j.at("sample");
    c.sample.l = get_count(s, "l");
    c.sample.stride = get_count(s, "stride");
    c.sample.tau_t = get_num(s, "tau_t");
    if (!s.at("horizon_tol").is_null()) c.sample.horizon_tol = get_num(s, "horizon_tol");
    c.sample.k_tail = get_count(s, "k_tail");

    const auto& si = j.at("side_info");
    const auto mode = parse_side_info_mode(si.at("mode").get<std::string>());
    if (!mode) throw ConfigError("side_info.mode must be none, vessel_type or region");
    c.side_info.mode = *mode;
    c.side_info.region_cell_deg = get_num(si, "region_cell_deg");

    const auto& e = j.at("ensemble");
    c.ensemble.k_clusters = get_count(e, "k_clusters");
    c.ensemble.h_hidden = get_count(e, "h_hidden");
    c.ensemble.ridge = get_num(e, "ridge");
    c.ensemble.k_nn = get_count(e, "k_nn");
    c.ensemble.r_select = get_count(e, "r_select");
    if (!e.at("sigma").is_null()) c.ensemble.sigma = get_num(e, "sigma");
    if (!e.at("min_cluster_size").is_null()) c.ensemble.min_cluster_size = get_count(e, "min_cluster_size");

    const auto& ev = j.at("eval");
    c.eval.horizons = ev.at("horizons").get<std::vector<double>>();
    c.eval.folds = get_count(ev, "folds");
    c.eval.methods = ev.at("methods").get<std::vector<std::string>>();
    c.eval.plot_data = ev.at("plot_data").get<bool>();

    const auto& y = j.at("synth");
    const auto fam = parse_route_family(y.at("family").get<std::string>());
    if (!fam) throw ConfigError("synth.family must be straight, arc, s-curve, loop-injected or sharp-turn-injected");
    c.synth.family = *fam;
    c.synth.count = get_count(y, "count");
    c.synth.duration_s = get_num(y, "duration_s");
    c.synth.speed_mean = get_num(y, "speed_mean");
    c.synth.speed_jitter = get_num(y, "speed_jitter");
    c.synth.interval_mean = get_num(y, "interval_mean");
    c.synth.interval_jitter = get_num(y, "interval_jitter");
    c.synth.position_noise = get_num(y, "position_noise");
    c.synth.course_noise = get_num(y, "course_noise");
    c.synth.speed_noise = get_num(y, "speed_noise");
    c.synth.lat_min = get_num(y, "lat_min");
    c.synth.lat_max = get_num(y, "lat_max");
    c.synth.lon_min = get_num(y, "lon_min");
    c.synth.lon_max = get_num(y, "lon_max");
    c.synth.turn_radius_min = get_num(y, "turn_radius_min");
    c.synth.turn_radius_max = get_num(y, "turn_radius_max");
    c.synth.turn_sign = y.at("turn_sign").get<int>();
    c.synth.sway_amplitude = get_num(y, "sway_amplitude");
    c.synth.sway_wavelength_min = get_num(y, "sway_wavelength_min");
    c.synth.sway_wavelength_max = get_num(y, "sway_wavelength_max");
    c.synth.loop_radius = get_num(y, "loop_radius");
    c.synth.loop_gap = get_num(y, "loop_gap");
    c.synth.apex_angle = get_num(y, "apex_angle");
    c.synth.vessel_type = y.at("vessel_type").get<int>();
    c.synth.mmsi_base = y.at("mmsi_base").get<std::int64_t>();
    c.synth.id_prefix = y.at("id_prefix").get<std::string>();
    c.synth.start_time = get_num(y, "start_time");
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
  c.eval.seed = c.seed;
  c.eval.jobs = c.jobs;
  c.ensemble.jobs = c.jobs;
  c.synth.seed = c.seed;
  c.validate();
  return c;
}

void merge_strict(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError("config" + (where.empty() ? "" : " section '" + where + "'") + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    json& slot = base[key];
    // s_max is a map; other objects are fixed records
    if (slot.is_object() && value.is_object() && path != "preprocess.s_max")
      merge_strict(slot, value, path);
    else if (path == "preprocess.s_max" && value.is_object())
      for (const auto& [k, v] : value.items()) slot[k] = v;
    else
      slot = value;
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' must look like section.key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  // rebuild as a nested patch so merge_strict does the key checking
  json patch = value;
  std::string rest = path;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1))
    parts.push_back(rest.substr(0, pos));
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  merge_strict(j, patch);
}

AppConfig load_config(const std::filesystem::path* file, const std::vector<std::string>& overrides) {
  json j = to_json(AppConfig{});
  if (file) {
    std::ifstream in(*file);
    if (!in) throw std::ios_base::failure("cannot open config file " + file->string());
    json patch;
    try {
      patch = json::parse(in);
    } catch (const json::parse_error& ex) {
      throw ConfigError("config file " + file->string() + ": " + ex.what());
    }
    merge_strict(j, patch);
  }
  for (const auto& o : overrides) apply_override(j, o);
  return from_json(j);
}

}  // namespace aispath::cli
