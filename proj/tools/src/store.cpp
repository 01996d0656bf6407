#include "aispath/cli/store.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aispath/cli/csv_ingest.hpp"
#include "aispath/cli/format.hpp"
#include "aispath/domain/errors.hpp"

namespace aispath::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTrajectoryMagic = "# aispath-trajectory 1";
constexpr const char* kTrajectoryColumns =
    "tau,mmsi,lat,lon,sog,cog,heading,cog_sine,interpolated,vessel_type,length,width,draft";

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
std::optional<double> json_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::ios_base::failure("cannot open " + p.string());
  return in;
}

double need_double(const std::string& s, const std::string& where) {
  auto v = parse_double(s);
  if (!v) throw DataError(where + ": bad number '" + s + "'");
  return *v;
}

std::optional<double> maybe_double(const std::string& s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  return need_double(s, where);
}

json read_json(const fs::path& p) {
  auto in = open_in(p);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw DataError(p.string() + ": " + ex.what());
  }
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  json meta = {{"id", t.id},
               {"vessel_type", t.meta.vessel_type},
               {"length", opt_json(t.meta.length)},
               {"width", opt_json(t.meta.width)},
               {"draft", opt_json(t.meta.draft)}};
  out << kTrajectoryMagic << "\n# " << meta.dump() << '\n' << kTrajectoryColumns << '\n';
  for (const auto& m : t.messages) {
    out << fmt(m.tau) << ',' << m.mmsi << ',' << fmt(m.lat) << ',' << fmt(m.lon) << ',' << fmt(m.sog)
        << ',' << fmt(m.cog) << ',' << fmt_opt(m.heading) << ',' << fmt_opt(m.cog_sine) << ','
        << (m.interpolated ? 1 : 0) << ',' << m.meta.vessel_type << ',' << fmt_opt(m.meta.length)
        << ',' << fmt_opt(m.meta.width) << ',' << fmt_opt(m.meta.draft) << '\n';
  }
}

Trajectory read_trajectory(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryMagic)
    throw DataError(source + ": not an aispath trajectory file");
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw DataError(source + ": missing header");
  Trajectory t;
  try {
    const json meta = json::parse(line.substr(2));
    t.id = meta.at("id").get<std::string>();
    t.meta.vessel_type = meta.at("vessel_type").get<int>();
    t.meta.length = json_opt(meta.at("length"));
    t.meta.width = json_opt(meta.at("width"));
    t.meta.draft = json_opt(meta.at("draft"));
  } catch (const json::exception& ex) {
    throw DataError(source + ": bad header: " + ex.what());
  }
  if (!std::getline(in, line) || line != kTrajectoryColumns)
    throw DataError(source + ": unexpected column header");
  std::size_t row = 3;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(row);
    const auto f = split_csv_line(line);
    if (f.size() != 13) throw DataError(where + ": expected 13 fields");
    AisMessage m;
    m.tau = need_double(f[0], where);
    const auto mmsi = parse_int64(f[1]);
    if (!mmsi) throw DataError(where + ": bad mmsi");
    m.mmsi = *mmsi;
    m.lat = need_double(f[2], where);
    m.lon = need_double(f[3], where);
    m.sog = need_double(f[4], where);
    m.cog = f[5] == "nan" ? std::numeric_limits<double>::quiet_NaN() : need_double(f[5], where);
    m.heading = maybe_double(f[6], where);
    m.cog_sine = maybe_double(f[7], where);
    m.interpolated = f[8] == "1";
    const auto vt = parse_int64(f[9]);
    if (!vt) throw DataError(where + ": bad vessel type");
    m.meta.vessel_type = static_cast<int>(*vt);
    m.meta.length = maybe_double(f[10], where);
    m.meta.width = maybe_double(f[11], where);
    m.meta.draft = maybe_double(f[12], where);
    t.messages.push_back(m);
  }
  return t;
}

void write_store(const fs::path& dir, std::span<const Trajectory> trajectories, const std::string& stage) {
  fs::create_directories(dir);
  // drop files of a previous store in the same place
  if (fs::exists(dir / "index.json")) {
    const json old = read_json(dir / "index.json");
    for (const auto& e : old.value("trajectories", json::array()))
      fs::remove(dir / e.at("file").get<std::string>());
  }
  json entries = json::array();
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "t%06zu.csv", i);
    auto out = open_out(dir / name);
    write_trajectory(out, trajectories[i]);
    if (!out) throw std::ios_base::failure("write failed: " + (dir / name).string());
    entries.push_back({{"id", trajectories[i].id}, {"file", name}, {"messages", trajectories[i].size()}});
  }
  json index = {{"format", "aispath-store"}, {"version", 1}, {"stage", stage}, {"trajectories", entries}};
  auto out = open_out(dir / "index.json");
  out << index.dump(1) << '\n';
}

std::vector<Trajectory> read_store(const fs::path& dir) {
  if (!fs::exists(dir / "index.json")) throw std::ios_base::failure("no trajectory store at " + dir.string());
  const json index = read_json(dir / "index.json");
  if (index.value("format", "") != "aispath-store" || index.value("version", 0) != 1)
    throw DataError(dir.string() + ": unsupported store format");
  std::vector<Trajectory> out;
  for (const auto& e : index.at("trajectories")) {
    const fs::path p = dir / e.at("file").get<std::string>();
    auto in = open_in(p);
    out.push_back(read_trajectory(in, p.string()));
    if (out.back().id != e.at("id").get<std::string>())
      throw DataError(p.string() + ": id does not match the index");
  }
  return out;
}

std::string store_stage(const fs::path& dir) {
  return read_json(dir / "index.json").value("stage", "");
}

void write_samples(const fs::path& dir, const SampleSet& set) {
  fs::create_directories(dir);
  json meta = {{"format", "aispath-samples"},
               {"version", 1},
               {"sample",
                {{"l", set.sample.l},
                 {"stride", set.sample.stride},
                 {"tau_t", set.sample.tau_t},
                 {"horizon_tol", set.sample.horizon_tol ? json(*set.sample.horizon_tol) : json(nullptr)},
                 {"k_tail", set.sample.k_tail}}},
               {"side_info",
                {{"mode", std::string(to_string(set.side_info.mode))},
                 {"region_cell_deg", set.side_info.region_cell_deg}}},
               {"features", set.names},
               {"time_unit", "s"},
               {"position_unit", "deg"},
               {"count", set.pairs.size()}};
  {
    auto out = open_out(dir / "samples.json");
    out << meta.dump(1) << '\n';
  }
  auto out = open_out(dir / "samples.csv");
  out << "trajectory_id,window_start,target_index,target_tau,origin_lat,origin_lon,theta,target_x,"
         "target_y,target_lat,target_lon";
  for (const auto& n : set.names) out << ',' << n;
  out << '\n';
  for (const auto& p : set.pairs) {
    out << csv_field(p.trajectory_id) << ',' << p.window_start << ',' << p.target_index << ','
        << fmt(p.target_tau) << ',' << fmt(p.frame.origin().lat) << ',' << fmt(p.frame.origin().lon)
        << ',' << fmt(p.frame.theta()) << ',' << fmt(p.target.x()) << ',' << fmt(p.target.y()) << ','
        << fmt(p.target_geo.lat) << ',' << fmt(p.target_geo.lon);
    for (double v : p.features.values) out << ',' << (std::isnan(v) ? std::string() : fmt(v));
    out << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed: " + (dir / "samples.csv").string());
}

SampleSet read_samples(const fs::path& dir) {
  if (!fs::exists(dir / "samples.json")) throw std::ios_base::failure("no samples at " + dir.string());
  const json meta = read_json(dir / "samples.json");
  SampleSet set;
  try {
    if (meta.at("format") != "aispath-samples" || meta.at("version") != 1)
      throw DataError(dir.string() + ": unsupported samples format");
    const auto& s = meta.at("sample");
    set.sample.l = s.at("l").get<std::size_t>();
    set.sample.stride = s.at("stride").get<std::size_t>();
    set.sample.tau_t = s.at("tau_t").get<double>();
    if (!s.at("horizon_tol").is_null()) set.sample.horizon_tol = s.at("horizon_tol").get<double>();
    set.sample.k_tail = s.at("k_tail").get<std::size_t>();
    const auto mode = parse_side_info_mode(meta.at("side_info").at("mode").get<std::string>());
    if (!mode) throw DataError(dir.string() + ": unknown side_info mode");
    set.side_info.mode = *mode;
    set.side_info.region_cell_deg = meta.at("side_info").at("region_cell_deg").get<double>();
    set.names = meta.at("features").get<std::vector<std::string>>();
  } catch (const json::exception& ex) {
    throw DataError(dir.string() + "/samples.json: " + ex.what());
  }
  auto in = open_in(dir / "samples.csv");
  std::string line;
  std::getline(in, line);
  const std::size_t fixed = 11;
  const auto header = split_csv_line(line);
  if (header.size() != fixed + set.names.size()) throw DataError("samples.csv header does not match samples.json");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::string where = (dir / "samples.csv").string() + ":" + std::to_string(row);
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw DataError(where + ": wrong field count");
    TrainingPair p;
    p.trajectory_id = f[0];
    const auto ws = parse_int64(f[1]);
    const auto ti = parse_int64(f[2]);
    if (!ws || !ti || *ws < 0 || *ti < 0) throw DataError(where + ": bad index");
    p.window_start = static_cast<std::size_t>(*ws);
    p.target_index = static_cast<std::size_t>(*ti);
    p.target_tau = need_double(f[3], where);
    p.frame = LocalFrame({need_double(f[4], where), need_double(f[5], where)}, need_double(f[6], where));
    p.target = {need_double(f[7], where), need_double(f[8], where)};
    p.target_geo = {need_double(f[9], where), need_double(f[10], where)};
    p.features.values.reserve(set.names.size());
    for (std::size_t k = fixed; k < f.size(); ++k)
      p.features.values.push_back(f[k].empty() ? std::numeric_limits<double>::quiet_NaN()
                                               : need_double(f[k], where));
    set.pairs.push_back(std::move(p));
  }
  return set;
}

void write_anomalies(const fs::path& path, std::span<const AnomalyRecord> records) {
  auto out = open_out(path);
  out << "trajectory_id,kind,first,last,measure\n";
  for (const auto& r : records)
    out << csv_field(r.trajectory_id) << ',' << to_string(r.mark.kind) << ',' << r.mark.first << ','
        << r.mark.last << ',' << fmt(r.mark.measure) << '\n';
}

}  // namespace aispath::cli
