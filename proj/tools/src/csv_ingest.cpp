#include "aispath/cli/csv_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "aispath/cli/format.hpp"
#include "aispath/cli/log.hpp"
#include "aispath/domain/errors.hpp"

namespace aispath::cli {

namespace {

bool read_int(std::string_view s, int& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc{} && r.ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<double> parse_iso8601(std::string_view s) {
  s = trim(s);
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      s[16] != ':')
    return std::nullopt;
  int y, mo, d, h, mi, sec;
  if (!read_int(s.substr(0, 4), y) || !read_int(s.substr(5, 2), mo) || !read_int(s.substr(8, 2), d) ||
      !read_int(s.substr(11, 2), h) || !read_int(s.substr(14, 2), mi) || !read_int(s.substr(17, 2), sec))
    return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 60 || h < 0 || mi < 0 || sec < 0) return std::nullopt;
  double frac = 0.0;
  std::string_view rest = s.substr(19);
  if (!rest.empty() && rest.front() == '.') {
    std::size_t k = 1;
    while (k < rest.size() && rest[k] >= '0' && rest[k] <= '9') ++k;
    if (k == 1) return std::nullopt;
    std::string digits = "0" + std::string(rest.substr(0, k));
    frac = std::stod(digits);
    rest.remove_prefix(k);
  }
  if (rest == "Z" || rest == "+00:00") rest = {};
  if (!rest.empty()) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec + frac;
}

std::string format_iso8601(double tau) {
  using namespace std::chrono;
  const double whole = std::floor(tau);
  const auto secs = static_cast<std::int64_t>(whole);
  const sys_days day{days{secs >= 0 ? secs / 86400 : (secs - 86399) / 86400}};
  const std::int64_t sod = secs - day.time_since_epoch().count() * 86400LL;
  const year_month_day ymd{day};
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                static_cast<long long>(sod % 60));
  std::string out = buf;
  const double frac = tau - whole;
  if (frac > 0.0) {
    std::snprintf(buf, sizeof buf, "%.6f", frac);
    std::string f = buf + 1;  // drop the leading 0
    while (f.size() > 2 && f.back() == '0') f.pop_back();
    out += f;
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r' && c != '\n') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::vector<AisMessage> read_ais_csv(const std::filesystem::path& path, const IngestConfig& cfg,
                                     IngestStats& stats) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open input " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name, bool required) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == name) return static_cast<int>(i);
    if (required) throw DataError(path.string() + ": missing column '" + name + "'");
    return -1;
  };
  const auto& m = cfg.columns;
  const int c_mmsi = column(m.mmsi, true), c_time = column(m.time, true), c_lat = column(m.lat, true),
            c_lon = column(m.lon, true), c_sog = column(m.sog, true), c_cog = column(m.cog, true);
  const int c_head = column(m.heading, false), c_type = column(m.vessel_type, false),
            c_len = column(m.length, false), c_wid = column(m.width, false),
            c_dra = column(m.draft, false);

  std::vector<AisMessage> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++stats.rows;
    const auto f = split_csv_line(line);
    auto field = [&](int c) -> std::string_view {
      return c >= 0 && static_cast<std::size_t>(c) < f.size() ? trim(f[static_cast<std::size_t>(c)])
                                                                : std::string_view{};
    };
    AisMessage msg;
    const auto tau = parse_iso8601(field(c_time));
    const auto mmsi = parse_int64(field(c_mmsi));
    const auto lat = parse_double(field(c_lat));
    const auto lon = parse_double(field(c_lon));
    const auto sog = parse_double(field(c_sog));
    const auto cog = parse_double(field(c_cog));
    if (!tau || !mmsi || !lat || !lon || !sog || !cog) {
      ++stats.skipped;
      if (stats.skipped <= 5) log_warn(path.string() + ":" + std::to_string(line_no) + ": unparseable row skipped");
      continue;
    }
    msg.mmsi = *mmsi;
    msg.tau = *tau;
    msg.lat = *lat;
    msg.lon = *lon;
    msg.sog = *sog;
    msg.cog = *cog;
    // 511 is the AIS "heading not available" value
    if (auto h = parse_double(field(c_head)); h && *h >= 0.0 && *h < 360.0) msg.heading = *h;
    if (auto t = parse_int64(field(c_type))) msg.meta.vessel_type = static_cast<int>(*t);
    auto dim = [&](int c) -> std::optional<double> {
      auto v = parse_double(field(c));
      if (v && *v > 0.0) return v;
      return std::nullopt;
    };
    msg.meta.length = dim(c_len);
    msg.meta.width = dim(c_wid);
    msg.meta.draft = dim(c_dra);
    rows.push_back(msg);
  }
  return rows;
}

std::vector<Trajectory> group_voyages(std::vector<AisMessage> rows, const IngestConfig& cfg,
                                      IngestStats& stats) {
  std::map<std::int64_t, std::vector<AisMessage>> by_vessel;
  for (auto& r : rows) by_vessel[r.mmsi].push_back(std::move(r));
  stats.vessels += by_vessel.size();

  std::vector<Trajectory> out;
  for (auto& [mmsi, msgs] : by_vessel) {
    std::stable_sort(msgs.begin(), msgs.end(),
                     [](const AisMessage& a, const AisMessage& b) { return a.tau < b.tau; });
    std::size_t voyage = 0;
    std::size_t begin = 0;
    auto flush = [&](std::size_t end) {
      if (end - begin < cfg.min_length) {
        ++stats.short_dropped;
      } else {
        Trajectory t;
        t.id = std::to_string(mmsi) + "-" + std::to_string(voyage);
        t.messages.assign(msgs.begin() + static_cast<std::ptrdiff_t>(begin),
                          msgs.begin() + static_cast<std::ptrdiff_t>(end));
        t.meta = t.messages.front().meta;
        out.push_back(std::move(t));
      }
      ++voyage;
      begin = end;
    };
    for (std::size_t k = 1; k < msgs.size(); ++k)
      if (msgs[k].tau - msgs[k - 1].tau > cfg.split_gap) flush(k);
    flush(msgs.size());
  }
  stats.trajectories += out.size();
  return out;
}

std::vector<Trajectory> ingest(std::span<const std::filesystem::path> paths, const IngestConfig& cfg,
                               IngestStats& stats) {
  cfg.validate();
  std::vector<AisMessage> rows;
  for (const auto& p : paths) {
    auto r = read_ais_csv(p, cfg, stats);
    std::move(r.begin(), r.end(), std::back_inserter(rows));
  }
  return group_voyages(std::move(rows), cfg, stats);
}

void write_ais_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << "MMSI,BaseDateTime,LAT,LON,SOG,COG,Heading,VesselType,Length,Width,Draft\n";
  for (const auto& t : trajectories) {
    for (const auto& m : t.messages) {
      out << m.mmsi << ',' << format_iso8601(m.tau) << ',' << fmt(m.lat) << ',' << fmt(m.lon) << ','
          << fmt(m.sog) << ',' << fmt(m.cog) << ',' << (m.heading ? fmt(*m.heading) : "511") << ','
          << m.meta.vessel_type << ',' << fmt_opt(m.meta.length) << ',' << fmt_opt(m.meta.width)
          << ',' << fmt_opt(m.meta.draft) << '\n';
    }
  }
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

}  // namespace aispath::cli
