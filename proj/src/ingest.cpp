#include "spillnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "spillnet/error.hpp"

namespace spillnet {

Date parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  auto bad = [&] { return ValidationError(fmt::format("invalid date '{}'", text)); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc() || ptr != text.data() + pos + len) throw bad();
  };
  num(0, 4, y);
  num(5, 2, m);
  num(8, 2, d);
  Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_date(const Date& date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

std::vector<std::string> ids_of(const std::vector<SeriesId>& series) {
  std::vector<std::string> ids;
  ids.reserve(series.size());
  for (const auto& s : series) ids.push_back(s.id);
  return ids;
}

void validate_bar(const OhlcBar& bar, const std::string& series, const Date& date) {
  auto fail = [&](const char* what) {
    return ValidationError(fmt::format("series '{}' on {}: {}", series, format_date(date), what));
  };
  if (!std::isfinite(bar.open) || !std::isfinite(bar.high) || !std::isfinite(bar.low) ||
      !std::isfinite(bar.close)) {
    throw fail("non-finite price");
  }
  if (bar.high < bar.low) throw fail("high < low");
  if (bar.open < bar.low || bar.open > bar.high) throw fail("open outside [low, high]");
  if (bar.close < bar.low || bar.close > bar.high) throw fail("close outside [low, high]");
}

double garman_klass(const OhlcBar& bar) {
  const double o = bar.open, h = bar.high, l = bar.low, c = bar.close;
  return 0.511 * (h - l) * (h - l) -
         0.019 * ((c - o) * (h + l - 2.0 * o) - 2.0 * (h - o) * (l - o)) -
         0.383 * (c - o) * (c - o);
}

namespace {

IngestConfig ingest_config_from(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("ingest config must be a JSON object");
  IngestConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    const auto& v = it.value();
    try {
      if (key == "already_log") {
        cfg.already_log = v.get<bool>();
      } else if (key == "exclusion_dates") {
        for (const auto& d : v) cfg.exclusion_dates.push_back(parse_date(d.get<std::string>()));
      } else if (key == "max_drop_fraction") {
        cfg.max_drop_fraction = v.get<double>();
      } else if (key == "adf_lag") {
        cfg.adf_lag = v.get<int>();
      } else if (key == "min_dates") {
        cfg.min_dates = v.get<std::size_t>();
      } else if (key == "series_meta") {
        for (auto m = v.begin(); m != v.end(); ++m) {
          cfg.series_meta[m.key()] = {m.value().value("name", ""), m.value().value("code", "")};
        }
      } else {
        throw ConfigError(fmt::format("unknown ingest config key '{}'", key));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("ingest config key '{}': {}", key, e.what()));
    }
  }
  if (cfg.max_drop_fraction < 0.0 || cfg.max_drop_fraction > 1.0) {
    throw ConfigError("max_drop_fraction must lie in [0, 1]");
  }
  if (cfg.adf_lag < 0) throw ConfigError("adf_lag must be >= 0");
  return cfg;
}

}  // namespace

IngestConfig parse_ingest_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("ingest config: {}", e.what()));
  }
  return ingest_config_from(j);
}

IngestConfig load_ingest_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open ingest config '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_ingest_config(buffer.str());
}

std::string LoadReport::summary() const {
  std::string s = fmt::format("rows read: {}; dates seen: {}; {} date{} dropped; {} exclusion{} applied",
                              rows_read, dates_seen, dates_dropped, dates_dropped == 1 ? "" : "s",
                              exclusions_applied, exclusions_applied == 1 ? "" : "s");
  if (negative_volatilities > 0) {
    s += fmt::format("; {} negative volatility value{}", negative_volatilities,
                     negative_volatilities == 1 ? "" : "s");
  }
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line, std::string_view name) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, fmt::format("cannot parse {} value '{}'", name, field));
  }
  return value;
}

// Raw rows for one series, keyed by date.
struct RawSeries {
  std::string id;
  std::map<Date, OhlcBar> bars;
};

class PanelBuilder {
public:
  RawSeries& series(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return raw_[it->second];
    index_.emplace(id, raw_.size());
    raw_.push_back({id, {}});
    return raw_.back();
  }

  void add(const std::string& id, std::string_view date_text, std::string_view o,
           std::string_view h, std::string_view l, std::string_view c, std::size_t line) {
    if (id.empty()) throw ParseError(line, "empty series_id");
    Date date;
    try {
      date = parse_date(date_text);
    } catch (const ValidationError&) {
      throw ParseError(line, fmt::format("invalid date '{}'", date_text));
    }
    OhlcBar bar{parse_double(o, line, "open"), parse_double(h, line, "high"),
                parse_double(l, line, "low"), parse_double(c, line, "close")};
    auto& s = series(id);
    if (!s.bars.emplace(date, bar).second) {
      throw ParseError(line, fmt::format("duplicate row for series '{}' on {}", id, date_text));
    }
    ++rows_;
  }

  LoadResult finish(const IngestConfig& config) {
    if (raw_.size() < config.min_series) {
      throw LengthError(fmt::format("need at least {} series, found {}", config.min_series, raw_.size()));
    }
    std::map<Date, std::size_t> seen;
    for (const auto& s : raw_)
      for (const auto& [date, bar] : s.bars) ++seen[date];

    LoadResult result;
    auto& report = result.report;
    report.rows_read = rows_;
    report.dates_seen = seen.size();
    for (const auto& [date, n] : seen) {
      if (n == raw_.size()) {
        result.panel.calendar.push_back(date);
      } else {
        report.dropped_dates.push_back(date);
      }
    }
    report.dates_dropped = report.dropped_dates.size();
    const double drop_fraction =
        seen.empty() ? 0.0 : static_cast<double>(report.dates_dropped) / static_cast<double>(seen.size());
    if (drop_fraction > config.max_drop_fraction) {
      throw AlignmentError(fmt::format(
          "{} of {} dates ({:.2f}%) are not shared by every series; limit is {:.2f}%",
          report.dates_dropped, seen.size(), 100.0 * drop_fraction, 100.0 * config.max_drop_fraction));
    }
    if (result.panel.calendar.size() < config.min_dates) {
      throw LengthError(fmt::format("need at least {} aligned dates, found {}", config.min_dates,
                                    result.panel.calendar.size()));
    }

    auto& panel = result.panel;
    panel.exclusion_dates.insert(config.exclusion_dates.begin(), config.exclusion_dates.end());
    for (const auto& s : raw_) {
      SeriesId sid{s.id, {}, {}};
      if (auto m = config.series_meta.find(s.id); m != config.series_meta.end()) {
        sid.name = m->second.first;
        sid.code = m->second.second;
      }
      panel.series_ids.push_back(std::move(sid));
      std::vector<OhlcBar> bars;
      bars.reserve(panel.calendar.size());
      for (const auto& date : panel.calendar) {
        OhlcBar bar = s.bars.at(date);
        if (!config.already_log) {
          if (!(bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0)) {
            throw ValidationError(fmt::format("series '{}' on {}: non-positive price level", s.id,
                                              format_date(date)));
          }
          bar = {std::log(bar.open), std::log(bar.high), std::log(bar.low), std::log(bar.close)};
        }
        validate_bar(bar, s.id, date);
        if (!panel.exclusion_dates.contains(date) && garman_klass(bar) < 0.0) {
          ++report.negative_volatilities;
        }
        bars.push_back(bar);
      }
      panel.bars.push_back(std::move(bars));
    }
    for (const auto& date : panel.calendar) {
      if (panel.exclusion_dates.contains(date)) ++report.exclusions_applied;
    }
    return result;
  }

private:
  std::vector<RawSeries> raw_;
  std::map<std::string, std::size_t> index_;
  std::size_t rows_ = 0;
};

std::vector<std::string_view> header_of(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  return split(line);
}

bool header_is(const std::vector<std::string_view>& fields, std::initializer_list<std::string_view> want) {
  return std::equal(fields.begin(), fields.end(), want.begin(), want.end());
}

void read_long_rows(std::istream& in, PanelBuilder& builder) {
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(line);
    if (f.size() != 6) throw ParseError(line_no, fmt::format("expected 6 fields, found {}", f.size()));
    builder.add(std::string(f[0]), f[1], f[2], f[3], f[4], f[5], line_no);
  }
}

void read_series_file(const std::filesystem::path& path, const std::string& id, PanelBuilder& builder) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open series file '{}'", path.string()));
  std::string line;
  auto header = header_of(in, line);
  if (!header_is(header, {"date", "open", "high", "low", "close"})) {
    throw ParseError(1, fmt::format("'{}': expected header date,open,high,low,close", path.string()));
  }
  builder.series(id);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(line);
    if (f.size() != 5) {
      throw ParseError(line_no, fmt::format("'{}': expected 5 fields, found {}", path.string(), f.size()));
    }
    builder.add(id, f[0], f[1], f[2], f[3], f[4], line_no);
  }
}

LoadResult load_stream(std::istream& in, const std::filesystem::path& base, const IngestConfig& config) {
  std::string line;
  auto header = header_of(in, line);
  PanelBuilder builder;
  if (header_is(header, {"series_id", "date", "open", "high", "low", "close"})) {
    read_long_rows(in, builder);
  } else if (header_is(header, {"series_id", "path"})) {
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto f = split(line);
      if (f.size() != 2) throw ParseError(line_no, "manifest rows need series_id,path");
      std::filesystem::path p{std::string(f[1])};
      if (p.is_relative()) p = base / p;
      read_series_file(p, std::string(f[0]), builder);
    }
  } else {
    throw ParseError(1, "unrecognized header; expected series_id,date,open,high,low,close or series_id,path");
  }
  return builder.finish(config);
}

}  // namespace

LoadResult load_panel(const std::filesystem::path& source, const IngestConfig& config) {
  std::ifstream in(source);
  if (!in) throw ParseError(0, fmt::format("cannot open '{}'", source.string()));
  return load_stream(in, source.parent_path(), config);
}

LoadResult load_panel_text(const std::string& csv, const IngestConfig& config) {
  std::istringstream in(csv);
  return load_stream(in, std::filesystem::current_path(), config);
}

VolatilityPanel panel_volatility(const OhlcPanel& panel) {
  VolatilityPanel out;
  out.series_ids = panel.series_ids;
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < panel.calendar.size(); ++t) {
    if (!panel.exclusion_dates.contains(panel.calendar[t])) {
      keep.push_back(t);
      out.dates.push_back(panel.calendar[t]);
    }
  }
  out.values.resize(static_cast<Eigen::Index>(panel.num_series()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < panel.num_series(); ++i) {
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const double v = garman_klass(panel.bars[i][keep[k]]);
      if (v < 0.0) ++out.negative_count;
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
    }
  }
  return out;
}

VolatilityPanel VolatilityPanel::slice(const Date& first, const Date& last) const {
  auto lo = std::lower_bound(dates.begin(), dates.end(), first);
  auto hi = std::upper_bound(dates.begin(), dates.end(), last);
  if (lo >= hi) {
    throw SliceError(fmt::format("no observations between {} and {}", format_date(first), format_date(last)));
  }
  VolatilityPanel out;
  out.series_ids = series_ids;
  out.dates.assign(lo, hi);
  const auto start = static_cast<Eigen::Index>(lo - dates.begin());
  out.values = values.middleCols(start, static_cast<Eigen::Index>(out.dates.size()));
  out.negative_count = static_cast<std::size_t>((out.values.array() < 0.0).count());
  return out;
}

}  // namespace spillnet
