#include "cnsieve/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace cnsieve {
namespace {

constexpr std::string_view kCsvHeader = "x,empirical,predicted,ratio,kind,mode";

uint64_t parse_u64_field(std::string_view field, const char* what) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::invalid_argument(std::string("parse_csv: bad integer in column ") + what);
  }
  return out;
}

double parse_double_field(std::string_view field, const char* what) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::invalid_argument(std::string("parse_csv: bad number in column ") + what);
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 10);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, ptr);
}

const char* prediction_mode_name(PredictionMode mode) {
  return mode == PredictionMode::integral ? "integral" : "paper";
}

PredictionMode parse_prediction_mode(std::string_view text) {
  if (text == "paper") return PredictionMode::paper_expansion;
  if (text == "integral") return PredictionMode::integral;
  throw std::invalid_argument("parse_prediction_mode: expected \"paper\" or \"integral\"");
}

std::vector<ComparisonRow> compare_series(const ConstellationKind& kind,
                                          const std::vector<uint64_t>& xs, PredictionMode mode,
                                          const PrimeTable& table, const ConstantBundle& constants,
                                          unsigned threads) {
  if (xs.empty()) throw std::invalid_argument("compare_series: xs must be non-empty");
  if (xs.front() < 4) throw std::invalid_argument("compare_series: xs must start at >= 4");
  for (size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] <= xs[i - 1]) {
      throw std::invalid_argument("compare_series: xs must be strictly ascending");
    }
  }
  const ConstellationRun run = run_constellation(kind, xs.back(), table, threads);
  const std::string kind_label = kind_name(kind);
  const std::string mode_label = prediction_mode_name(mode);
  std::vector<ComparisonRow> rows;
  rows.reserve(xs.size());
  for (uint64_t x : xs) {
    ComparisonRow row;
    row.x = x;
    row.empirical = count_at(run, x);
    row.predicted = predict(kind, static_cast<double>(x), mode, constants);
    row.ratio = static_cast<double>(row.empirical) / row.predicted;
    row.kind = kind_label;
    row.mode = mode_label;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_csv(const std::vector<ComparisonRow>& rows) {
  std::string out{kCsvHeader};
  out.push_back('\n');
  for (const ComparisonRow& row : rows) {
    out += std::to_string(row.x);
    out.push_back(',');
    out += std::to_string(row.empirical);
    out.push_back(',');
    out += format_number(row.predicted);
    out.push_back(',');
    out += format_number(row.ratio);
    out.push_back(',');
    out += row.kind;
    out.push_back(',');
    out += row.mode;
    out.push_back('\n');
  }
  return out;
}

std::string render_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::json doc;
  doc["kind"] = rows.empty() ? "" : rows.front().kind;
  doc["mode"] = rows.empty() ? "" : rows.front().mode;
  nlohmann::json out_rows = nlohmann::json::array();
  for (const ComparisonRow& row : rows) {
    out_rows.push_back({{"x", row.x},
                        {"empirical", row.empirical},
                        {"predicted", row.predicted},
                        {"ratio", row.ratio}});
  }
  doc["rows"] = std::move(out_rows);
  return doc.dump();
}

std::vector<ComparisonRow> parse_csv(std::string_view text) {
  std::vector<ComparisonRow> rows;
  size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') continue;  // metadata comment
    if (!saw_header) {
      if (line != kCsvHeader) throw std::invalid_argument("parse_csv: missing header row");
      saw_header = true;
      continue;
    }
    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.size() != 6) throw std::invalid_argument("parse_csv: expected 6 columns");
    ComparisonRow row;
    row.x = parse_u64_field(fields[0], "x");
    row.empirical = parse_u64_field(fields[1], "empirical");
    row.predicted = parse_double_field(fields[2], "predicted");
    row.ratio = parse_double_field(fields[3], "ratio");
    row.kind = std::string(fields[4]);
    row.mode = std::string(fields[5]);
    rows.push_back(std::move(row));
  }
  if (!saw_header) throw std::invalid_argument("parse_csv: empty input");
  return rows;
}

std::vector<ComparisonRow> parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("parse_json: ") + e.what());
  }
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    const std::string mode = doc.at("mode").get<std::string>();
    std::vector<ComparisonRow> rows;
    for (const nlohmann::json& item : doc.at("rows")) {
      ComparisonRow row;
      row.x = item.at("x").get<uint64_t>();
      row.empirical = item.at("empirical").get<uint64_t>();
      row.predicted = item.at("predicted").get<double>();
      row.ratio = item.at("ratio").get<double>();
      row.kind = kind;
      row.mode = mode;
      rows.push_back(std::move(row));
    }
    return rows;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("parse_json: ") + e.what());
  }
}

std::vector<uint64_t> log_grid(uint64_t x_min, uint64_t x_max, unsigned points_per_decade) {
  if (x_min < 2) throw std::invalid_argument("log_grid: x_min must be >= 2");
  if (x_max < x_min) throw std::invalid_argument("log_grid: x_max must be >= x_min");
  if (points_per_decade < 1) throw std::invalid_argument("log_grid: need >= 1 point per decade");
  const double ppd = points_per_decade;
  std::vector<uint64_t> out;
  auto k = static_cast<int64_t>(std::ceil(ppd * std::log10(static_cast<double>(x_min)) - 1e-9));
  for (;; ++k) {
    const double value = std::pow(10.0, static_cast<double>(k) / ppd);
    if (value > static_cast<double>(x_max) + 0.5) break;
    const auto rounded = static_cast<uint64_t>(std::llround(value));
    if (rounded < x_min || rounded > x_max) continue;
    if (out.empty() || out.back() != rounded) out.push_back(rounded);
  }
  if (out.empty() || out.back() != x_max) out.push_back(x_max);
  return out;
}

}  // namespace cnsieve
