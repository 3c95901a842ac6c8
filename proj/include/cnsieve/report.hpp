#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cnsieve/analytic.hpp"
#include "cnsieve/constellations.hpp"
#include "cnsieve/prime_table.hpp"

// Empirical-versus-predicted comparison series and their serialized forms.
//
// CSV uses the fixed header `x,empirical,predicted,ratio,kind,mode`, prints
// floating-point fields with %.10g and a '.' decimal separator regardless of
// the ambient locale, and is byte-stable for a given input. JSON carries the
// same rows under {"kind": ..., "mode": ..., "rows": [...]}. Both formats
// round-trip through their parse_ counterpart.

namespace cnsieve {

struct ComparisonRow {
  uint64_t x = 0;
  uint64_t empirical = 0;
  double predicted = 0.0;
  double ratio = 0.0;
  std::string kind;
  std::string mode;

  bool operator==(const ComparisonRow&) const = default;
};

// %.10g-equivalent formatting, locale-independent; used for every
// floating-point field this library prints.
std::string format_number(double value);

const char* prediction_mode_name(PredictionMode mode);

// Accepts the names prediction_mode_name emits: "paper" | "integral".
PredictionMode parse_prediction_mode(std::string_view text);

// Evaluates one sieve run at the largest x and reads every smaller count out
// of it. xs must be non-empty, strictly ascending, and start at >= 4.
std::vector<ComparisonRow> compare_series(const ConstellationKind& kind,
                                          const std::vector<uint64_t>& xs, PredictionMode mode,
                                          const PrimeTable& table, const ConstantBundle& constants,
                                          unsigned threads = 0);

std::string render_csv(const std::vector<ComparisonRow>& rows);
std::string render_json(const std::vector<ComparisonRow>& rows);

// Strict inverses of the renderers; malformed input throws
// std::invalid_argument.
std::vector<ComparisonRow> parse_csv(std::string_view text);
std::vector<ComparisonRow> parse_json(std::string_view text);

// Rounded powers 10^(k / points_per_decade) covering [x_min, x_max], with
// x_max always the final entry. x_min >= 2, x_max >= x_min,
// points_per_decade >= 1.
std::vector<uint64_t> log_grid(uint64_t x_min, uint64_t x_max, unsigned points_per_decade = 10);

}  // namespace cnsieve
