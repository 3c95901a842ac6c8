#include "cnsieve/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cnsieve/analytic.hpp"
#include "cnsieve/constellations.hpp"
#include "cnsieve/oracle.hpp"
#include "cnsieve/pattern.hpp"
#include "cnsieve/prime_table.hpp"
#include "cnsieve/report.hpp"

namespace cnsieve::cli {
namespace {

struct GlobalOptions {
  std::string cache_dir;  // empty: build tables from scratch every run
  unsigned threads = 0;
  std::string format = "csv";
  std::string out_file;
  bool meta = false;

  bool json() const { return format == "json"; }
};

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

PrimeTable make_table(uint64_t limit, const GlobalOptions& g) {
  limit = std::max<uint64_t>(limit, 3);
  if (!g.cache_dir.empty()) {
    return build_prime_table_cached(limit, g.cache_dir, PrimeTable::kDefaultSegmentSize,
                                    g.threads);
  }
  return build_prime_table(limit, PrimeTable::kDefaultSegmentSize, g.threads);
}

// Largest additive witness offset across the kind's patterns; run_sieve needs
// the prime table to reach bound plus this.
uint64_t witness_reach(const std::vector<SievePattern>& patterns) {
  uint64_t reach = 0;
  for (const SievePattern& pattern : patterns) {
    for (const WitnessRule& rule : pattern.rules) {
      if (rule.kind == WitnessRule::Kind::additive) {
        reach = std::max(reach, static_cast<uint64_t>(rule.w < 0 ? -rule.w : rule.w));
      }
    }
  }
  return reach;
}

uint64_t sieve_bound_for(const ConstellationKind& kind, uint64_t x) {
  switch (kind.tag) {
    case ConstellationKind::Tag::sophie_germain:
      return 2 * x;
    case ConstellationKind::Tag::general:
      return kind.gen_s >= 2 ? kind.gen_s * x : x;
    default:
      return x;
  }
}

void emit(const GlobalOptions& g, const std::string& body) {
  if (g.out_file.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  std::ofstream out(g.out_file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + g.out_file);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("failed writing output file: " + g.out_file);
}

// csv payloads get an optional leading comment; json payloads get a "meta"
// field. Both are no-ops without --meta so default output is byte-stable.
void emit_csv(const GlobalOptions& g, const std::string& body) {
  if (!g.meta) {
    emit(g, body);
    return;
  }
  emit(g, "# generated " + timestamp_utc() + "\n" + body);
}

void emit_json(const GlobalOptions& g, nlohmann::json doc) {
  if (g.meta) doc["meta"] = {{"generated", timestamp_utc()}};
  emit(g, doc.dump() + "\n");
}

std::string join_u64(const std::vector<uint64_t>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += std::to_string(values[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

struct PrimesArgs {
  uint64_t limit = 0;
  bool list = false;
  bool count = false;
  uint64_t nth = 0;
  bool verify = false;
};

int cmd_primes(const GlobalOptions& g, const PrimesArgs& args) {
  if (args.limit < 2) throw std::invalid_argument("primes: --limit must be >= 2");
  const PrimeTable table = make_table(args.limit, g);

  int rc = 0;
  if (args.verify) {
    const uint64_t direct = table.prime_count(args.limit);
    const uint64_t recount = oracle::legendre_pi(args.limit, table);
    if (direct == recount) {
      std::fprintf(stderr, "oracle: combinatorial recount agrees (%llu primes)\n",
                   static_cast<unsigned long long>(direct));
    } else {
      std::fprintf(stderr, "oracle mismatch: sieve count %llu, combinatorial recount %llu\n",
                   static_cast<unsigned long long>(direct),
                   static_cast<unsigned long long>(recount));
      rc = 3;
    }
  }

  if (g.json()) {
    nlohmann::json doc;
    doc["limit"] = args.limit;
    if (args.nth != 0) {
      doc["n"] = args.nth;
      doc["prime"] = table.nth_prime(args.nth);
    } else if (args.list) {
      doc["primes"] = table.primes_up_to(args.limit);
    } else {
      doc["count"] = table.prime_count(args.limit);
    }
    emit_json(g, std::move(doc));
    return rc;
  }

  std::string body;
  if (args.nth != 0) {
    body = std::to_string(table.nth_prime(args.nth)) + "\n";
  } else if (args.list) {
    body = join_u64(table.primes_up_to(args.limit)) + "\n";
  } else {
    body = std::to_string(table.prime_count(args.limit)) + "\n";
  }
  emit_csv(g, body);
  return rc;
}

struct SieveArgs {
  std::string pattern;
  uint64_t limit = 0;
  bool list = false;
  bool stats = false;
  bool verify = false;
  uint64_t verify_limit = 100000;
};

int cmd_sieve(const GlobalOptions& g, const SieveArgs& args) {
  if (args.limit < 2) throw std::invalid_argument("sieve: --limit must be >= 2");
  const ConstellationKind kind = parse_kind(args.pattern);
  const std::vector<SievePattern> patterns = patterns_for(kind);
  const PrimeTable table = make_table(args.limit + witness_reach(patterns), g);

  std::vector<SurvivorSet> sets;
  sets.reserve(patterns.size());
  for (const SievePattern& pattern : patterns) {
    sets.push_back(run_sieve(pattern, args.limit, table, g.threads));
  }

  int rc = 0;
  if (args.verify) {
    const uint64_t vbound = std::min(args.limit, args.verify_limit);
    for (const SurvivorSet& set : sets) {
      const std::vector<uint64_t> lhs = survivors_below(set, vbound);
      const std::vector<uint64_t> rhs = oracle::bruteforce_survivors(set.pattern, vbound);
      const oracle::Verdict verdict = oracle::compare_survivors(lhs, rhs);
      if (verdict.matched) {
        std::fprintf(stderr, "oracle: %s survivors match up to %llu (%llu values)\n",
                     set.pattern.name.c_str(), static_cast<unsigned long long>(vbound),
                     static_cast<unsigned long long>(verdict.lhs_count));
      } else {
        std::fprintf(stderr,
                     "oracle mismatch: %s first differs at %llu (sieve %llu values, "
                     "oracle %llu values)\n",
                     set.pattern.name.c_str(),
                     static_cast<unsigned long long>(verdict.first_mismatch.value_or(0)),
                     static_cast<unsigned long long>(verdict.lhs_count),
                     static_cast<unsigned long long>(verdict.rhs_count));
        rc = 3;
      }
    }
  }

  if (g.json()) {
    nlohmann::json doc;
    doc["kind"] = kind_name(kind);
    doc["bound"] = args.limit;
    nlohmann::json out_patterns = nlohmann::json::array();
    for (const SurvivorSet& set : sets) {
      nlohmann::json entry;
      entry["pattern"] = set.pattern.name;
      entry["effective_limit"] = set.effective_limit;
      entry["max_sieving_prime"] = set.sieving_prime_max;
      entry["survivor_count"] = set.survivors.size();
      if (args.list) entry["survivors"] = set.survivors;
      if (args.stats) {
        const ContaminationStats stats = contamination_stats(set, table);
        entry["prime_survivors"] = stats.prime_survivors;
      }
      out_patterns.push_back(std::move(entry));
    }
    doc["patterns"] = std::move(out_patterns);
    emit_json(g, std::move(doc));
    return rc;
  }

  std::string body;
  if (args.list) {
    for (const SurvivorSet& set : sets) body += join_u64(set.survivors) + "\n";
  } else if (args.stats) {
    body = "pattern,bound,effective_limit,max_sieving_prime,survivors,prime_survivors\n";
    for (const SurvivorSet& set : sets) {
      const ContaminationStats stats = contamination_stats(set, table);
      body += set.pattern.name + ',' + std::to_string(set.bound) + ',' +
              std::to_string(set.effective_limit) + ',' +
              std::to_string(set.sieving_prime_max) + ',' +
              std::to_string(set.survivors.size()) + ',' +
              std::to_string(stats.prime_survivors) + "\n";
    }
  } else {
    for (const SurvivorSet& set : sets) body += std::to_string(set.survivors.size()) + "\n";
  }
  emit_csv(g, body);
  return rc;
}

struct ConstantsArgs {
  uint64_t cutoff = 10000000;
};

int cmd_constants(const GlobalOptions& g, const ConstantsArgs& args) {
  const PrimeTable table = make_table(args.cutoff, g);
  const ConstantBundle bundle = ConstantBundle::compute(args.cutoff, table);

  struct NamedConstant {
    const char* name;
    double value;
    double tail;
  };
  const NamedConstant constants[] = {
      {"euler_gamma", bundle.euler_gamma, 0.0},
      {"twin_product", bundle.twin_product.value, bundle.twin_product.tail_bound},
      {"meissel_mertens", bundle.meissel_mertens.value, bundle.meissel_mertens.tail_bound},
      {"triplet_constant", bundle.triplet_constant.value, bundle.triplet_constant.tail_bound},
      {"quadruplet_constant", bundle.quadruplet_constant.value,
       bundle.quadruplet_constant.tail_bound},
  };

  if (g.json()) {
    nlohmann::json doc;
    doc["cutoff"] = bundle.cutoff_P;
    nlohmann::json values;
    for (const NamedConstant& c : constants) {
      values[c.name] = {{"value", c.value}, {"tail_bound", c.tail}};
    }
    doc["constants"] = std::move(values);
    emit_json(g, std::move(doc));
    return 0;
  }

  std::string body = "name,value,tail_bound,cutoff\n";
  for (const NamedConstant& c : constants) {
    body += std::string(c.name) + ',' + format_number(c.value) + ',' + format_number(c.tail) +
            ',' + std::to_string(bundle.cutoff_P) + "\n";
  }
  emit_csv(g, body);
  return 0;
}

struct PredictArgs {
  std::string pattern;
  double x = 0.0;
  std::string mode = "paper";
  uint64_t cutoff = 10000000;
};

int cmd_predict(const GlobalOptions& g, const PredictArgs& args) {
  const ConstellationKind kind = parse_kind(args.pattern);
  const PredictionMode mode = parse_prediction_mode(args.mode);
  const PrimeTable table = make_table(args.cutoff, g);
  const ConstantBundle bundle = ConstantBundle::compute(args.cutoff, table);
  const double predicted = predict(kind, args.x, mode, bundle);

  if (g.json()) {
    nlohmann::json doc;
    doc["kind"] = kind_name(kind);
    doc["mode"] = prediction_mode_name(mode);
    doc["x"] = args.x;
    doc["cutoff"] = args.cutoff;
    doc["predicted"] = predicted;
    emit_json(g, std::move(doc));
    return 0;
  }
  emit_csv(g, format_number(predicted) + "\n");
  return 0;
}

struct CompareArgs {
  std::string pattern;
  std::vector<uint64_t> x_values;
  uint64_t x_max = 0;
  uint64_t x_min = 1000;
  unsigned points = 10;
  std::string mode = "paper";
  uint64_t cutoff = 10000000;
};

int cmd_compare(const GlobalOptions& g, const CompareArgs& args) {
  const ConstellationKind kind = parse_kind(args.pattern);
  if (kind.tag == ConstellationKind::Tag::general) {
    throw std::invalid_argument("compare: no prediction formula for general patterns");
  }
  const PredictionMode mode = parse_prediction_mode(args.mode);

  std::vector<uint64_t> xs = args.x_values;
  if (xs.empty()) {
    if (args.x_max == 0) {
      throw std::invalid_argument("compare: provide --x-values or --x-max");
    }
    xs = log_grid(args.x_min, args.x_max, args.points);
  }
  if (xs.empty()) throw std::invalid_argument("compare: empty evaluation grid");

  const uint64_t bound = sieve_bound_for(kind, xs.back());
  const uint64_t reach = witness_reach(patterns_for(kind));
  const PrimeTable table = make_table(std::max(args.cutoff, bound + reach), g);
  const ConstantBundle bundle = ConstantBundle::compute(args.cutoff, table);
  const std::vector<ComparisonRow> rows =
      compare_series(kind, xs, mode, table, bundle, g.threads);

  if (g.json()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(render_json(rows));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("compare: render failed: ") + e.what());
    }
    emit_json(g, std::move(doc));
    return 0;
  }
  emit_csv(g, render_csv(rows));
  return 0;
}

struct DeltaTwinArgs {
  uint64_t n_min = 50;
  uint64_t n_max = 1000;
  uint64_t cutoff = 10000000;
};

int cmd_delta_twin(const GlobalOptions& g, const DeltaTwinArgs& args) {
  if (args.n_min < 2) throw std::invalid_argument("delta-twin: --n-min must be >= 2");
  if (args.n_max < args.n_min) {
    throw std::invalid_argument("delta-twin: --n-max must be >= --n-min");
  }
  if (args.n_max > (uint64_t{1} << 20)) {
    throw std::invalid_argument("delta-twin: --n-max above 2^20 is not supported");
  }

  const ConstellationKind kind = ConstellationKind::twin();
  const uint64_t x_max = (args.n_max + 1) * (args.n_max + 1);
  const uint64_t reach = witness_reach(patterns_for(kind));
  const PrimeTable table = make_table(std::max(args.cutoff, x_max + reach), g);
  const ConstantBundle bundle = ConstantBundle::compute(args.cutoff, table);
  const ConstellationRun run = run_constellation(kind, x_max, table, g.threads);

  struct Row {
    uint64_t n;
    uint64_t empirical;
    double estimate;
    double ratio;
  };
  std::vector<Row> rows;
  rows.reserve(args.n_max - args.n_min + 1);
  for (uint64_t n = args.n_min; n <= args.n_max; ++n) {
    Row row;
    row.n = n;
    row.empirical = count_at(run, (n + 1) * (n + 1)) - count_at(run, n * n);
    row.estimate = delta_twin_estimate(n, bundle);
    row.ratio = static_cast<double>(row.empirical) / row.estimate;
    rows.push_back(row);
  }

  if (g.json()) {
    nlohmann::json doc;
    nlohmann::json out_rows = nlohmann::json::array();
    for (const Row& row : rows) {
      out_rows.push_back({{"n", row.n},
                          {"empirical", row.empirical},
                          {"estimate", row.estimate},
                          {"ratio", row.ratio}});
    }
    doc["rows"] = std::move(out_rows);
    emit_json(g, std::move(doc));
    return 0;
  }

  std::string body = "n,empirical,estimate,ratio\n";
  for (const Row& row : rows) {
    body += std::to_string(row.n) + ',' + std::to_string(row.empirical) + ',' +
            format_number(row.estimate) + ',' + format_number(row.ratio) + "\n";
  }
  emit_csv(g, body);
  return 0;
}

struct BrunArgs {
  uint64_t x = 0;
};

int cmd_brun(const GlobalOptions& g, const BrunArgs& args) {
  if (args.x < 2) throw std::invalid_argument("brun: --x must be >= 2");
  const PrimeTable table = make_table(args.x, g);
  const double sum = brun_partial_sum(args.x, table);

  if (g.json()) {
    nlohmann::json doc;
    doc["x"] = args.x;
    doc["sum"] = sum;
    emit_json(g, std::move(doc));
    return 0;
  }
  emit_csv(g, format_number(sum) + "\n");
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Prime constellation sieve, constants, and prediction reports"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GlobalOptions g;
  if (const char* env_cache = std::getenv("CNSIEVE_CACHE")) g.cache_dir = env_cache;
  app.add_option("--cache-dir", g.cache_dir,
                 "Directory for prime bitmap caches (default: $CNSIEVE_CACHE)");
  app.add_option("--threads", g.threads, "Sieve worker threads, 0 = hardware concurrency");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out_file, "Write output to a file instead of stdout");
  app.add_flag("--meta", g.meta, "Add a generation timestamp to the output");

  PrimesArgs primes_args;
  CLI::App* primes = app.add_subcommand("primes", "Count, list, or index primes");
  primes->fallthrough();
  primes->add_option("--limit", primes_args.limit, "Upper bound (inclusive)")->required();
  CLI::Option* primes_list = primes->add_flag("--list", primes_args.list, "List all primes");
  CLI::Option* primes_count =
      primes->add_flag("--count", primes_args.count, "Print the count (default)");
  CLI::Option* primes_nth =
      primes->add_option("--nth", primes_args.nth, "Print the k-th prime (1-based)");
  primes_list->excludes(primes_nth);
  primes_count->excludes(primes_list);
  primes_count->excludes(primes_nth);
  primes->add_flag("--verify-oracle", primes_args.verify,
                   "Cross-check the count combinatorially; exit 3 on disagreement");

  SieveArgs sieve_args;
  CLI::App* sieve = app.add_subcommand("sieve", "Run a witness-rule survivor sieve");
  sieve->fallthrough();
  sieve->add_option("--pattern", sieve_args.pattern,
                    "twin | gap:<d> | sg | triplet | quad | general:<s>:<t>")
      ->required();
  sieve->add_option("--limit", sieve_args.limit, "Sieve survivors up to this bound")->required();
  CLI::Option* sieve_list =
      sieve->add_flag("--list", sieve_args.list, "List surviving values, one line per pattern");
  CLI::Option* sieve_stats =
      sieve->add_flag("--stats", sieve_args.stats, "Per-pattern summary table");
  sieve_list->excludes(sieve_stats);
  sieve->add_flag("--verify-oracle", sieve_args.verify,
                  "Replay against brute force; exit 3 on disagreement");
  sieve->add_option("--verify-limit", sieve_args.verify_limit,
                    "Cap for the brute-force replay")
      ->capture_default_str();

  ConstantsArgs constants_args;
  CLI::App* constants = app.add_subcommand("constants", "Print the analytic constant table");
  constants->fallthrough();
  constants->add_option("--cutoff", constants_args.cutoff, "Euler-product cutoff P")
      ->capture_default_str();

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "Predicted constellation count at x");
  predict->fallthrough();
  predict->add_option("--pattern", predict_args.pattern, "twin | gap:<d> | sg | triplet | quad")
      ->required();
  predict->add_option("--x", predict_args.x, "Evaluation point")->required();
  predict->add_option("--mode", predict_args.mode, "paper | integral")->capture_default_str();
  predict->add_option("--cutoff", predict_args.cutoff, "Euler-product cutoff P")
      ->capture_default_str();

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand("compare", "Empirical vs predicted comparison series");
  compare->fallthrough();
  compare->add_option("--pattern", compare_args.pattern, "twin | gap:<d> | sg | triplet | quad")
      ->required();
  CLI::Option* compare_values =
      compare->add_option("--x-values", compare_args.x_values,
                          "Comma-separated evaluation points, strictly ascending")
          ->delimiter(',');
  CLI::Option* compare_max =
      compare->add_option("--x-max", compare_args.x_max, "Top of the logarithmic grid");
  CLI::Option* compare_min = compare->add_option("--x-min", compare_args.x_min,
                                                 "Bottom of the logarithmic grid")
                                 ->capture_default_str();
  CLI::Option* compare_points =
      compare->add_option("--points", compare_args.points, "Grid points per decade")
          ->capture_default_str();
  compare_values->excludes(compare_max);
  compare_values->excludes(compare_min);
  compare_values->excludes(compare_points);
  compare->add_option("--mode", compare_args.mode, "paper | integral")->capture_default_str();
  compare->add_option("--cutoff", compare_args.cutoff, "Euler-product cutoff P")
      ->capture_default_str();

  DeltaTwinArgs delta_args;
  CLI::App* delta = app.add_subcommand("delta-twin", "Twins between consecutive squares");
  delta->fallthrough();
  delta->add_option("--n-min", delta_args.n_min, "First interval index")->capture_default_str();
  delta->add_option("--n-max", delta_args.n_max, "Last interval index")->capture_default_str();
  delta->add_option("--cutoff", delta_args.cutoff, "Euler-product cutoff P")
      ->capture_default_str();

  BrunArgs brun_args;
  CLI::App* brun = app.add_subcommand("brun", "Partial sum of twin-prime reciprocals");
  brun->fallthrough();
  brun->add_option("--x", brun_args.x, "Include twin pairs with p + 2 <= x")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the parse diagnostic
    return 1;
  }

  try {
    if (*primes) return cmd_primes(g, primes_args);
    if (*sieve) return cmd_sieve(g, sieve_args);
    if (*constants) return cmd_constants(g, constants_args);
    if (*predict) return cmd_predict(g, predict_args);
    if (*compare) return cmd_compare(g, compare_args);
    if (*delta) return cmd_delta_twin(g, delta_args);
    if (*brun) return cmd_brun(g, brun_args);
    throw std::invalid_argument("no subcommand selected");
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "range error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "range error: %s\n", e.what());
    return 2;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace cnsieve::cli
