#pragma once

// Subcommand implementations behind the parity_lab executable. Each command
// writes its table to an ostream and returns a process exit code, so the
// tests can drive them without spawning processes.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include <json.hpp>

#include "parity_lab/asymptotics.hpp"
#include "parity_lab/distribution.hpp"
#include "parity_lab/exact_counts.hpp"
#include "parity_lab/verify.hpp"

namespace parity_lab::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailure = 1, kUsageError = 2, kBudgetRefusal = 3 };

inline constexpr int kHugeCeiling = 50000;

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct NRange {
  long long start = 0;
  long long end = 0;
  long long step = 1;

  bool single() const noexcept { return start == end; }
};

struct RunConfig {
  int exact_ceiling = kDefaultExactCeiling;
  NRange n_range;
  ParitySpec spec{2, 1, 2};
  double c0 = 1.0;
  std::vector<long long> c_values{0};
  OutputFormat format = OutputFormat::csv;
  std::string output_path;  // empty: standard output
  int threads = 1;
  bool huge = false;
  std::vector<std::string> only;
  std::map<std::string, double> tolerances;  // check name -> replacement bound

  void validate() const {
    if (n_range.start < 0) throw usage_error("n must be non-negative");
    if (n_range.start > n_range.end) throw usage_error("n-range start exceeds end");
    if (n_range.step < 1) throw usage_error("n-range step must be at least 1");
    if (threads < 1) throw usage_error("threads must be at least 1");
    if (exact_ceiling < 0) throw usage_error("exact_ceiling must be non-negative");
  }

  ExactBudget budget() const { return {exact_ceiling}; }

  std::vector<int> n_values() const {
    std::vector<int> out;
    for (long long n = n_range.start; n <= n_range.end; n += n_range.step) out.push_back(static_cast<int>(n));
    return out;
  }
};

// ---------------------------------------------------------------------------
// Parsing helpers shared by flags and the config file

inline long long parse_integer(const std::string& text, const std::string& what) {
  long long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw usage_error("invalid integer for " + what + ": '" + text + "'");
  return v;
}

inline double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw usage_error("invalid number for " + what + ": '" + text + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// "A:B:S", "A:B" (step 1) or a single "A".
inline NRange parse_n_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty() || parts.size() > 3) throw usage_error("n-range must look like A:B:S");
  NRange r;
  r.start = parse_integer(parts[0], "n-range");
  r.end = parts.size() >= 2 ? parse_integer(parts[1], "n-range") : r.start;
  r.step = parts.size() == 3 ? parse_integer(parts[2], "n-range") : 1;
  return r;
}

inline std::vector<long long> parse_c_list(const std::string& text) {
  std::vector<long long> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_integer(trim(p), "c"));
  if (out.empty()) throw usage_error("c list is empty");
  return out;
}

inline OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw usage_error("format must be csv or json");
}

inline bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "1" || text == "true" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "no") return false;
  throw usage_error("invalid boolean for " + what + ": '" + text + "'");
}

/// Partially specified residue selection; assembled once all layers applied.
struct SpecParts {
  std::optional<int> modulus, alpha, beta;
};

/// Applies one key=value setting. Keys mirror the long flag names.
inline void apply_setting(RunConfig& cfg, SpecParts& spec, const std::string& key, const std::string& value) {
  if (key == "exact_ceiling") {
    cfg.exact_ceiling = static_cast<int>(parse_integer(value, key));
  } else if (key == "n") {
    const long long n = parse_integer(value, key);
    cfg.n_range = {n, n, 1};
  } else if (key == "n_range" || key == "n-range") {
    cfg.n_range = parse_n_range(value);
  } else if (key == "N") {
    spec.modulus = static_cast<int>(parse_integer(value, key));
  } else if (key == "alpha") {
    spec.alpha = static_cast<int>(parse_integer(value, key));
  } else if (key == "beta") {
    spec.beta = static_cast<int>(parse_integer(value, key));
  } else if (key == "c0") {
    cfg.c0 = parse_real(value, key);
  } else if (key == "c") {
    cfg.c_values = parse_c_list(value);
  } else if (key == "format") {
    cfg.format = parse_format(value);
  } else if (key == "out") {
    cfg.output_path = value;
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_integer(value, key));
  } else if (key == "huge") {
    cfg.huge = parse_bool(value, key);
  } else if (key == "only") {
    cfg.only.clear();
    for (const auto& name : split(value, ',')) cfg.only.push_back(trim(name));
  } else if (key.rfind("tolerance.", 0) == 0) {
    cfg.tolerances[key.substr(10)] = parse_real(value, key);
  } else {
    throw usage_error("unknown setting '" + key + "'");
  }
}

/// Flat key=value lines; '#' starts a comment line.
inline void apply_config_text(RunConfig& cfg, SpecParts& spec, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw usage_error("config line " + std::to_string(lineno) + " is not key=value");
    apply_setting(cfg, spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void apply_config_file(RunConfig& cfg, SpecParts& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, spec, buf.str());
}

/// PARITY_LAB_CEILING, when set.
inline void apply_environment(RunConfig& cfg) {
  if (const char* env = std::getenv("PARITY_LAB_CEILING"))
    cfg.exact_ceiling = static_cast<int>(parse_integer(env, "PARITY_LAB_CEILING"));
}

inline void finish_spec(RunConfig& cfg, const SpecParts& spec) {
  const int N = spec.modulus.value_or(cfg.spec.modulus());
  const int a = spec.alpha.value_or(cfg.spec.alpha());
  const int b = spec.beta.value_or(cfg.spec.beta());
  try {
    cfg.spec = ParitySpec(N, a, b);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

/// defaults < config file < PARITY_LAB_CEILING < flags. --huge lifts the
/// ceiling to at least kHugeCeiling.
inline RunConfig resolve_config(const std::optional<std::string>& config_path,
                                const std::vector<std::pair<std::string, std::string>>& flag_settings) {
  RunConfig cfg;
  SpecParts spec;
  if (config_path) apply_config_file(cfg, spec, *config_path);
  apply_environment(cfg);
  for (const auto& [key, value] : flag_settings) apply_setting(cfg, spec, key, value);
  finish_spec(cfg, spec);
  if (cfg.huge) cfg.exact_ceiling = std::max(cfg.exact_ceiling, kHugeCeiling);
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Output

/// Shortest round-trip decimal, independent of locale.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

/// A table whose cells are already formatted. Numeric cells are written bare
/// in JSON; text cells (exact counts) are quoted.
struct Table {
  std::vector<std::string> header;
  std::vector<bool> quoted;  // per column, JSON only
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os, OutputFormat format) const {
    if (format == OutputFormat::csv) {
      for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
      os << '\n';
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
      }
      return;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (quoted[i]) {
          obj[header[i]] = row[i];
        } else {
          obj[header[i]] = nlohmann::ordered_json::parse(row[i] == "nan" || row[i] == "inf" || row[i] == "-inf"
                                                             ? std::string("null")
                                                             : row[i]);
        }
      }
      doc.push_back(std::move(obj));
    }
    os << doc.dump(2) << '\n';
  }
};

/// Runs task(i) for i in [0, count) on `threads` workers; results land in
/// their input slot, so output order never depends on scheduling.
template <class Result, class Task>
std::vector<Result> run_ordered(std::size_t count, int threads, Task task) {
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(workers, count); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// ---------------------------------------------------------------------------
// Commands

/// Builds the shared DP table after checking the budget.
inline PdTable exact_table(const RunConfig& cfg, std::ostream& diag) {
  const int n_max = static_cast<int>(cfg.n_range.end);
  if (cfg.huge) diag << "note: table for n <= " << n_max << " needs about " << PdTable::estimate_bytes(n_max) / (1024 * 1024) << " MiB\n";
  return PdTable(n_max, cfg.spec, cfg.budget());
}

inline void require_single_n(const RunConfig& cfg, const std::string& command) {
  if (!cfg.n_range.single()) throw usage_error(command + " takes a single n (use --n)");
}

inline Table cmd_count(const RunConfig& cfg, std::ostream& diag) {
  const PdTable table = exact_table(cfg, diag);
  const auto ns = cfg.n_values();
  Table t{{"n", "c", "count"}, {false, false, true}, {}};
  auto rows = run_ordered<std::vector<std::vector<std::string>>>(ns.size(), cfg.threads, [&](std::size_t i) {
    const PdDistribution dist = table.distribution(ns[i]);
    std::vector<std::vector<std::string>> out;
    for (long long c : cfg.c_values)
      out.push_back({std::to_string(ns[i]), std::to_string(c), to_decimal(dist.count_at_least(static_cast<double>(c)))});
    return out;
  });
  for (auto& block : rows)
    for (auto& row : block) t.rows.push_back(std::move(row));
  return t;
}

inline Table cmd_compare(const RunConfig& cfg, std::ostream& diag) {
  const int N = cfg.spec.modulus();
  if (N != 2 && N < 5) throw usage_error("compare needs N = 2 or N >= 5");
  if (cfg.n_range.start < 1) throw usage_error("compare needs n >= 1");
  const PdTable table = exact_table(cfg, diag);
  const auto ns = cfg.n_values();
  const ParitySpec mirror = cfg.spec.reflected();
  Table t{{"n", "exact_d_ab", "exact_d_ba", "ratio_main_ab", "ratio_main_ba", "ratio_two_ab", "ratio_two_ba"},
          {false, true, true, false, false, false, false},
          {}};
  t.rows = run_ordered<std::vector<std::string>>(ns.size(), cfg.threads, [&](std::size_t i) {
    const int n = ns[i];
    const PdDistribution dist = table.distribution(n);
    const double c = static_cast<double>(threshold(cfg.c0, n).ceil_value);
    const BigCount ab = dist.count_at_least(c);
    const BigCount ba = dist.reflected().count_at_least(c);
    const EstimateTerms est_ab = estimate_thm2(n, cfg.spec, cfg.c0);
    const EstimateTerms est_ba = estimate_thm2(n, mirror, cfg.c0);
    const LogScaledValue exact_ab = LogScaledValue::from_exact(ab);
    const LogScaledValue exact_ba = LogScaledValue::from_exact(ba);
    return std::vector<std::string>{std::to_string(n),
                                    to_decimal(ab),
                                    to_decimal(ba),
                                    format_double(est_ab.main.ratio_to(exact_ab)),
                                    format_double(est_ba.main.ratio_to(exact_ba)),
                                    format_double(est_ab.total.ratio_to(exact_ab)),
                                    format_double(est_ba.total.ratio_to(exact_ba))};
  });
  return t;
}

inline Table cmd_dist(const RunConfig& cfg, std::ostream& diag) {
  require_single_n(cfg, "dist");
  if (cfg.n_range.start < 1) throw usage_error("dist needs n >= 1");
  const PdTable table = exact_table(cfg, diag);
  const NormalizedHistogram h = build_histogram(table.distribution(static_cast<int>(cfg.n_range.start)));
  Table t{{"k", "x", "density_area1", "density_peak1", "gaussian"}, {false, false, false, false, false}, {}};
  for (const auto& p : h.points)
    t.rows.push_back({std::to_string(p.k), format_double(p.x), format_double(p.density), format_double(p.density_peak),
                      format_double(gaussian_density(p.x, cfg.spec.modulus()))});
  return t;
}

inline Table cmd_bias(const RunConfig& cfg, std::ostream& diag) {
  require_single_n(cfg, "bias");
  const int n = static_cast<int>(cfg.n_range.start);
  const PdTable table = exact_table(cfg, diag);
  const PdDistribution dist = table.distribution(n);
  const BiasProfile profile = build_bias_profile(dist);
  if (profile.normalizer == 0) diag << "note: total bias is zero at n = " << n << "; pb_normalized is undefined\n";
  const double scale = n > 0 ? 1.0 / quarter_power(n) : 0.0;
  Table t{{"c", "x", "pb", "pb_normalized", "density"}, {false, false, true, false, false}, {}};
  for (const auto& pt : profile.points) {
    if (pt.c > 0 && dist.at(pt.c) == 0 && dist.at(-pt.c) == 0) continue;
    if (pt.pb < 0) diag << "note: negative parity bias at c = " << pt.c << "\n";
    const double x = pt.c * scale;
    const double normalized = profile.normalizer == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                      : ratio_to_double(pt.pb, profile.normalizer);
    t.rows.push_back({std::to_string(pt.c), format_double(x), to_decimal(pt.pb), format_double(normalized),
                      format_double(bias_density(x, cfg.spec.modulus()))});
  }
  return t;
}

/// Runs the default verification suite (or the --only subset), one JSON line
/// per check. Exit 1 when any check fails.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out,
                      const special::BernoulliTable& bernoulli = special::BernoulliTable::standard()) {
  verify::SuiteOptions options;
  options.bernoulli = &bernoulli;
  auto suite = verify::default_suite(options);
  std::vector<verify::NamedCheck> selected;
  if (cfg.only.empty()) {
    selected = suite;
  } else {
    for (const auto& name : cfg.only) {
      auto it = std::find_if(suite.begin(), suite.end(), [&](const auto& c) { return c.name == name; });
      if (it == suite.end()) throw usage_error("unknown check '" + name + "'");
      selected.push_back(*it);
    }
  }
  for (const auto& entry : cfg.tolerances) {
    auto it = std::find_if(suite.begin(), suite.end(), [&](const auto& c) { return c.name == entry.first; });
    if (it == suite.end() || !it->comparison) throw usage_error("no adjustable tolerance for '" + entry.first + "'");
  }
  const auto results = run_ordered<verify::CheckResult>(selected.size(), cfg.threads, [&](std::size_t i) {
    verify::CheckResult r = selected[i].run();
    if (auto tol = cfg.tolerances.find(r.name); tol != cfg.tolerances.end()) {
      r.bound = tol->second;
      r.passed = verify::compare(*selected[i].comparison, r.observed, r.bound);
      r.notes += "; bound overridden";
    }
    return r;
  });
  bool all = true;
  for (const auto& r : results) {
    out << verify::to_json_line(r) << '\n';
    all = all && r.passed;
  }
  return all ? kSuccess : kCheckFailure;
}

/// Dispatches a table-producing subcommand, mapping failures to exit codes.
inline int run_table_command(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    Table t;
    if (command == "count") t = cmd_count(cfg, err);
    else if (command == "compare") t = cmd_compare(cfg, err);
    else if (command == "dist") t = cmd_dist(cfg, err);
    else if (command == "bias") t = cmd_bias(cfg, err);
    else throw usage_error("unknown command '" + command + "'");
    t.write(out, cfg.format);
    return kSuccess;
  } catch (const budget_exceeded& e) {
    err << "error: " << e.what() << " (exact_ceiling budget; raise it with --huge, PARITY_LAB_CEILING or exact_ceiling=)\n";
    return kBudgetRefusal;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace parity_lab::cli
