#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aptsense/params.hpp"
#include "aptsense/steady_state.hpp"

namespace aptsense {

/// Configuration / input errors carry the offending line number.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

enum class OutputFormat { Csv, Json };

struct AxisSpec {
  std::string param;  // one of the sweepable parameter names
  double min = 0.0;   // resolved value (rad/s, W, m, ... depending on param)
  double max = 0.0;
  int points = 2;
};

/// A resolved sweep request: one or two axes, fixed-parameter overrides in
/// resolved SI values, requested observables and output options.
struct SweepSpec {
  AxisSpec axis1;
  std::optional<AxisSpec> axis2;
  std::map<std::string, double> parameters;  // resolved; keys from the parameter table
  std::vector<std::string> observables;      // eigenvalues, ep, x, y, eta, stability, regime
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Parses the line-oriented `key = value` format with [parameters], [axis1],
/// [axis2] and [output] sections. Values carry explicit unit suffixes
/// (rates: pHz..GHz stored as 2π·X rad/s, Gamma multiples, radps; powers:
/// nW..W; lengths: nm..m). Unknown keys, sections or units are hard errors.
SweepSpec parse_config(const std::string& text);

/// Canonical textual form; parse_config(emit_config(s)) == s bit-exactly.
std::string emit_config(const SweepSpec& spec);

struct Column {
  std::string name;
  std::string unit;
};

struct Row {
  std::vector<double> values;
  std::string tag;  // empty when the row is complete
};

/// Tabular sweep output: header with units, one row per grid point, and a
/// metadata block with the fully resolved parameter set.
struct SweepResult {
  std::vector<Column> header;
  std::vector<Row> rows;
  std::map<std::string, std::string> metadata;

  int column(const std::string& name) const;  // -1 when absent
};

void write_csv(const SweepResult& r, std::ostream& os);
SweepResult read_csv(std::istream& is);
void write_json(const SweepResult& r, std::ostream& os);
SweepResult read_json(std::istream& is);

void write_table(const SweepResult& r, const std::string& path, OutputFormat f);
SweepResult read_table(const std::string& path, OutputFormat f);

/// Executes the sweep: grid points evaluated in parallel with deterministic
/// output ordering; branch-tracked observables are sequential along axis1 and
/// parallel across axis2 rows.
SweepResult run_sweep(const SweepSpec& spec);

/// Names accepted for axes and [parameters] keys, with their unit class.
bool is_sweepable_parameter(const std::string& name);

}  // namespace aptsense
