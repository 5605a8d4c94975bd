#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "instanton/cohomology.hpp"

namespace instanton::cli {

using exactla::Rational;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Range {
  int lo = 0;
  int hi = 0;
  bool operator==(const Range&) const = default;
};

enum class Format { Json, Csv, Text };

struct AlphaSource {
  enum class Kind { Random, File, List };
  Kind kind = Kind::Random;
  std::string path;
  std::vector<Rational> values;
};

struct RunConfig {
  Range n{2, 2};
  Range k{3, 3};
  AlphaSource alpha;
  std::uint64_t seed = 0;
  std::size_t samples = 20;
  Format format = Format::Json;
  unsigned jobs = 1;
  bool timing = true;

  // Throws ConfigError.
  void validate() const;
};

// "A" or "A..B".
Range parse_range(const std::string& text);
// Comma-separated integers or p/q rationals.
std::vector<Rational> parse_alpha_list(const std::string& text);
// One rational per line, '#' comments and blank lines ignored. Errors carry
// "line L, column C".
std::vector<Rational> parse_alpha_text(const std::string& text);
std::vector<Rational> read_alpha_file(const std::string& path);

std::vector<cohomology::DimensionReport> run_grid(const RunConfig& config);

nlohmann::ordered_json config_to_json(const RunConfig& config);
nlohmann::ordered_json report_to_json(const cohomology::DimensionReport& r, bool timing);
nlohmann::ordered_json verify_document(const RunConfig& config, const std::vector<cohomology::DimensionReport>& reports);

void write_verify_csv(std::ostream& out, const std::vector<cohomology::DimensionReport>& reports, bool timing);
void write_table_csv(std::ostream& out, const std::vector<cohomology::DimensionReport>& reports, bool timing);

// Entry point shared by the tool and the tests; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace instanton::cli
