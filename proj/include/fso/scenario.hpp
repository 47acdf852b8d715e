#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fso/ber_numeric.hpp"
#include "fso/montecarlo.hpp"

namespace fso::cli {

// Exit codes used by run_scenario and the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitNumeric = 3;

class schema_error : public std::runtime_error {
 public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioLink {
  std::string id;
  ber_numeric::LinkConfig link;
};

struct Scenario {
  std::string name;
  std::vector<ScenarioLink> links;
  std::vector<std::string> methods;  // subset of closed|quadrature|montecarlo
  montecarlo::McSettings mc;
  std::filesystem::path out_dir;
  std::string format = "csv";
};

// Parses and validates a scenario file; throws schema_error on any violation.
Scenario load_scenario(const std::filesystem::path& path);

// Channel spec from a preset name ("a".."d") or an inline parameter object
// serialized as JSON text.
channel::DoubleGGParams channel_from_json_text(const std::string& text);

// One (link, method) curve; SNR points are computed concurrently.
ber_numeric::BerCurve compute_curve(const ScenarioLink& link, const std::string& method,
                                    const montecarlo::McSettings& mc);

bool method_applies(const ber_numeric::LinkConfig& link, const std::string& method);

// Runs every (link, method) pair, writes one CSV per curve plus a summary.
// Returns kExitOk, or kExitSchema / kExitNumeric on failure.
int run_scenario(const std::filesystem::path& path, std::ostream& log);

void write_csv(const std::filesystem::path& path, const ber_numeric::BerCurve& curve);
ber_numeric::BerCurve read_csv(const std::filesystem::path& path);

}  // namespace fso::cli
