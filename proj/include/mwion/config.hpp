#pragma once

// Scenario configuration: a JSON key-value tree of defaults, merged with a
// config file and `key=value` overrides, then resolved into typed model
// inputs. Unknown keys and unphysical values raise ConfigError naming the key.

#include "mwion/field.hpp"
#include "mwion/ion.hpp"
#include "mwion/pulses.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mwion {

/// Invalid parameter; exit code 3.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Bad command line or scenario id; exit code 2.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File could not be read or written; exit code 4.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ScenarioId { fig3b, fig3c, fig4b, fig5, fig6, fig7, scaling_check };

std::span<const ScenarioId> all_scenarios();
std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario(std::string_view name);

/// Inclusive (start, stop, points) grid.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> linear() const;
  /// Geometric spacing; requires 0 < start < stop.
  std::vector<double> logarithmic() const;
};

/// Typed view of a resolved configuration. Angular quantities are in rad/s.
struct ResolvedConfig {
  ScenarioId scenario = ScenarioId::fig3b;
  std::uint64_t seed = 0;
  ModePair modes;
  RabiProfile profile;
  RabiConstants rabi_constants;
  DriveSettings drive = DriveSettings::balanced(0.1, std::numbers::pi);
  HyperfineSystem system;
  double detuning = 0.0;
  DetectionModel detection;
  SequenceKind kind = SequenceKind::simple;
  double theta = std::numbers::pi;
  double phi = 0.0;
  int shots = 0;
  nlohmann::json block;  // scenario-specific keys, already merged
};

class ScenarioConfig {
 public:
  explicit ScenarioConfig(ScenarioId id);

  ScenarioId scenario() const { return scenario_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  /// Overlay a (partial) tree. A `scenario` key must match this scenario;
  /// `seed` is taken over.
  void merge(const nlohmann::json& overrides);

  /// Apply one `dotted.key=value`; value is parsed as JSON when possible,
  /// else taken as a string.
  void set(std::string_view assignment);

  /// Fully-resolved tree for this scenario (other scenario blocks omitted).
  nlohmann::json resolved_tree() const;

  /// Throws ConfigError naming the offending key.
  ResolvedConfig resolve() const;

 private:
  ScenarioId scenario_;
  std::uint64_t seed_ = 0;
  nlohmann::json tree_;
};

/// Default tree holding every scenario block.
nlohmann::json default_config_tree();

/// Reads a JSON config file, or the `# config:` header of a scenario CSV.
nlohmann::json load_config_file(const std::filesystem::path& path);

}  // namespace mwion
