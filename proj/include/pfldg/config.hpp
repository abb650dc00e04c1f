#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfldg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carries the usage text when --help is given.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { counterexample, stability, identities, convergence, all };

const char* to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

struct RunConfig {
  Experiment experiment = Experiment::all;
  std::string mesh = "criss_cross";  ///< built-in name
  std::string mesh_file;             ///< overrides `mesh` when set
  int k = 1;
  std::optional<int> lifting_degree;  ///< k or k+1; unset means k+1
  int levels = 3;
  std::string output;  ///< empty: LDG_OUTPUT_DIR, then "ldg_output"
  std::uint64_t seed = 42;

  int ell() const { return lifting_degree.value_or(k + 1); }
  /// Equal-order lifting requested (the unstable comparison).
  bool comparison_mode() const { return ell() == k; }
  std::string mesh_label() const { return mesh_file.empty() ? mesh : mesh_file; }
  std::string output_dir() const;
};

/// Applies `key=value` lines (blank lines and '#' comments allowed). Keys
/// match the long flag names: experiment, mesh, mesh-file, k, lifting-degree,
/// levels, output, seed.
void apply_config_file(std::istream& in, RunConfig& config);

/// Parses command-line arguments (without the program name). An optional
/// leading "run" and an optional positional experiment name are accepted.
/// A --config file is applied first; explicit flags override it.
RunConfig parse_config(const std::vector<std::string>& args);

/// Range checks shared by flags and config files.
void validate(const RunConfig& config);

}  // namespace pfldg
