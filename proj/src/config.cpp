#include "pfldg/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>

#include <CLI11.hpp>

namespace pfldg {

namespace {

const std::vector<std::string> kKeys = {"experiment", "mesh",   "mesh-file", "k",
                                        "lifting-degree", "levels", "output", "seed"};

long long parse_integer(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ConfigError("invalid integer for " + key + ": '" + value + "'");
  }
  return v;
}

// Lifting degree is stored symbolically until k is known.
struct PendingLifting {
  std::string text;
};

void set_key(RunConfig& c, std::optional<PendingLifting>& lifting, const std::string& key,
             const std::string& value) {
  if (key == "experiment") {
    c.experiment = parse_experiment(value);
  } else if (key == "mesh") {
    c.mesh = value;
  } else if (key == "mesh-file") {
    c.mesh_file = value;
  } else if (key == "k") {
    c.k = static_cast<int>(parse_integer(key, value));
  } else if (key == "lifting-degree") {
    lifting = PendingLifting{value};
  } else if (key == "levels") {
    c.levels = static_cast<int>(parse_integer(key, value));
  } else if (key == "output") {
    c.output = value;
  } else if (key == "seed") {
    const long long s = parse_integer(key, value);
    if (s < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void resolve_lifting(RunConfig& c, const std::optional<PendingLifting>& lifting) {
  if (!lifting) return;
  std::string t = lifting->text;
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t == "k") {
    c.lifting_degree = c.k;
  } else if (t == "k+1") {
    c.lifting_degree = c.k + 1;
  } else {
    c.lifting_degree = static_cast<int>(parse_integer("lifting-degree", t));
  }
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::counterexample: return "counterexample";
    case Experiment::stability: return "stability";
    case Experiment::identities: return "identities";
    case Experiment::convergence: return "convergence";
    case Experiment::all: return "all";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::counterexample, Experiment::stability, Experiment::identities,
                       Experiment::convergence, Experiment::all}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string RunConfig::output_dir() const {
  if (!output.empty()) return output;
  if (const char* env = std::getenv("LDG_OUTPUT_DIR"); env && *env) return env;
  return "ldg_output";
}

void validate(const RunConfig& c) {
  if (c.k < 1 || c.k > 4) throw ConfigError("k must lie in [1, 4], got " + std::to_string(c.k));
  if (c.ell() != c.k && c.ell() != c.k + 1) {
    throw ConfigError("lifting degree must be k or k+1");
  }
  if (c.levels < 1) throw ConfigError("levels must be >= 1");
  if (c.mesh.empty() && c.mesh_file.empty()) throw ConfigError("no mesh given");
}

namespace {

void apply_file(std::istream& in, RunConfig& config, std::optional<PendingLifting>& lifting) {
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("malformed config line " + std::to_string(lineno) + ": '" + line + "'");
    }
    set_key(config, lifting, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

}  // namespace

void apply_config_file(std::istream& in, RunConfig& config) {
  std::optional<PendingLifting> lifting;
  apply_file(in, config, lifting);
  resolve_lifting(config, lifting);
}

RunConfig parse_config(const std::vector<std::string>& args_in) {
  std::vector<std::string> args = args_in;
  if (!args.empty() && args.front() == "run") args.erase(args.begin());

  CLI::App app{"Penalty-free LDG experiments", "pfldg"};
  std::string positional, config_file;
  std::map<std::string, std::string> flags;
  app.add_option("experiment_name", positional, "counterexample|stability|identities|convergence|all");
  app.add_option("--config", config_file, "key=value configuration file");
  for (const auto& key : kKeys) app.add_option("--" + key, flags[key]);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig config;
  std::optional<PendingLifting> lifting;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("cannot open config file '" + config_file + "'");
    apply_file(in, config, lifting);
  }
  for (const auto& key : kKeys) {
    if (app.count("--" + key) > 0) set_key(config, lifting, key, flags[key]);
  }
  if (!positional.empty()) {
    if (app.count("--experiment") > 0 && parse_experiment(positional) != config.experiment) {
      throw ConfigError("conflicting experiment names");
    }
    config.experiment = parse_experiment(positional);
  }
  resolve_lifting(config, lifting);
  validate(config);
  return config;
}

}  // namespace pfldg
