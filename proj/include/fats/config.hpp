#pragma once
// Configuration file loading and validation for the CLI. One JSON file
// carries the ontology paths, exploration bounds, risk weights, the
// critical-situation and situation-pool triples, the experiment plan and
// the synthetic-user model. Relative paths resolve against the config
// file's directory. Validation is all-or-nothing: a config that loads
// produces a fully resolved runtime context.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fats/simulator.hpp"

namespace fats {

// Raised for malformed or inconsistent configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string location_path, time_path, social_path;
    ExplorationBounds bounds{};
    RiskWeights lambda{};
    std::vector<std::array<std::string, 3>> critical_names;
    std::vector<std::array<std::string, 3>> pool_names;
    std::vector<std::string> arm_tokens;
    ExperimentPlan plan;  // arms filled by resolve()
    ModelParams model{};
    std::string output_dir = "out";
};

Config load_config(const std::string& path);

struct RuntimeContext {
    OntologySet onts;
    SimulationSetup setup;
    ExperimentPlan plan;
};

// Loads the ontologies, resolves every concept triple, builds the arm
// list, and re-checks the cross-field constraints (slate vs document
// count, pool contains a critical situation, ...).
RuntimeContext resolve(const Config& config);

}  // namespace fats
