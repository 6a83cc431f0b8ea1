#pragma once

// Experiment configuration (JSON) and the glue that turns it into a scenario
// plus a policy roster. Unknown keys are rejected at every level.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edgerent/harness.hpp"
#include "edgerent/kcg.hpp"
#include "edgerent/model.hpp"
#include "edgerent/policy.hpp"
#include "edgerent/synthetic.hpp"

namespace edgerent {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { kSynthetic, kTrace };

struct ExperimentConfig {
    Mode mode = Mode::kSynthetic;
    std::string trace_path;
    std::vector<std::string> sites;  // trace mode: site ids in SBS order; empty = sorted distinct

    std::size_t n_sbs = 5;
    /// One menu shared by every SBS (true) or an explicit per-SBS list.
    bool uniform_sbs = true;
    std::vector<SbsConfig> sbss;
    CloudConfig cloud;
    TaskProfile task;
    double budget = 8.0;

    std::int64_t horizon = 2700;
    double slot_seconds = 10800.0;
    double day_seconds = 86400.0;
    double alpha = 1.0;
    int dims = 2;
    std::optional<int> cells_per_dim;
    double demand_cap = 900.0;

    double noise_std = 30.0;
    std::vector<DemandProfile> profiles;  // empty = reference profiles

    std::vector<std::string> policies{"oracle", "coerr", "coerr-or2", "cucb", "linucb", "random"};
    SolverKind solver = SolverKind::kBranchAndBound;
    std::uint64_t seed = 1;
    int replications = 1;
    std::string output_dir = "results";
    double linucb_exploration = 1.0;
    double linucb_ridge = 1.0;
    std::optional<double> delta;

    /// Reference defaults with N SBSs.
    static ExperimentConfig defaults(std::size_t n_sbs = 5);

    /// Rebuilds the SBS list after n_sbs changes (uniform menus only).
    void resize_sbs(std::size_t n);
    /// Replaces every SBS menu with `levels`, keeping per-unit price and cap.
    void set_rental_set(const std::vector<double>& levels);

    SystemModel model() const;
    SyntheticModel synthetic_model() const;
    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
/// Reads and validates; errors name the path.
ExperimentConfig load_config(const std::string& path);

/// FNV-1a over the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& c);

/// Seed of the r-th replication derived from the base seed.
std::uint64_t replication_seed(std::uint64_t base, int replication);

struct BuiltScenario {
    Scenario scenario;
    std::size_t clipped = 0;
    std::vector<std::string> warnings;
};

BuiltScenario build_scenario(const ExperimentConfig& c, std::uint64_t seed);

/// Known names: oracle, coerr, coerr-doubling, coerr-or<X>, cucb, linucb, random.
std::unique_ptr<Policy> make_policy(const std::string& name, const ExperimentConfig& c, std::uint64_t seed);
std::vector<std::unique_ptr<Policy>> make_policies(const ExperimentConfig& c, std::uint64_t seed);

/// One full run (one replication) with the given seed.
RunResult run_experiment(const ExperimentConfig& c, std::uint64_t seed);

/// `# seed=... config_hash=... version=...`
std::string csv_comment(const ExperimentConfig& c, std::uint64_t seed);

}  // namespace edgerent
