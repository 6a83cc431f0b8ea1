#pragma once

// Independent replications of one experiment. The serial loop is the
// reference; the OpenMP loop must produce identical results.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "edgerent/config.hpp"
#include "edgerent/harness.hpp"

namespace edgerent {

/// Runs replication r with seed replication_seed(c.seed, r).
using ReplicationFn = std::function<RunResult(const ExperimentConfig&, std::uint64_t seed)>;

std::vector<RunResult> run_replications_serial(const ExperimentConfig& c, const ReplicationFn& fn = run_experiment);
std::vector<RunResult> run_replications_parallel(const ExperimentConfig& c, const ReplicationFn& fn = run_experiment);

struct PolicySummary {
    std::string policy;
    double mean_final_utility = 0.0;
    double mean_final_regret = 0.0;
    double min_final_utility = 0.0;
    double max_final_utility = 0.0;
    /// Mean cumulative regret per slot across replications.
    std::vector<double> mean_regret;
};

/// Keyed by policy name; every run must hold the same policy roster.
std::map<std::string, PolicySummary> summarize(const std::vector<RunResult>& runs);

/// Mean slope of a cumulative series over slots (a, b], 1-based.
double window_slope(const std::vector<double>& cumulative, std::size_t a, std::size_t b);

}  // namespace edgerent
