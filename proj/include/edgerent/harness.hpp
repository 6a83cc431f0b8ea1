#pragma once

// Run loop shared by every experiment. All policies in one run see the same
// contexts and the same realized demand (common random numbers); each slot's
// regret compares a policy against the Oracle decision scored on that same
// realized demand.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgerent/kcg.hpp"
#include "edgerent/model.hpp"
#include "edgerent/policy.hpp"
#include "edgerent/trace.hpp"

namespace edgerent {

struct Scenario {
    SystemModel model;
    SlotSeries series;
    std::vector<double> expected;  // slots x N, true (or hindsight) mean demand
    std::int64_t horizon = 0;
    SolverKind oracle_solver = SolverKind::kBranchAndBound;
    SolverOptions solver_opts;
};

struct SlotRecord {
    std::int64_t slot = 0;  // 1-based
    std::string policy;
    Phase phase = Phase::kNone;
    double spend = 0.0;
    double utility = 0.0;
    double oracle_utility = 0.0;
    double cum_regret = 0.0;
    double cum_delta_regret = 0.0;
    RentalDecision decision;
};

struct PolicyTrace {
    std::string policy;
    std::vector<SlotRecord> records;
    /// Worst measured approximation ratio of the policy's solves (1 if exact).
    double worst_delta = 1.0;

    double final_utility() const;
    double final_regret() const { return records.empty() ? 0.0 : records.back().cum_regret; }
};

struct RunResult {
    std::vector<PolicyTrace> traces;
    std::uint64_t crn_hash = 0;
    std::uint64_t seed = 0;
    std::size_t clipped_demands = 0;
    std::vector<std::string> warnings;

    const PolicyTrace& trace(const std::string& policy) const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = 1469598103934665603ull);

/// Hash of the context, demand and expected-demand sequences up to the horizon.
std::uint64_t scenario_hash(const Scenario& scenario);

/// Drives every policy over the scenario. Throws if a policy emits an
/// infeasible decision. `delta` fixes the ratio used for the delta-regret
/// column; by default each policy's worst measured ratio is used.
RunResult simulate(const Scenario& scenario, std::span<const std::unique_ptr<Policy>> policies,
                   std::optional<double> delta = std::nullopt);

/// Cumulative sum of (oracle - policy) utility.
std::vector<double> regret_series(std::span<const SlotRecord> records);
/// Cumulative sum of (oracle / delta - policy) utility.
std::vector<double> delta_regret_series(std::span<const SlotRecord> records, double delta);

struct RegretBound {
    double exponent = 0.0;  // (2 alpha + D) / (3 alpha + D)
    double value = 0.0;     // 2^D N B lambda_max d_max / w_min * T^exponent ln T
};

struct BoundConstants {
    std::size_t n_sbs = 1;
    double budget = 1.0;
    double lambda_max = 1.0;
    double d_max = 1.0;
    double w_min = 1.0;
};

RegretBound regret_bound(std::int64_t horizon, double alpha, int dims, const BoundConstants& c);

/// t^exponent ln t, the shape of the leading-order bound.
double bound_shape(double t, double exponent);

/// CSV: one comment line, then
/// `slot,policy,phase,spend,utility,oracle_utility,cum_regret,cum_delta_regret,decision`.
void write_results_csv(std::ostream& os, const RunResult& run, const std::string& comment);

}  // namespace edgerent
