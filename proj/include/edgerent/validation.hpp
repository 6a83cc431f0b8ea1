#pragma once

// Self-check suites behind `edgerent validate` and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edgerent/kcg.hpp"

namespace edgerent {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Random instance: up to `max_items` items in random groups, integer weights
/// 1..6, integer values 0..100, budget 0..15 and a random feasible forced set.
KcgInstance random_kcg_instance(std::mt19937_64& rng, int max_items = 12);

struct EquivalenceReport {
    std::size_t instances = 0;
    std::size_t value_mismatches = 0;
    std::size_t infeasible = 0;
    std::size_t delta_violations = 0;  // delta * greedy < optimum
    double worst_delta = 1.0;
    std::vector<double> greedy_values;
    std::vector<double> optimal_values;
};

EquivalenceReport oracle_equivalence(std::size_t instances, std::uint64_t seed, int max_items = 12);

struct PacReport {
    std::int64_t count = 0;
    double eps = 0.0;
    double lambda_max = 0.0;
    std::size_t trials = 0;
    std::size_t violations = 0;
    double frequency = 0.0;
    double bound = 0.0;  // 2 exp(-2 C eps^2 / lambda_max^2)
    double slack = 0.0;  // 3 sigma of a binomial at the bound
    bool passed = false;
};

/// Monte-Carlo check of the two-sided Hoeffding tail for the sample mean of
/// `count` i.i.d. demands from a bounded distribution on [0, lambda_max]. Each
/// trial draws from its own seeded stream, so serial and parallel agree.
PacReport pac_monte_carlo_serial(std::int64_t count, double eps, double lambda_max, std::size_t trials,
                                 std::uint64_t seed);
PacReport pac_monte_carlo_parallel(std::int64_t count, double eps, double lambda_max, std::size_t trials,
                                   std::uint64_t seed);

/// Full `validate` matrix.
std::vector<SuiteResult> run_validation_suites(std::uint64_t seed = 1);

}  // namespace edgerent
