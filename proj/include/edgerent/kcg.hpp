#pragma once

// Knapsack with conflict graph for the per-slot rental subproblem.
//
// Every (SBS, nonzero level) pair is an item; items of the same SBS conflict
// pairwise, so the conflict graph is a disjoint union of cliques (a
// multiple-choice knapsack). Forced items model the minimal rentals that
// semi-exploration pins at under-explored SBSs.
//
// All solvers break ties the same way: among solutions whose value is within
// a relative 1e-9 of the optimum, the lexicographically smallest sorted id
// set wins. Reported values are always summed in ascending id order so that
// exact solvers agree bit-for-bit on the same instance.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgerent/model.hpp"

namespace edgerent {

class KcgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KcgItem {
    int id = 0;
    int group = 0;
    double level = 0.0;
    double weight = 0.0;
    double value = 0.0;
};

struct KcgInstance {
    std::vector<KcgItem> items;  // sorted by id
    double budget = 0.0;
    int n_groups = 0;
    std::vector<int> forced;  // item ids that must be selected

    /// Sorts items by id and checks ids, groups, forced ids and forced weight.
    void validate();
    const KcgItem& item(int id) const;
};

struct KcgSolution {
    std::vector<int> chosen;  // ascending ids
    double value = 0.0;
    double weight = 0.0;
    bool exact = false;
    /// Approximation ratio; 1 for exact solvers, unset for an unverified
    /// approximate solution.
    std::optional<double> delta;
};

enum class SolverKind { kBranchAndBound, kDynamicProgramming, kBruteForce, kGreedy };

SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind kind);

struct SolverOptions {
    std::size_t brute_force_cap = 20;
    double dp_quantum = 1.0;
};

struct ForcedRental {
    int group = 0;
    double level = 0.0;
};

/// One item per (SBS, nonzero level) with weight w_n(f) and value
/// min(estimate_n, cap_n(f)) * reduction_n(f).
KcgInstance build_kcg(std::span<const double> demand_estimates, const SystemModel& model,
                      std::span<const ForcedRental> forced = {});

KcgSolution solve_brute_force(const KcgInstance& inst, std::size_t max_items = 20);
KcgSolution solve_exact_dp(const KcgInstance& inst, double quantum = 1.0);
KcgSolution solve_branch_and_bound(const KcgInstance& inst);
KcgSolution solve_greedy(const KcgInstance& inst);

KcgSolution solve(const KcgInstance& inst, SolverKind kind, const SolverOptions& opts = {});

/// optimum / approx, the smallest delta for which delta * approx >= optimum.
double measured_delta(const KcgSolution& approx, const KcgSolution& exact);

bool is_feasible(const KcgInstance& inst, const KcgSolution& sol);

/// Maps a solution back to per-SBS levels.
RentalDecision to_decision(const KcgInstance& inst, const KcgSolution& sol, std::size_t n_sbs);

}  // namespace edgerent
