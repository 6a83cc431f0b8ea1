#include "edgerent/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "edgerent/baselines.hpp"
#include "edgerent/coerr.hpp"
#include "edgerent/config.hpp"
#include "edgerent/estimators.hpp"
#include "edgerent/synthetic.hpp"

namespace edgerent {

KcgInstance random_kcg_instance(std::mt19937_64& rng, int max_items) {
    std::uniform_int_distribution<int> n_items(1, max_items);
    std::uniform_int_distribution<int> weight(1, 6);
    std::uniform_int_distribution<int> value(0, 100);
    std::uniform_int_distribution<int> budget(0, 15);
    std::bernoulli_distribution coin(0.3);

    KcgInstance inst;
    const int n = n_items(rng);
    std::uniform_int_distribution<int> groups(1, n);
    inst.n_groups = groups(rng);
    std::uniform_int_distribution<int> group(0, inst.n_groups - 1);
    for (int i = 0; i < n; ++i) {
        KcgItem it;
        it.id = i;
        it.group = group(rng);
        it.level = static_cast<double>(i + 1);
        it.weight = weight(rng);
        it.value = value(rng);
        inst.items.push_back(it);
    }
    inst.budget = budget(rng);
    // Forced items: at most one per group, added while they fit.
    std::vector<bool> used(static_cast<std::size_t>(inst.n_groups), false);
    double w = 0.0;
    for (const auto& it : inst.items) {
        if (!coin(rng) || used[static_cast<std::size_t>(it.group)] || w + it.weight > inst.budget) continue;
        used[static_cast<std::size_t>(it.group)] = true;
        w += it.weight;
        inst.forced.push_back(it.id);
    }
    inst.validate();
    return inst;
}

EquivalenceReport oracle_equivalence(std::size_t instances, std::uint64_t seed, int max_items) {
    std::mt19937_64 rng(seed);
    EquivalenceReport rep;
    for (std::size_t k = 0; k < instances; ++k) {
        const auto inst = random_kcg_instance(rng, max_items);
        const auto ref = solve_brute_force(inst);
        const auto bb = solve_branch_and_bound(inst);
        const auto dp = solve_exact_dp(inst);
        const auto gr = solve_greedy(inst);
        ++rep.instances;
        if (bb.value != ref.value || dp.value != ref.value) ++rep.value_mismatches;
        for (const auto* s : {&ref, &bb, &dp, &gr})
            if (!is_feasible(inst, *s)) ++rep.infeasible;
        const double d = measured_delta(gr, ref);
        rep.worst_delta = std::max(rep.worst_delta, d);
        if (!(d * gr.value >= ref.value) && !(gr.value >= ref.value)) ++rep.delta_violations;
        rep.greedy_values.push_back(gr.value);
        rep.optimal_values.push_back(ref.value);
    }
    return rep;
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Demands 0 or lambda_max with equal odds, the widest law on the range;
// mean lambda_max / 2.
bool pac_trial(std::int64_t count, double eps, double lambda_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    CellStats cell;
    for (std::int64_t i = 0; i < count; ++i) {
        const double x = coin(rng) ? lambda_max : 0.0;
        ++cell.count;
        cell.sum += x;
        cell.sum_sq += x * x;
    }
    return std::abs(mle_estimate(cell) - 0.5 * lambda_max) > eps;
}

PacReport finish(PacReport rep) {
    rep.frequency = static_cast<double>(rep.violations) / static_cast<double>(rep.trials);
    rep.bound = 2.0 * hoeffding_tail(rep.eps, rep.count, rep.lambda_max);
    const double p = std::min(1.0, rep.bound);
    rep.slack = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(rep.trials));
    rep.passed = rep.frequency <= rep.bound + rep.slack;
    return rep;
}

}  // namespace

PacReport pac_monte_carlo_serial(std::int64_t count, double eps, double lambda_max, std::size_t trials,
                                 std::uint64_t seed) {
    PacReport rep{count, eps, lambda_max, trials};
    for (std::size_t k = 0; k < trials; ++k)
        if (pac_trial(count, eps, lambda_max, trial_seed(seed, k))) ++rep.violations;
    return finish(rep);
}

PacReport pac_monte_carlo_parallel(std::int64_t count, double eps, double lambda_max, std::size_t trials,
                                   std::uint64_t seed) {
    PacReport rep{count, eps, lambda_max, trials};
    const auto n = static_cast<std::int64_t>(trials);
    std::size_t violations = 0;
#pragma omp parallel for reduction(+ : violations) schedule(static)
    for (std::int64_t k = 0; k < n; ++k)
        if (pac_trial(count, eps, lambda_max, trial_seed(seed, static_cast<std::size_t>(k)))) ++violations;
    rep.violations = violations;
    return finish(rep);
}

std::vector<SuiteResult> run_validation_suites(std::uint64_t seed) {
    std::vector<SuiteResult> out;

    {
        const auto rep = oracle_equivalence(1000, seed);
        std::ostringstream s;
        s << rep.instances << " instances, " << rep.value_mismatches << " value mismatches, " << rep.infeasible
          << " infeasible, greedy worst delta " << rep.worst_delta;
        out.push_back({"kcg oracle equivalence",
                       rep.value_mismatches == 0 && rep.infeasible == 0 && rep.delta_violations == 0, s.str()});
    }

    {
        bool ok = true;
        std::ostringstream s;
        for (std::int64_t c : {10, 50, 200}) {
            for (double eps : {15.0, 30.0}) {
                const auto rep = pac_monte_carlo_parallel(c, eps, 300.0, 10000, seed + static_cast<std::uint64_t>(c));
                ok = ok && rep.passed;
                s << "C=" << c << " eps=" << eps << " freq=" << rep.frequency << " bound=" << rep.bound << "; ";
            }
        }
        out.push_back({"pac monte carlo", ok, s.str()});
    }

    {
        const auto model = SyntheticModel::reference(5);
        const auto rep = check_holder([&](std::size_t n, std::span<const double> x) { return model.mean(n, x); },
                                      model.size(), 2, model.holder_L, model.holder_alpha, 20000, 1e-9, seed);
        std::ostringstream s;
        s << "worst ratio " << rep.worst_ratio << " at SBS " << rep.sbs;
        out.push_back({"holder condition", rep.passed, s.str()});
    }

    {
        const std::size_t expect_arms[] = {121, 487, 991};
        const std::size_t ns[] = {5, 8, 10};
        bool ok = true;
        std::ostringstream s;
        const auto params = design_parameters(2700, 1.0, 2);
        for (int i = 0; i < 3; ++i) {
            const auto c = ExperimentConfig::defaults(ns[i]);
            const auto arms = enumerate_arms(c.sbss, c.budget).size();
            const auto ceiling = static_cast<std::int64_t>(ns[i]) * params.partition().cell_count();
            ok = ok && arms == expect_arms[i] && ceiling == static_cast<std::int64_t>(25 * ns[i]);
            s << "N=" << ns[i] << ": " << arms << " arms, " << ceiling << " hypercubes; ";
        }
        ok = ok && params.cells_per_dim == 5;
        out.push_back({"table II counts", ok, s.str()});
    }
    return out;
}

}  // namespace edgerent
