#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "edgerent/kcg.hpp"
#include "edgerent/validation.hpp"

using namespace edgerent;

namespace {

KcgInstance make(std::vector<KcgItem> items, double budget, int groups, std::vector<int> forced = {}) {
    KcgInstance inst;
    inst.items = std::move(items);
    inst.budget = budget;
    inst.n_groups = groups;
    inst.forced = std::move(forced);
    inst.validate();
    return inst;
}

KcgInstance three_items() {
    // {0}:3 {1}:5 {2}:4 {0,2}:7 w5 {1,2}:9 w7
    return make({{0, 0, 1, 2, 3}, {1, 0, 2, 4, 5}, {2, 1, 1, 3, 4}}, 7, 2);
}

// Independent reference: enumerate every subset, keep feasible ones, pick
// the best value and the lexicographically smallest sorted id list among ties.
struct Ref {
    double value = -1.0;
    std::vector<int> ids;
};

Ref enumerate(const KcgInstance& inst) {
    Ref best;
    const std::size_t n = inst.items.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> ids;
        std::vector<int> groups;
        double w = 0.0, v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            ids.push_back(inst.items[i].id);
            groups.push_back(inst.items[i].group);
            w += inst.items[i].weight;
            v += inst.items[i].value;
        }
        std::sort(groups.begin(), groups.end());
        if (std::adjacent_find(groups.begin(), groups.end()) != groups.end()) continue;
        if (w > inst.budget) continue;
        bool has_forced = true;
        for (int f : inst.forced) has_forced = has_forced && std::find(ids.begin(), ids.end(), f) != ids.end();
        if (!has_forced) continue;
        if (v > best.value || (v == best.value && ids < best.ids)) best = {v, ids};
    }
    return best;
}

}  // namespace

TEST_CASE("hand instance") {
    const auto inst = three_items();
    for (auto kind : {SolverKind::kBruteForce, SolverKind::kDynamicProgramming, SolverKind::kBranchAndBound}) {
        const auto s = solve(inst, kind);
        CHECK(s.value == 9.0);
        CHECK(s.weight == 7.0);
        CHECK(s.chosen == std::vector<int>{1, 2});
        CHECK(s.exact);
        CHECK(s.delta == 1.0);
    }
}

TEST_CASE("forced items are kept") {
    auto inst = three_items();
    inst.forced = {0};
    inst.validate();
    for (auto kind : {SolverKind::kBruteForce, SolverKind::kDynamicProgramming, SolverKind::kBranchAndBound,
                      SolverKind::kGreedy}) {
        const auto s = solve(inst, kind);
        CHECK(s.chosen == std::vector<int>{0, 2});
        CHECK(s.value == 7.0);
    }
}

TEST_CASE("forced items over budget are rejected") {
    auto inst = three_items();
    inst.budget = 3;
    inst.forced = {1};
    CHECK_THROWS_WITH_AS(inst.validate(), "infeasible exploration", KcgError);
    inst.forced = {0, 1};
    inst.budget = 10;
    CHECK_THROWS_AS(inst.validate(), KcgError);
}

TEST_CASE("ties go to the lexicographically smallest id set") {
    const auto inst = make({{0, 0, 1, 1, 5}, {1, 1, 1, 1, 5}, {2, 2, 1, 1, 5}}, 2, 3);
    for (auto kind : {SolverKind::kBruteForce, SolverKind::kDynamicProgramming, SolverKind::kBranchAndBound})
        CHECK(solve(inst, kind).chosen == std::vector<int>{0, 1});
}

TEST_CASE("zero budget selects nothing") {
    auto inst = three_items();
    inst.budget = 0;
    for (auto kind : {SolverKind::kBruteForce, SolverKind::kDynamicProgramming, SolverKind::kBranchAndBound,
                      SolverKind::kGreedy}) {
        const auto s = solve(inst, kind);
        CHECK(s.chosen.empty());
        CHECK(s.value == 0.0);
    }
}

TEST_CASE("solver limits") {
    std::vector<KcgItem> many;
    for (int i = 0; i < 21; ++i) many.push_back({i, i, 1, 1, 1});
    CHECK_THROWS_WITH_AS(solve_brute_force(make(many, 5, 21)), "too large for brute force", KcgError);
    CHECK_THROWS_WITH_AS(solve_exact_dp(make({{0, 0, 1, 1.5, 3}}, 2, 1)), "DP requires integral weights", KcgError);
    CHECK(solve_exact_dp(make({{0, 0, 1, 1.5, 3}}, 2, 1), 0.5).value == 3.0);
    CHECK_THROWS_AS(parse_solver("simplex"), KcgError);
    CHECK(parse_solver("bruteforce") == SolverKind::kBruteForce);
    CHECK(to_string(SolverKind::kDynamicProgramming) == "dp");
}

TEST_CASE("exact solvers match exhaustive enumeration on random instances") {
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 1000; ++k) {
        const auto inst = random_kcg_instance(rng, 12);
        const auto ref = enumerate(inst);
        const auto bf = solve_brute_force(inst);
        const auto dp = solve_exact_dp(inst);
        const auto bb = solve_branch_and_bound(inst);
        REQUIRE(bf.value == ref.value);
        REQUIRE(dp.value == ref.value);
        REQUIRE(bb.value == ref.value);
        CHECK(bf.chosen == ref.ids);
        CHECK(dp.chosen == ref.ids);
        CHECK(bb.chosen == ref.ids);
        CHECK(is_feasible(inst, bb));
        CHECK(is_feasible(inst, dp));
    }
}

TEST_CASE("greedy is feasible and its measured ratio covers the gap") {
    std::mt19937_64 rng(7);
    double worst = 1.0;
    for (int k = 0; k < 1000; ++k) {
        const auto inst = random_kcg_instance(rng, 12);
        const auto g = solve_greedy(inst);
        const auto opt = solve_branch_and_bound(inst);
        CHECK_FALSE(g.exact);
        CHECK_FALSE(g.delta.has_value());
        CHECK(is_feasible(inst, g));
        const double d = measured_delta(g, opt);
        CHECK(d >= 1.0);
        CHECK(d * g.value >= opt.value);
        worst = std::max(worst, d);
    }
    CHECK(worst > 1.0);  // greedy is not exact on this family
}

TEST_CASE("measured delta") {
    KcgSolution a, e;
    a.value = 6;
    e.value = 10;
    CHECK(measured_delta(a, e) == doctest::Approx(10.0 / 6.0));
    a.value = 10;
    CHECK(measured_delta(a, e) == 1.0);
    a.value = 0;
    CHECK(std::isinf(measured_delta(a, e)));
    a.value = 3;
    e.value = 10;
    CHECK(measured_delta(a, e) * 3.0 >= 10.0);
}

TEST_CASE("building the instance from estimates") {
    SystemModel m;
    m.sbss.resize(2);
    m.sbss[1].id = 1;
    const std::vector<double> est{500.0, 100.0};
    const auto inst = build_kcg(est, m);
    REQUIRE(inst.items.size() == 6);
    CHECK(inst.items[0].group == 0);
    CHECK(inst.items[0].level == 2.0);
    CHECK(inst.items[0].weight == 2.0);
    CHECK(inst.items[0].value == doctest::Approx(300.0 * m.delay_reduction(0, 2)));
    CHECK(inst.items[4].group == 1);
    CHECK(inst.items[4].level == 4.0);
    CHECK(inst.items[4].value == doctest::Approx(100.0 * m.delay_reduction(1, 4)));

    const std::vector<ForcedRental> forced{{1, 2.0}};
    const auto pinned = build_kcg(est, m, forced);
    CHECK(pinned.forced == std::vector<int>{3});
    const std::vector<ForcedRental> bad{{1, 3.0}};
    CHECK_THROWS_AS(build_kcg(est, m, bad), KcgError);

    const auto sol = solve_branch_and_bound(inst);
    const auto d = to_decision(inst, sol, 2);
    CHECK(check_feasible(d, m.sbss, m.budget));
}
