#include "edgerent/kcg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace edgerent {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double value_tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

bool fits(double weight, double budget) { return weight <= budget + 1e-9 * std::max(1.0, budget); }

KcgSolution make_solution(const KcgInstance& inst, std::vector<int> chosen, bool exact) {
    std::sort(chosen.begin(), chosen.end());
    KcgSolution s;
    for (int id : chosen) {
        const auto& it = inst.item(id);
        s.value += it.value;
        s.weight += it.weight;
    }
    s.chosen = std::move(chosen);
    s.exact = exact;
    if (exact) s.delta = 1.0;
    return s;
}

// Per-item view shared by the search-based solvers. Index i refers to the
// i-th item in ascending id order.
struct Layout {
    std::vector<char> forced;         // item is forced
    std::vector<char> group_forced;   // group holds a forced item
    std::vector<double> forced_w_suffix;
    std::vector<double> forced_v_suffix;
    std::vector<int> forced_n_suffix;
    std::vector<std::size_t> by_density;  // free positive items, best density first

    explicit Layout(const KcgInstance& inst) {
        const std::size_t k = inst.items.size();
        forced.assign(k, 0);
        group_forced.assign(static_cast<std::size_t>(inst.n_groups), 0);
        for (int id : inst.forced) {
            for (std::size_t i = 0; i < k; ++i)
                if (inst.items[i].id == id) forced[i] = 1;
            group_forced[static_cast<std::size_t>(inst.item(id).group)] = 1;
        }
        forced_w_suffix.assign(k + 1, 0.0);
        forced_v_suffix.assign(k + 1, 0.0);
        forced_n_suffix.assign(k + 1, 0);
        for (std::size_t i = k; i-- > 0;) {
            forced_w_suffix[i] = forced_w_suffix[i + 1] + (forced[i] ? inst.items[i].weight : 0.0);
            forced_v_suffix[i] = forced_v_suffix[i + 1] + (forced[i] ? inst.items[i].value : 0.0);
            forced_n_suffix[i] = forced_n_suffix[i + 1] + (forced[i] ? 1 : 0);
        }
        for (std::size_t i = 0; i < k; ++i) {
            const auto& it = inst.items[i];
            if (!forced[i] && !group_forced[static_cast<std::size_t>(it.group)] && it.value > 0.0)
                by_density.push_back(i);
        }
        auto density = [&](std::size_t i) {
            const auto& it = inst.items[i];
            return it.weight > 0.0 ? it.value / it.weight : std::numeric_limits<double>::infinity();
        };
        std::stable_sort(by_density.begin(), by_density.end(),
                         [&](std::size_t a, std::size_t b) { return density(a) > density(b); });
    }

    bool is_free(const KcgInstance& inst, std::size_t i) const {
        return !forced[i] && !group_forced[static_cast<std::size_t>(inst.items[i].group)];
    }
};

// Depth-first search over items in ascending id order. Branch order
// "stop here" < "take item i" < "skip item i" visits complete selections in
// lexicographic order of their sorted id sets.
class LexSearch {
public:
    LexSearch(const KcgInstance& inst, const Layout& lay)
        : inst_(inst), lay_(lay), used_(static_cast<std::size_t>(inst.n_groups), 0) {}

    // Best achievable value (strict improvements only beyond `floor`).
    double maximize(double floor) {
        best_ = floor;
        weight_ = 0.0;
        value_ = 0.0;
        maximize_from(0);
        return best_;
    }

    // First selection in lexicographic order reaching `target` within tolerance.
    std::optional<std::vector<int>> first_reaching(double target) {
        target_ = target;
        weight_ = 0.0;
        value_ = 0.0;
        chosen_.clear();
        std::fill(used_.begin(), used_.end(), 0);
        if (find_from(0)) return chosen_;
        return std::nullopt;
    }

private:
    double bound(std::size_t i) const {
        double cap = inst_.budget - weight_ - lay_.forced_w_suffix[i];
        double b = value_ + lay_.forced_v_suffix[i];
        for (std::size_t j : lay_.by_density) {
            if (j < i || used_[static_cast<std::size_t>(inst_.items[j].group)]) continue;
            const auto& it = inst_.items[j];
            if (it.weight <= 0.0) {
                b += it.value;
            } else if (cap > 0.0) {
                const double take = std::min(1.0, cap / it.weight);
                b += take * it.value;
                cap -= take * it.weight;
            }
        }
        return b;
    }

    bool can_take(std::size_t i) const {
        const auto& it = inst_.items[i];
        return !used_[static_cast<std::size_t>(it.group)] &&
               fits(weight_ + it.weight + lay_.forced_w_suffix[i + 1], inst_.budget);
    }

    void push(std::size_t i) {
        const auto& it = inst_.items[i];
        used_[static_cast<std::size_t>(it.group)] = 1;
        weight_ += it.weight;
        value_ += it.value;
        chosen_.push_back(it.id);
    }

    void pop(std::size_t i, double w, double v) {
        used_[static_cast<std::size_t>(inst_.items[i].group)] = 0;
        weight_ = w;
        value_ = v;
        chosen_.pop_back();
    }

    void maximize_from(std::size_t i) {
        const std::size_t k = inst_.items.size();
        if (i == k) {
            if (value_ > best_ + value_tol(best_)) best_ = value_;
            return;
        }
        if (bound(i) <= best_ + value_tol(best_)) return;
        const double w = weight_, v = value_;
        if (lay_.forced[i]) {
            push(i);
            maximize_from(i + 1);
            pop(i, w, v);
            return;
        }
        if (lay_.is_free(inst_, i) && inst_.items[i].value > 0.0 && can_take(i)) {
            push(i);
            maximize_from(i + 1);
            pop(i, w, v);
        }
        maximize_from(i + 1);
    }

    bool find_from(std::size_t i) {
        const std::size_t k = inst_.items.size();
        if (lay_.forced_n_suffix[i] == 0 && value_ >= target_ - value_tol(target_)) return true;
        if (i == k) return false;
        if (bound(i) < target_ - value_tol(target_)) return false;
        const double w = weight_, v = value_;
        if (lay_.forced[i]) {
            push(i);
            if (find_from(i + 1)) return true;
            pop(i, w, v);
            return false;
        }
        if (lay_.is_free(inst_, i) && can_take(i)) {
            push(i);
            if (find_from(i + 1)) return true;
            pop(i, w, v);
        }
        return find_from(i + 1);
    }

    const KcgInstance& inst_;
    const Layout& lay_;
    std::vector<char> used_;
    std::vector<int> chosen_;
    double weight_ = 0.0;
    double value_ = 0.0;
    double best_ = kNegInf;
    double target_ = 0.0;
};

double forced_value(const KcgInstance& inst) {
    std::vector<int> f = inst.forced;
    return make_solution(inst, f, true).value;
}

}  // namespace

void KcgInstance::validate() {
    std::sort(items.begin(), items.end(), [](const KcgItem& a, const KcgItem& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < items.size(); ++i)
        if (items[i].id == items[i - 1].id) throw KcgError("duplicate item id " + std::to_string(items[i].id));
    for (const auto& it : items) {
        if (it.group < 0 || it.group >= n_groups)
            throw KcgError("item " + std::to_string(it.id) + " has group out of range");
        if (!(it.weight >= 0.0)) throw KcgError("item " + std::to_string(it.id) + " has negative weight");
    }
    if (budget < 0.0) throw KcgError("budget must be non-negative");
    std::sort(forced.begin(), forced.end());
    forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
    std::unordered_set<int> groups;
    double w = 0.0;
    for (int id : forced) {
        const auto& it = item(id);
        if (!groups.insert(it.group).second)
            throw KcgError("two forced items in group " + std::to_string(it.group));
        w += it.weight;
    }
    if (!fits(w, budget)) throw KcgError("infeasible exploration");
}

const KcgItem& KcgInstance::item(int id) const {
    auto it = std::lower_bound(items.begin(), items.end(), id,
                               [](const KcgItem& a, int v) { return a.id < v; });
    if (it == items.end() || it->id != id) throw KcgError("unknown item id " + std::to_string(id));
    return *it;
}

SolverKind parse_solver(const std::string& name) {
    if (name == "bb") return SolverKind::kBranchAndBound;
    if (name == "dp") return SolverKind::kDynamicProgramming;
    if (name == "bruteforce") return SolverKind::kBruteForce;
    if (name == "greedy") return SolverKind::kGreedy;
    throw KcgError("unknown solver '" + name + "' (expected bb, dp, bruteforce or greedy)");
}

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::kBranchAndBound: return "bb";
        case SolverKind::kDynamicProgramming: return "dp";
        case SolverKind::kBruteForce: return "bruteforce";
        case SolverKind::kGreedy: return "greedy";
    }
    return "?";
}

KcgInstance build_kcg(std::span<const double> demand_estimates, const SystemModel& model,
                      std::span<const ForcedRental> forced) {
    if (demand_estimates.size() != model.size()) throw KcgError("estimate vector has wrong length");
    KcgInstance inst;
    inst.budget = model.budget;
    inst.n_groups = static_cast<int>(model.size());
    int id = 0;
    for (std::size_t n = 0; n < model.size(); ++n) {
        const double est = demand_estimates[n];
        if (!std::isfinite(est) || est < 0.0) throw KcgError("demand estimate must be finite and non-negative");
        const auto& sbs = model.sbss[n];
        for (std::size_t i = 0; i < sbs.rental_set.size(); ++i) {
            const double f = sbs.rental_set[i];
            if (f <= 0.0) continue;
            inst.items.push_back({id++, static_cast<int>(n), f, sbs.prices[i], model.utility(n, f, est)});
        }
    }
    for (const auto& fr : forced) {
        auto it = std::find_if(inst.items.begin(), inst.items.end(), [&](const KcgItem& x) {
            return x.group == fr.group && x.level == fr.level;
        });
        if (it == inst.items.end())
            throw KcgError("forced level not offered by SBS " + std::to_string(fr.group));
        inst.forced.push_back(it->id);
    }
    inst.validate();
    return inst;
}

KcgSolution solve_brute_force(const KcgInstance& inst, std::size_t max_items) {
    if (inst.items.size() > max_items) throw KcgError("too large for brute force");
    const Layout lay(inst);
    std::vector<std::vector<std::size_t>> options(static_cast<std::size_t>(inst.n_groups));
    for (std::size_t i = 0; i < inst.items.size(); ++i) {
        const auto g = static_cast<std::size_t>(inst.items[i].group);
        if (lay.group_forced[g] && !lay.forced[i]) continue;
        options[g].push_back(i);
    }

    // Pass 1 finds the optimum, pass 2 the lexicographically smallest set
    // within tolerance of it.
    double best = kNegInf;
    std::optional<std::vector<int>> best_set;
    std::vector<std::size_t> pick;
    for (int pass = 0; pass < 2; ++pass) {
        std::function<void(std::size_t)> rec = [&](std::size_t g) {
            if (g == options.size()) {
                std::vector<std::size_t> idx = pick;
                std::sort(idx.begin(), idx.end());
                double w = 0.0, v = 0.0;
                std::vector<int> ids;
                for (std::size_t i : idx) {
                    w += inst.items[i].weight;
                    v += inst.items[i].value;
                    ids.push_back(inst.items[i].id);
                }
                if (!fits(w, inst.budget)) return;
                if (pass == 0) {
                    best = std::max(best, v);
                } else if (v >= best - value_tol(best) && (!best_set || ids < *best_set)) {
                    best_set = std::move(ids);
                }
                return;
            }
            if (!lay.group_forced[g]) rec(g + 1);  // nothing from this group
            for (std::size_t i : options[g]) {
                pick.push_back(i);
                rec(g + 1);
                pick.pop_back();
            }
        };
        rec(0);
    }
    return make_solution(inst, best_set.value_or(std::vector<int>{}), true);
}

namespace {

enum class Pin : char { kFree, kIn, kOut };

// Multiple-choice knapsack DP over groups with integer weights. Returns the
// best value, or -inf when the pins are infeasible.
double dp_best(const KcgInstance& inst, const std::vector<long>& w, long cap,
               const std::vector<Pin>& pins) {
    const std::size_t k = inst.items.size();
    std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(inst.n_groups));
    std::vector<int> pinned(static_cast<std::size_t>(inst.n_groups), -1);
    for (std::size_t i = 0; i < k; ++i) {
        const auto g = static_cast<std::size_t>(inst.items[i].group);
        if (pins[i] == Pin::kIn) {
            if (pinned[g] >= 0) return kNegInf;
            pinned[g] = static_cast<int>(i);
        } else if (pins[i] == Pin::kFree) {
            groups[g].push_back(i);
        }
    }
    std::vector<double> dp(static_cast<std::size_t>(cap) + 1, 0.0), next;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        next.assign(dp.size(), kNegInf);
        for (long c = 0; c <= cap; ++c) {
            const auto cu = static_cast<std::size_t>(c);
            if (pinned[g] >= 0) {
                const auto i = static_cast<std::size_t>(pinned[g]);
                if (w[i] <= c && dp[static_cast<std::size_t>(c - w[i])] > kNegInf)
                    next[cu] = dp[static_cast<std::size_t>(c - w[i])] + inst.items[i].value;
                continue;
            }
            next[cu] = dp[cu];
            for (std::size_t i : groups[g])
                if (w[i] <= c && dp[static_cast<std::size_t>(c - w[i])] > kNegInf)
                    next[cu] = std::max(next[cu], dp[static_cast<std::size_t>(c - w[i])] + inst.items[i].value);
        }
        dp.swap(next);
    }
    return dp.back();
}

}  // namespace

KcgSolution solve_exact_dp(const KcgInstance& inst, double quantum) {
    if (!(quantum > 0.0)) throw KcgError("DP quantum must be positive");
    const std::size_t k = inst.items.size();
    std::vector<long> w(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double scaled = inst.items[i].weight / quantum;
        const double r = std::round(scaled);
        if (std::abs(scaled - r) > 1e-9 * std::max(1.0, scaled)) throw KcgError("DP requires integral weights");
        w[i] = static_cast<long>(r);
    }
    const long cap = static_cast<long>(std::floor(inst.budget / quantum + 1e-9));

    const Layout lay(inst);
    std::vector<Pin> pins(k, Pin::kFree);
    for (std::size_t i = 0; i < k; ++i) {
        if (lay.forced[i]) pins[i] = Pin::kIn;
        else if (!lay.is_free(inst, i)) pins[i] = Pin::kOut;
    }
    const double best = dp_best(inst, w, cap, pins);
    if (best == kNegInf) throw KcgError("infeasible exploration");
    const double floor = best - value_tol(best);

    // Walk the lexicographic order: at each position either stop, take the
    // next item, or skip it, keeping only moves that can still reach `best`.
    std::vector<int> chosen;
    for (std::size_t i = 0; i <= k; ++i) {
        if (lay.forced_n_suffix[i] == 0) {
            std::vector<Pin> stop = pins;
            for (std::size_t j = i; j < k; ++j)
                if (stop[j] == Pin::kFree) stop[j] = Pin::kOut;
            if (dp_best(inst, w, cap, stop) >= floor) {
                for (std::size_t j = i; j < k; ++j)
                    if (lay.forced[j]) chosen.push_back(inst.items[j].id);
                break;
            }
        }
        if (i == k) break;
        if (pins[i] == Pin::kIn) {
            chosen.push_back(inst.items[i].id);
            continue;
        }
        if (pins[i] == Pin::kFree) {
            std::vector<Pin> take = pins;
            take[i] = Pin::kIn;
            if (dp_best(inst, w, cap, take) >= floor) {
                pins = std::move(take);
                chosen.push_back(inst.items[i].id);
                continue;
            }
            pins[i] = Pin::kOut;
        }
    }
    return make_solution(inst, std::move(chosen), true);
}

KcgSolution solve_branch_and_bound(const KcgInstance& inst) {
    const Layout lay(inst);
    LexSearch search(inst, lay);
    const double floor = forced_value(inst);
    double best = search.maximize(floor);
    best = std::max(best, floor);
    auto set = search.first_reaching(best);
    if (!set) throw KcgError("branch-and-bound lost the incumbent");
    return make_solution(inst, std::move(*set), true);
}

KcgSolution solve_greedy(const KcgInstance& inst) {
    const Layout lay(inst);
    std::vector<int> slot(static_cast<std::size_t>(inst.n_groups), -1);  // chosen item index per group
    double weight = 0.0;
    for (int id : inst.forced) {
        for (std::size_t i = 0; i < inst.items.size(); ++i)
            if (inst.items[i].id == id) slot[static_cast<std::size_t>(inst.items[i].group)] = static_cast<int>(i);
        weight += inst.item(id).weight;
    }
    auto density = [&](std::size_t i) {
        const auto& it = inst.items[i];
        return it.weight > 0.0 ? it.value / it.weight : std::numeric_limits<double>::infinity();
    };
    for (;;) {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < inst.items.size(); ++i) {
            const auto& it = inst.items[i];
            const auto g = static_cast<std::size_t>(it.group);
            if (!lay.is_free(inst, i) || it.value <= 0.0 || slot[g] == static_cast<int>(i)) continue;
            double extra = it.weight;
            if (slot[g] >= 0) {
                const auto& cur = inst.items[static_cast<std::size_t>(slot[g])];
                if (!(it.value > cur.value)) continue;
                extra -= cur.weight;
            }
            if (!fits(weight + extra, inst.budget)) continue;
            if (!pick || density(i) > density(*pick)) pick = i;
        }
        if (!pick) break;
        const auto g = static_cast<std::size_t>(inst.items[*pick].group);
        if (slot[g] >= 0) weight -= inst.items[static_cast<std::size_t>(slot[g])].weight;
        weight += inst.items[*pick].weight;
        slot[g] = static_cast<int>(*pick);
    }
    std::vector<int> chosen;
    for (int i : slot)
        if (i >= 0) chosen.push_back(inst.items[static_cast<std::size_t>(i)].id);
    return make_solution(inst, std::move(chosen), false);
}

KcgSolution solve(const KcgInstance& inst, SolverKind kind, const SolverOptions& opts) {
    switch (kind) {
        case SolverKind::kBranchAndBound: return solve_branch_and_bound(inst);
        case SolverKind::kDynamicProgramming: return solve_exact_dp(inst, opts.dp_quantum);
        case SolverKind::kBruteForce: return solve_brute_force(inst, opts.brute_force_cap);
        case SolverKind::kGreedy: return solve_greedy(inst);
    }
    throw KcgError("unknown solver");
}

double measured_delta(const KcgSolution& approx, const KcgSolution& exact) {
    if (approx.value >= exact.value) return 1.0;
    if (approx.value <= 0.0) return std::numeric_limits<double>::infinity();
    // The quotient can round so that delta * approx lands one ulp short.
    double d = exact.value / approx.value;
    while (d * approx.value < exact.value) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

bool is_feasible(const KcgInstance& inst, const KcgSolution& sol) {
    std::unordered_set<int> groups;
    double w = 0.0;
    for (int id : sol.chosen) {
        const auto& it = inst.item(id);
        if (!groups.insert(it.group).second) return false;
        w += it.weight;
    }
    for (int id : inst.forced)
        if (!std::binary_search(sol.chosen.begin(), sol.chosen.end(), id)) return false;
    return fits(w, inst.budget);
}

RentalDecision to_decision(const KcgInstance& inst, const KcgSolution& sol, std::size_t n_sbs) {
    RentalDecision d(n_sbs);
    for (int id : sol.chosen) {
        const auto& it = inst.item(id);
        d[static_cast<std::size_t>(it.group)] = it.level;
    }
    return d;
}

}  // namespace edgerent
