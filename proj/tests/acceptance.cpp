// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything holds).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edgerent/baselines.hpp"
#include "edgerent/coerr.hpp"
#include "edgerent/config.hpp"
#include "edgerent/harness.hpp"
#include "edgerent/kcg.hpp"
#include "edgerent/replication.hpp"
#include "edgerent/trace.hpp"
#include "edgerent/validation.hpp"

using namespace edgerent;

namespace {

// Pinned tolerances and sizes.
constexpr int kReplications = 30;
constexpr int kMajority = 27;           // replications that must agree
constexpr int kKcgInstances = 1000;
constexpr int kKcgMaxItems = 12;
constexpr std::size_t kPacTrials = 10000;
constexpr double kPacLambdaMax = 300.0;
constexpr double kSigmaSlack = 3.0;
constexpr double kExponentTol = 1e-12;
constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Exhaustive reference for one KCG instance, written independently of the
// library solvers.
double enumerate_best(const KcgInstance& inst) {
    const std::size_t n = inst.items.size();
    double best = -1.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> used(static_cast<std::size_t>(inst.n_groups), 0);
        double w = 0.0, v = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (!(mask >> i & 1u)) continue;
            const auto& it = inst.items[i];
            ok = ++used[static_cast<std::size_t>(it.group)] == 1;
            w += it.weight;
            v += it.value;
        }
        if (!ok || w > inst.budget) continue;
        for (int f : inst.forced) {
            std::size_t i = 0;
            while (inst.items[i].id != f) ++i;
            ok = ok && (mask >> i & 1u);
        }
        if (ok) best = std::max(best, v);
    }
    return best;
}

std::size_t odometer_arms(std::size_t n, const std::vector<double>& prices, double budget) {
    std::vector<std::size_t> digit(n, 0);
    std::size_t count = 0;
    for (;;) {
        double cost = 0.0;
        for (auto d : digit) cost += prices[d];
        if (cost <= budget) ++count;
        std::size_t i = 0;
        while (i < n && ++digit[i] == prices.size()) digit[i++] = 0;
        if (i == n) return count;
    }
}

// Wraps COERR and audits every decision it emits.
class Audited : public Policy {
public:
    explicit Audited(std::unique_ptr<CoerrPolicy> inner) : inner_(std::move(inner)) {}
    std::string name() const override { return inner_->name(); }
    Decision decide(const SlotView& slot) override {
        auto d = inner_->decide(slot);
        const auto& m = inner_->model();
        if (!check_feasible(d.rental, m.sbss, m.budget)) ++infeasible;
        if (d.phase == Phase::kSemiExplore)
            for (auto n : inner_->last_under_explored())
                if (d.rental[n] < m.sbss[n].min_level()) ++missing_fmin;
        return d;
    }
    void observe(const SlotView& slot, const Decision& d, std::span<const double> demand) override {
        inner_->observe(slot, d, demand);
    }
    const CoerrPolicy& inner() const { return *inner_; }
    std::int64_t infeasible = 0;
    std::int64_t missing_fmin = 0;

private:
    std::unique_ptr<CoerrPolicy> inner_;
};

struct ReferenceRun {
    RunResult run;
    std::int64_t infeasible = 0;
    std::int64_t missing_fmin = 0;
    std::int64_t max_explore_rentals = 0;
    std::size_t cells = 0;
};

ReferenceRun reference_replication(const ExperimentConfig& c, std::uint64_t seed) {
    auto built = build_scenario(c, seed);
    std::vector<std::unique_ptr<Policy>> pols;
    Audited* audited = nullptr;
    for (const auto& name : c.policies) {
        auto p = make_policy(name, c, seed);
        if (name == "coerr") {
            auto* raw = static_cast<CoerrPolicy*>(p.release());
            audited = new Audited(std::unique_ptr<CoerrPolicy>(raw));
            pols.emplace_back(audited);
        } else {
            pols.push_back(std::move(p));
        }
    }
    ReferenceRun out;
    out.run = simulate(built.scenario, pols, c.delta);
    out.run.seed = seed;
    for (const auto& tr : out.run.traces)
        for (const auto& r : tr.records)
            if (!check_feasible(r.decision, built.scenario.model.sbss, built.scenario.model.budget)) ++out.infeasible;
    out.infeasible += audited->infeasible;
    out.missing_fmin = audited->missing_fmin;
    for (const auto& [key, count] : audited->inner().exploration_rentals())
        out.max_explore_rentals = std::max(out.max_explore_rentals, count);
    out.cells = audited->inner().bank().materialized();
    return out;
}

std::string csv_of(const RunResult& r) {
    std::ostringstream os;
    write_results_csv(os, r, "acceptance");
    return os.str();
}

// Final utilities per replication for each policy of a config.
std::map<std::string, std::vector<double>> final_utilities(const ExperimentConfig& c) {
    const auto runs = run_replications_parallel(c);
    std::map<std::string, std::vector<double>> out;
    for (const auto& run : runs)
        for (const auto& tr : run.traces) out[tr.policy].push_back(tr.final_utility());
    return out;
}

int count_ge(const std::vector<double>& a, const std::vector<double>& b) {
    int k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) k += a[i] >= b[i];
    return k;
}

}  // namespace

int main(int argc, char** argv) {
    std::cout << std::setprecision(6);
    const auto t_all = std::chrono::steady_clock::now();

    // 1. parameter design
    {
        const auto p = design_parameters(2700, 1.0, 2);
        std::ostringstream s;
        s << "h_T=" << p.cells_per_dim << " (expected 5)";
        report(1, "parameter design", p.cells_per_dim == 5, s.str());
    }

    // 2. arm and hypercube counts
    {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t ns[] = {5, 8, 10};
        const std::size_t arms_expect[] = {121, 487, 991};
        const std::int64_t cubes_expect[] = {125, 200, 250};
        const auto params = design_parameters(2700, 1.0, 2);
        bool ok = true;
        std::ostringstream s;
        for (int i = 0; i < 3; ++i) {
            const auto c = ExperimentConfig::defaults(ns[i]);
            const auto arms = enumerate_arms(c.sbss, c.budget).size();
            const auto brute = odometer_arms(ns[i], c.sbss[0].prices, c.budget);
            const auto cubes = static_cast<std::int64_t>(ns[i]) * params.partition().cell_count();
            ok = ok && arms == arms_expect[i] && brute == arms_expect[i] && cubes == cubes_expect[i];
            s << "N=" << ns[i] << " arms " << arms << "/" << brute << " cubes " << cubes << "; ";
        }
        const double secs = seconds_since(t0);
        s << secs << " s";
        report(2, "arm and hypercube counts", ok && secs < 1.0, s.str());
    }

    // 3 + 4. solver equivalence and greedy ratio
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(kSeed);
        int mismatches = 0, infeasible = 0, delta_bad = 0;
        double worst = 1.0;
        for (int k = 0; k < kKcgInstances; ++k) {
            const auto inst = random_kcg_instance(rng, kKcgMaxItems);
            const double ref = enumerate_best(inst);
            const auto bf = solve_brute_force(inst);
            const auto bb = solve_branch_and_bound(inst);
            const auto dp = solve_exact_dp(inst);
            const auto gr = solve_greedy(inst);
            if (bf.value != ref || bb.value != ref || dp.value != ref) ++mismatches;
            for (const auto* s : {&bf, &bb, &dp, &gr})
                if (!is_feasible(inst, *s)) ++infeasible;
            const double d = measured_delta(gr, bb);
            if (!(d * gr.value >= ref)) ++delta_bad;
            worst = std::max(worst, d);
        }
        const double secs = seconds_since(t0);
        std::ostringstream s;
        s << kKcgInstances << " instances, " << mismatches << " value mismatches, " << infeasible << " infeasible, "
          << secs << " s";
        report(3, "solver oracle equivalence", mismatches == 0 && infeasible == 0 && secs < 30.0, s.str());

        // delta-regret of a greedy-solver COERR run against the per-slot formula.
        auto c = ExperimentConfig::defaults(5);
        c.horizon = 600;
        c.solver = SolverKind::kGreedy;
        c.policies = {"oracle", "coerr"};
        const auto run = run_experiment(c, kSeed);
        const auto& tr = run.trace("coerr");
        const double dw = tr.worst_delta;
        const auto series = delta_regret_series(tr.records, dw);
        double acc = 0.0, err = 0.0;
        bool finite = std::isfinite(dw);
        for (std::size_t t = 0; t < series.size(); ++t) {
            acc += tr.records[t].oracle_utility / dw - tr.records[t].utility;
            err = std::max(err, std::abs(series[t] - acc) / std::max(1.0, std::abs(acc)));
            finite = finite && std::isfinite(series[t]) && tr.records[t].cum_delta_regret == series[t];
        }
        std::ostringstream s4;
        s4 << delta_bad << " instances with delta*greedy < optimum (worst delta " << worst << "); run worst delta " << dw
           << ", series finite " << finite << ", max rel err " << err;
        report(4, "delta-approximation property", delta_bad == 0 && finite && err <= 1e-12, s4.str());
    }

    // 5. PAC / Hoeffding
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::ostringstream s;
        for (std::int64_t c : {10, 50, 200}) {
            for (double eps : {15.0, 30.0}) {
                const auto rep = pac_monte_carlo_parallel(c, eps, kPacLambdaMax, kPacTrials,
                                                          kSeed + static_cast<std::uint64_t>(c * 100 + eps));
                const double p = std::min(1.0, rep.bound);
                const double limit = rep.bound + kSigmaSlack * std::sqrt(p * (1 - p) / kPacTrials);
                ok = ok && rep.frequency <= limit;
                s << "C=" << c << ",eps=" << eps << ": " << rep.frequency << "<=" << limit << "; ";
            }
        }
        const double secs = seconds_since(t0);
        s << secs << " s";
        report(5, "PAC / Hoeffding tail", ok && secs < 30.0, s.str());
    }

    // 6, 9, 10. reference runs
    auto ref = ExperimentConfig::defaults(5);
    ref.policies = {"oracle", "coerr", "cucb", "random"};
    ref.seed = kSeed;
    std::vector<ReferenceRun> runs(kReplications);
    {
        std::vector<std::exception_ptr> errs(kReplications);
#pragma omp parallel for schedule(dynamic, 1)
        for (int r = 0; r < kReplications; ++r) {
            try {
                runs[static_cast<std::size_t>(r)] = reference_replication(ref, replication_seed(ref.seed, r));
            } catch (...) {
                errs[static_cast<std::size_t>(r)] = std::current_exception();
            }
        }
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    const auto T = static_cast<std::size_t>(ref.horizon);
    std::vector<double> mean_regret(T, 0.0);
    int ordered = 0;
    for (const auto& rr : runs) {
        const auto& c = rr.run.trace("coerr");
        for (std::size_t t = 0; t < T; ++t) mean_regret[t] += c.records[t].cum_regret / kReplications;
        const double uo = rr.run.trace("oracle").final_utility();
        const double uc = c.final_utility();
        ordered += uo >= uc && uc > rr.run.trace("cucb").final_utility() && uc > rr.run.trace("random").final_utility();
    }
    {
        const double early = window_slope(mean_regret, 0, T / 2);
        const double late = window_slope(mean_regret, T / 2, T);
        std::ostringstream s;
        s << "mean COERR regret slope " << early << " over [1," << T / 2 << "] vs " << late << " over [" << T / 2
          << "," << T << "]; Oracle >= COERR > {CUCB, Random} in " << ordered << "/" << kReplications;
        report(6, "empirical sublinear regret", late < early && ordered >= kMajority, s.str());
    }

    // 7. budget monotonicity
    {
        auto c = ref;
        c.replications = kReplications;
        c.policies = {"oracle", "coerr"};
        std::vector<std::map<std::string, std::vector<double>>> by_budget;
        for (double b : {4.0, 8.0, 12.0}) {
            c.budget = b;
            by_budget.push_back(final_utilities(c));
        }
        int oracle_ok = 0, coerr_ok = 0;
        for (int r = 0; r < kReplications; ++r) {
            auto mono = [&](const std::string& p) {
                return by_budget[0][p][r] <= by_budget[1][p][r] && by_budget[1][p][r] <= by_budget[2][p][r];
            };
            oracle_ok += mono("oracle");
            coerr_ok += mono("coerr");
        }
        std::ostringstream s;
        s << "B in {4,8,12}: Oracle non-decreasing in " << oracle_ok << "/" << kReplications << ", COERR in " << coerr_ok
          << "/" << kReplications;
        report(7, "budget monotonicity", oracle_ok == kReplications && coerr_ok >= kMajority, s.str());
    }

    // 8. rental-set monotonicity
    {
        auto c = ref;
        c.replications = kReplications;
        c.policies = {"coerr", "coerr-or2"};
        const auto full = final_utilities(c);
        c.set_rental_set({0, 2, 4});
        c.policies = {"coerr"};
        const auto mid = final_utilities(c);
        const int a = count_ge(full.at("coerr"), mid.at("coerr"));
        const int b = count_ge(mid.at("coerr"), full.at("coerr-or2"));
        std::ostringstream s;
        s << "COERR{0,2,4,6} >= COERR{0,2,4} in " << a << "/" << kReplications << ", COERR{0,2,4} >= COERR-OR2 in " << b
          << "/" << kReplications;
        report(8, "rental-set monotonicity", a >= kMajority && b >= kMajority, s.str());
    }

    // 9. invariants
    {
        const auto params = design_parameters(ref.horizon, ref.alpha, ref.dims);
        const auto cap = static_cast<std::int64_t>(std::ceil(control_K(ref.horizon, params))) + 1;
        std::int64_t infeasible = 0, missing = 0, worst = 0;
        std::size_t cells = 0;
        for (const auto& rr : runs) {
            infeasible += rr.infeasible;
            missing += rr.missing_fmin;
            worst = std::max(worst, rr.max_explore_rentals);
            cells = std::max(cells, rr.cells);
        }
        const auto again = reference_replication(ref, runs.front().run.seed);
        const bool identical = csv_of(again.run) == csv_of(runs.front().run);
        std::ostringstream s;
        s << infeasible << " infeasible decisions, " << missing << " semi-explore slots missing f_min, max exploration "
          << "rentals per (SBS, cell) " << worst << " <= " << cap << ", cells " << cells << " <= "
          << ref.n_sbs * static_cast<std::size_t>(params.partition().cell_count()) << ", rerun byte-identical "
          << identical;
        report(9, "algorithmic invariants",
               infeasible == 0 && missing == 0 && worst <= cap && identical &&
                   cells <= ref.n_sbs * static_cast<std::size_t>(params.partition().cell_count()),
               s.str());
    }

    // 10. bound overlay
    {
        const auto b = regret_bound(ref.horizon, ref.alpha, ref.dims, {5, 8, 900, 10, 2});
        const std::size_t quarter = T / 4;
        const double scale = mean_regret[quarter - 1] / bound_shape(static_cast<double>(quarter), b.exponent);
        double worst = 0.0, last = 0.0;
        std::size_t at = quarter, above = 0;
        for (std::size_t t = quarter; t <= T; ++t) {
            const double ratio = mean_regret[t - 1] / (scale * bound_shape(static_cast<double>(t), b.exponent));
            above += ratio > 1.0;
            last = ratio;
            if (ratio > worst) {
                worst = ratio;
                at = t;
            }
        }
        std::ostringstream s;
        s << "exponent " << b.exponent << "; max regret/curve over [T/4, T] " << worst << " at t=" << at << ", " << above
          << " slots above the curve, ratio at T " << last;
        report(10, "bound-overlay sanity", std::abs(b.exponent - 0.8) <= kExponentTol && worst <= 1.0 + 1e-12,
               s.str());
    }

    // Trace conservation on a supplied trace, or on a generated one.
    {
        std::string path;
        if (argc > 1) {
            path = argv[1];
        } else {
            path = (std::filesystem::temp_directory_path() / "edgerent_acceptance_trace.csv").string();
            std::ofstream f(path);
            f << "submit_time,site_id\n";
            std::mt19937_64 rng(kSeed);
            std::uniform_real_distribution<double> t(0.0, 60 * 86400.0);
            std::uniform_int_distribution<int> site(0, 6);
            for (int i = 0; i < 50000; ++i) f << t(rng) << ",site" << site(rng) << '\n';
        }
        std::size_t rows = 0;
        {
            std::ifstream in(path);
            std::string line;
            bool header = false;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty() || line[0] == '#') continue;
                if (!header) {
                    header = true;
                    continue;
                }
                ++rows;
            }
        }
        const auto events = load_trace(path);
        const auto sites = distinct_sites(events);
        const auto agg = aggregate_slots(events, 10800.0, sites);
        double total = 0.0;
        for (double v : agg.series.demand) total += v;

        auto c = ExperimentConfig::defaults(sites.size());
        c.mode = Mode::kTrace;
        c.trace_path = path;
        c.horizon = 100;
        c.policies = {"oracle", "coerr"};
        const auto run = run_experiment(c, kSeed);
        const auto csv = csv_of(run);
        const bool header_ok = csv.find("\nslot,policy,phase,spend,utility,oracle_utility,cum_regret,cum_delta_regret,"
                                        "decision\n") != std::string::npos;
        std::ostringstream s;
        s << path << ": " << rows << " rows, aggregated demand " << total << ", results header " << header_ok;
        report(11, "trace conservation and format", total == static_cast<double>(rows) && header_ok, s.str());
    }

    std::cout << failures << " criteria failed; total " << seconds_since(t_all) << " s" << std::endl;
    return failures;
}
