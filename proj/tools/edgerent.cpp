// edgerent: experiment driver for budget-constrained edge resource rental.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgerent/baselines.hpp"
#include "edgerent/coerr.hpp"
#include "edgerent/config.hpp"
#include "edgerent/harness.hpp"
#include "edgerent/kcg.hpp"
#include "edgerent/replication.hpp"
#include "edgerent/trace.hpp"
#include "edgerent/validation.hpp"

namespace fs = std::filesystem;
using namespace edgerent;

namespace {

// Errors the user can fix by pointing at a different file or config.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    std::optional<int> replications;
    std::string policies;
    std::string solver;
    std::string out;
    bool serial = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Experiment config (JSON)")->required();
    cmd->add_option("--seed", o.seed, "Base seed");
    cmd->add_option("--horizon", o.horizon, "Number of slots T");
    cmd->add_option("--replications", o.replications, "Independent replications");
    cmd->add_option("--policies", o.policies, "Comma-separated policy list");
    cmd->add_option("--solver", o.solver, "Per-slot solver")->check(CLI::IsMember({"bb", "dp", "bruteforce", "greedy"}));
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_flag("--serial", o.serial, "Run replications one after another");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw InputError("not a number: '" + s + "'");
    return v;
}

ExperimentConfig load_with_overrides(const Overrides& o) {
    auto c = load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.horizon) c.horizon = *o.horizon;
    if (o.replications) c.replications = *o.replications;
    if (!o.policies.empty()) c.policies = split(o.policies, ',');
    if (!o.solver.empty()) c.solver = parse_solver(o.solver);
    if (!o.out.empty()) c.output_dir = o.out;
    c.validate();
    return c;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw InputError("cannot write " + p.string());
    return f;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
}

std::vector<RunResult> replicate(const ExperimentConfig& c, bool serial) {
    return serial ? run_replications_serial(c) : run_replications_parallel(c);
}

void print_summary(const std::map<std::string, PolicySummary>& summary, const std::vector<std::string>& order) {
    std::cout << std::left << std::setw(16) << "policy" << std::right << std::setw(18) << "final_utility"
              << std::setw(18) << "final_regret" << '\n';
    for (const auto& p : order) {
        const auto& s = summary.at(p);
        std::cout << std::left << std::setw(16) << p << std::right << std::fixed << std::setprecision(1)
                  << std::setw(18) << s.mean_final_utility << std::setw(18) << s.mean_final_regret << '\n';
    }
    std::cout.unsetf(std::ios::floatfield);
}

int cmd_run(const Overrides& o) {
    const auto c = load_with_overrides(o);
    ensure_dir(c.output_dir);
    const auto runs = replicate(c, o.serial);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto name = runs.size() == 1 ? std::string("results.csv") : "results_rep" + std::to_string(r) + ".csv";
        auto f = open_out(fs::path(c.output_dir) / name);
        write_results_csv(f, runs[r], csv_comment(c, runs[r].seed));
        for (const auto& w : runs[r].warnings) std::cerr << "warning: " << w << '\n';
    }
    const auto summary = summarize(runs);
    {
        auto f = open_out(fs::path(c.output_dir) / "summary.csv");
        f << "# " << csv_comment(c, c.seed) << '\n';
        f << "policy,replications,mean_final_utility,mean_final_regret,min_final_utility,max_final_utility\n";
        f << std::setprecision(12);
        for (const auto& p : c.policies) {
            const auto& s = summary.at(p);
            f << p << ',' << runs.size() << ',' << s.mean_final_utility << ',' << s.mean_final_regret << ','
              << s.min_final_utility << ',' << s.max_final_utility << '\n';
        }
    }
    print_summary(summary, c.policies);
    return 0;
}

int cmd_sweep(const Overrides& o, const std::string& axis, const std::string& values) {
    const auto base = load_with_overrides(o);
    ensure_dir(base.output_dir);
    const auto items = split(values, axis == "rental_set" ? ';' : ',');
    if (items.empty()) throw InputError("--values is empty");

    auto f = open_out(fs::path(base.output_dir) / ("sweep_" + axis + ".csv"));
    f << "# " << csv_comment(base, base.seed) << " axis=" << axis << '\n';
    f << "axis,value,policy,replication,final_utility,final_regret,arm_count,hypercube_ceiling\n";
    f << std::setprecision(12);
    for (const auto& v : items) {
        auto c = base;
        if (axis == "budget") {
            c.budget = parse_number(v);
        } else if (axis == "n_sbs") {
            const double n = parse_number(v);
            if (n < 1 || n != std::floor(n)) throw InputError("n_sbs values must be positive integers");
            c.resize_sbs(static_cast<std::size_t>(n));
            c.profiles.clear();
        } else {
            std::vector<double> levels;
            for (const auto& l : split(v, ',')) levels.push_back(parse_number(l));
            c.set_rental_set(levels);
            // COERR-ORx needs x in every menu.
            std::vector<std::string> keep;
            for (const auto& p : c.policies) {
                if (p.starts_with("coerr-or")) {
                    const double x = parse_number(p.substr(8));
                    if (std::find(levels.begin(), levels.end(), x) == levels.end()) continue;
                }
                keep.push_back(p);
            }
            c.policies = keep;
        }
        c.validate();
        const auto arms = enumerate_arms(c.sbss, c.budget).size();
        auto params = design_parameters(c.horizon, c.alpha, c.dims);
        if (c.cells_per_dim) params.cells_per_dim = *c.cells_per_dim;
        const auto ceiling = static_cast<std::int64_t>(c.n_sbs) * params.partition().cell_count();
        const auto runs = replicate(c, o.serial);
        for (std::size_t r = 0; r < runs.size(); ++r)
            for (const auto& tr : runs[r].traces)
                f << axis << ',' << '"' << v << '"' << ',' << tr.policy << ',' << r << ',' << tr.final_utility()
                  << ',' << tr.final_regret() << ',' << arms << ',' << ceiling << '\n';
        std::cout << axis << " = " << v << " (" << arms << " arms, " << ceiling << " hypercubes)\n";
        print_summary(summarize(runs), c.policies);
    }
    return 0;
}

int cmd_solve_kcg(const std::string& path, double budget, const std::string& solver, const std::string& forced) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open KCG file: " + path);
    KcgInstance inst;
    inst.budget = budget;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "id,group,weight,value")
                throw InputError(path + ":" + std::to_string(lineno) + ": expected header id,group,weight,value");
            header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 4) throw InputError(path + ":" + std::to_string(lineno) + ": expected 4 fields");
        try {
            KcgItem it;
            it.id = static_cast<int>(parse_number(f[0]));
            it.group = static_cast<int>(parse_number(f[1]));
            it.weight = parse_number(f[2]);
            it.value = parse_number(f[3]);
            it.level = it.weight;
            inst.n_groups = std::max(inst.n_groups, it.group + 1);
            inst.items.push_back(it);
        } catch (const InputError& e) {
            throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    for (const auto& id : split(forced, ',')) inst.forced.push_back(static_cast<int>(parse_number(id)));
    inst.validate();

    const auto kind = parse_solver(solver);
    auto sol = solve(inst, kind);
    if (kind == SolverKind::kGreedy) sol.delta = measured_delta(sol, solve_branch_and_bound(inst));
    std::cout << "solver " << to_string(kind) << "\nchosen";
    for (int id : sol.chosen) std::cout << ' ' << id;
    std::cout << std::setprecision(12) << "\nvalue " << sol.value << "\nweight " << sol.weight << '\n';
    if (sol.delta) std::cout << "delta " << *sol.delta << '\n';
    return 0;
}

int cmd_validate(std::uint64_t seed) {
    bool ok = true;
    for (const auto& s : run_validation_suites(seed)) {
        std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.detail << '\n';
        ok = ok && s.passed;
    }
    return ok ? 0 : 1;
}

int cmd_snapshot(const Overrides& o, std::optional<std::int64_t> at_slot) {
    auto c = load_with_overrides(o);
    ensure_dir(c.output_dir);
    auto built = build_scenario(c, c.seed);
    auto& sc = built.scenario;
    if (at_slot) {
        if (*at_slot < 1 || *at_slot > sc.horizon) throw InputError("--slot must lie in [1, T]");
        sc.horizon = *at_slot;
    }
    auto params = design_parameters(c.horizon, c.alpha, c.dims);
    if (c.cells_per_dim) params.cells_per_dim = *c.cells_per_dim;
    std::vector<std::unique_ptr<Policy>> pols;
    pols.push_back(std::make_unique<CoerrPolicy>(c.model(), params, c.solver));
    simulate(sc, pols, c.delta);
    const auto& coerr = static_cast<const CoerrPolicy&>(*pols.front());
    const auto path = fs::path(c.output_dir) / "estimator.csv";
    auto f = open_out(path);
    f << "# " << csv_comment(c, c.seed) << " slot=" << sc.horizon << '\n';
    coerr.bank().write_csv(f, c.dims);
    std::cout << coerr.bank().materialized() << " cells written to " << path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget-constrained edge resource rental simulator"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, snap_o;
    auto* run = app.add_subcommand("run", "Run one experiment");
    add_common(run, run_o);

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter");
    add_common(sweep, sweep_o);
    std::string axis, values;
    sweep->add_option("--axis", axis, "Swept parameter")->required()->check(
        CLI::IsMember({"budget", "rental_set", "n_sbs"}));
    sweep->add_option("--values", values, "Values: '4,8,12' or rental sets '0,2;0,2,4'")->required();

    auto* kcg = app.add_subcommand("solve-kcg", "Solve one knapsack-with-conflict-graph instance");
    std::string kcg_path, kcg_solver = "bb", kcg_forced;
    double kcg_budget = 0.0;
    kcg->add_option("input", kcg_path, "CSV with header id,group,weight,value")->required();
    kcg->add_option("--budget", kcg_budget, "Budget")->required();
    kcg->add_option("--solver", kcg_solver, "Solver")->check(CLI::IsMember({"bb", "dp", "bruteforce", "greedy"}));
    kcg->add_option("--forced", kcg_forced, "Comma-separated item ids that must be chosen");

    auto* val = app.add_subcommand("validate", "Run the self-check suites");
    std::uint64_t val_seed = 1;
    val->add_option("--seed", val_seed, "Seed");

    auto* snap = app.add_subcommand("snapshot-estimator", "Write COERR's per-cell estimates after a run");
    add_common(snap, snap_o);
    std::optional<std::int64_t> snap_slot;
    snap->add_option("--slot", snap_slot, "Stop after this slot");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(run_o);
        if (*sweep) return cmd_sweep(sweep_o, axis, values);
        if (*kcg) return cmd_solve_kcg(kcg_path, kcg_budget, kcg_solver, kcg_forced);
        if (*val) return cmd_validate(val_seed);
        if (*snap) return cmd_snapshot(snap_o, snap_slot);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const TraceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
