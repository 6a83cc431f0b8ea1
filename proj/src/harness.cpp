#include "edgerent/harness.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "edgerent/baselines.hpp"

namespace edgerent {

double PolicyTrace::final_utility() const {
    double u = 0.0;
    for (const auto& r : records) u += r.utility;
    return u;
}

const PolicyTrace& RunResult::trace(const std::string& policy) const {
    for (const auto& t : traces)
        if (t.policy == policy) return t;
    throw std::out_of_range("no policy named " + policy + " in run");
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t scenario_hash(const Scenario& sc) {
    const auto t = static_cast<std::size_t>(sc.horizon);
    const auto n = sc.series.n_sbs;
    const auto d = static_cast<std::size_t>(sc.series.dims);
    std::uint64_t h = fnv1a(sc.series.contexts.data(), t * n * d * sizeof(double));
    h = fnv1a(sc.series.demand.data(), t * n * sizeof(double), h);
    return fnv1a(sc.expected.data(), t * n * sizeof(double), h);
}

RunResult simulate(const Scenario& sc, std::span<const std::unique_ptr<Policy>> policies,
                   std::optional<double> delta) {
    const auto n = sc.model.size();
    if (sc.series.n_sbs != n) throw std::invalid_argument("series and model disagree on the number of SBSs");
    if (sc.horizon < 0 || static_cast<std::size_t>(sc.horizon) > sc.series.slots)
        throw std::invalid_argument("horizon exceeds the slot series");

    RunResult run;
    run.crn_hash = scenario_hash(sc);
    run.traces.resize(policies.size());
    for (std::size_t p = 0; p < policies.size(); ++p) {
        run.traces[p].policy = policies[p]->name();
        run.traces[p].records.reserve(static_cast<std::size_t>(sc.horizon));
    }

    for (std::int64_t t = 0; t < sc.horizon; ++t) {
        const auto ts = static_cast<std::size_t>(t);
        SlotView view;
        view.t = t + 1;
        view.dims = sc.series.dims;
        view.contexts = sc.series.contexts_at(ts);
        view.expected_demand = std::span<const double>(sc.expected).subspan(ts * n, n);
        const auto demand = sc.series.demand_at(ts);

        const auto oracle = oracle_decide(view.expected_demand, sc.model, sc.oracle_solver, sc.solver_opts);
        const double oracle_u = total_utility(oracle, demand, sc.model);

        for (std::size_t p = 0; p < policies.size(); ++p) {
            auto& pol = *policies[p];
            Decision d;
            try {
                d = pol.decide(view);
            } catch (const std::exception& e) {
                throw std::runtime_error(pol.name() + " failed at slot " + std::to_string(t + 1) + ": " + e.what());
            }
            if (!check_feasible(d.rental, sc.model.sbss, sc.model.budget))
                throw std::runtime_error(pol.name() + " emitted an infeasible decision at slot " +
                                         std::to_string(t + 1) + ": " + d.rental.to_string());
            auto& tr = run.traces[p];
            if (d.delta) tr.worst_delta = std::max(tr.worst_delta, *d.delta);
            SlotRecord r;
            r.slot = t + 1;
            r.policy = tr.policy;
            r.phase = d.phase;
            r.spend = decision_cost(d.rental, sc.model.sbss);
            r.utility = total_utility(d.rental, demand, sc.model);
            r.oracle_utility = oracle_u;
            r.cum_regret = (tr.records.empty() ? 0.0 : tr.records.back().cum_regret) + (oracle_u - r.utility);
            r.decision = d.rental;
            tr.records.push_back(std::move(r));
            pol.observe(view, d, demand);
        }
    }

    for (auto& tr : run.traces) {
        const auto series = delta_regret_series(tr.records, delta.value_or(tr.worst_delta));
        for (std::size_t i = 0; i < series.size(); ++i) tr.records[i].cum_delta_regret = series[i];
    }
    return run;
}

std::vector<double> regret_series(std::span<const SlotRecord> records) {
    std::vector<double> out;
    out.reserve(records.size());
    double acc = 0.0;
    for (const auto& r : records) {
        acc += r.oracle_utility - r.utility;
        out.push_back(acc);
    }
    return out;
}

std::vector<double> delta_regret_series(std::span<const SlotRecord> records, double delta) {
    if (!(delta >= 1.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be finite and >= 1");
    std::vector<double> out;
    out.reserve(records.size());
    double acc = 0.0;
    for (const auto& r : records) {
        acc += r.oracle_utility / delta - r.utility;
        out.push_back(acc);
    }
    return out;
}

RegretBound regret_bound(std::int64_t horizon, double alpha, int dims, const BoundConstants& c) {
    RegretBound b;
    b.exponent = (2.0 * alpha + dims) / (3.0 * alpha + dims);
    const double scale = std::pow(2.0, dims) * static_cast<double>(c.n_sbs) * c.budget * c.lambda_max * c.d_max /
                         c.w_min;
    b.value = scale * bound_shape(static_cast<double>(horizon), b.exponent);
    return b;
}

double bound_shape(double t, double exponent) { return std::pow(t, exponent) * std::log(t); }

void write_results_csv(std::ostream& os, const RunResult& run, const std::string& comment) {
    os << "# " << comment << " crn=" << std::hex << run.crn_hash << std::dec << '\n';
    os << "slot,policy,phase,spend,utility,oracle_utility,cum_regret,cum_delta_regret,decision\n";
    std::ostringstream line;
    line << std::setprecision(12);
    const std::size_t slots = run.traces.empty() ? 0 : run.traces.front().records.size();
    for (std::size_t t = 0; t < slots; ++t) {
        for (const auto& tr : run.traces) {
            const auto& r = tr.records[t];
            line.str({});
            line << r.slot << ',' << r.policy << ',' << to_string(r.phase) << ',' << r.spend << ',' << r.utility
                 << ',' << r.oracle_utility << ',' << r.cum_regret << ',' << r.cum_delta_regret << ','
                 << r.decision.to_string() << '\n';
            os << line.str();
        }
    }
}

}  // namespace edgerent
