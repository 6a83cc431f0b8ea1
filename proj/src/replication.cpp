#include "edgerent/replication.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace edgerent {

std::vector<RunResult> run_replications_serial(const ExperimentConfig& c, const ReplicationFn& fn) {
    std::vector<RunResult> out;
    out.reserve(static_cast<std::size_t>(c.replications));
    for (int r = 0; r < c.replications; ++r) out.push_back(fn(c, replication_seed(c.seed, r)));
    return out;
}

std::vector<RunResult> run_replications_parallel(const ExperimentConfig& c, const ReplicationFn& fn) {
    const int reps = c.replications;
    std::vector<RunResult> out(static_cast<std::size_t>(reps));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < reps; ++r) {
        try {
            out[static_cast<std::size_t>(r)] = fn(c, replication_seed(c.seed, r));
        } catch (...) {
            errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::map<std::string, PolicySummary> summarize(const std::vector<RunResult>& runs) {
    std::map<std::string, PolicySummary> out;
    if (runs.empty()) return out;
    const double k = static_cast<double>(runs.size());
    for (const auto& tr0 : runs.front().traces) {
        PolicySummary s;
        s.policy = tr0.policy;
        s.min_final_utility = std::numeric_limits<double>::infinity();
        s.max_final_utility = -std::numeric_limits<double>::infinity();
        s.mean_regret.assign(tr0.records.size(), 0.0);
        for (const auto& run : runs) {
            const auto& tr = run.trace(tr0.policy);
            if (tr.records.size() != s.mean_regret.size()) throw std::invalid_argument("runs differ in length");
            const double u = tr.final_utility();
            s.mean_final_utility += u / k;
            s.mean_final_regret += tr.final_regret() / k;
            s.min_final_utility = std::min(s.min_final_utility, u);
            s.max_final_utility = std::max(s.max_final_utility, u);
            for (std::size_t t = 0; t < tr.records.size(); ++t) s.mean_regret[t] += tr.records[t].cum_regret / k;
        }
        out.emplace(s.policy, std::move(s));
    }
    return out;
}

double window_slope(const std::vector<double>& cumulative, std::size_t a, std::size_t b) {
    if (b <= a || b > cumulative.size()) throw std::invalid_argument("bad slope window");
    const double start = a == 0 ? 0.0 : cumulative[a - 1];
    return (cumulative[b - 1] - start) / static_cast<double>(b - a);
}

}  // namespace edgerent
