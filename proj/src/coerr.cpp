#include "edgerent/coerr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace edgerent {

std::string to_string(Phase phase) {
    switch (phase) {
        case Phase::kExplore: return "explore";
        case Phase::kSemiExplore: return "semi-explore";
        case Phase::kExploit: return "exploit";
        case Phase::kNone: return "-";
    }
    return "?";
}

CoerrParams design_parameters(std::int64_t horizon, double alpha, int dims) {
    if (horizon < 1 || !(alpha > 0.0) || dims < 1)
        throw EstimatorError("design_parameters needs T >= 1, alpha > 0, D >= 1");
    CoerrParams p;
    p.horizon = horizon;
    p.alpha = alpha;
    p.dims = dims;
    const double denom = 3.0 * alpha + dims;
    const double root = std::pow(static_cast<double>(horizon), 1.0 / denom);
    // pow() can land one ulp above an exact integer root.
    const double nearest = std::round(root);
    const double h = std::abs(root - nearest) <= 1e-9 * nearest ? nearest : std::ceil(root);
    p.cells_per_dim = std::max(1, static_cast<int>(h));
    p.k_exponent = 2.0 * alpha / denom;
    return p;
}

double control_K(std::int64_t t, const CoerrParams& params) {
    const double tt = static_cast<double>(t);
    return std::pow(tt, params.k_exponent) * std::log(tt);
}

std::vector<std::size_t> under_explored_set(const EstimatorBank& bank,
                                            std::span<const CellIndex> cells, double k_threshold) {
    std::vector<std::size_t> u;
    for (std::size_t n = 0; n < cells.size(); ++n) {
        const auto c = bank.count(n, cells[n]);
        if (c == 0 || static_cast<double>(c) < k_threshold) u.push_back(n);
    }
    return u;
}

ExploreSelection explore_select(std::span<const std::size_t> under_explored, const SystemModel& model) {
    std::vector<std::size_t> order(under_explored.begin(), under_explored.end());
    auto cost = [&](std::size_t n) { return model.sbss[n].price(model.sbss[n].min_level()); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ca = cost(a), cb = cost(b);
        return ca != cb ? ca < cb : a < b;
    });
    ExploreSelection sel;
    sel.decision = RentalDecision(model.size());
    double spent = 0.0;
    for (std::size_t n : order) {
        if (spent + cost(n) > model.budget + 1e-9 * std::max(1.0, model.budget)) break;
        spent += cost(n);
        sel.chosen.push_back(n);
        sel.decision[n] = model.sbss[n].min_level();
    }
    return sel;
}

CoerrPolicy::CoerrPolicy(SystemModel model, CoerrParams params, SolverKind solver, SolverOptions opts,
                         std::string name)
    : model_(std::move(model)),
      params_(params),
      solver_(solver),
      opts_(opts),
      name_(std::move(name)),
      bank_(model_.size()) {
    model_.validate();
    params_.partition().validate();
}

std::vector<CellIndex> CoerrPolicy::cells_for(const SlotView& slot) const {
    std::vector<CellIndex> cells;
    cells.reserve(model_.size());
    const auto part = params_.partition();
    for (std::size_t n = 0; n < model_.size(); ++n) cells.push_back(partition_point(slot.context(n), part));
    return cells;
}

Decision CoerrPolicy::decide(const SlotView& slot) {
    last_cells_ = cells_for(slot);
    last_under_ = under_explored_set(bank_, last_cells_, control_K(t_, params_));

    Decision out;
    double min_cost = 0.0;
    for (std::size_t n : last_under_) min_cost += model_.sbss[n].price(model_.sbss[n].min_level());

    if (!last_under_.empty() && min_cost >= model_.budget) {
        out.rental = explore_select(last_under_, model_).decision;
        out.phase = Phase::kExplore;
    } else {
        std::vector<double> est(model_.size(), 0.0);
        std::vector<ForcedRental> forced;
        for (std::size_t n = 0; n < model_.size(); ++n) {
            const auto st = bank_.stats(n, last_cells_[n]);
            if (st.has_estimate()) est[n] = mle_estimate(st);
        }
        for (std::size_t n : last_under_)
            forced.push_back({static_cast<int>(n), model_.sbss[n].min_level()});
        const auto inst = build_kcg(est, model_, forced);
        const auto sol = solve(inst, solver_, opts_);
        if (!sol.exact) {
            const double d = measured_delta(sol, solve_branch_and_bound(inst));
            out.delta = d;
            worst_delta_ = std::max(worst_delta_, d);
        }
        out.rental = to_decision(inst, sol, model_.size());
        out.phase = last_under_.empty() ? Phase::kExploit : Phase::kSemiExplore;
    }
    phases_.push_back(out.phase);
    return out;
}

void CoerrPolicy::observe(const SlotView&, const Decision& decision, std::span<const double> demand) {
    for (std::size_t n = 0; n < model_.size(); ++n) {
        if (decision.rental[n] <= 0.0) continue;
        bank_.record(n, last_cells_[n], demand[n]);
    }
    for (std::size_t n : last_under_)
        if (decision.rental[n] > 0.0) ++explore_rentals_[{n, last_cells_[n]}];
    ++t_;
}

std::int64_t doubling_horizon(int phase, std::int64_t first_horizon) {
    if (phase < 1 || first_horizon < 1) throw EstimatorError("doubling phase and horizon must be >= 1");
    return first_horizon << (phase - 1);
}

DoublingCoerr::DoublingCoerr(SystemModel model, std::int64_t first_horizon, double alpha, int dims,
                             SolverKind solver, SolverOptions opts)
    : model_(std::move(model)),
      first_horizon_(first_horizon),
      alpha_(alpha),
      dims_(dims),
      solver_(solver),
      opts_(opts) {
    start_phase();
}

void DoublingCoerr::start_phase() {
    ++phase_;
    const auto len = doubling_horizon(phase_, first_horizon_);
    phase_left_ = len;
    inner_ = std::make_unique<CoerrPolicy>(model_, design_parameters(len, alpha_, dims_), solver_, opts_);
}

Decision DoublingCoerr::decide(const SlotView& slot) {
    if (phase_left_ == 0) start_phase();
    return inner_->decide(slot);
}

void DoublingCoerr::observe(const SlotView& slot, const Decision& decision, std::span<const double> demand) {
    inner_->observe(slot, decision, demand);
    --phase_left_;
}

SystemModel restrict_to_single_level(const SystemModel& model, double level) {
    SystemModel out = model;
    for (auto& s : out.sbss) {
        const auto i = s.level_index(level);
        if (!i || level <= 0.0)
            throw ModelError("level " + std::to_string(level) + " not offered by SBS " + std::to_string(s.id));
        s.rental_set = {0.0, level};
        s.prices = {0.0, s.prices[*i]};
        s.max_tasks = {0.0, s.max_tasks[*i]};
    }
    return out;
}

std::unique_ptr<CoerrPolicy> make_coerr_orx(const SystemModel& model, double level, CoerrParams params,
                                            SolverKind solver, SolverOptions opts) {
    std::ostringstream name;
    name << "coerr-or" << level;
    return std::make_unique<CoerrPolicy>(restrict_to_single_level(model, level), params, solver, opts,
                                         name.str());
}

}  // namespace edgerent
