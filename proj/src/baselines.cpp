#include "edgerent/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace edgerent {

ArmTable enumerate_arms(std::span<const SbsConfig> sbss, double budget, std::uint64_t max_product) {
    std::uint64_t product = 1;
    for (const auto& s : sbss) {
        product *= s.rental_set.size();
        if (product > max_product) throw ModelError("rental decision space too large to enumerate");
    }
    ArmTable table;
    RentalDecision cur(sbss.size());
    const double limit = budget + 1e-9 * std::max(1.0, budget);
    std::function<void(std::size_t, double)> rec = [&](std::size_t n, double spent) {
        if (n == sbss.size()) {
            table.arms.push_back(cur);
            return;
        }
        const auto& s = sbss[n];
        for (std::size_t i = 0; i < s.rental_set.size(); ++i) {
            if (spent + s.prices[i] > limit) break;  // prices are non-decreasing
            cur[n] = s.rental_set[i];
            rec(n + 1, spent + s.prices[i]);
        }
        cur[n] = 0.0;
    };
    rec(0, 0.0);
    return table;
}

double ucb_index(double mean, std::int64_t pulls, double t) {
    return mean + std::sqrt(2.0 * std::log(t) / static_cast<double>(pulls));
}

double utility_upper_bound(const SystemModel& model) {
    return model.budget / model.min_positive_price() * model.max_admission_cap() * model.task.max_delay;
}

RentalDecision oracle_decide(std::span<const double> expected_demand, const SystemModel& model,
                             SolverKind solver, const SolverOptions& opts) {
    const auto inst = build_kcg(expected_demand, model);
    return to_decision(inst, solve(inst, solver, opts), model.size());
}

OraclePolicy::OraclePolicy(SystemModel model, SolverKind solver, SolverOptions opts)
    : model_(std::move(model)), solver_(solver), opts_(opts) {}

Decision OraclePolicy::decide(const SlotView& slot) {
    if (slot.expected_demand.size() != model_.size())
        throw ModelError("oracle needs the expected demand of every SBS");
    return {oracle_decide(slot.expected_demand, model_, solver_, opts_), Phase::kNone, std::nullopt};
}

CucbPolicy::CucbPolicy(SystemModel model, ArmTable table, double reward_scale)
    : model_(std::move(model)),
      table_(std::move(table)),
      scale_(reward_scale),
      pulls_(table_.size(), 0),
      means_(table_.size(), 0.0) {
    if (table_.size() == 0) throw ModelError("CUCB needs at least one arm");
    if (!(scale_ > 0.0)) throw ModelError("reward scale must be positive");
}

Decision CucbPolicy::decide(const SlotView& slot) {
    const auto k = table_.size();
    if (static_cast<std::uint64_t>(slot.t) <= k) {
        last_ = static_cast<std::size_t>(slot.t - 1);
    } else {
        const double t = static_cast<double>(slot.t);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            const double idx = pulls_[a] == 0 ? std::numeric_limits<double>::infinity()
                                              : ucb_index(means_[a], pulls_[a], t);
            if (idx > best) {
                best = idx;
                last_ = a;
            }
        }
    }
    return {table_.arms[last_], Phase::kNone, std::nullopt};
}

void CucbPolicy::observe(const SlotView&, const Decision& decision, std::span<const double> demand) {
    const double r = total_utility(decision.rental, demand, model_) / scale_;
    auto& n = pulls_[last_];
    ++n;
    means_[last_] += (r - means_[last_]) / static_cast<double>(n);
}

LinUcbPolicy::LinUcbPolicy(SystemModel model, ArmTable table, int dims, double exploration, double ridge,
                           double reward_scale)
    : model_(std::move(model)), table_(std::move(table)), exploration_(exploration), scale_(reward_scale) {
    if (table_.size() == 0) throw ModelError("LinUCB needs at least one arm");
    if (!(ridge > 0.0) || !(scale_ > 0.0)) throw ModelError("ridge and reward scale must be positive");
    const auto d = static_cast<Eigen::Index>(model_.size() * static_cast<std::size_t>(dims));
    a_inv_.assign(table_.size(), Eigen::MatrixXd::Identity(d, d) / ridge);
    b_.assign(table_.size(), Eigen::VectorXd::Zero(d));
}

Eigen::VectorXd LinUcbPolicy::features(const SlotView& slot) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(slot.contexts.size()));
    for (std::size_t i = 0; i < slot.contexts.size(); ++i) x(static_cast<Eigen::Index>(i)) = slot.contexts[i];
    return x;
}

double LinUcbPolicy::index(std::size_t arm, const Eigen::VectorXd& x) const {
    const Eigen::VectorXd ax = a_inv_[arm] * x;
    return ax.dot(b_[arm]) + exploration_ * std::sqrt(std::max(0.0, x.dot(ax)));
}

Decision LinUcbPolicy::decide(const SlotView& slot) {
    const auto x = features(slot);
    if (x.size() != a_inv_.front().rows()) throw ModelError("LinUCB feature dimension mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < table_.size(); ++a) {
        const double idx = index(a, x);
        if (idx > best) {
            best = idx;
            last_ = a;
        }
    }
    return {table_.arms[last_], Phase::kNone, std::nullopt};
}

void LinUcbPolicy::observe(const SlotView& slot, const Decision& decision, std::span<const double> demand) {
    const auto x = features(slot);
    const double r = total_utility(decision.rental, demand, model_) / scale_;
    // Sherman-Morrison rank-one update of A^-1.
    auto& ai = a_inv_[last_];
    const Eigen::VectorXd ax = ai * x;
    ai -= (ax * ax.transpose()) / (1.0 + x.dot(ax));
    b_[last_] += r * x;
}

RandomPolicy::RandomPolicy(ArmTable table, std::uint64_t seed) : table_(std::move(table)), rng_(seed) {
    if (table_.size() == 0) throw ModelError("random policy needs at least one arm");
}

Decision RandomPolicy::decide(const SlotView&) {
    std::uniform_int_distribution<std::size_t> pick(0, table_.size() - 1);
    return {table_.arms[pick(rng_)], Phase::kNone, std::nullopt};
}

}  // namespace edgerent
