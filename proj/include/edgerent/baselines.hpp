#pragma once

// Benchmark policies sharing the decide/observe interface: the Oracle that
// knows the true expected demand, arm-enumerating bandits (CUCB, LinUCB) and
// uniform random rental.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "edgerent/kcg.hpp"
#include "edgerent/model.hpp"
#include "edgerent/policy.hpp"

namespace edgerent {

/// Every feasible rental vector, all-zero first, in lexicographic order of
/// per-SBS levels.
struct ArmTable {
    std::vector<RentalDecision> arms;

    std::size_t size() const { return arms.size(); }
};

/// Throws when the unpruned product of menu sizes exceeds `max_product`.
ArmTable enumerate_arms(std::span<const SbsConfig> sbss, double budget,
                        std::uint64_t max_product = 10'000'000);

/// UCB1 index: mean + sqrt(2 ln t / pulls).
double ucb_index(double mean, std::int64_t pulls, double t);

/// Upper bound on one slot's utility, (B / w_min) * lambda_max * d_max.
double utility_upper_bound(const SystemModel& model);

class OraclePolicy : public Policy {
public:
    OraclePolicy(SystemModel model, SolverKind solver = SolverKind::kBranchAndBound, SolverOptions opts = {});

    std::string name() const override { return "oracle"; }
    Decision decide(const SlotView& slot) override;
    void observe(const SlotView&, const Decision&, std::span<const double>) override {}

private:
    SystemModel model_;
    SolverKind solver_;
    SolverOptions opts_;
};

/// Optimal decision for known demands.
RentalDecision oracle_decide(std::span<const double> expected_demand, const SystemModel& model,
                             SolverKind solver = SolverKind::kBranchAndBound, const SolverOptions& opts = {});

class CucbPolicy : public Policy {
public:
    /// Rewards are divided by `reward_scale` before entering the index.
    CucbPolicy(SystemModel model, ArmTable table, double reward_scale);

    std::string name() const override { return "cucb"; }
    Decision decide(const SlotView& slot) override;
    void observe(const SlotView& slot, const Decision& decision, std::span<const double> demand) override;

    const std::vector<std::int64_t>& pulls() const { return pulls_; }
    const std::vector<double>& means() const { return means_; }

private:
    SystemModel model_;
    ArmTable table_;
    double scale_;
    std::vector<std::int64_t> pulls_;
    std::vector<double> means_;
    std::size_t last_ = 0;
};

/// Disjoint LinUCB: one ridge model per arm over the concatenated contexts.
class LinUcbPolicy : public Policy {
public:
    LinUcbPolicy(SystemModel model, ArmTable table, int dims, double exploration = 1.0, double ridge = 1.0,
                 double reward_scale = 1.0);

    std::string name() const override { return "linucb"; }
    Decision decide(const SlotView& slot) override;
    void observe(const SlotView& slot, const Decision& decision, std::span<const double> demand) override;

    /// Current ridge point estimate of an arm.
    Eigen::VectorXd theta(std::size_t arm) const { return a_inv_[arm] * b_[arm]; }
    /// Upper-confidence index of an arm for a feature vector.
    double index(std::size_t arm, const Eigen::VectorXd& x) const;

private:
    Eigen::VectorXd features(const SlotView& slot) const;

    SystemModel model_;
    ArmTable table_;
    double exploration_;
    double scale_;
    std::vector<Eigen::MatrixXd> a_inv_;
    std::vector<Eigen::VectorXd> b_;
    std::size_t last_ = 0;
};

class RandomPolicy : public Policy {
public:
    RandomPolicy(ArmTable table, std::uint64_t seed);

    std::string name() const override { return "random"; }
    Decision decide(const SlotView& slot) override;
    void observe(const SlotView&, const Decision&, std::span<const double>) override {}

private:
    ArmTable table_;
    std::mt19937_64 rng_;
};

}  // namespace edgerent
