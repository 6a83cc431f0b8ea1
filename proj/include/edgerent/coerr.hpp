#pragma once

// Context-aware online edge resource rental (COERR).
//
// Each slot the policy maps every SBS's context to its hypercube, gathers the
// SBSs whose cell counter is below the control function K(t) (or is zero),
// and then either
//   - explores: rents f_min at the cheapest under-explored SBSs that fit the
//     budget, when renting f_min at all of them would not fit;
//   - semi-explores: pins f_min at every under-explored SBS and optimizes the
//     remaining budget over the explored SBSs;
//   - exploits: optimizes the whole budget on the current estimates.
// Demand is observed at every SBS with a nonzero rental, in any phase.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "edgerent/estimators.hpp"
#include "edgerent/kcg.hpp"
#include "edgerent/model.hpp"
#include "edgerent/policy.hpp"

namespace edgerent {

struct CoerrParams {
    std::int64_t horizon = 1;
    double alpha = 1.0;
    int dims = 1;
    int cells_per_dim = 1;  // h_T
    double k_exponent = 0.0;  // 2 alpha / (3 alpha + D)

    Partition partition() const { return {cells_per_dim, dims}; }
};

/// h_T = ceil(T^(1/(3 alpha + D))), K exponent 2 alpha / (3 alpha + D).
CoerrParams design_parameters(std::int64_t horizon, double alpha, int dims);

/// K(t) = t^z ln t.
double control_K(std::int64_t t, const CoerrParams& params);

/// SBSs whose current cell count is zero or below K(t), ascending.
std::vector<std::size_t> under_explored_set(const EstimatorBank& bank,
                                            std::span<const CellIndex> cells, double k_threshold);

struct ExploreSelection {
    std::vector<std::size_t> chosen;  // in selection order
    RentalDecision decision;
};

/// Adds under-explored SBSs cheapest-f_min first (ties by index) while the
/// cumulative f_min cost stays within budget.
ExploreSelection explore_select(std::span<const std::size_t> under_explored, const SystemModel& model);

class CoerrPolicy : public Policy {
public:
    CoerrPolicy(SystemModel model, CoerrParams params, SolverKind solver = SolverKind::kBranchAndBound,
                SolverOptions opts = {}, std::string name = "coerr");

    std::string name() const override { return name_; }
    Decision decide(const SlotView& slot) override;
    void observe(const SlotView& slot, const Decision& decision, std::span<const double> demand) override;

    std::int64_t t() const { return t_; }
    const CoerrParams& params() const { return params_; }
    const SystemModel& model() const { return model_; }
    const EstimatorBank& bank() const { return bank_; }
    const std::vector<Phase>& phase_log() const { return phases_; }
    /// Under-explored SBSs of the most recent decide().
    const std::vector<std::size_t>& last_under_explored() const { return last_under_; }
    /// Slots in which SBS n was under-explored at a cell and rented, per (n, cell).
    const std::map<std::pair<std::size_t, CellIndex>, std::int64_t>& exploration_rentals() const {
        return explore_rentals_;
    }
    /// Worst measured approximation ratio so far (1 for exact solvers).
    double worst_delta() const { return worst_delta_; }

private:
    std::vector<CellIndex> cells_for(const SlotView& slot) const;

    SystemModel model_;
    CoerrParams params_;
    SolverKind solver_;
    SolverOptions opts_;
    std::string name_;
    EstimatorBank bank_;
    std::int64_t t_ = 1;
    std::vector<Phase> phases_;
    std::vector<CellIndex> last_cells_;
    std::vector<std::size_t> last_under_;
    std::map<std::pair<std::size_t, CellIndex>, std::int64_t> explore_rentals_;
    double worst_delta_ = 1.0;
};

/// Length of the j-th doubling phase: 2^(j-1) T1.
std::int64_t doubling_horizon(int phase, std::int64_t first_horizon);

/// COERR for an unknown horizon: restarts from scratch at every doubling
/// phase with parameters designed for that phase's length.
class DoublingCoerr : public Policy {
public:
    DoublingCoerr(SystemModel model, std::int64_t first_horizon, double alpha, int dims,
                  SolverKind solver = SolverKind::kBranchAndBound, SolverOptions opts = {});

    std::string name() const override { return "coerr-doubling"; }
    Decision decide(const SlotView& slot) override;
    void observe(const SlotView& slot, const Decision& decision, std::span<const double> demand) override;

    int phase_index() const { return phase_; }
    const CoerrPolicy& current() const { return *inner_; }

private:
    void start_phase();

    SystemModel model_;
    std::int64_t first_horizon_;
    double alpha_;
    int dims_;
    SolverKind solver_;
    SolverOptions opts_;
    int phase_ = 0;
    std::int64_t phase_left_ = 0;
    std::unique_ptr<CoerrPolicy> inner_;
};

/// Restricts every SBS menu to {0, X}.
SystemModel restrict_to_single_level(const SystemModel& model, double level);

/// COERR that only decides where to rent, always renting `level` units.
std::unique_ptr<CoerrPolicy> make_coerr_orx(const SystemModel& model, double level, CoerrParams params,
                                            SolverKind solver = SolverKind::kBranchAndBound,
                                            SolverOptions opts = {});

}  // namespace edgerent
