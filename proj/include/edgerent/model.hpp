#pragma once

// Physical and economic model of the edge system: per-task delays at the
// edge and in the cloud, delay reduction, per-SBS and total ASP utility, and
// feasibility of rental decisions under a per-slot budget.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgerent {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One offloaded task. `input_bits` is in bits (1 MB = 8e6 bits).
struct TaskProfile {
    double input_bits = 8e6;
    double cycles = 1e9;
    double max_delay = 10.0;

    void validate() const;
};

/// Inputs to the Shannon-capacity uplink rate.
struct ChannelParams {
    double bandwidth_hz = 1e6;
    double tx_power_w = 1.0;
    double channel_gain = 1.0;
    double inter_cell_interference_w = 0.0;
    double intra_cell_interference_w = 0.0;
    double noise_power_w = 1.0;

    void validate() const;
};

/// Rental menu of one small-cell base station.
///
/// Rental levels are expressed in rentable units (VMs); `unit_hz` converts a
/// level to processor capacity. `prices[i]` and `max_tasks[i]` belong to
/// `rental_set[i]`. Level 0 is always present and costs and serves nothing.
struct SbsConfig {
    int id = 0;
    std::vector<double> rental_set{0.0, 2.0, 4.0, 6.0};
    std::vector<double> prices{0.0, 2.0, 4.0, 6.0};
    std::vector<double> max_tasks{0.0, 300.0, 600.0, 900.0};
    double unit_hz = 2e9;
    double uplink_rate = 5e6;

    /// Price and admission cap linear in the level: w(f) = a*f, cap(f) = b*f.
    static SbsConfig linear(int id, std::vector<double> levels, double price_per_unit,
                            double tasks_per_unit, double unit_hz, double uplink_rate);

    void validate() const;

    std::optional<std::size_t> level_index(double level) const;
    bool offers(double level) const { return level_index(level).has_value(); }
    double price(double level) const;
    double admission_cap(double level) const;
    double capacity_hz(double level) const { return level * unit_hz; }
    /// Smallest nonzero level (f_min).
    double min_level() const;
    /// Largest level (f_max).
    double max_level() const;
};

/// Cloud fallback reached through the macro base station.
struct CloudConfig {
    double capacity_hz = 2e10;
    double uplink_rate = 2e6;
    double backbone_rate = 1e8;
    double rtt = 0.05;

    void validate() const;
};

/// Per-SBS rented levels for one slot.
struct RentalDecision {
    std::vector<double> levels;

    RentalDecision() = default;
    explicit RentalDecision(std::size_t n) : levels(n, 0.0) {}
    explicit RentalDecision(std::vector<double> l) : levels(std::move(l)) {}

    std::size_t size() const { return levels.size(); }
    double operator[](std::size_t n) const { return levels[n]; }
    double& operator[](std::size_t n) { return levels[n]; }
    bool operator==(const RentalDecision&) const = default;

    /// `|`-joined levels, e.g. "2|0|4".
    std::string to_string() const;
};

double uplink_rate(const ChannelParams& ch);

/// s/r + c/f clamped to the task's max delay. Throws on f <= 0.
double edge_delay(const TaskProfile& task, const SbsConfig& sbs, double capacity_hz);

/// s/r0 + s/v + c/f0 + h clamped to the task's max delay.
double cloud_delay(const TaskProfile& task, const CloudConfig& cloud);

/// d0 - dn when something is rented, 0 otherwise. May be negative.
double delay_reduction(double level, double cloud_delay_s, double edge_delay_s);

/// min(demand, cap(level)) * reduction; 0 when level is 0.
double sbs_utility(double demand, double level, double reduction, const SbsConfig& sbs);

/// Whole system as seen by one ASP in a slot.
struct SystemModel {
    std::vector<SbsConfig> sbss;
    CloudConfig cloud;
    TaskProfile task;
    double budget = 8.0;

    std::size_t size() const { return sbss.size(); }
    void validate() const;

    double cloud_delay() const;
    double delay_reduction(std::size_t n, double level) const;
    double utility(std::size_t n, double level, double demand) const;
    /// Largest admission cap over all SBS menus.
    double max_admission_cap() const;
    /// Smallest nonzero price over all SBS menus.
    double min_positive_price() const;
};

double total_utility(const RentalDecision& decision, std::span<const double> demand,
                     const SystemModel& model);

double decision_cost(const RentalDecision& decision, std::span<const SbsConfig> sbss);

bool check_feasible(const RentalDecision& decision, std::span<const SbsConfig> sbss,
                    double budget);

}  // namespace edgerent
