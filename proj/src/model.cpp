#include "edgerent/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace edgerent {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ModelError(what);
}

bool non_decreasing(const std::vector<double>& v) {
    return std::is_sorted(v.begin(), v.end());
}

}  // namespace

void TaskProfile::validate() const {
    require(input_bits > 0.0, "task input size must be positive");
    require(cycles > 0.0, "task CPU cycles must be positive");
    require(max_delay > 0.0, "task max delay must be positive");
}

void ChannelParams::validate() const {
    require(bandwidth_hz > 0.0, "bandwidth must be positive");
    require(noise_power_w > 0.0, "noise power must be positive");
    require(tx_power_w >= 0.0 && channel_gain >= 0.0, "power and gain must be non-negative");
    require(inter_cell_interference_w >= 0.0 && intra_cell_interference_w >= 0.0,
            "interference must be non-negative");
}

SbsConfig SbsConfig::linear(int id, std::vector<double> levels, double price_per_unit,
                            double tasks_per_unit, double unit_hz, double uplink_rate) {
    SbsConfig s;
    s.id = id;
    s.rental_set = std::move(levels);
    s.prices.clear();
    s.max_tasks.clear();
    for (double f : s.rental_set) {
        s.prices.push_back(price_per_unit * f);
        s.max_tasks.push_back(tasks_per_unit * f);
    }
    s.unit_hz = unit_hz;
    s.uplink_rate = uplink_rate;
    return s;
}

void SbsConfig::validate() const {
    const std::string who = "SBS " + std::to_string(id) + ": ";
    require(!rental_set.empty() && rental_set.front() == 0.0, who + "rental set must contain 0");
    require(rental_set.size() >= 2, who + "rental set needs at least one nonzero level");
    require(std::adjacent_find(rental_set.begin(), rental_set.end(),
                               [](double a, double b) { return a >= b; }) == rental_set.end(),
            who + "rental set must be strictly increasing");
    require(prices.size() == rental_set.size() && max_tasks.size() == rental_set.size(),
            who + "price and cap tables must match the rental set");
    require(prices.front() == 0.0 && max_tasks.front() == 0.0,
            who + "level 0 must cost and admit nothing");
    require(non_decreasing(prices), who + "prices must be non-decreasing");
    require(non_decreasing(max_tasks), who + "admission caps must be non-decreasing");
    require(unit_hz > 0.0, who + "unit capacity must be positive");
    require(uplink_rate > 0.0, who + "uplink rate must be positive");
}

std::optional<std::size_t> SbsConfig::level_index(double level) const {
    auto it = std::find(rental_set.begin(), rental_set.end(), level);
    if (it == rental_set.end()) return std::nullopt;
    return static_cast<std::size_t>(it - rental_set.begin());
}

double SbsConfig::price(double level) const {
    auto i = level_index(level);
    if (!i) throw ModelError("level not in rental set of SBS " + std::to_string(id));
    return prices[*i];
}

double SbsConfig::admission_cap(double level) const {
    auto i = level_index(level);
    if (!i) throw ModelError("level not in rental set of SBS " + std::to_string(id));
    return max_tasks[*i];
}

double SbsConfig::min_level() const {
    for (double f : rental_set)
        if (f > 0.0) return f;
    throw ModelError("SBS " + std::to_string(id) + " offers no nonzero level");
}

double SbsConfig::max_level() const { return rental_set.back(); }

void CloudConfig::validate() const {
    require(capacity_hz > 0.0 && uplink_rate > 0.0 && backbone_rate > 0.0 && rtt > 0.0,
            "cloud parameters must be positive");
}

std::string RentalDecision::to_string() const {
    std::ostringstream os;
    for (std::size_t n = 0; n < levels.size(); ++n) {
        if (n) os << '|';
        os << levels[n];
    }
    return os.str();
}

double uplink_rate(const ChannelParams& ch) {
    const double interference =
        ch.inter_cell_interference_w + ch.intra_cell_interference_w + ch.noise_power_w;
    return ch.bandwidth_hz * std::log2(1.0 + ch.tx_power_w * ch.channel_gain / interference);
}

double edge_delay(const TaskProfile& task, const SbsConfig& sbs, double capacity_hz) {
    if (!(capacity_hz > 0.0)) throw ModelError("no capacity rented");
    const double d = task.input_bits / sbs.uplink_rate + task.cycles / capacity_hz;
    return std::min(d, task.max_delay);
}

double cloud_delay(const TaskProfile& task, const CloudConfig& cloud) {
    const double d = task.input_bits / cloud.uplink_rate + task.input_bits / cloud.backbone_rate +
                     task.cycles / cloud.capacity_hz + cloud.rtt;
    return std::min(d, task.max_delay);
}

double delay_reduction(double level, double cloud_delay_s, double edge_delay_s) {
    return level > 0.0 ? cloud_delay_s - edge_delay_s : 0.0;
}

double sbs_utility(double demand, double level, double reduction, const SbsConfig& sbs) {
    if (level <= 0.0) return 0.0;
    return std::min(demand, sbs.admission_cap(level)) * reduction;
}

void SystemModel::validate() const {
    require(!sbss.empty(), "system needs at least one SBS");
    for (const auto& s : sbss) s.validate();
    cloud.validate();
    task.validate();
    require(budget >= 0.0, "budget must be non-negative");
}

double SystemModel::cloud_delay() const { return edgerent::cloud_delay(task, cloud); }

double SystemModel::delay_reduction(std::size_t n, double level) const {
    if (level <= 0.0) return 0.0;
    const auto& s = sbss.at(n);
    return edgerent::delay_reduction(level, cloud_delay(), edge_delay(task, s, s.capacity_hz(level)));
}

double SystemModel::utility(std::size_t n, double level, double demand) const {
    if (level <= 0.0) return 0.0;
    return sbs_utility(demand, level, delay_reduction(n, level), sbss.at(n));
}

double SystemModel::max_admission_cap() const {
    double m = 0.0;
    for (const auto& s : sbss) m = std::max(m, s.max_tasks.back());
    return m;
}

double SystemModel::min_positive_price() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : sbss)
        for (double p : s.prices)
            if (p > 0.0) m = std::min(m, p);
    return m;
}

double total_utility(const RentalDecision& decision, std::span<const double> demand,
                     const SystemModel& model) {
    if (decision.size() != model.size() || demand.size() != model.size())
        throw ModelError("decision/demand dimension mismatch");
    double u = 0.0;
    for (std::size_t n = 0; n < model.size(); ++n) u += model.utility(n, decision[n], demand[n]);
    return u;
}

double decision_cost(const RentalDecision& decision, std::span<const SbsConfig> sbss) {
    if (decision.size() != sbss.size()) throw ModelError("decision dimension mismatch");
    double cost = 0.0;
    for (std::size_t n = 0; n < sbss.size(); ++n) cost += sbss[n].price(decision[n]);
    return cost;
}

bool check_feasible(const RentalDecision& decision, std::span<const SbsConfig> sbss,
                    double budget) {
    if (decision.size() != sbss.size()) return false;
    double cost = 0.0;
    for (std::size_t n = 0; n < sbss.size(); ++n) {
        auto i = sbss[n].level_index(decision[n]);
        if (!i) return false;
        cost += sbss[n].prices[*i];
    }
    return cost <= budget + 1e-9 * std::max(1.0, budget);
}

}  // namespace edgerent
