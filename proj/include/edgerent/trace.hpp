#pragma once

// Workload trace ingestion and slot aggregation.
//
// Trace files are CSV with header `submit_time,site_id`. GWA-style records map
// onto it directly: SubmitTime -> submit_time (seconds), RunSiteID -> site_id.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgerent {

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TraceEvent {
    double submit_time = 0.0;
    std::string site_id;
};

/// Per-slot demand and context of every SBS.
struct SlotSeries {
    std::size_t n_sbs = 0;
    int dims = 0;
    std::size_t slots = 0;
    double slot_seconds = 10800.0;
    std::vector<double> demand;    // slots x n_sbs
    std::vector<double> contexts;  // slots x n_sbs x dims

    std::span<const double> demand_at(std::size_t t) const {
        return std::span<const double>(demand).subspan(t * n_sbs, n_sbs);
    }
    std::span<const double> contexts_at(std::size_t t) const {
        const auto w = n_sbs * static_cast<std::size_t>(dims);
        return std::span<const double>(contexts).subspan(t * w, w);
    }
};

/// Events sorted by submit time. Throws with the offending line number.
std::vector<TraceEvent> load_trace(const std::string& path);

/// Distinct site ids in lexicographic order.
std::vector<std::string> distinct_sites(std::span<const TraceEvent> events);

struct Aggregation {
    SlotSeries series;  // demand part only
    std::vector<std::string> unknown_sites;
    std::size_t unknown_events = 0;
};

/// lambda[t][n] = number of events of site n with floor(time / slot_seconds) == t.
Aggregation aggregate_slots(std::span<const TraceEvent> events, double slot_seconds,
                            std::span<const std::string> site_map);

/// Builds (time in day, previous-day demand over its running max) contexts
/// online, one slot at a time.
class DailyContextBuilder {
public:
    DailyContextBuilder(std::size_t n_sbs, int dims, double slot_seconds, double day_seconds = 86400.0);

    /// Contexts of slot t (0-based); slots must be visited in order.
    std::vector<double> contexts(std::size_t t);
    /// Demand realized in slot t.
    void add_demand(std::size_t t, std::span<const double> demand);

private:
    std::int64_t day_of(std::size_t t) const;
    void roll_to(std::int64_t day);

    std::size_t n_;
    int dims_;
    double slot_seconds_;
    double day_seconds_;
    std::int64_t day_ = 0;
    std::vector<double> today_;
    std::vector<double> yesterday_;
    std::vector<double> running_max_;
    bool have_yesterday_ = false;
};

/// Fills `series.contexts` (dims 1 or 2) from its demand.
void build_contexts(SlotSeries& series, int dims = 2, double day_seconds = 86400.0);

}  // namespace edgerent
