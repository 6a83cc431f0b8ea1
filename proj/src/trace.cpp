#include "edgerent/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace edgerent {

namespace {

std::string trim(std::string s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<TraceEvent> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file: " + path);
    std::vector<TraceEvent> events;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "submit_time,site_id")
                throw TraceError(path + ":" + std::to_string(lineno) + ": expected header submit_time,site_id");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw TraceError(path + ":" + std::to_string(lineno) + ": expected two fields");
        const auto time_s = trim(line.substr(0, comma));
        auto site = trim(line.substr(comma + 1));
        double t = 0.0;
        std::size_t used = 0;
        try {
            t = std::stod(time_s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != time_s.size() || !std::isfinite(t))
            throw TraceError(path + ":" + std::to_string(lineno) + ": bad submit_time '" + time_s + "'");
        if (t < 0.0) throw TraceError(path + ":" + std::to_string(lineno) + ": negative submit_time");
        if (site.empty() || site.find(',') != std::string::npos)
            throw TraceError(path + ":" + std::to_string(lineno) + ": bad site_id");
        events.push_back({t, std::move(site)});
    }
    if (events.empty()) throw TraceError("empty trace: " + path);
    std::stable_sort(events.begin(), events.end(),
                     [](const TraceEvent& a, const TraceEvent& b) { return a.submit_time < b.submit_time; });
    return events;
}

std::vector<std::string> distinct_sites(std::span<const TraceEvent> events) {
    std::set<std::string> s;
    for (const auto& e : events) s.insert(e.site_id);
    return {s.begin(), s.end()};
}

Aggregation aggregate_slots(std::span<const TraceEvent> events, double slot_seconds,
                            std::span<const std::string> site_map) {
    if (!(slot_seconds > 0.0)) throw TraceError("slot length must be positive");
    std::map<std::string, std::size_t> index;
    for (std::size_t n = 0; n < site_map.size(); ++n) index.emplace(site_map[n], n);

    Aggregation out;
    auto& s = out.series;
    s.n_sbs = site_map.size();
    s.slot_seconds = slot_seconds;
    std::size_t slots = 0;
    for (const auto& e : events)
        slots = std::max(slots, static_cast<std::size_t>(std::floor(e.submit_time / slot_seconds)) + 1);
    s.slots = slots;
    s.demand.assign(slots * s.n_sbs, 0.0);
    std::set<std::string> unknown;
    for (const auto& e : events) {
        auto it = index.find(e.site_id);
        if (it == index.end()) {
            unknown.insert(e.site_id);
            ++out.unknown_events;
            continue;
        }
        const auto t = static_cast<std::size_t>(std::floor(e.submit_time / slot_seconds));
        s.demand[t * s.n_sbs + it->second] += 1.0;
    }
    out.unknown_sites.assign(unknown.begin(), unknown.end());
    return out;
}

DailyContextBuilder::DailyContextBuilder(std::size_t n_sbs, int dims, double slot_seconds, double day_seconds)
    : n_(n_sbs),
      dims_(dims),
      slot_seconds_(slot_seconds),
      day_seconds_(day_seconds),
      today_(n_sbs, 0.0),
      yesterday_(n_sbs, 0.0),
      running_max_(n_sbs, 0.0) {
    if (dims < 1 || dims > 2) throw TraceError("daily contexts support D = 1 or 2");
    if (!(slot_seconds > 0.0) || !(day_seconds > 0.0)) throw TraceError("slot and day lengths must be positive");
}

std::int64_t DailyContextBuilder::day_of(std::size_t t) const {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(t) * slot_seconds_ / day_seconds_));
}

void DailyContextBuilder::roll_to(std::int64_t day) {
    while (day_ < day) {
        yesterday_ = today_;
        for (std::size_t n = 0; n < n_; ++n) running_max_[n] = std::max(running_max_[n], today_[n]);
        std::fill(today_.begin(), today_.end(), 0.0);
        // A skipped day contributes an all-zero total.
        have_yesterday_ = true;
        ++day_;
    }
}

std::vector<double> DailyContextBuilder::contexts(std::size_t t) {
    roll_to(day_of(t));
    const double start = static_cast<double>(t) * slot_seconds_;
    const double tod = std::fmod(start, day_seconds_) / day_seconds_;
    std::vector<double> x(n_ * static_cast<std::size_t>(dims_), 0.0);
    for (std::size_t n = 0; n < n_; ++n) {
        x[n * static_cast<std::size_t>(dims_)] = std::clamp(tod, 0.0, 1.0);
        if (dims_ == 2) {
            double r = 0.0;
            if (have_yesterday_ && running_max_[n] > 0.0) r = yesterday_[n] / running_max_[n];
            x[n * 2 + 1] = std::clamp(r, 0.0, 1.0);
        }
    }
    return x;
}

void DailyContextBuilder::add_demand(std::size_t t, std::span<const double> demand) {
    roll_to(day_of(t));
    for (std::size_t n = 0; n < n_; ++n) today_[n] += demand[n];
}

void build_contexts(SlotSeries& series, int dims, double day_seconds) {
    DailyContextBuilder b(series.n_sbs, dims, series.slot_seconds, day_seconds);
    series.dims = dims;
    series.contexts.clear();
    series.contexts.reserve(series.slots * series.n_sbs * static_cast<std::size_t>(dims));
    for (std::size_t t = 0; t < series.slots; ++t) {
        const auto x = b.contexts(t);
        series.contexts.insert(series.contexts.end(), x.begin(), x.end());
        b.add_demand(t, series.demand_at(t));
    }
}

}  // namespace edgerent
