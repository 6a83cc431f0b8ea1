#include "edgerent/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace edgerent {

SyntheticModel SyntheticModel::reference(std::size_t n_sbs, double demand_cap, double noise_std) {
    SyntheticModel m;
    m.demand_cap = demand_cap;
    m.noise_std = noise_std;
    for (std::size_t n = 0; n < n_sbs; ++n) {
        const double spread = n_sbs > 1 ? static_cast<double>((n * 3) % n_sbs) / static_cast<double>(n_sbs - 1) : 1.0;
        DemandProfile p;
        p.floor = 0.05 * demand_cap;
        p.peak = demand_cap * (0.55 + 0.4 * spread);
        p.phase = static_cast<double>(n) / static_cast<double>(n_sbs);
        p.daily_weight = 0.3;
        m.profiles.push_back(p);
    }
    m.holder_L = m.lipschitz_bound();
    m.holder_alpha = 1.0;
    return m;
}

void SyntheticModel::validate() const {
    if (profiles.empty()) throw std::invalid_argument("synthetic model needs at least one profile");
    if (!(demand_cap > 0.0) || noise_std < 0.0) throw std::invalid_argument("bad synthetic demand cap or noise");
    for (const auto& p : profiles) {
        if (p.floor < 0.0 || p.peak < p.floor || p.peak > demand_cap)
            throw std::invalid_argument("profile must satisfy 0 <= floor <= peak <= demand cap");
        if (p.daily_weight < 0.0 || p.daily_weight > 1.0)
            throw std::invalid_argument("profile daily weight must lie in [0, 1]");
    }
}

double SyntheticModel::mean(std::size_t n, std::span<const double> x) const {
    const auto& p = profiles.at(n);
    const double diurnal = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (x[0] - p.phase)));
    const double level = x.size() >= 2 ? (1.0 - p.daily_weight) + p.daily_weight * x[1] : 1.0;
    return p.floor + (p.peak - p.floor) * diurnal * level;
}

double SyntheticModel::lipschitz_bound() const {
    double L = 0.0;
    for (const auto& p : profiles) {
        const double amp = p.peak - p.floor;
        L = std::max(L, amp * std::hypot(std::numbers::pi, p.daily_weight));
    }
    return L;
}

std::vector<double> synthesize(const SyntheticModel& model, std::span<const double> contexts, int dims,
                               std::mt19937_64& rng) {
    const auto d = static_cast<std::size_t>(dims);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> out(model.size());
    for (std::size_t n = 0; n < model.size(); ++n) {
        const double mu = model.mean(n, contexts.subspan(n * d, d));
        const double draw = model.noise_std > 0.0 ? mu + model.noise_std * noise(rng) : mu;
        out[n] = std::clamp(draw, 0.0, model.demand_cap);
    }
    return out;
}

SyntheticSeries generate_synthetic(const SyntheticModel& model, int dims, std::size_t slots,
                                   double slot_seconds, double day_seconds, std::uint64_t seed) {
    model.validate();
    const auto n = model.size();
    SyntheticSeries out;
    auto& s = out.series;
    s.n_sbs = n;
    s.dims = dims;
    s.slots = slots;
    s.slot_seconds = slot_seconds;
    s.demand.reserve(slots * n);
    s.contexts.reserve(slots * n * static_cast<std::size_t>(dims));
    out.expected.reserve(slots * n);

    std::mt19937_64 rng(seed);
    DailyContextBuilder ctx(n, dims, slot_seconds, day_seconds);
    const auto d = static_cast<std::size_t>(dims);
    for (std::size_t t = 0; t < slots; ++t) {
        const auto x = ctx.contexts(t);
        for (std::size_t i = 0; i < n; ++i)
            out.expected.push_back(model.mean(i, std::span<const double>(x).subspan(i * d, d)));
        const auto lambda = synthesize(model, x, dims, rng);
        ctx.add_demand(t, lambda);
        s.contexts.insert(s.contexts.end(), x.begin(), x.end());
        s.demand.insert(s.demand.end(), lambda.begin(), lambda.end());
    }
    return out;
}

HolderReport check_holder(const MeanFn& mean, std::size_t n_sbs, int dims, double L, double alpha,
                          std::size_t n_pairs, double tol, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto d = static_cast<std::size_t>(dims);
    HolderReport rep;
    std::vector<double> x(d), y(d);
    for (std::size_t n = 0; n < n_sbs; ++n) {
        for (std::size_t k = 0; k < n_pairs; ++k) {
            double dist2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                x[j] = u(rng);
                y[j] = u(rng);
                dist2 += (x[j] - y[j]) * (x[j] - y[j]);
            }
            if (dist2 == 0.0) continue;
            const double gap = std::abs(mean(n, x) - mean(n, y));
            const double ratio = gap / (L * std::pow(std::sqrt(dist2), alpha));
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.sbs = n;
                rep.x = x;
                rep.y = y;
            }
        }
    }
    rep.passed = rep.worst_ratio <= 1.0 + tol;
    return rep;
}

}  // namespace edgerent
