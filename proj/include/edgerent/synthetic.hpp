#pragma once

// Synthetic demand with a known smooth mean per SBS.
//
// Each SBS follows a diurnal profile in the first context coordinate (time in
// day) modulated by the second (previous-day demand level):
//
//   mu_n(x) = floor_n + (peak_n - floor_n) * (1 + cos(2 pi (x_1 - phase_n))) / 2
//                                          * ((1 - w_n) + w_n x_2)
//
// Realized demand is mu_n(x) plus Gaussian noise, clipped to [0, demand_cap].

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "edgerent/trace.hpp"

namespace edgerent {

struct DemandProfile {
    double floor = 50.0;
    double peak = 800.0;
    double phase = 0.0;
    double daily_weight = 0.3;
};

struct SyntheticModel {
    std::vector<DemandProfile> profiles;
    double noise_std = 30.0;
    double demand_cap = 900.0;
    /// Declared Hoelder constants.
    double holder_L = 0.0;
    double holder_alpha = 1.0;

    /// Profiles spread over the day, peaks between 0.55 and 0.95 of the cap.
    static SyntheticModel reference(std::size_t n_sbs, double demand_cap = 900.0, double noise_std = 30.0);

    std::size_t size() const { return profiles.size(); }
    void validate() const;
    double mean(std::size_t n, std::span<const double> x) const;
    /// Lipschitz constant of the profile family (alpha = 1).
    double lipschitz_bound() const;
};

/// One realized demand vector for N x D contexts.
std::vector<double> synthesize(const SyntheticModel& model, std::span<const double> contexts, int dims,
                               std::mt19937_64& rng);

struct SyntheticSeries {
    SlotSeries series;
    std::vector<double> expected;  // slots x n_sbs
};

/// Generates `slots` slots with daily contexts built from the realized demand.
SyntheticSeries generate_synthetic(const SyntheticModel& model, int dims, std::size_t slots,
                                   double slot_seconds, double day_seconds, std::uint64_t seed);

using MeanFn = std::function<double(std::size_t, std::span<const double>)>;

struct HolderReport {
    bool passed = true;
    double worst_ratio = 0.0;
    std::size_t sbs = 0;
    std::vector<double> x;
    std::vector<double> y;
};

/// Samples random context pairs per SBS and checks
/// |mu(x) - mu(y)| <= (1 + tol) L ||x - y||^alpha.
HolderReport check_holder(const MeanFn& mean, std::size_t n_sbs, int dims, double L, double alpha,
                          std::size_t n_pairs, double tol, std::uint64_t seed);

}  // namespace edgerent
