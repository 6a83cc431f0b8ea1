#pragma once

// Uniform hypercube partition of the context space and per-(SBS, cell)
// running demand statistics.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace edgerent {

class EstimatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Partition {
    int cells_per_dim = 1;  // h_T
    int dims = 1;           // D

    void validate() const;
    /// (h_T)^D
    std::int64_t cell_count() const;
};

struct CellIndex {
    std::vector<int> coords;

    auto operator<=>(const CellIndex&) const = default;
    bool operator==(const CellIndex&) const = default;
};

/// Running sufficient statistics of one cell's experience.
struct CellStats {
    std::int64_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    bool has_estimate() const { return count > 0; }
};

/// coords_d = floor(x_d * h_T), with x_d = 1 mapped into the last cell.
CellIndex partition_point(std::span<const double> context, const Partition& part);

/// Sample mean of the cell's experience.
double mle_estimate(const CellStats& cell);

/// exp(-2 C eps^2 / lambda_max^2)
double hoeffding_tail(double eps, std::int64_t count, double lambda_max);

/// Per-SBS sparse map of cells, allocated on first observation.
class EstimatorBank {
public:
    explicit EstimatorBank(std::size_t n_sbs = 0) : cells_(n_sbs) {}

    void record(std::size_t sbs, const CellIndex& cell, double demand);

    /// Statistics of a cell; an empty record if never observed.
    CellStats stats(std::size_t sbs, const CellIndex& cell) const;
    std::int64_t count(std::size_t sbs, const CellIndex& cell) const { return stats(sbs, cell).count; }

    std::size_t n_sbs() const { return cells_.size(); }
    /// Number of materialized (SBS, cell) entries.
    std::size_t materialized() const;
    const std::map<CellIndex, CellStats>& cells(std::size_t sbs) const { return cells_.at(sbs); }

    /// CSV with header `sbs,c0..c{D-1},count,estimate`.
    void write_csv(std::ostream& os, int dims) const;

private:
    std::vector<std::map<CellIndex, CellStats>> cells_;
};

}  // namespace edgerent
