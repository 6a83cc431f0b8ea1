#include "edgerent/estimators.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace edgerent {

void Partition::validate() const {
    if (cells_per_dim < 1) throw EstimatorError("partition needs at least one cell per dimension");
    if (dims < 1) throw EstimatorError("context dimension must be at least 1");
}

std::int64_t Partition::cell_count() const {
    std::int64_t c = 1;
    for (int d = 0; d < dims; ++d) c *= cells_per_dim;
    return c;
}

CellIndex partition_point(std::span<const double> context, const Partition& part) {
    if (static_cast<int>(context.size()) != part.dims) throw EstimatorError("context has wrong dimension");
    CellIndex idx;
    idx.coords.reserve(context.size());
    for (double x : context) {
        if (!(x >= 0.0 && x <= 1.0)) throw EstimatorError("context out of range");
        int c = static_cast<int>(std::floor(x * part.cells_per_dim));
        if (c >= part.cells_per_dim) c = part.cells_per_dim - 1;
        idx.coords.push_back(c);
    }
    return idx;
}

double mle_estimate(const CellStats& cell) {
    if (cell.count <= 0) throw EstimatorError("no experience");
    return cell.sum / static_cast<double>(cell.count);
}

double hoeffding_tail(double eps, std::int64_t count, double lambda_max) {
    return std::exp(-2.0 * static_cast<double>(count) * eps * eps / (lambda_max * lambda_max));
}

void EstimatorBank::record(std::size_t sbs, const CellIndex& cell, double demand) {
    if (demand < 0.0) throw EstimatorError("observed demand must be non-negative");
    auto& s = cells_.at(sbs)[cell];
    s.count += 1;
    s.sum += demand;
    s.sum_sq += demand * demand;
}

CellStats EstimatorBank::stats(std::size_t sbs, const CellIndex& cell) const {
    const auto& m = cells_.at(sbs);
    auto it = m.find(cell);
    return it == m.end() ? CellStats{} : it->second;
}

std::size_t EstimatorBank::materialized() const {
    std::size_t n = 0;
    for (const auto& m : cells_) n += m.size();
    return n;
}

void EstimatorBank::write_csv(std::ostream& os, int dims) const {
    os << "sbs";
    for (int d = 0; d < dims; ++d) os << ",c" << d;
    os << ",count,estimate\n";
    for (std::size_t n = 0; n < cells_.size(); ++n) {
        for (const auto& [cell, st] : cells_[n]) {
            os << n;
            for (int c : cell.coords) os << ',' << c;
            os << ',' << st.count << ',' << mle_estimate(st) << '\n';
        }
    }
}

}  // namespace edgerent
