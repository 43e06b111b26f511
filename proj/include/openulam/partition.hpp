#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "openulam/errors.hpp"
#include "openulam/interval_set.hpp"

namespace openulam {

// Ordered bins covering an interval, stored as k+1 boundaries.
class Partition {
  public:
    enum class Kind { uniform, explicit_cells };

    static Partition uniform(const Interval& domain, std::size_t k) {
        if (k == 0) throw ValidationError("Partition: k must be positive");
        std::vector<double> b(k + 1);
        for (std::size_t i = 0; i <= k; ++i)
            b[i] = domain.lo + domain.length() * static_cast<double>(i) / k;
        b.front() = domain.lo;
        b.back() = domain.hi;
        return Partition(std::move(b), Kind::uniform);
    }

    static Partition from_boundaries(std::vector<double> b) {
        return Partition(std::move(b), Kind::explicit_cells);
    }

    static Partition from_cells(const std::vector<Interval>& cells) {
        if (cells.empty()) throw ValidationError("Partition: no cells");
        std::vector<double> b;
        b.reserve(cells.size() + 1);
        b.push_back(cells.front().lo);
        for (const auto& c : cells) {
            if (c.lo != b.back())
                throw ValidationError("Partition: cells not contiguous");
            b.push_back(c.hi);
        }
        return Partition(std::move(b), Kind::explicit_cells);
    }

    // Moves the nearest interior boundary onto each given point, so that
    // partitions can align exactly with hole or branch endpoints.
    Partition snapped_to(std::vector<double> points) const {
        std::vector<double> b = boundaries_;
        std::sort(points.begin(), points.end());
        for (double p : points) {
            if (p <= b.front() || p >= b.back()) continue;
            auto it = std::lower_bound(b.begin(), b.end(), p);
            std::size_t idx = static_cast<std::size_t>(it - b.begin());
            if (idx > 0 && p - b[idx - 1] < *it - p) --idx;
            if (idx == 0 || idx + 1 == b.size()) idx = std::min(
                std::max<std::size_t>(idx, 1), b.size() - 2);
            b[idx] = p;
        }
        for (std::size_t i = 0; i + 1 < b.size(); ++i)
            if (!(b[i] < b[i + 1]))
                throw ValidationError("Partition: snapping produced a degenerate cell");
        return Partition(std::move(b), Kind::explicit_cells);
    }

    std::size_t size() const { return boundaries_.size() - 1; }
    const std::vector<double>& boundaries() const { return boundaries_; }
    Kind kind() const { return kind_; }
    double mesh() const { return mesh_; }
    Interval domain() const {
        return Interval(boundaries_.front(), boundaries_.back());
    }

    Interval cell(std::size_t j) const {
        return Interval(boundaries_[j], boundaries_[j + 1]);
    }
    double cell_measure(std::size_t j) const {
        return boundaries_[j + 1] - boundaries_[j];
    }

    // Index of the cell containing x; the left cell wins at shared
    // boundaries, matching the branch tie-break convention.
    std::size_t locate(double x) const {
        if (x < boundaries_.front() || x > boundaries_.back())
            throw DomainError("Partition::locate: x outside the partition");
        auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), x);
        std::size_t idx = static_cast<std::size_t>(it - boundaries_.begin());
        if (idx == 0) return 0;
        return std::min(idx - 1, size() - 1);
    }

    bool covers(const Interval& domain, double tol = 1e-12) const {
        return std::abs(boundaries_.front() - domain.lo) <= tol &&
               std::abs(boundaries_.back() - domain.hi) <= tol;
    }

  private:
    Partition(std::vector<double> b, Kind kind)
        : boundaries_(std::move(b)), kind_(kind) {
        if (boundaries_.size() < 2)
            throw ValidationError("Partition: need at least one cell");
        mesh_ = 0.0;
        for (std::size_t i = 0; i + 1 < boundaries_.size(); ++i) {
            if (!(boundaries_[i] < boundaries_[i + 1]))
                throw ValidationError("Partition: boundaries not increasing");
            mesh_ = std::max(mesh_, boundaries_[i + 1] - boundaries_[i]);
        }
    }

    std::vector<double> boundaries_;
    Kind kind_;
    double mesh_ = 0.0;
};

}  // namespace openulam
