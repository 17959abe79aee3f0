#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sublap/grid.hpp"

namespace sublap {

/// Real values on every node of a domain, split into the interior and
/// boundary blocks. Node order matches the domain enumeration.
struct GridFunction {
    std::vector<double> interior;
    std::vector<double> boundary;

    GridFunction() = default;
    GridFunction(std::size_t n_interior, std::size_t n_boundary, double value = 0.0)
        : interior(n_interior, value), boundary(n_boundary, value) {}

    static GridFunction zeros(const GridDomain& d) {
        return GridFunction(d.interior_count(), d.boundary_count(), 0.0);
    }
    static GridFunction constant(const GridDomain& d, double c) {
        return GridFunction(d.interior_count(), d.boundary_count(), c);
    }
    static GridFunction sample(const GridDomain& d, const std::function<double(const Point&)>& f) {
        GridFunction g(d.interior_count(), d.boundary_count());
        for (std::size_t i = 0; i < d.interior_count(); ++i) g.interior[i] = f(d.interior_node(i));
        for (std::size_t b = 0; b < d.boundary_count(); ++b) g.boundary[b] = f(d.boundary_node(b));
        return g;
    }

    double sup_norm() const {
        double m = 0;
        for (double v : interior) m = std::max(m, std::abs(v));
        for (double v : boundary) m = std::max(m, std::abs(v));
        return m;
    }
    double max_interior() const {
        double m = -std::numeric_limits<double>::infinity();
        for (double v : interior) m = std::max(m, v);
        return m;
    }
    double min_interior() const {
        double m = std::numeric_limits<double>::infinity();
        for (double v : interior) m = std::min(m, v);
        return m;
    }
    bool nonnegative() const {
        for (double v : interior)
            if (!(v >= 0)) return false;
        for (double v : boundary)
            if (!(v >= 0)) return false;
        return true;
    }
    bool finite() const {
        for (double v : interior)
            if (!std::isfinite(v)) return false;
        for (double v : boundary)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Nonnegative continuous boundary data, sampled at the boundary nodes.
struct BoundaryData {
    std::vector<double> values;

    BoundaryData() = default;
    explicit BoundaryData(std::vector<double> v) : values(std::move(v)) { validate(); }

    static BoundaryData constant(const GridDomain& d, double c) {
        return BoundaryData(std::vector<double>(d.boundary_count(), c));
    }
    static BoundaryData sample(const GridDomain& d, const std::function<double(const Point&)>& f) {
        std::vector<double> v(d.boundary_count());
        for (std::size_t b = 0; b < d.boundary_count(); ++b) v[b] = f(d.boundary_node(b));
        return BoundaryData(std::move(v));
    }

    double sup_norm() const {
        double m = 0;
        for (double x : values) m = std::max(m, x);
        return m;
    }

    void validate() const {
        for (double x : values)
            if (!(x >= 0) || !std::isfinite(x))
                throw std::invalid_argument("boundary data must be nonnegative and finite");
    }
};

}  // namespace sublap
