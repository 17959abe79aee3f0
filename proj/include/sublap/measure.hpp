#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sublap/grid.hpp"

namespace sublap {

/// Nonnegative Radon measure on the grid: one mass per interior node
/// (density times cell volume for absolutely continuous parts) plus an
/// optional list of atoms. Atoms fold into the per-node masses; the
/// list is kept for provenance. Immutable by convention.
class GridMeasure {
public:
    struct Atom {
        std::int64_t node;
        double mass;
    };

    GridMeasure() = default;
    GridMeasure(const GridDomain& domain, std::vector<double> node_masses,
                std::vector<Atom> atoms = {});

    std::size_t size() const { return mass_.size(); }
    double mass(std::size_t j) const { return mass_[j]; }
    const std::vector<double>& masses() const { return mass_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double total_mass() const { return total_; }
    bool is_zero() const { return total_ == 0.0; }

private:
    std::vector<double> mass_;
    std::vector<Atom> atoms_;
    double total_ = 0.0;
};

/// m_j = a(x_j) * h^d. Rejects negative or non-finite densities.
GridMeasure measure_from_density(const GridDomain& domain,
                                 const std::function<double(const Point&)>& density);

GridMeasure zero_measure(const GridDomain& domain);

GridMeasure measure_with_atoms(const GridDomain& domain, std::vector<GridMeasure::Atom> atoms);

/// The weight measure with density dist(x, boundary)^(-alpha):
/// m_j = max(delta(x_j), h/2)^(-alpha) * h^d. The half-cell clip only
/// engages on curved boundaries where a lattice node can sit at a
/// sub-cell distance; see the implementation note.
GridMeasure dist_alpha_measure(const GridDomain& domain, double alpha);

/// Pointwise-scaled measure: m_j -> w(x_j) * m_j with w >= 0.
/// Used for u^q dmu and G[mu]^(s-1) dmu style weights.
GridMeasure scale_measure(const GridDomain& domain, const GridMeasure& mu,
                          const std::vector<double>& weight);

/// Sampling plan for the measure-growth statistic.
struct GrowthSampling {
    std::vector<std::size_t> centers;  // interior node indices
    std::vector<double> radii;         // each >= 2h

    static GrowthSampling standard(const GridDomain& domain);
};

/// max over sampled (x, r) of omega(B(x,r)) / r^(d-2+alpha); a lower
/// bound for the smallest admissible growth constant. Balls are open
/// and radius ties are excluded.
double growth_constant(const GridDomain& domain, const GridMeasure& omega, double alpha,
                       const GrowthSampling& sampling, int jobs = 1);

/// CSV round trip: "index,x,y[,z],mass" with 17 significant digits.
std::string measure_to_csv(const GridDomain& domain, const GridMeasure& mu);
GridMeasure measure_from_csv(const GridDomain& domain, const std::string& csv_text);

}  // namespace sublap
