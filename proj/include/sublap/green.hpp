#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sublap/field.hpp"
#include "sublap/grid.hpp"
#include "sublap/measure.hpp"

namespace sublap {

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GreenOptions {
    /// Dense Green matrix is materialized only up to this interior count.
    std::size_t dense_cap = 4096;
    /// Above this interior count the factorization switches from sparse
    /// Cholesky to conjugate gradients (3-D grids get large quickly).
    std::size_t direct_cap = 60000;
    double cg_tolerance = 1e-13;
};

/// Discrete Green operator of -Laplace with zero Dirichlet data.
///
/// The five/seven-point stencil is modified at arms cut by a curved or
/// polygonal boundary: the ghost value behind the cut is linearly
/// extrapolated from the boundary value at the true crossing point,
/// which imposes the data on the continuum boundary while keeping the
/// interior matrix symmetric positive definite (plain Shortley-Weller
/// coefficients would break symmetry). Immutable after construction;
/// concurrent solves against the shared factorization are safe.
class GreenOperator {
public:
    explicit GreenOperator(const GridDomain& domain, GreenOptions options = {});

    const GridDomain& domain() const { return *domain_; }
    std::size_t size() const { return n_; }
    const Eigen::SparseMatrix<double>& matrix() const { return A_; }

    /// Solves -Laplace_h w = rhs with zero boundary values; rhs holds
    /// density values (already divided by cell volume).
    Eigen::VectorXd solve_density(const Eigen::VectorXd& rhs) const;

    /// G[omega](x) = sum_j g(x,j) m_j, one linear solve with density
    /// m/h^d. Zero at every boundary node, exactly.
    GridFunction potential(const GridMeasure& omega) const;

    /// Discrete harmonic extension: Laplace_h u = 0 with u = f on the
    /// boundary nodes. Obeys the discrete maximum principle.
    GridFunction harmonic_extension(const BoundaryData& f) const;

    /// Columns g(., j) for the given nodes, as a dense block; used for
    /// streaming row access without materializing the full matrix.
    Eigen::MatrixXd green_columns(const std::vector<std::size_t>& nodes) const;

    bool has_dense() const { return dense_ != nullptr; }
    std::size_t dense_cap() const { return options_.dense_cap; }
    /// Dense g(i,j); throws when the interior count exceeds the cap.
    const Eigen::MatrixXd& dense() const;

    /// Boundary-coupling weights: row i of the matrix pairs with
    /// sum_b weight(i,b) * f(b) on the right-hand side.
    const std::vector<std::vector<std::pair<std::int32_t, double>>>& boundary_weights() const {
        return bweights_;
    }

    double cell_volume() const { return cellvol_; }

private:
    const GridDomain* domain_;
    GreenOptions options_;
    std::size_t n_ = 0;
    double cellvol_ = 0;
    Eigen::SparseMatrix<double> A_;
    std::vector<std::vector<std::pair<std::int32_t, double>>> bweights_;
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
    std::shared_ptr<Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                             Eigen::Lower | Eigen::Upper>> cg_;
    mutable std::shared_ptr<Eigen::MatrixXd> dense_;
};

GreenOperator build_green(const GridDomain& domain, GreenOptions options = {});

GridFunction green_potential(const GreenOperator& G, const GridMeasure& omega);
GridFunction harmonic_extension(const GreenOperator& G, const BoundaryData& f);

/// Classical Green function of the disk (d=2, logarithmic with image
/// point) or ball (d=3, Newtonian with Kelvin image), radius R about
/// the origin. Continuum oracle for far-field kernel comparisons.
double analytic_disk_kernel(const Point& x, const Point& y, double R, int d);

}  // namespace sublap
