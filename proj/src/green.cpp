#include "sublap/green.hpp"

#include <cmath>
#include <numbers>

namespace sublap {

namespace {
// Arms this short behind a node are effectively on the boundary; the
// clamp keeps 1/theta finite while still pinning the node value to the
// nearby boundary value.
constexpr double kMinArmFraction = 1e-10;
}  // namespace

GreenOperator::GreenOperator(const GridDomain& domain, GreenOptions options)
    : domain_(&domain), options_(options) {
    const int d = domain.dimension();
    const double h = domain.spacing();
    n_ = domain.interior_count();
    cellvol_ = std::pow(h, d);
    const double inv_h2 = 1.0 / (h * h);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n_ * (2 * d + 1));
    bweights_.assign(n_, {});

    for (std::size_t i = 0; i < n_; ++i) {
        double diag = 0;
        for (int a = 0; a < 2 * d; ++a) {
            const StencilArm& arm = domain.arm(i, a);
            if (arm.neighbor_class == NodeClass::Interior) {
                trips.emplace_back(static_cast<int>(i), arm.neighbor, -inv_h2);
                diag += inv_h2;
            } else {
                const double theta = std::max(arm.fraction, kMinArmFraction);
                diag += inv_h2 / theta;
                bweights_[i].emplace_back(arm.neighbor, inv_h2 / theta);
            }
        }
        trips.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
    }
    A_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    A_.setFromTriplets(trips.begin(), trips.end());
    A_.makeCompressed();

    if (n_ <= options_.direct_cap) {
        llt_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
        llt_->compute(A_);
        if (llt_->info() != Eigen::Success)
            throw numerical_error("discrete Laplacian factorization failed (singular system)");
    } else {
        cg_ = std::make_shared<Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                                        Eigen::Lower | Eigen::Upper>>();
        cg_->setTolerance(options_.cg_tolerance);
        cg_->setMaxIterations(200000);
        cg_->compute(A_);
        if (cg_->info() != Eigen::Success)
            throw numerical_error("conjugate-gradient setup failed");
    }
}

Eigen::VectorXd GreenOperator::solve_density(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x;
    if (llt_) {
        x = llt_->solve(rhs);
    } else {
        x = cg_->solve(rhs);
        if (cg_->info() != Eigen::Success)
            throw numerical_error("conjugate-gradient solve did not converge");
    }
    return x;
}

GridFunction GreenOperator::potential(const GridMeasure& omega) const {
    if (omega.size() != n_)
        throw std::invalid_argument("measure does not match the operator's domain");
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n_));
    for (std::size_t j = 0; j < n_; ++j) rhs[static_cast<Eigen::Index>(j)] = omega.mass(j) / cellvol_;
    Eigen::VectorXd w = solve_density(rhs);
    GridFunction out = GridFunction::zeros(*domain_);
    for (std::size_t j = 0; j < n_; ++j) out.interior[j] = w[static_cast<Eigen::Index>(j)];
    return out;  // boundary stays exactly zero
}

GridFunction GreenOperator::harmonic_extension(const BoundaryData& f) const {
    if (f.values.size() != domain_->boundary_count())
        throw std::invalid_argument("boundary data does not match the domain");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (const auto& [b, w] : bweights_[i])
            rhs[static_cast<Eigen::Index>(i)] += w * f.values[static_cast<std::size_t>(b)];
    Eigen::VectorXd u = solve_density(rhs);
    GridFunction out = GridFunction::zeros(*domain_);
    for (std::size_t j = 0; j < n_; ++j) out.interior[j] = u[static_cast<Eigen::Index>(j)];
    out.boundary = f.values;
    return out;
}

Eigen::MatrixXd GreenOperator::green_columns(const std::vector<std::size_t>& nodes) const {
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_),
                                                static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k)
        rhs(static_cast<Eigen::Index>(nodes[k]), static_cast<Eigen::Index>(k)) = 1.0 / cellvol_;
    if (llt_) return llt_->solve(rhs);
    Eigen::MatrixXd out(rhs.rows(), rhs.cols());
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = solve_density(rhs.col(c));
    return out;
}

const Eigen::MatrixXd& GreenOperator::dense() const {
    if (dense_) return *dense_;
    if (n_ > options_.dense_cap)
        throw numerical_error("dense Green matrix requested above the node cap");
    std::vector<std::size_t> all(n_);
    for (std::size_t j = 0; j < n_; ++j) all[j] = j;
    dense_ = std::make_shared<Eigen::MatrixXd>(green_columns(all));
    return *dense_;
}

GreenOperator build_green(const GridDomain& domain, GreenOptions options) {
    return GreenOperator(domain, options);
}

GridFunction green_potential(const GreenOperator& G, const GridMeasure& omega) {
    return G.potential(omega);
}

GridFunction harmonic_extension(const GreenOperator& G, const BoundaryData& f) {
    return G.harmonic_extension(f);
}

double analytic_disk_kernel(const Point& x, const Point& y, double R, int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("kernel dimension must be 2 or 3");
    auto norm = [d](const Point& p) {
        return d == 2 ? std::hypot(p[0], p[1]) : std::hypot(p[0], p[1], p[2]);
    };
    auto dist = [d](const Point& a, const Point& b) {
        return d == 2 ? std::hypot(a[0] - b[0], a[1] - b[1])
                      : std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
    };
    const double nx = norm(x), ny = norm(y);
    if (nx >= R || ny >= R) throw std::invalid_argument("kernel arguments must lie inside the ball");
    const double r = dist(x, y);
    if (r == 0.0) throw std::invalid_argument("kernel is singular at coincident points");

    if (ny == 0.0) {
        if (d == 2) return std::log(R / nx) / (2.0 * std::numbers::pi);
        return (1.0 / nx - 1.0 / R) / (4.0 * std::numbers::pi);
    }
    Point ystar = y;  // Kelvin image R^2 y / |y|^2
    const double s = R * R / (ny * ny);
    for (int a = 0; a < 3; ++a) ystar[a] = y[a] * s;
    const double rimg = dist(x, ystar);
    if (d == 2) return std::log(ny * rimg / (R * r)) / (2.0 * std::numbers::pi);
    return (1.0 / r - R / (ny * rimg)) / (4.0 * std::numbers::pi);
}

}  // namespace sublap
