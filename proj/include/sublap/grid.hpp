#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sublap {

/// Thrown when a domain descriptor cannot produce a usable grid
/// (e.g. spacing too coarse to contain an interior node).
class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ShapeKind { Square, Cube, Disk, Ball, LShape };

/// Geometric descriptor of the continuum domain. `radius` is only
/// meaningful for Disk/Ball; the square/cube is (0,1)^d and the
/// L-shape is (0,1)^2 minus the closed quadrant [1/2,1)x[1/2,1).
struct Shape {
    ShapeKind kind = ShapeKind::Square;
    double radius = 1.0;

    int dimension() const;
    double diameter() const;
    std::string name() const;

    static Shape parse(const std::string& name, double radius);
};

using Point = std::array<double, 3>;  // z ignored when d == 2

enum class NodeClass : std::uint8_t { Interior, Boundary };

/// One stencil arm of an interior node. `fraction` is the arm length
/// divided by h; it equals 1 unless the arm is cut by the continuum
/// boundary, in which case `neighbor` indexes a boundary node.
struct StencilArm {
    NodeClass neighbor_class = NodeClass::Interior;
    std::int32_t neighbor = -1;  // index into interior or boundary list
    double fraction = 1.0;       // in (0, 1]
};

/// Uniform-grid discretization of a bounded domain. Interior nodes are
/// lattice points strictly inside the continuum shape; boundary nodes
/// are the stencil-cut points on the true boundary plus, for polygonal
/// shapes, every lattice point lying on the boundary. Immutable after
/// construction.
class GridDomain {
public:
    GridDomain(Shape shape, double h);

    const Shape& shape() const { return shape_; }
    int dimension() const { return dim_; }
    double spacing() const { return h_; }
    double diameter() const { return shape_.diameter(); }

    std::size_t interior_count() const { return interior_.size(); }
    std::size_t boundary_count() const { return boundary_.size(); }

    const Point& interior_node(std::size_t i) const { return interior_[i]; }
    const Point& boundary_node(std::size_t b) const { return boundary_[b]; }
    const std::vector<Point>& interior_nodes() const { return interior_; }
    const std::vector<Point>& boundary_nodes() const { return boundary_; }

    /// Analytic distance from an interior node to the continuum boundary.
    double boundary_distance(std::size_t i) const { return delta_[i]; }
    const std::vector<double>& boundary_distances() const { return delta_; }

    /// Stencil arms of interior node i, ordered (-x,+x,-y,+y[,-z,+z]).
    const StencilArm& arm(std::size_t i, int a) const { return arms_[i * 2 * dim_ + a]; }
    int arms_per_node() const { return 2 * dim_; }

    /// Exact distance from an arbitrary point to the continuum boundary.
    double distance_to_boundary(const Point& p) const;
    bool inside(const Point& p) const;

    /// Refinement by factor 2: same shape, spacing h/2. Lattice nesting
    /// makes coarse interior nodes a subset of the fine ones.
    GridDomain refine() const;

    /// JSON node manifest (coordinates, class, delta) for debugging.
    std::string to_json() const;

private:
    Shape shape_;
    double h_;
    int dim_;
    std::vector<Point> interior_;
    std::vector<Point> boundary_;
    std::vector<double> delta_;
    std::vector<StencilArm> arms_;

    void build();
};

GridDomain build_domain(const Shape& shape, double h);

}  // namespace sublap
