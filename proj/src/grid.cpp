#include "sublap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace sublap {

namespace {

constexpr double kArmSlack = 1e-9;  // accept cuts up to h*(1+slack)

struct Segment {
    double ax, ay, bx, by;
};

// Boundary polygon of the L-shape (0,1)^2 \ [1/2,1)x[1/2,1), counterclockwise.
const Segment kLShapeEdges[6] = {
    {0.0, 0.0, 1.0, 0.0}, {1.0, 0.0, 1.0, 0.5}, {1.0, 0.5, 0.5, 0.5},
    {0.5, 0.5, 0.5, 1.0}, {0.5, 1.0, 0.0, 1.0}, {0.0, 1.0, 0.0, 0.0},
};

double point_segment_distance(double px, double py, const Segment& s) {
    const double vx = s.bx - s.ax, vy = s.by - s.ay;
    const double wx = px - s.ax, wy = py - s.ay;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? (wx * vx + wy * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx, dy = wy - t * vy;
    return std::hypot(dx, dy);
}

bool lshape_inside(double x, double y) {
    if (x <= 0.0 || x >= 1.0 || y <= 0.0 || y >= 1.0) return false;
    return !(x >= 0.5 && y >= 0.5);
}

}  // namespace

int Shape::dimension() const {
    switch (kind) {
        case ShapeKind::Square:
        case ShapeKind::Disk:
        case ShapeKind::LShape: return 2;
        case ShapeKind::Cube:
        case ShapeKind::Ball: return 3;
    }
    return 2;
}

double Shape::diameter() const {
    switch (kind) {
        case ShapeKind::Square: return std::sqrt(2.0);
        case ShapeKind::Cube: return std::sqrt(3.0);
        case ShapeKind::Disk:
        case ShapeKind::Ball: return 2.0 * radius;
        case ShapeKind::LShape: return std::sqrt(2.0);
    }
    return 1.0;
}

std::string Shape::name() const {
    switch (kind) {
        case ShapeKind::Square: return "square";
        case ShapeKind::Cube: return "cube";
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Ball: return "ball";
        case ShapeKind::LShape: return "lshape";
    }
    return "?";
}

Shape Shape::parse(const std::string& name, double radius) {
    Shape s;
    s.radius = radius;
    if (name == "square") s.kind = ShapeKind::Square;
    else if (name == "cube") s.kind = ShapeKind::Cube;
    else if (name == "disk") s.kind = ShapeKind::Disk;
    else if (name == "ball") s.kind = ShapeKind::Ball;
    else if (name == "lshape") s.kind = ShapeKind::LShape;
    else throw domain_error("unknown shape: " + name);
    if ((s.kind == ShapeKind::Disk || s.kind == ShapeKind::Ball) && !(radius > 0))
        throw domain_error("disk/ball radius must be positive");
    return s;
}

bool GridDomain::inside(const Point& p) const {
    switch (shape_.kind) {
        case ShapeKind::Square:
            return p[0] > 0 && p[0] < 1 && p[1] > 0 && p[1] < 1;
        case ShapeKind::Cube:
            return p[0] > 0 && p[0] < 1 && p[1] > 0 && p[1] < 1 && p[2] > 0 && p[2] < 1;
        case ShapeKind::Disk:
            return p[0] * p[0] + p[1] * p[1] < shape_.radius * shape_.radius;
        case ShapeKind::Ball:
            return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < shape_.radius * shape_.radius;
        case ShapeKind::LShape:
            return lshape_inside(p[0], p[1]);
    }
    return false;
}

double GridDomain::distance_to_boundary(const Point& p) const {
    switch (shape_.kind) {
        case ShapeKind::Square:
            return std::min({p[0], 1 - p[0], p[1], 1 - p[1]});
        case ShapeKind::Cube:
            return std::min({p[0], 1 - p[0], p[1], 1 - p[1], p[2], 1 - p[2]});
        case ShapeKind::Disk:
            return shape_.radius - std::hypot(p[0], p[1]);
        case ShapeKind::Ball:
            return shape_.radius - std::hypot(p[0], p[1], p[2]);
        case ShapeKind::LShape: {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& e : kLShapeEdges)
                d = std::min(d, point_segment_distance(p[0], p[1], e));
            return d;
        }
    }
    return 0.0;
}

namespace {

// Distance along +/-e_axis from an inside point to the first boundary
// crossing, together with the crossing point (canonicalized so that the
// same geometric point is computed bitwise-identically from any arm).
struct Cut {
    double t;
    Point at;
};

std::optional<Cut> find_cut(const Shape& shape, const Point& p, int axis, int dir, double h) {
    const double limit = h * (1.0 + kArmSlack);
    auto face_cut = [&](double c) -> std::optional<Cut> {
        const double t = (c - p[axis]) * dir;
        if (t <= 0 || t > limit) return std::nullopt;
        Point q = p;
        q[axis] = c;
        return Cut{t, q};
    };
    switch (shape.kind) {
        case ShapeKind::Square:
        case ShapeKind::Cube:
            if (auto c = face_cut(dir > 0 ? 1.0 : 0.0)) return c;
            return std::nullopt;
        case ShapeKind::Disk:
        case ShapeKind::Ball: {
            double rest2 = 0;
            for (int a = 0; a < 3; ++a)
                if (a != axis) rest2 += p[a] * p[a];
            const double w2 = shape.radius * shape.radius - rest2;
            if (w2 <= 0) return std::nullopt;
            const double w = std::sqrt(w2);
            const double t = w - dir * p[axis];
            if (t <= 0 || t > limit) return std::nullopt;
            Point q = p;
            q[axis] = dir > 0 ? w : -w;
            return Cut{t, q};
        }
        case ShapeKind::LShape: {
            // Candidate faces per axis with the closed transversal range.
            struct Face { double c, lo, hi; };
            const int other = 1 - axis;
            const Face faces_x[3] = {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.5}, {0.5, 0.5, 1.0}};
            const Face faces_y[3] = {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.5}, {0.5, 0.5, 1.0}};
            const Face* faces = (axis == 0) ? faces_x : faces_y;
            std::optional<Cut> best;
            for (int k = 0; k < 3; ++k) {
                const double t = (faces[k].c - p[axis]) * dir;
                if (t <= 0 || t > limit) continue;
                if (p[other] < faces[k].lo || p[other] > faces[k].hi) continue;
                if (!best || t < best->t) {
                    Point q = p;
                    q[axis] = faces[k].c;
                    best = Cut{t, q};
                }
            }
            return best;
        }
    }
    return std::nullopt;
}

bool point_less(const Point& a, const Point& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
}

}  // namespace

GridDomain::GridDomain(Shape shape, double h) : shape_(shape), h_(h), dim_(shape.dimension()) {
    if (!(h > 0)) throw domain_error("grid spacing must be positive");
    build();
}

void GridDomain::build() {
    const bool radial = shape_.kind == ShapeKind::Disk || shape_.kind == ShapeKind::Ball;
    const double lo = radial ? -shape_.radius : 0.0;
    const double hi = radial ? shape_.radius : 1.0;
    const int imin = static_cast<int>(std::floor(lo / h_)) - 1;
    const int imax = static_cast<int>(std::ceil(hi / h_)) + 1;

    // Interior lattice nodes in lexicographic (x, y, z) order.
    std::map<std::array<int, 3>, std::int32_t> index_of;
    const int kmin = dim_ == 3 ? imin : 0;
    const int kmax = dim_ == 3 ? imax : 0;
    for (int i = imin; i <= imax; ++i)
        for (int j = imin; j <= imax; ++j)
            for (int k = kmin; k <= kmax; ++k) {
                Point p{i * h_, j * h_, k * h_};
                if (!inside(p)) continue;
                index_of[{i, j, k}] = static_cast<std::int32_t>(interior_.size());
                interior_.push_back(p);
                delta_.push_back(distance_to_boundary(p));
            }
    if (interior_.empty())
        throw domain_error("spacing too coarse: no interior node inside " + shape_.name());

    // Stencil arms; cut arms produce boundary points on the true boundary.
    std::vector<Point> raw_boundary;
    struct PendingArm { std::size_t node; int slot; Point at; };
    std::vector<PendingArm> pending;
    arms_.assign(interior_.size() * 2 * dim_, StencilArm{});

    for (const auto& [key, id] : index_of) {
        const Point& p = interior_[id];
        for (int axis = 0; axis < dim_; ++axis)
            for (int dir : {-1, +1}) {
                const int slot = 2 * axis + (dir > 0 ? 1 : 0);
                std::array<int, 3> nk = key;
                nk[axis] += dir;
                auto it = index_of.find(nk);
                StencilArm& arm = arms_[id * 2 * dim_ + slot];
                if (it != index_of.end()) {
                    arm.neighbor_class = NodeClass::Interior;
                    arm.neighbor = it->second;
                    arm.fraction = 1.0;
                } else {
                    auto cut = find_cut(shape_, p, axis, dir, h_);
                    if (!cut)
                        throw domain_error("stencil arm exits the domain without a boundary crossing");
                    arm.neighbor_class = NodeClass::Boundary;
                    arm.fraction = std::min(cut->t / h_, 1.0);
                    pending.push_back({static_cast<std::size_t>(id), slot, cut->at});
                }
            }
    }

    for (const auto& a : pending) raw_boundary.push_back(a.at);

    // Polygonal shapes also list every lattice point on the boundary
    // (corners included) so boundary data can be sampled everywhere.
    if (shape_.kind == ShapeKind::Square || shape_.kind == ShapeKind::Cube ||
        shape_.kind == ShapeKind::LShape) {
        auto on_boundary = [&](const Point& p) {
            if (shape_.kind == ShapeKind::LShape) {
                if (lshape_inside(p[0], p[1])) return false;
                return distance_to_boundary(p) <= 1e-12;
            }
            for (int a = 0; a < dim_; ++a)
                if (p[a] < -1e-12 || p[a] > 1 + 1e-12) return false;
            if (inside(p)) return false;
            return distance_to_boundary(p) >= -1e-12 && std::abs(distance_to_boundary(p)) <= 1e-12;
        };
        for (int i = imin; i <= imax; ++i)
            for (int j = imin; j <= imax; ++j)
                for (int k = kmin; k <= kmax; ++k) {
                    Point p{i * h_, j * h_, k * h_};
                    if (on_boundary(p)) raw_boundary.push_back(p);
                }
    }

    // Dedupe bitwise-identical points, sort lexicographically, remap arms.
    std::vector<Point> sorted = raw_boundary;
    std::sort(sorted.begin(), sorted.end(), point_less);
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    boundary_ = sorted;

    auto boundary_index = [&](const Point& p) {
        auto it = std::lower_bound(boundary_.begin(), boundary_.end(), p, point_less);
        return static_cast<std::int32_t>(it - boundary_.begin());
    };
    for (const auto& a : pending)
        arms_[a.node * 2 * dim_ + a.slot].neighbor = boundary_index(a.at);
}

GridDomain GridDomain::refine() const { return GridDomain(shape_, h_ / 2.0); }

GridDomain build_domain(const Shape& shape, double h) { return GridDomain(shape, h); }

std::string GridDomain::to_json() const {
    nlohmann::json j;
    j["shape"] = shape_.name();
    j["dimension"] = dim_;
    j["h"] = h_;
    if (shape_.kind == ShapeKind::Disk || shape_.kind == ShapeKind::Ball)
        j["radius"] = shape_.radius;
    auto coords = [&](const Point& p) {
        nlohmann::json c = nlohmann::json::array();
        for (int a = 0; a < dim_; ++a) c.push_back(p[a]);
        return c;
    };
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < interior_.size(); ++i)
        nodes.push_back({{"class", "interior"}, {"x", coords(interior_[i])}, {"delta", delta_[i]}});
    for (const auto& p : boundary_)
        nodes.push_back({{"class", "boundary"}, {"x", coords(p)}});
    j["nodes"] = std::move(nodes);
    return j.dump(2);
}

}  // namespace sublap
