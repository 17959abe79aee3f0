#include "sublap/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sublap/io.hpp"

namespace sublap {

GridMeasure::GridMeasure(const GridDomain& domain, std::vector<double> node_masses,
                         std::vector<Atom> atoms)
    : mass_(std::move(node_masses)), atoms_(std::move(atoms)) {
    if (mass_.size() != domain.interior_count())
        throw std::invalid_argument("measure size does not match domain");
    for (double m : mass_)
        if (!(m >= 0) || !std::isfinite(m))
            throw std::invalid_argument("node masses must be nonnegative and finite");
    for (const auto& a : atoms_) {
        if (a.node < 0 || static_cast<std::size_t>(a.node) >= mass_.size())
            throw std::invalid_argument("atom node index out of range");
        if (!(a.mass >= 0) || !std::isfinite(a.mass))
            throw std::invalid_argument("atom mass must be nonnegative and finite");
        mass_[static_cast<std::size_t>(a.node)] += a.mass;
    }
    total_ = 0.0;
    for (double m : mass_) total_ += m;  // fixed-order sum
}

GridMeasure measure_from_density(const GridDomain& domain,
                                 const std::function<double(const Point&)>& density) {
    const double vol = std::pow(domain.spacing(), domain.dimension());
    std::vector<double> m(domain.interior_count());
    for (std::size_t j = 0; j < m.size(); ++j) {
        const double a = density(domain.interior_node(j));
        if (!(a >= 0) || !std::isfinite(a))
            throw std::invalid_argument("density must be nonnegative and finite");
        m[j] = a * vol;
    }
    return GridMeasure(domain, std::move(m));
}

GridMeasure zero_measure(const GridDomain& domain) {
    return GridMeasure(domain, std::vector<double>(domain.interior_count(), 0.0));
}

GridMeasure measure_with_atoms(const GridDomain& domain, std::vector<GridMeasure::Atom> atoms) {
    return GridMeasure(domain, std::vector<double>(domain.interior_count(), 0.0),
                       std::move(atoms));
}

GridMeasure dist_alpha_measure(const GridDomain& domain, double alpha) {
    // The sampled distance is clipped at half a cell: a node that sits
    // at a sub-cell distance from a curved boundary would otherwise be
    // assigned the density of a point its cell does not resolve, and
    // for alpha >= 1 that single mass is large enough to flatten the
    // Kato modulus at every radius. On lattice-aligned boundaries
    // (square, cube, aligned L-shape) delta >= h and the clip is inert.
    const double h = domain.spacing();
    const double vol = std::pow(h, domain.dimension());
    std::vector<double> m(domain.interior_count());
    for (std::size_t j = 0; j < m.size(); ++j)
        m[j] = std::pow(std::max(domain.boundary_distance(j), 0.5 * h), -alpha) * vol;
    return GridMeasure(domain, std::move(m));
}

GridMeasure scale_measure(const GridDomain& domain, const GridMeasure& mu,
                          const std::vector<double>& weight) {
    if (weight.size() != mu.size())
        throw std::invalid_argument("weight size does not match measure");
    std::vector<double> m(mu.size());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = weight[j] * mu.mass(j);
    return GridMeasure(domain, std::move(m));
}

GrowthSampling GrowthSampling::standard(const GridDomain& domain) {
    GrowthSampling s;
    s.centers.resize(domain.interior_count());
    for (std::size_t i = 0; i < s.centers.size(); ++i) s.centers[i] = i;
    const double diam = domain.diameter();
    for (double r = 2.0 * domain.spacing(); r <= diam; r *= 2.0) s.radii.push_back(r);
    return s;
}

namespace {

double sq_dist(const Point& a, const Point& b, int d) {
    double s = 0;
    for (int k = 0; k < d; ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

}  // namespace

double growth_constant(const GridDomain& domain, const GridMeasure& omega, double alpha,
                       const GrowthSampling& sampling, int jobs) {
    const int d = domain.dimension();
    const double expo = d - 2 + alpha;
    std::vector<double> radii = sampling.radii;
    std::sort(radii.begin(), radii.end());

    auto center_stat = [&](std::size_t ci) {
        const Point& c = domain.interior_node(sampling.centers[ci]);
        std::vector<double> ball_mass(radii.size(), 0.0);
        for (std::size_t j = 0; j < omega.size(); ++j) {
            const double m = omega.mass(j);
            if (m == 0.0) continue;
            const double dist = std::sqrt(sq_dist(c, domain.interior_node(j), d));
            // open ball: dist < r strictly, so radius ties are excluded
            auto it = std::upper_bound(radii.begin(), radii.end(), dist);
            if (it != radii.end()) ball_mass[static_cast<std::size_t>(it - radii.begin())] += m;
        }
        // prefix sums: mass in B(c, r_k)
        for (std::size_t r = 1; r < ball_mass.size(); ++r) ball_mass[r] += ball_mass[r - 1];
        double best = 0;
        for (std::size_t r = 0; r < radii.size(); ++r)
            best = std::max(best, ball_mass[r] / std::pow(radii[r], expo));
        return best;
    };

    const std::size_t nc = sampling.centers.size();
    std::vector<double> partial;
    if (jobs <= 1 || nc < 64) {
        double best = 0;
        for (std::size_t ci = 0; ci < nc; ++ci) best = std::max(best, center_stat(ci));
        return best;
    }
    const std::size_t nt = std::min<std::size_t>(jobs, nc);
    partial.assign(nt, 0.0);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            double best = 0;
            for (std::size_t ci = t; ci < nc; ci += nt) best = std::max(best, center_stat(ci));
            partial[t] = best;
        });
    for (auto& th : pool) th.join();
    double best = 0;
    for (double p : partial) best = std::max(best, p);  // fixed-order reduction
    return best;
}

std::string measure_to_csv(const GridDomain& domain, const GridMeasure& mu) {
    const int d = domain.dimension();
    std::string out = d == 2 ? "index,x,y,mass\n" : "index,x,y,z,mass\n";
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const Point& p = domain.interior_node(j);
        out += std::to_string(j);
        for (int a = 0; a < d; ++a) {
            out += ',';
            out += format_number(p[a]);
        }
        out += ',';
        out += format_number(mu.mass(j));
        out += '\n';
    }
    return out;
}

GridMeasure measure_from_csv(const GridDomain& domain, const std::string& csv_text) {
    auto rows = parse_csv(csv_text);
    if (rows.empty()) throw std::invalid_argument("empty measure CSV");
    const std::size_t ncols = domain.dimension() == 2 ? 4 : 5;
    std::vector<double> m(domain.interior_count(), 0.0);
    for (std::size_t r = 1; r < rows.size(); ++r) {  // skip header
        if (rows[r].size() != ncols)
            throw std::invalid_argument("measure CSV: wrong column count");
        const long idx = std::stol(rows[r][0]);
        if (idx < 0 || static_cast<std::size_t>(idx) >= m.size())
            throw std::invalid_argument("measure CSV: node index out of range");
        m[static_cast<std::size_t>(idx)] = std::stod(rows[r].back());
    }
    return GridMeasure(domain, std::move(m));
}

}  // namespace sublap
