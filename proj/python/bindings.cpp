// Python bindings for the core operations: domains, measures, the
// Green operator, Kato moduli, and the fixed-point solver.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sublap/experiment.hpp"
#include "sublap/io.hpp"
#include "sublap/inequalities.hpp"
#include "sublap/kato.hpp"
#include "sublap/newton.hpp"
#include "sublap/solver.hpp"

namespace py = pybind11;
using namespace sublap;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style>& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

py::array_t<double> nodes_array(const std::vector<Point>& nodes, int dim) {
    py::array_t<double> out({static_cast<py::ssize_t>(nodes.size()), static_cast<py::ssize_t>(dim)});
    auto r = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < r.shape(0); ++i)
        for (int a = 0; a < dim; ++a) r(i, a) = nodes[static_cast<std::size_t>(i)][a];
    return out;
}

GridFunction function_from_array(const GridDomain& dom,
                                 const py::array_t<double, py::array::c_style>& interior,
                                 const py::array_t<double, py::array::c_style>& boundary) {
    GridFunction u = GridFunction::zeros(dom);
    if (static_cast<std::size_t>(interior.size()) != dom.interior_count())
        throw std::invalid_argument("interior array size mismatch");
    std::copy(interior.data(), interior.data() + interior.size(), u.interior.begin());
    if (boundary.size() != 0) {
        if (static_cast<std::size_t>(boundary.size()) != dom.boundary_count())
            throw std::invalid_argument("boundary array size mismatch");
        std::copy(boundary.data(), boundary.data() + boundary.size(), u.boundary.begin());
    }
    return u;
}

}  // namespace

PYBIND11_MODULE(_sublap, m) {
    m.doc() = "sublinear elliptic Dirichlet problems via discrete Green potentials";

    py::register_exception<domain_error>(m, "DomainError", PyExc_ValueError);
    py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<degenerate_data_error>(m, "DegenerateDataError", PyExc_RuntimeError);
    py::register_exception<hypothesis_violation>(m, "HypothesisViolation", PyExc_ValueError);

    py::class_<GridDomain>(m, "GridDomain")
        .def(py::init([](const std::string& shape, double h, double radius) {
                 return GridDomain(Shape::parse(shape, radius), h);
             }),
             py::arg("shape"), py::arg("h"), py::arg("radius") = 1.0)
        .def_property_readonly("dimension", &GridDomain::dimension)
        .def_property_readonly("h", &GridDomain::spacing)
        .def_property_readonly("diameter", &GridDomain::diameter)
        .def_property_readonly("interior_count", &GridDomain::interior_count)
        .def_property_readonly("boundary_count", &GridDomain::boundary_count)
        .def_property_readonly("shape", [](const GridDomain& d) { return d.shape().name(); })
        .def("interior_nodes",
             [](const GridDomain& d) { return nodes_array(d.interior_nodes(), d.dimension()); })
        .def("boundary_nodes",
             [](const GridDomain& d) { return nodes_array(d.boundary_nodes(), d.dimension()); })
        .def("boundary_distances",
             [](const GridDomain& d) { return to_array(d.boundary_distances()); })
        .def("refine", &GridDomain::refine)
        .def("to_json", &GridDomain::to_json)
        .def("__repr__", [](const GridDomain& d) {
            return "GridDomain(" + d.shape().name() + ", h=" + format_number(d.spacing()) + ", " +
                   std::to_string(d.interior_count()) + " interior nodes)";
        });

    py::class_<GridMeasure>(m, "GridMeasure")
        .def_property_readonly("total_mass", &GridMeasure::total_mass)
        .def("masses", [](const GridMeasure& mu) { return to_array(mu.masses()); })
        .def("__len__", &GridMeasure::size);

    m.def(
        "measure_from_masses",
        [](const GridDomain& d, const py::array_t<double, py::array::c_style>& masses) {
            return GridMeasure(d, from_array(masses));
        },
        py::arg("domain"), py::arg("masses"));
    m.def(
        "measure_from_density",
        [](const GridDomain& d, double value) {
            return measure_from_density(d, [value](const Point&) { return value; });
        },
        py::arg("domain"), py::arg("value"));
    m.def("zero_measure", &zero_measure, py::arg("domain"));
    m.def("dist_alpha_measure", &dist_alpha_measure, py::arg("domain"), py::arg("alpha"));
    m.def(
        "measure_with_atoms",
        [](const GridDomain& d, const std::vector<std::pair<std::int64_t, double>>& atoms) {
            std::vector<GridMeasure::Atom> a;
            for (const auto& [node, mass] : atoms) a.push_back({node, mass});
            return measure_with_atoms(d, std::move(a));
        },
        py::arg("domain"), py::arg("atoms"));
    m.def(
        "growth_constant",
        [](const GridDomain& d, const GridMeasure& omega, double alpha, int jobs) {
            return growth_constant(d, omega, alpha, GrowthSampling::standard(d), jobs);
        },
        py::arg("domain"), py::arg("omega"), py::arg("alpha"), py::arg("jobs") = 1);

    py::class_<GridFunction>(m, "GridFunction")
        .def_property_readonly("interior", [](const GridFunction& u) { return to_array(u.interior); })
        .def_property_readonly("boundary", [](const GridFunction& u) { return to_array(u.boundary); })
        .def_property_readonly("sup_norm", &GridFunction::sup_norm);

    py::class_<BoundaryData>(m, "BoundaryData")
        .def_property_readonly("values", [](const BoundaryData& f) { return to_array(f.values); })
        .def_property_readonly("sup_norm", &BoundaryData::sup_norm);

    m.def(
        "boundary_constant",
        [](const GridDomain& d, double c) { return BoundaryData::constant(d, c); },
        py::arg("domain"), py::arg("value"));
    m.def(
        "boundary_from_values",
        [](const GridDomain& d, const py::array_t<double, py::array::c_style>& v) {
            if (static_cast<std::size_t>(v.size()) != d.boundary_count())
                throw std::invalid_argument("boundary array size mismatch");
            return BoundaryData(from_array(v));
        },
        py::arg("domain"), py::arg("values"));

    py::class_<GreenOperator>(m, "GreenOperator")
        .def(py::init([](const GridDomain& d, std::size_t dense_cap) {
                 GreenOptions o;
                 o.dense_cap = dense_cap;
                 return GreenOperator(d, o);
             }),
             py::arg("domain"), py::arg("dense_cap") = 4096, py::keep_alive<1, 2>())
        .def_property_readonly("size", &GreenOperator::size)
        .def("potential", &GreenOperator::potential, py::arg("omega"))
        .def("harmonic_extension", &GreenOperator::harmonic_extension, py::arg("f"))
        .def("dense",
             [](const GreenOperator& G) {
                 const Eigen::MatrixXd& g = G.dense();
                 py::array_t<double> out({static_cast<py::ssize_t>(g.rows()),
                                          static_cast<py::ssize_t>(g.cols())});
                 auto r = out.mutable_unchecked<2>();
                 for (py::ssize_t i = 0; i < r.shape(0); ++i)
                     for (py::ssize_t j = 0; j < r.shape(1); ++j) r(i, j) = g(i, j);
                 return out;
             })
        .def("apply_T",
             [](const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
                const BoundaryData& f, const GridFunction& u, double q) {
                 return apply_T(G, mu, nu, f, u, q);
             },
             py::arg("mu"), py::arg("nu"), py::arg("f"), py::arg("u"), py::arg("q"));

    m.def("analytic_disk_kernel",
          [](const std::vector<double>& x, const std::vector<double>& y, double R, int d) {
              Point px{}, py_{};
              for (std::size_t a = 0; a < x.size() && a < 3; ++a) px[a] = x[a];
              for (std::size_t a = 0; a < y.size() && a < 3; ++a) py_[a] = y[a];
              return analytic_disk_kernel(px, py_, R, d);
          },
          py::arg("x"), py::arg("y"), py::arg("radius"), py::arg("dimension"));

    m.def("grid_function_from_arrays", &function_from_array, py::arg("domain"), py::arg("interior"),
          py::arg("boundary") = py::array_t<double>());

    py::class_<KatoReport>(m, "KatoReport")
        .def_property_readonly("radii", [](const KatoReport& r) { return to_array(r.radii); })
        .def_property_readonly("modulus", [](const KatoReport& r) { return to_array(r.modulus); })
        .def_property_readonly("center_modulus",
                               [](const KatoReport& r) { return to_array(r.center_modulus); })
        .def_readonly("has_center_modulus", &KatoReport::has_center_modulus)
        .def_readonly("sup_norm", &KatoReport::sup_norm)
        .def_property_readonly("slope",
                               [](const KatoReport& r) -> py::object {
                                   if (!r.slope) return py::none();
                                   return py::float_(*r.slope);
                               })
        .def_readonly("exact_supremum", &KatoReport::exact_supremum);

    m.def(
        "kato_modulus",
        [](const GreenOperator& G, const GridMeasure& omega, std::vector<double> radii, int jobs,
           bool center_modulus) {
            KatoOptions opts;
            opts.jobs = jobs;
            if (!center_modulus) opts.center_modulus_cap = 0;
            if (radii.empty()) radii = default_kato_radii(G.domain());
            return kato_modulus(G, omega, radii, opts);
        },
        py::arg("green"), py::arg("omega"), py::arg("radii") = std::vector<double>{},
        py::arg("jobs") = 1, py::arg("center_modulus") = true);
    m.def("fit_boundary_decay_exponent", &fit_boundary_decay_exponent, py::arg("green"));
    m.def("continuity_modulus", &continuity_modulus, py::arg("green"), py::arg("omega"));

    m.def("check_iterated_inequality",
          [](const GreenOperator& G, const GridMeasure& omega, double s) {
              MarginReport r = check_iterated_inequality(G, omega, s);
              return py::make_tuple(r.margin, r.scale);
          },
          py::arg("green"), py::arg("omega"), py::arg("s"));
    m.def("check_lower_bound",
          [](const GreenOperator& G, const GridMeasure& omega, const GridFunction& u, double q) {
              MarginReport r = check_lower_bound(G, omega, u, q);
              return py::make_tuple(r.margin, r.scale);
          },
          py::arg("green"), py::arg("omega"), py::arg("u"), py::arg("q"));
    m.def("lgamma_norm",
          py::overload_cast<const GridFunction&, const GridMeasure&, double>(&lgamma_norm),
          py::arg("v"), py::arg("omega"), py::arg("gamma"));

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("residual", &SolveReport::residual)
        .def_readonly("monotonicity_violations", &SolveReport::monotonicity_violations)
        .def_readonly("uniform_bound_violations", &SolveReport::uniform_bound_violations)
        .def_readonly("c1", &SolveReport::c1)
        .def_readonly("c2", &SolveReport::c2)
        .def_property_readonly("u", [](const SolveReport& r) { return r.u; })
        .def_property_readonly("margins", [](const SolveReport& r) {
            return py::make_tuple(r.margins.lower, r.margins.upper, r.margins.uniform);
        });

    m.def(
        "picard_solve",
        [](const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
           const BoundaryData& f, double q, double tol, int max_iterations,
           const std::string& direction) {
            SolverConfig cfg;
            cfg.q = q;
            cfg.tol = tol;
            cfg.max_iterations = max_iterations;
            cfg.direction = direction == "above" ? SolverConfig::Direction::Above
                                                 : SolverConfig::Direction::Below;
            return picard_solve(G, mu, nu, f, cfg);
        },
        py::arg("green"), py::arg("mu"), py::arg("nu"), py::arg("f"), py::arg("q"),
        py::arg("tol") = 1e-10, py::arg("max_iterations") = 10000, py::arg("direction") = "below");
    m.def("newton_oracle", &newton_oracle, py::arg("green"), py::arg("mu"), py::arg("nu"),
          py::arg("f"), py::arg("q"), py::arg("u_init"));
    m.def(
        "verify_estimates",
        [](const GridFunction& u, const GreenOperator& G, const GridMeasure& mu,
           const GridMeasure& nu, const BoundaryData& f, double q) {
            EstimateMargins e = verify_estimates(u, G, mu, nu, f, q);
            return py::make_tuple(e.lower, e.upper, e.uniform);
        },
        py::arg("u"), py::arg("green"), py::arg("mu"), py::arg("nu"), py::arg("f"), py::arg("q"));

    m.def(
        "uniqueness_experiment",
        [](const GreenOperator& G, const GridMeasure& mu, const GridMeasure& nu,
           const BoundaryData& f, double q, double gamma) {
            UniquenessReport r = uniqueness_experiment(G, mu, nu, f, q, gamma);
            py::dict out;
            out["gap"] = r.gap;
            out["discrete_unique"] = r.discrete_unique;
            out["minimality_margin"] = r.minimality_margin;
            out["lq_norm_below"] = r.lq_norm_below;
            out["lq_norm_above"] = r.lq_norm_above;
            out["cond_green_mu_norm"] = r.cond_green_mu_norm;
            out["cond_linear_norm"] = r.cond_linear_norm;
            out["note"] = r.note;
            out["below"] = py::cast(r.below);
            out["above"] = py::cast(r.above);
            return out;
        },
        py::arg("green"), py::arg("mu"), py::arg("nu"), py::arg("f"), py::arg("q"),
        py::arg("gamma"));

    m.def(
        "finite_energy_threshold_sweep",
        [](const std::string& shape, double h0, int levels, double q, double gamma,
           const std::vector<double>& alphas, const std::string& mode, double radius) {
            ThresholdTable t = finite_energy_threshold_sweep(
                Shape::parse(shape, radius), h0, levels, q, gamma, alphas,
                mode == "statement" ? ExponentMode::Statement : ExponentMode::Proof);
            py::dict out;
            out["q"] = t.q;
            out["gamma"] = t.gamma;
            out["p"] = t.p;
            out["alpha_star"] = t.alpha_star;
            out["h_levels"] = t.h_levels;
            py::list rows;
            for (const auto& r : t.rows) {
                py::dict row;
                row["alpha"] = r.alpha;
                row["J"] = r.J;
                row["ratios"] = r.ratios;
                row["classification"] = r.classification;
                rows.append(row);
            }
            out["rows"] = rows;
            return out;
        },
        py::arg("shape"), py::arg("h0"), py::arg("levels"), py::arg("q"), py::arg("gamma"),
        py::arg("alphas"), py::arg("mode") = "proof", py::arg("radius") = 1.0);

    m.def(
        "run_experiment_file",
        [](const std::string& config_path, const std::string& out_dir) {
            ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            ExperimentResult res = run_experiment(cfg);
            return py::make_tuple(res.exit_code, res.artifact_paths);
        },
        py::arg("config_path"), py::arg("out_dir") = "");
}
