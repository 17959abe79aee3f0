#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublap/field.hpp"
#include "sublap/grid.hpp"
#include "sublap/inequalities.hpp"
#include "sublap/solver.hpp"

namespace sublap {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an enabled experiment assertion fails; carries the
/// invariant name so the CLI can report it.
class assertion_failure : public std::runtime_error {
public:
    assertion_failure(std::string name, double margin, const std::string& detail)
        : std::runtime_error("assertion failed: " + name + " (margin " +
                             std::to_string(margin) + ") " + detail),
          name_(std::move(name)),
          margin_(margin) {}
    const std::string& name() const { return name_; }
    double margin() const { return margin_; }

private:
    std::string name_;
    double margin_;
};

enum class ExperimentKind { Solve, Kato, Threshold, Verify, GreenTest };

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);

struct MeasureSpec {
    enum class Type { Zero, Constant, DistAlpha, Atoms, Csv, Named } type = Type::Zero;
    double value = 0.0;
    double alpha = 0.0;
    std::string path;
    std::string name;
    std::vector<GridMeasure::Atom> atoms;

    GridMeasure build(const GridDomain& domain) const;
};

struct BoundarySpec {
    enum class Type { Constant, Named, Csv } type = Type::Constant;
    double value = 0.0;
    std::string name;
    std::string path;

    BoundaryData build(const GridDomain& domain) const;
};

/// One config document = one experiment. Unknown keys are rejected;
/// a fixed seed makes every emitted artifact byte-identical.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Solve;
    bool kind_given = false;
    Shape shape;
    double h = 0.25;
    int levels = 3;
    double q = 0.5;
    double gamma = 1.5;
    MeasureSpec mu, nu;
    BoundarySpec f;
    SolverConfig solver;
    bool run_both_directions = false;
    bool run_newton = false;
    std::vector<double> alphas;
    ExponentMode exponent_mode = ExponentMode::Proof;
    std::vector<double> kato_radii;  // empty: default geometric grid
    bool kato_center_modulus = true;
    std::optional<double> growth_alpha;
    bool oscillation = false;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool emit_domain = false;
    bool emit_green_csv = false;
    std::string green_matrix_csv;  // verify: external matrix under test
    std::string check_manifest;    // verify: re-hash a prior manifest
    int verify_measures = 20;
    int verify_pairs = 50;
    int jobs = 1;

    nlohmann::json echo;  // parsed document, embedded in reports

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
};

/// Exit codes: 0 ok, 1 assertion failure, 2 config error, 3 numerical
/// failure (matching the CLI contract).
struct ExperimentResult {
    int exit_code = 0;
    std::vector<std::string> artifact_paths;
    std::string failure;  // populated for nonzero exits
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Oscillation of a grid function over dyadic balls and the fitted
/// local Hoelder exponent per sampled center.
struct OscillationReport {
    std::vector<std::size_t> centers;
    std::vector<double> radii;
    std::vector<std::vector<double>> osc;        // [center][radius]
    std::vector<std::optional<double>> exponent; // per center; nullopt when osc == 0
};

OscillationReport holder_oscillation(const GridFunction& u, const GridDomain& domain,
                                     const std::vector<double>& radii);

/// Dense Green matrix as "i,j,value" CSV (gated by the node cap).
std::string green_matrix_to_csv(const GreenOperator& G);

}  // namespace sublap
