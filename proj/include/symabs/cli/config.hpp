#pragma once

// Experiment configuration: a self-contained JSON document naming the
// system, its certificate, the lattice, the precision target and the
// simulation protocol. See fixtures/ for complete examples.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symabs/certificates.hpp"
#include "symabs/dynamics.hpp"
#include "symabs/input_set.hpp"
#include "symabs/interface.hpp"
#include "symabs/lattice.hpp"

namespace symabs::cli {

enum class SystemFamily { Sine, Iqc };

struct SystemConfig {
    SystemFamily family = SystemFamily::Sine;
    Matrix a;
    double m_gain = 0.0;  // sine family
    // iqc family
    Matrix b, c, e, cq, dq;
    std::string nonlinearity;

    bool operator==(const SystemConfig&) const = default;
};

struct CertificateConfig {
    Matrix p;
    Matrix gain;  // R for the sine family, L for the iqc family
    double alpha = 0.0;
    std::optional<double> a;  // defaults to alpha
    // iqc family: exactly one of the two multiplier descriptions
    std::optional<double> lipschitz;
    Matrix multiplier;

    bool operator==(const CertificateConfig&) const = default;
};

/// Which admissible-eta condition to use: 2 = decreasing Lyapunov function,
/// 3 = decrease up to an offset, 4 = closed-form bound for the quadratic
/// interface.
using EtaTheorem = int;

struct ExperimentConfig {
    std::string name;
    SystemConfig system;
    CertificateConfig certificate;
    std::optional<double> eta;  // nullopt means "auto"
    EtaTheorem theorem = 4;
    double epsilon = 0.0;
    std::optional<double> rho;  // defaults to ||C||
    BoxInputSet input_set = BoxInputSet::all_space();
    std::optional<BoxInputSet> abstract_input_box;  // defaults to the shrunk set U'
    double dwell = 0.5;
    double horizon = 10.0;
    double step = kDefaultStep;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    BoxInputSet initial_box = BoxInputSet::all_space();
    double tol = kDefaultTol;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a configuration document. Throws ParseError for
/// malformed JSON, SchemaError listing every offending field path, and
/// DimensionMismatch when shapes do not chain.
ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& cfg);

/// Shipped fixtures by name ("example_sec6", "iqc_sin").
std::optional<std::string_view> builtin_fixture(std::string_view name);
std::vector<std::string_view> builtin_fixture_names();

/// A fixture name or a path to a configuration file. Throws ParseError if
/// the file cannot be read.
ExperimentConfig load_config(const std::string& name_or_path);

SystemModel build_system(const SystemConfig& cfg);

/// Everything derived from a configuration before any simulation runs.
struct ExperimentPlan {
    SystemModel system;
    Matrix p;
    Matrix input_matrix;   // B (identity for the sine family)
    Matrix output_matrix;  // C (identity for the sine family)
    AffineInterface interface;
    double alpha = 0.0;
    double a = 0.0;
    PrecisionSpec precision;
    EtaTheorem theorem = 4;
    double eta_bound = 0.0;  // admissible radius under the selected condition
    double eta = 0.0;        // radius in use (configured, or eta_bound when auto)
    bool eta_auto = false;
    GpsConstants constants;
    double margin = 0.0;  // ||G|| (K1 + 1) eta
    BoxInputSet shrunk_inputs = BoxInputSet::all_space();
    BoxInputSet abstract_inputs = BoxInputSet::all_space();
};

/// Admissible eta for the selected condition. Throws BadRange for a
/// theorem other than 2, 3, 4, and Infeasible when no radius qualifies.
double eta_bound_for(const ExperimentConfig& cfg, EtaTheorem theorem);

/// Throws EmptyResult when the input set cannot absorb the interface
/// correction at this eta.
ExperimentPlan make_plan(const ExperimentConfig& cfg);

}  // namespace symabs::cli
