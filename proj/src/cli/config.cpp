#include "symabs/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symabs/error.hpp"

namespace symabs::cli {

namespace {

using nlohmann::json;

constexpr std::string_view kExampleSec6 = R"json({
  "name": "example_sec6",
  "system": {
    "family": "sine",
    "A": [[0.15, 0.0], [0.0, 0.5]],
    "m": 2.0
  },
  "certificate": {
    "P": [[1.0, 0.0], [0.0, 1.0]],
    "R": [[-5.0, 0.0], [0.0, -5.0]],
    "alpha": 2.4
  },
  "lattice": { "eta": 0.15, "theorem": 4 },
  "precision": { "epsilon": 0.5 },
  "input_set": { "lower": [-3.0, -3.0], "upper": [3.0, 3.0] },
  "simulation": {
    "dwell": 0.5,
    "horizon": 10.0,
    "step": 0.001,
    "trials": 20,
    "seed": 7,
    "initial_box": { "lower": [-1.0, -1.0], "upper": [1.0, 1.0] }
  }
})json";

constexpr std::string_view kIqcSin = R"json({
  "name": "iqc_sin",
  "system": {
    "family": "iqc",
    "A": [[0.15, 0.0], [0.0, 0.5]],
    "B": [[1.0, 0.0], [0.0, 1.0]],
    "C": [[1.0, 0.0], [0.0, 1.0]],
    "E": [[2.0, 0.0], [0.0, 2.0]],
    "Cq": [[1.0, 0.0], [0.0, 1.0]],
    "Dq": [[0.0, 0.0], [0.0, 0.0]],
    "nonlinearity": "sin"
  },
  "certificate": {
    "P": [[1.0, 0.0], [0.0, 1.0]],
    "L": [[-5.0, 0.0], [0.0, -5.0]],
    "alpha": 1.9,
    "multiplier": { "lipschitz": 1.0 }
  },
  "lattice": { "eta": "auto", "theorem": 4 },
  "precision": { "epsilon": 0.5 },
  "input_set": { "lower": [-3.0, -3.0], "upper": [3.0, 3.0] },
  "simulation": {
    "dwell": 0.5,
    "horizon": 10.0,
    "step": 0.001,
    "trials": 20,
    "seed": 11,
    "initial_box": { "lower": [-1.0, -1.0], "upper": [1.0, 1.0] }
  }
})json";

// Collects every schema problem with its field path before failing.
class Reader {
public:
    std::vector<std::string> errors;

    const json* child(const json& obj, const std::string& path, const char* key, bool required) {
        if (!obj.is_object()) return nullptr;
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) errors.push_back(join(path, key) + ": missing required field");
            return nullptr;
        }
        return &*it;
    }

    const json* object(const json& obj, const std::string& path, const char* key, bool required = true) {
        const json* node = child(obj, path, key, required);
        if (node && !node->is_object()) {
            errors.push_back(join(path, key) + ": expected an object");
            return nullptr;
        }
        return node;
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key,
                                 bool required = true) {
        const json* node = child(obj, path, key, required);
        if (!node) return std::nullopt;
        if (!node->is_number() || !std::isfinite(node->get<double>())) {
            errors.push_back(join(path, key) + ": expected a finite number");
            return std::nullopt;
        }
        return node->get<double>();
    }

    std::optional<std::uint64_t> unsigned_integer(const json& obj, const std::string& path,
                                                  const char* key, bool required = true) {
        const json* node = child(obj, path, key, required);
        if (!node) return std::nullopt;
        if (!node->is_number_unsigned()) {
            errors.push_back(join(path, key) + ": expected a non-negative integer");
            return std::nullopt;
        }
        return node->get<std::uint64_t>();
    }

    std::optional<std::string> string(const json& obj, const std::string& path, const char* key,
                                      bool required = true) {
        const json* node = child(obj, path, key, required);
        if (!node) return std::nullopt;
        if (!node->is_string()) {
            errors.push_back(join(path, key) + ": expected a string");
            return std::nullopt;
        }
        return node->get<std::string>();
    }

    std::optional<Vector> vector(const json& node, const std::string& path) {
        if (!node.is_array()) {
            errors.push_back(path + ": expected an array of numbers");
            return std::nullopt;
        }
        Vector out;
        for (const auto& v : node) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                errors.push_back(path + ": expected an array of finite numbers");
                return std::nullopt;
            }
            out.push_back(v.get<double>());
        }
        return out;
    }

    Matrix matrix(const json& obj, const std::string& path, const char* key, bool required = true) {
        const json* node = child(obj, path, key, required);
        if (!node) return {};
        const std::string where = join(path, key);
        if (!node->is_array()) {
            errors.push_back(where + ": expected a matrix (array of rows)");
            return {};
        }
        std::vector<std::vector<double>> rows;
        for (const auto& row : *node) {
            auto v = vector(row, where);
            if (!v) return {};
            rows.push_back(std::move(*v));
        }
        for (const auto& row : rows) {
            if (row.size() != rows.front().size()) {
                errors.push_back(where + ": rows have different lengths");
                return {};
            }
        }
        return Matrix::from_rows(rows);
    }

    std::optional<BoxInputSet> box(const json& obj, const std::string& path, const char* key,
                                   bool required = true, bool allow_all = false) {
        const json* node = child(obj, path, key, required);
        if (!node) return std::nullopt;
        const std::string where = join(path, key);
        if (allow_all && node->is_string() && node->get<std::string>() == "all")
            return BoxInputSet::all_space();
        if (!node->is_object()) {
            errors.push_back(where + (allow_all ? ": expected \"all\" or {lower, upper}"
                                                : ": expected {lower, upper}"));
            return std::nullopt;
        }
        const json* lo = child(*node, where, "lower", true);
        const json* hi = child(*node, where, "upper", true);
        if (!lo || !hi) return std::nullopt;
        auto lower = vector(*lo, where + ".lower");
        auto upper = vector(*hi, where + ".upper");
        if (!lower || !upper) return std::nullopt;
        if (lower->size() != upper->size()) {
            errors.push_back(where + ": lower and upper have different lengths");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < lower->size(); ++i) {
            if ((*lower)[i] > (*upper)[i]) {
                errors.push_back(where + ": lower exceeds upper at index " + std::to_string(i));
                return std::nullopt;
            }
        }
        return BoxInputSet::box(std::move(*lower), std::move(*upper));
    }

private:
    static std::string join(const std::string& path, const char* key) {
        return path.empty() ? std::string(key) : path + "." + key;
    }
};

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
    if (m.rows() != rows || m.cols() != cols) {
        throw Error(ErrorCode::DimensionMismatch, what + " must be " + std::to_string(rows) + "x" +
                                                      std::to_string(cols) + ", got " + shape(m));
    }
}

void require_box_dim(const BoxInputSet& box, std::size_t dim, const std::string& what) {
    if (const auto d = box.dimension(); d && *d != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    what + " has dimension " + std::to_string(*d) + ", expected " + std::to_string(dim));
    }
}

void validate_dimensions(const ExperimentConfig& cfg) {
    const SystemConfig& sys = cfg.system;
    if (!sys.a.is_square() || sys.a.rows() == 0)
        throw Error(ErrorCode::DimensionMismatch, "system.A must be square, got " + shape(sys.a));
    const std::size_t n = sys.a.rows();
    std::size_t m = n;
    if (sys.family == SystemFamily::Iqc) {
        m = sys.b.cols();
        const std::size_t le = sys.e.cols();
        const std::size_t lp = sys.cq.rows();
        require_shape(sys.b, n, m, "system.B");
        if (sys.c.cols() != n) throw Error(ErrorCode::DimensionMismatch, "system.C must have n columns");
        require_shape(sys.e, n, le, "system.E");
        require_shape(sys.cq, lp, n, "system.Cq");
        require_shape(sys.dq, lp, le, "system.Dq");
        if (lp != le && sys.nonlinearity != "zero") {
            throw Error(ErrorCode::DimensionMismatch,
                        "elementwise nonlinearity needs as many rows in Cq as columns in E");
        }
        const CertificateConfig& cert = cfg.certificate;
        require_shape(cert.gain, m, n, "certificate.L");
        if (!cert.lipschitz) require_shape(cert.multiplier, lp + le, lp + le, "certificate.multiplier.M");
    } else {
        require_shape(cfg.certificate.gain, n, n, "certificate.R");
    }
    require_shape(cfg.certificate.p, n, n, "certificate.P");
    require_box_dim(cfg.input_set, m, "input_set");
    if (cfg.abstract_input_box) require_box_dim(*cfg.abstract_input_box, m, "simulation.abstract_input_box");
    require_box_dim(cfg.initial_box, n, "simulation.initial_box");
}

json matrix_json(const Matrix& m) { return m.to_rows(); }

json box_json(const BoxInputSet& box) {
    if (box.is_all_space()) return "all";
    return json{{"lower", box.lower()}, {"upper", box.upper()}};
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "configuration must be a JSON object");

    Reader rd;
    ExperimentConfig cfg;
    if (auto name = rd.string(doc, "", "name", false)) cfg.name = *name;

    if (const json* sys = rd.object(doc, "", "system")) {
        const auto family = rd.string(*sys, "system", "family");
        cfg.system.a = rd.matrix(*sys, "system", "A");
        if (family == "sine") {
            cfg.system.family = SystemFamily::Sine;
            cfg.system.m_gain = rd.number(*sys, "system", "m").value_or(0.0);
        } else if (family == "iqc") {
            cfg.system.family = SystemFamily::Iqc;
            cfg.system.b = rd.matrix(*sys, "system", "B");
            cfg.system.c = rd.matrix(*sys, "system", "C");
            cfg.system.e = rd.matrix(*sys, "system", "E");
            cfg.system.cq = rd.matrix(*sys, "system", "Cq");
            cfg.system.dq = rd.matrix(*sys, "system", "Dq");
            cfg.system.nonlinearity = rd.string(*sys, "system", "nonlinearity").value_or("");
            try {
                if (!cfg.system.nonlinearity.empty())
                    (void)elementwise_nonlinearity(cfg.system.nonlinearity, 1);
            } catch (const Error&) {
                rd.errors.push_back("system.nonlinearity: unknown nonlinearity '" +
                                    cfg.system.nonlinearity + "'");
            }
        } else if (family) {
            rd.errors.push_back("system.family: expected \"sine\" or \"iqc\"");
        }
    }

    if (const json* cert = rd.object(doc, "", "certificate")) {
        cfg.certificate.p = rd.matrix(*cert, "certificate", "P");
        const bool iqc = cfg.system.family == SystemFamily::Iqc;
        cfg.certificate.gain = rd.matrix(*cert, "certificate", iqc ? "L" : "R");
        if (auto alpha = rd.number(*cert, "certificate", "alpha")) {
            if (*alpha <= 0.0) rd.errors.push_back("certificate.alpha: must be positive");
            cfg.certificate.alpha = *alpha;
        }
        cfg.certificate.a = rd.number(*cert, "certificate", "a", false);
        if (iqc) {
            if (const json* mult = rd.object(*cert, "certificate", "multiplier")) {
                cfg.certificate.lipschitz =
                    rd.number(*mult, "certificate.multiplier", "lipschitz", false);
                if (cfg.certificate.lipschitz && *cfg.certificate.lipschitz <= 0.0)
                    rd.errors.push_back("certificate.multiplier.lipschitz: must be positive");
                if (mult->contains("M")) {
                    cfg.certificate.multiplier = rd.matrix(*mult, "certificate.multiplier", "M");
                }
                if (cfg.certificate.lipschitz.has_value() == mult->contains("M"))
                    rd.errors.push_back("certificate.multiplier: give exactly one of lipschitz, M");
            }
        }
    }

    if (const json* lat = rd.object(doc, "", "lattice")) {
        const json* eta = rd.child(*lat, "lattice", "eta", true);
        if (eta) {
            if (eta->is_string() && eta->get<std::string>() == "auto") {
                cfg.eta = std::nullopt;
            } else if (eta->is_number() && eta->get<double>() > 0.0 &&
                       std::isfinite(eta->get<double>())) {
                cfg.eta = eta->get<double>();
            } else {
                rd.errors.push_back("lattice.eta: expected a positive number or \"auto\"");
            }
        }
        if (auto th = rd.unsigned_integer(*lat, "lattice", "theorem", false)) {
            if (*th < 2 || *th > 4) rd.errors.push_back("lattice.theorem: expected 2, 3 or 4");
            cfg.theorem = static_cast<EtaTheorem>(*th);
        }
    }

    if (const json* prec = rd.object(doc, "", "precision")) {
        if (auto eps = rd.number(*prec, "precision", "epsilon")) {
            if (*eps <= 0.0) rd.errors.push_back("precision.epsilon: must be positive");
            cfg.epsilon = *eps;
        }
        cfg.rho = rd.number(*prec, "precision", "rho", false);
        if (cfg.rho && *cfg.rho <= 0.0) rd.errors.push_back("precision.rho: must be positive");
    }

    if (auto u = rd.box(doc, "", "input_set", true, true)) cfg.input_set = *u;

    if (const json* sim = rd.object(doc, "", "simulation")) {
        const std::string p = "simulation";
        if (auto v = rd.number(*sim, p, "dwell")) cfg.dwell = *v;
        if (auto v = rd.number(*sim, p, "horizon")) cfg.horizon = *v;
        if (auto v = rd.number(*sim, p, "step")) cfg.step = *v;
        if (auto v = rd.unsigned_integer(*sim, p, "trials")) cfg.trials = static_cast<std::size_t>(*v);
        if (auto v = rd.unsigned_integer(*sim, p, "seed")) cfg.seed = *v;
        if (auto v = rd.number(*sim, p, "tol", false)) cfg.tol = *v;
        if (auto b = rd.box(*sim, p, "initial_box")) cfg.initial_box = *b;
        cfg.abstract_input_box = rd.box(*sim, p, "abstract_input_box", false);
        if (cfg.dwell <= 0.0) rd.errors.push_back("simulation.dwell: must be positive");
        if (cfg.horizon < 0.0) rd.errors.push_back("simulation.horizon: must be non-negative");
        if (cfg.step <= 0.0) rd.errors.push_back("simulation.step: must be positive");
        if (cfg.tol <= 0.0) rd.errors.push_back("simulation.tol: must be positive");
    }
    if (cfg.input_set.is_all_space() && !cfg.abstract_input_box) {
        rd.errors.push_back(
            "simulation.abstract_input_box: required when input_set is \"all\"");
    }

    if (!rd.errors.empty()) {
        std::string msg;
        for (const auto& e : rd.errors) msg += (msg.empty() ? "" : "; ") + e;
        throw Error(ErrorCode::SchemaError, msg);
    }
    validate_dimensions(cfg);
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json sys;
    sys["A"] = matrix_json(cfg.system.a);
    if (cfg.system.family == SystemFamily::Sine) {
        sys["family"] = "sine";
        sys["m"] = cfg.system.m_gain;
    } else {
        sys["family"] = "iqc";
        sys["B"] = matrix_json(cfg.system.b);
        sys["C"] = matrix_json(cfg.system.c);
        sys["E"] = matrix_json(cfg.system.e);
        sys["Cq"] = matrix_json(cfg.system.cq);
        sys["Dq"] = matrix_json(cfg.system.dq);
        sys["nonlinearity"] = cfg.system.nonlinearity;
    }

    json cert;
    cert["P"] = matrix_json(cfg.certificate.p);
    cert[cfg.system.family == SystemFamily::Sine ? "R" : "L"] = matrix_json(cfg.certificate.gain);
    cert["alpha"] = cfg.certificate.alpha;
    if (cfg.certificate.a) cert["a"] = *cfg.certificate.a;
    if (cfg.system.family == SystemFamily::Iqc) {
        if (cfg.certificate.lipschitz)
            cert["multiplier"] = {{"lipschitz", *cfg.certificate.lipschitz}};
        else
            cert["multiplier"] = {{"M", matrix_json(cfg.certificate.multiplier)}};
    }

    json doc;
    doc["name"] = cfg.name;
    doc["system"] = std::move(sys);
    doc["certificate"] = std::move(cert);
    doc["lattice"] = {{"eta", cfg.eta ? json(*cfg.eta) : json("auto")}, {"theorem", cfg.theorem}};
    doc["precision"] = {{"epsilon", cfg.epsilon}};
    if (cfg.rho) doc["precision"]["rho"] = *cfg.rho;
    doc["input_set"] = box_json(cfg.input_set);
    json sim = {{"dwell", cfg.dwell},   {"horizon", cfg.horizon},
                {"step", cfg.step},     {"trials", cfg.trials},
                {"seed", cfg.seed},     {"tol", cfg.tol},
                {"initial_box", box_json(cfg.initial_box)}};
    if (cfg.abstract_input_box) sim["abstract_input_box"] = box_json(*cfg.abstract_input_box);
    doc["simulation"] = std::move(sim);
    return doc.dump(2);
}

std::optional<std::string_view> builtin_fixture(std::string_view name) {
    if (name == "example_sec6") return kExampleSec6;
    if (name == "iqc_sin") return kIqcSin;
    return std::nullopt;
}

std::vector<std::string_view> builtin_fixture_names() { return {"example_sec6", "iqc_sin"}; }

ExperimentConfig load_config(const std::string& name_or_path) {
    if (auto text = builtin_fixture(name_or_path)) return parse_config(*text);
    std::ifstream in(name_or_path);
    if (!in) {
        throw Error(ErrorCode::ParseError,
                    "'" + name_or_path + "' is neither a built-in fixture nor a readable file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SystemModel build_system(const SystemConfig& cfg) {
    if (cfg.family == SystemFamily::Sine) return SineSystem(cfg.a, cfg.m_gain);
    return IqcSystem(cfg.a, cfg.b, cfg.c, cfg.e, cfg.cq, cfg.dq,
                     elementwise_nonlinearity(cfg.nonlinearity, cfg.cq.rows()));
}

namespace {

// L in u = v + L (x1 - x2) and the matching input matrix B.
Matrix interface_gain(const ExperimentConfig& cfg) {
    if (cfg.system.family == SystemFamily::Sine) return solve(cfg.certificate.p, cfg.certificate.gain);
    return cfg.certificate.gain;
}

Matrix input_matrix_of(const ExperimentConfig& cfg) {
    if (cfg.system.family == SystemFamily::Sine) return Matrix::identity(cfg.system.a.rows());
    return cfg.system.b;
}

Matrix output_matrix_of(const ExperimentConfig& cfg) {
    if (cfg.system.family == SystemFamily::Sine) return Matrix::identity(cfg.system.a.rows());
    return cfg.system.c;
}

double decay_split(const ExperimentConfig& cfg) {
    return cfg.certificate.a.value_or(cfg.certificate.alpha);
}

}  // namespace

double eta_bound_for(const ExperimentConfig& cfg, EtaTheorem theorem) {
    const Matrix& p = cfg.certificate.p;
    const Matrix l = interface_gain(cfg);
    const Matrix b = input_matrix_of(cfg);
    const Matrix c = output_matrix_of(cfg);
    const double alpha = cfg.certificate.alpha;
    const double a = decay_split(cfg);

    if (theorem == 4) return eta_bound_iqc(p, b, l, c, alpha, a, cfg.epsilon);
    if (theorem != 2 && theorem != 3)
        throw Error(ErrorCode::BadRange, "theorem selector must be 2, 3 or 4");

    require_positive_definite(p);
    const EigenExtremes ext = eig_extremes(p);
    const MonomialKInf alpha_lo(ext.lambda_min, 2.0);
    const MonomialKInf alpha_hi(ext.lambda_max, 2.0);
    const PrecisionSpec precision{cfg.epsilon, cfg.rho.value_or(spectral_norm(c))};
    if (theorem == 2) return eta_feasible(precision, alpha_lo, alpha_hi, GasCondition{});

    // sigma(eta) = ||Lhat|| eta^2 / a, gamma = 2 alpha - a.
    const GpsConstants unit = gps_constants(p, b, l, alpha, a, 1.0);
    const GpsCondition gps{unit.gamma, MonomialKInf(unit.lhat_norm / a, 2.0)};
    if (!(unit.lhat_norm > 0.0)) return eta_feasible(precision, alpha_lo, alpha_hi, GasCondition{});
    return eta_feasible(precision, alpha_lo, alpha_hi, gps);
}

ExperimentPlan make_plan(const ExperimentConfig& cfg) {
    const Matrix l = interface_gain(cfg);
    ExperimentPlan plan{build_system(cfg.system),
                        cfg.certificate.p,
                        input_matrix_of(cfg),
                        output_matrix_of(cfg),
                        AffineInterface(l),
                        cfg.certificate.alpha,
                        decay_split(cfg),
                        {},
                        cfg.theorem,
                        0.0,
                        0.0,
                        !cfg.eta.has_value(),
                        {},
                        0.0,
                        BoxInputSet::all_space(),
                        BoxInputSet::all_space()};
    plan.precision = PrecisionSpec{cfg.epsilon, cfg.rho.value_or(spectral_norm(plan.output_matrix))};
    plan.eta_bound = eta_bound_for(cfg, cfg.theorem);
    plan.eta = cfg.eta.value_or(plan.eta_bound);
    plan.constants = gps_constants(plan.p, plan.input_matrix, l, plan.alpha, plan.a, plan.eta);
    plan.margin = input_margin(l, plan.constants.k1, plan.eta);
    plan.shrunk_inputs = shrink_box(cfg.input_set, plan.margin);
    plan.abstract_inputs = cfg.abstract_input_box.value_or(plan.shrunk_inputs);
    if (cfg.abstract_input_box && !plan.shrunk_inputs.is_all_space()) {
        const auto& box = *cfg.abstract_input_box;
        if (!plan.shrunk_inputs.contains(box.lower()) || !plan.shrunk_inputs.contains(box.upper()))
            throw Error(ErrorCode::InputViolation,
                        "simulation.abstract_input_box is not inside the shrunk input set");
    }
    return plan;
}

}  // namespace symabs::cli
