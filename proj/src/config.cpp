#include "ph/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ph/errors.hpp"

namespace ph {

using nlohmann::json;

const char* experiment_mode_name(ExperimentMode mode) {
    switch (mode) {
    case ExperimentMode::estimate: return "estimate";
    case ExperimentMode::compare_iid: return "compare_iid";
    case ExperimentMode::slln: return "slln";
    case ExperimentMode::vague: return "vague";
    case ExperimentMode::geometric_lemma: return "geometric_lemma";
    case ExperimentMode::concentration: return "concentration";
    }
    return "?";
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

const json& require(const json& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) throw config_error(field + "." + key, "missing required field");
    return *it;
}

double require_number(const json& j, const char* key, const std::string& field) {
    const json& v = require(j, key, field);
    if (!v.is_number()) throw config_error(field + "." + key, "expected a number");
    return v.get<double>();
}

size_t require_count(const json& j, const char* key, const std::string& field) {
    const double v = require_number(j, key, field);
    if (v < 0 || v != std::floor(v)) throw config_error(field + "." + key, "expected a count");
    return static_cast<size_t>(v);
}

std::vector<double> matrix_rows(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw config_error(field, "expected a matrix (array of rows)");
    std::vector<double> flat;
    const size_t cols = j.front().size();
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols)
            throw config_error(field, "ragged matrix");
        for (const auto& v : row) {
            if (!v.is_number()) throw config_error(field, "matrix entries must be numbers");
            flat.push_back(v.get<double>());
        }
    }
    if (flat.size() != j.size() * cols || j.size() != cols)
        throw config_error(field, "expected a square matrix");
    return flat;
}

} // namespace

BlockedDensity parse_blockeddensity_impl(const json& j, const std::string& field) {
    BlockedDensity density;
    density.dim = require_count(j, "dim", field);
    if (j.contains("grid_m")) {
        const size_t m = require_count(j, "grid_m", field);
        const json& w = require(j, "weights", field);
        if (!w.is_array()) throw config_error(field + ".weights", "expected an array");
        std::vector<double> weights;
        for (const auto& v : w) weights.push_back(v.get<double>());
        try {
            density = BlockedDensity::regular_grid(density.dim, m, std::move(weights));
        } catch (const config_error& err) {
            throw config_error(field + "." + err.field(), err.what());
        }
    } else {
        const json& blocks = require(j, "blocks", field);
        if (!blocks.is_array()) throw config_error(field + ".blocks", "expected an array");
        for (const auto& b : blocks) {
            Box box;
            for (const auto& v : require(b, "lo", field + ".blocks")) box.lo.push_back(v.get<double>());
            for (const auto& v : require(b, "hi", field + ".blocks")) box.hi.push_back(v.get<double>());
            density.blocks.push_back(std::move(box));
            density.weights.push_back(require_number(b, "weight", field + ".blocks"));
        }
    }
    try {
        density.validate();
    } catch (const config_error& err) {
        throw config_error(field + "." + err.field(), err.what());
    }
    return density;
}

BlockedDensity parse_blocked_density(const json& j, const std::string& field) {
    return parse_blockeddensity_impl(j, field);
}

namespace {

HiddenChainSpec parse_hidden(const json& j, const BlockedDensity& density,
                             const std::string& field) {
    try {
        if (j.contains("lazy_theta"))
            return HiddenChainSpec::lazy_mixture(density.block_masses(),
                                                 require_number(j, "lazy_theta", field));
        return HiddenChainSpec::for_density(
            density, matrix_rows(require(j, "transition", field), field + ".transition"));
    } catch (const config_error& err) {
        throw config_error(field + "." + err.field(), err.what());
    }
}

DensityChainSpec parse_density_chain(const json& j, const std::string& field) {
    DensityChainSpec spec;
    spec.order = require_count(j, "order", field);
    spec.dim = require_count(j, "dim", field);
    if (j.contains("burn_in")) spec.burn_in = require_count(j, "burn_in", field);
    const json& joint = require(j, "joint", field);
    const std::string name = require(joint, "name", field + ".joint").get<std::string>();
    if (name == "uniform") {
        spec.joint = [](std::span<const double>) { return 1.0; };
        spec.g_min = spec.g_max = 1.0;
    } else if (name == "sine_product") {
        if (spec.order != 1 || spec.dim != 1)
            throw config_error(field + ".joint", "sine_product requires order=1, dim=1");
        const double amp = joint.contains("amplitude")
                               ? require_number(joint, "amplitude", field + ".joint")
                               : 0.5;
        if (!(amp >= 0.0 && amp < 1.0))
            throw config_error(field + ".joint.amplitude", "need 0 <= amplitude < 1");
        spec.joint = [amp](std::span<const double> z) {
            return 1.0 + amp * std::sin(2.0 * M_PI * z[0]) * std::sin(2.0 * M_PI * z[1]);
        };
        spec.g_min = 1.0 - amp;
        spec.g_max = 1.0 + amp;
    } else {
        throw config_error(field + ".joint.name", "unknown density '" + name +
                                                      "' (known: uniform, sine_product)");
    }
    try {
        spec.validate();
    } catch (const config_error& err) {
        throw config_error(field + "." + err.field(), err.what());
    }
    return spec;
}

LatticeFieldSpec parse_lattice(const json& j, const std::string& field) {
    BlockedDensity density = parse_blockeddensity_impl(require(j, "density", field), field + ".density");
    const size_t k = density.block_count();
    auto table = [&](const char* key) {
        if (j.contains(key))
            return matrix_rows(require(j, key, field), field + "." + key);
        // default: lazy mixture rows from the block masses
        const double theta = require_number(j, "lazy_theta", field);
        return HiddenChainSpec::lazy_mixture(density.block_masses(), theta).transition;
    };
    std::vector<double> t1 = table("t_axis1");
    std::vector<double> t2 = table("t_axis2");
    if (t1.size() != k * k || t2.size() != k * k)
        throw config_error(field, "axis transition tables must be KxK");
    const double lambda = j.contains("lambda") ? require_number(j, "lambda", field) : 0.5;
    std::array<size_t, 2> extent{1, 1};
    const json& ext = require(j, "extent", field);
    if (!ext.is_array() || ext.size() != 2)
        throw config_error(field + ".extent", "expected [N1, N2]");
    extent[0] = ext[0].get<size_t>();
    extent[1] = ext[1].get<size_t>();
    const double ratio = j.contains("min_extent_ratio")
                             ? require_number(j, "min_extent_ratio", field)
                             : 0.5;
    try {
        return LatticeFieldSpec::mixture(std::move(density), std::move(t1), std::move(t2), lambda,
                                         extent, ratio);
    } catch (const config_error& err) {
        throw config_error(field + "." + err.field(), err.what());
    }
}

} // namespace

ProcessSpec parse_process(const json& j, const std::string& field) {
    ProcessSpec spec;
    const std::string type = require(j, "type", field).get<std::string>();
    spec.tag = type;
    if (type == "binomial") {
        BinomialProcess p;
        if (j.contains("density")) {
            p.density = parse_blockeddensity_impl(j["density"], field + ".density");
            p.dim = p.density->dim;
        } else {
            p.dim = require_count(j, "dim", field);
            if (p.dim == 0) throw config_error(field + ".dim", "dim must be >= 1");
        }
        spec.process = std::move(p);
    } else if (type == "blocked_chain") {
        BlockedChainProcess p;
        p.density = parse_blockeddensity_impl(require(j, "density", field), field + ".density");
        p.hidden = parse_hidden(require(j, "hidden", field), p.density, field + ".hidden");
        spec.process = std::move(p);
    } else if (type == "density_chain") {
        spec.process = DensityChainProcess{parse_density_chain(j, field)};
    } else if (type == "lattice_field") {
        spec.process = LatticeFieldProcess{parse_lattice(j, field)};
    } else if (type == "delay_embedding") {
        DelayEmbeddingProcess p;
        p.density = parse_blockeddensity_impl(require(j, "density", field), field + ".density");
        if (p.density.dim != 1)
            throw config_error(field + ".density.dim", "delay embedding needs a 1-d series");
        p.hidden = parse_hidden(require(j, "hidden", field), p.density, field + ".hidden");
        for (const auto& v : require(j, "lags", field)) p.lags.push_back(v.get<size_t>());
        for (size_t i = 1; i < p.lags.size(); ++i)
            if (p.lags[i] <= p.lags[i - 1])
                throw config_error(field + ".lags", "lags must be strictly increasing");
        spec.process = std::move(p);
    } else {
        throw config_error(field + ".type", "unknown process type '" + type + "'");
    }
    return spec;
}

ExperimentConfig parse_experiment_config(const json& j) {
    ExperimentConfig config;
    config.process = parse_process(require(j, "process", "config"), "process");

    if (j.contains("complex")) {
        const json& c = j["complex"];
        const std::string kind = require(c, "kind", "complex").get<std::string>();
        if (kind == "rips")
            config.complex.kind = ComplexKind::rips;
        else if (kind == "cech")
            config.complex.kind = ComplexKind::cech;
        else
            throw config_error("complex.kind", "expected 'rips' or 'cech'");
        config.complex.max_dim = require_count(c, "max_dim", "complex");
        config.complex.max_radius = require_number(c, "max_radius", "complex");
        if (config.complex.max_radius <= 0.0)
            throw config_error("complex.max_radius", "must be > 0");
    }

    if (j.contains("queries")) {
        for (const auto& q : j["queries"]) {
            Rectangle rect;
            rect.q = static_cast<int>(require_count(q, "q", "queries"));
            rect.r = require_number(q, "r", "queries");
            rect.s = require_number(q, "s", "queries");
            config.queries.rects.push_back(rect);
        }
        config.queries.validate();
    }

    if (j.contains("n_grid")) {
        for (const auto& v : j["n_grid"]) config.n_grid.push_back(v.get<size_t>());
        for (size_t i = 1; i < config.n_grid.size(); ++i)
            if (config.n_grid[i] <= config.n_grid[i - 1])
                throw config_error("n_grid", "must be strictly increasing");
    }
    if (j.contains("replications")) config.replications = require_count(j, "replications", "config");
    if (j.contains("master_seed")) config.master_seed = j["master_seed"].get<uint64_t>();
    if (j.contains("workers")) config.workers = std::max<size_t>(1, require_count(j, "workers", "config"));
    if (j.contains("budget")) {
        config.max_simplices = require_count(j["budget"], "max_simplices", "budget");
        if (config.max_simplices == 0) throw config_error("budget.max_simplices", "must be > 0");
    }
    if (j.contains("n")) config.n = require_count(j, "n", "config");
    if (j.contains("flags_are_fatal")) config.flags_are_fatal = j["flags_are_fatal"].get<bool>();

    if (j.contains("mode")) {
        const std::string mode = j["mode"].get<std::string>();
        bool found = false;
        for (ExperimentMode m :
             {ExperimentMode::estimate, ExperimentMode::compare_iid, ExperimentMode::slln,
              ExperimentMode::vague, ExperimentMode::geometric_lemma,
              ExperimentMode::concentration}) {
            if (mode == experiment_mode_name(m)) {
                config.mode = m;
                found = true;
                break;
            }
        }
        if (!found) throw config_error("mode", "unknown experiment mode '" + mode + "'");
    }

    if (j.contains("trials")) config.trials = require_count(j, "trials", "config");
    if (j.contains("n_max")) config.n_max = require_count(j, "n_max", "config");

    if (j.contains("regime")) {
        const json& r = j["regime"];
        const std::string kind = require(r, "kind", "regime").get<std::string>();
        const size_t p = config.process.ambient_dim();
        try {
            if (kind == "critical")
                config.regime = ScalingRegime::critical(p);
            else if (kind == "supercritical")
                config.regime = ScalingRegime::supercritical(p, require_number(r, "alpha", "regime"));
            else if (kind == "subcritical")
                config.regime = ScalingRegime::subcritical(p, require_number(r, "beta", "regime"));
            else
                throw config_error("regime.kind", "expected critical, supercritical or subcritical");
        } catch (const std::invalid_argument& err) {
            throw config_error("regime", err.what());
        }
    }

    if (j.contains("concentration")) {
        const json& c = j["concentration"];
        config.concentration.a = require_number(c, "a", "concentration");
        if (!(config.concentration.a > 0.5))
            throw config_error("concentration.a", "need a > 1/2");
        config.concentration.f_star = require_number(c, "f_star", "concentration");
        config.concentration.gamma_inf = require_number(c, "gamma_inf", "concentration");
        for (const auto& v : require(c, "t_grid", "concentration"))
            config.concentration.t_grid.push_back(v.get<double>());
        config.concentration_n = require_count(c, "n", "concentration");
        const json& q = require(c, "query", "concentration");
        config.concentration_query.q = static_cast<int>(require_count(q, "q", "concentration.query"));
        config.concentration_query.r = require_number(q, "r", "concentration.query");
        config.concentration_query.s = require_number(q, "s", "concentration.query");
    }

    return config;
}

ExperimentConfig load_experiment_config(const std::string& path, uint64_t* config_hash) {
    std::ifstream in(path);
    if (!in) throw config_error("config", "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (config_hash) *config_hash = fnv1a64(text);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw config_error("config", std::string("JSON parse error: ") + err.what());
    }
    return parse_experiment_config(j);
}

} // namespace ph
