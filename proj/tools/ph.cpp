// ph: persistent homology of dependent-data point clouds, batch CLI.
//
// Subcommands: sample, diagram, betti, bounds, experiment. Every run is a
// pure function of (config, master_seed); outputs are byte-identical across
// reruns and worker counts.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ph/config.hpp"
#include "ph/errors.hpp"
#include "ph/filtration.hpp"
#include "ph/limits.hpp"
#include "ph/persistence.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitStatFlag = 4;

std::string hex64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ph::config_error("output", "cannot open " + path.string());
    out << text;
}

void write_manifest(const fs::path& dir, const std::string& command, uint64_t config_hash,
                    uint64_t seed) {
    json manifest;
    manifest["schema"] = ph::kSummarySchema;
    manifest["version"] = ph::kCodeVersion;
    manifest["command"] = command;
    manifest["config_hash"] = hex64(config_hash);
    manifest["master_seed"] = seed;
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string rect_key(const ph::Rectangle& rect) {
    std::ostringstream os;
    os << "q" << rect.q << "_r" << rect.r << "_s" << rect.s;
    return os.str();
}

const char* status_name(ph::AgreementStatus s) {
    switch (s) {
    case ph::AgreementStatus::pass: return "pass";
    case ph::AgreementStatus::flag: return "flag";
    case ph::AgreementStatus::fail: return "fail";
    }
    return "?";
}

int cmd_sample(const std::string& config_path, const std::string& out_dir) {
    uint64_t hash = 0;
    const ph::ExperimentConfig config = ph::load_experiment_config(config_path, &hash);
    if (config.n == 0) throw ph::config_error("n", "sample command needs n >= 1");
    fs::create_directories(out_dir);
    const ph::Sample sample = config.process.draw(config.n, config.master_seed);
    ph::save_cloud_csv_file((fs::path(out_dir) / "cloud.csv").string(), sample.cloud);
    if (!sample.hidden_path.empty()) {
        std::ostringstream os;
        for (uint32_t b : sample.hidden_path) os << b << '\n';
        write_text(fs::path(out_dir) / "hidden.csv", os.str());
    }
    write_manifest(out_dir, "sample", hash, config.master_seed);
    return 0;
}

int cmd_diagram(const std::string& input, const std::string& kind, size_t max_dim,
                double max_radius, const std::string& metric_name, bool allow_outside,
                bool clearing, const std::string& output) {
    const ph::PointCloud cloud = ph::load_cloud_csv_file(input, allow_outside);
    ph::Metric metric;
    if (metric_name == "euclidean")
        metric = ph::Metric::euclidean;
    else if (metric_name == "chebyshev")
        metric = ph::Metric::chebyshev;
    else
        throw ph::config_error("metric", "expected euclidean or chebyshev");

    ph::FilteredComplex fc;
    if (kind == "rips")
        fc = ph::build_rips(cloud, metric, max_dim, max_radius);
    else if (kind == "cech") {
        if (metric != ph::Metric::euclidean)
            throw ph::config_error("metric", "cech filtration supports the Euclidean metric only");
        fc = ph::build_cech(cloud, max_dim, max_radius);
    } else
        throw ph::config_error("kind", "expected rips or cech");

    const ph::PersistenceDiagram dg = ph::diagram(fc, {clearing});
    std::ostringstream os;
    ph::save_diagram_csv(os, dg);
    write_text(output, os.str());
    return 0;
}

int cmd_betti(const std::string& input, const std::vector<std::string>& queries,
              const std::string& output) {
    std::ifstream in(input);
    if (!in) throw ph::config_error("input", "cannot open " + input);
    const ph::PersistenceDiagram dg = ph::load_diagram_csv(in);
    std::ostringstream os;
    os << "q,r,s,betti\n";
    for (const std::string& q : queries) {
        int deg;
        double r, s;
        if (std::sscanf(q.c_str(), "%d,%lf,%lf", &deg, &r, &s) != 3)
            throw ph::config_error("query", "expected q,r,s but got '" + q + "'");
        const long betti = ph::persistent_betti(dg, {deg, r, s});
        os << deg << ',' << ph::format_exact(r) << ',' << ph::format_exact(s) << ',' << betti
           << '\n';
    }
    if (output.empty())
        std::cout << os.str();
    else
        write_text(output, os.str());
    return 0;
}

int cmd_bounds(const std::string& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) throw ph::config_error("config", "cannot open " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const uint64_t hash = ph::fnv1a64(buffer.str());
    json j;
    try {
        j = json::parse(buffer.str());
    } catch (const json::parse_error& err) {
        throw ph::config_error("config", std::string("JSON parse error: ") + err.what());
    }
    if (!j.contains("bound")) throw ph::config_error("bound", "missing required field");
    const json& b = j["bound"];
    const std::string kind = b.value("kind", "betti");
    std::vector<double> t_grid;
    for (const auto& v : b.at("t_grid")) t_grid.push_back(v.get<double>());
    if (t_grid.empty()) throw ph::config_error("bound.t_grid", "must be nonempty");

    std::ostringstream os;
    os << "t,bound,trivial\n";
    for (double t : t_grid) {
        ph::BoundValue value;
        if (kind == "betti") {
            const std::string metric_name = b.value("metric", "euclidean");
            value = ph::betti_exp_bound(ph::betti_bound_params_cube(
                b.at("n").get<size_t>(), b.at("p").get<size_t>(), b.at("q").get<int>(),
                b.at("a").get<double>(), b.at("s").get<double>(), b.at("f_star").get<double>(),
                b.at("gamma_inf").get<double>(),
                metric_name == "chebyshev" ? ph::Metric::chebyshev : ph::Metric::euclidean, t));
        } else if (kind == "abstract") {
            ph::BoundParams params;
            params.n = b.at("n").get<size_t>();
            params.a = b.at("a").get<double>();
            params.q = b.at("q").get<double>();
            params.q_tilde = b.at("q_tilde").get<double>();
            params.c1 = b.value("c1", 1.0);
            params.c2 = b.value("c2", 1.0);
            params.f_star = b.at("f_star").get<double>();
            params.gamma_inf = b.at("gamma_inf").get<double>();
            params.covering_log = b.at("covering_log").get<double>();
            params.ball_sup = b.at("ball_sup").get<double>();
            params.t = t;
            value = ph::abstract_exp_bound(params);
        } else if (kind == "kernel") {
            value = ph::kernel_concentration_bound(b.at("n").get<size_t>(), t,
                                                   b.at("f_star").get<double>(),
                                                   b.at("mu_ball").get<double>());
        } else {
            throw ph::config_error("bound.kind", "expected betti, abstract or kernel");
        }
        os << ph::format_exact(t) << ',' << ph::format_exact(value.value) << ','
           << (value.trivial ? 1 : 0) << '\n';
    }
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "bounds.csv", os.str());
    write_manifest(out_dir, "bounds", hash, 0);
    return 0;
}

void write_estimates_csv(const fs::path& path, const std::vector<ph::LimitEstimate>& estimates) {
    std::ostringstream os;
    os << "q,r,s,n,mean,se,replications\n";
    for (const auto& est : estimates)
        for (size_t ix = 0; ix < est.n_grid.size(); ++ix)
            os << est.rect.q << ',' << ph::format_exact(est.rect.r) << ','
               << ph::format_exact(est.rect.s) << ',' << est.n_grid[ix] << ','
               << ph::format_exact(est.mean[ix]) << ',' << ph::format_exact(est.se[ix]) << ','
               << est.replications << '\n';
    write_text(path, os.str());
}

void write_raw_csv(const fs::path& path, const ph::RectangleGrid& grid,
                   const ph::ReplicationTable& raw) {
    std::ostringstream os;
    os << "n,q,r,s,replication,value\n";
    for (size_t n_ix = 0; n_ix < raw.n_grid.size(); ++n_ix)
        for (size_t rx = 0; rx < grid.rects.size(); ++rx)
            for (size_t rep = 0; rep < raw.values[n_ix][rx].size(); ++rep)
                os << raw.n_grid[n_ix] << ',' << grid.rects[rx].q << ','
                   << ph::format_exact(grid.rects[rx].r) << ','
                   << ph::format_exact(grid.rects[rx].s) << ',' << rep << ','
                   << ph::format_exact(raw.values[n_ix][rx][rep]) << '\n';
    write_text(path, os.str());
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir, bool dry_run) {
    uint64_t hash = 0;
    const ph::ExperimentConfig config = ph::load_experiment_config(config_path, &hash);

    if (dry_run) {
        json plan;
        plan["mode"] = ph::experiment_mode_name(config.mode);
        plan["process"] = config.process.tag;
        plan["complex"] = {{"kind", ph::complex_kind_name(config.complex.kind)},
                           {"max_dim", config.complex.max_dim},
                           {"max_radius", config.complex.max_radius}};
        plan["n_grid"] = config.n_grid;
        plan["replications"] = config.replications;
        plan["rectangles"] = config.queries.rects.size();
        plan["workers"] = config.workers;
        plan["master_seed"] = config.master_seed;
        plan["config_hash"] = hex64(hash);
        std::cout << plan.dump(2) << '\n';
        return 0;
    }

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_manifest(dir, "experiment", hash, config.master_seed);

    ph::EstimateOptions options;
    options.workers = config.workers;
    options.max_simplices = config.max_simplices;
    options.regime = config.regime;

    json summary;
    summary["schema"] = ph::kSummarySchema;
    summary["mode"] = ph::experiment_mode_name(config.mode);
    summary["config_hash"] = hex64(hash);
    summary["master_seed"] = config.master_seed;
    std::string overall = "pass";
    auto worsen = [&](const std::string& status) {
        if (status == "fail" || overall == "fail")
            overall = "fail";
        else if (status == "flag" || overall == "flag")
            overall = "flag";
    };

    switch (config.mode) {
    case ph::ExperimentMode::estimate: {
        ph::ReplicationTable raw;
        const auto estimates =
            ph::estimate_limit(config.process, config.queries, config.n_grid,
                               config.replications, config.complex, config.master_seed, options,
                               &raw);
        write_estimates_csv(dir / "estimates.csv", estimates);
        write_raw_csv(dir / "raw.csv", config.queries, raw);
        summary["rectangles"] = estimates.size();
        break;
    }
    case ph::ExperimentMode::compare_iid: {
        ph::ReplicationTable raw_process, raw_iid;
        const auto dependent =
            ph::estimate_limit(config.process, config.queries, config.n_grid,
                               config.replications, config.complex, config.master_seed, options,
                               &raw_process);
        const auto iid = ph::estimate_limit(config.process.matched_binomial(), config.queries,
                                            config.n_grid, config.replications, config.complex,
                                            ph::derive(config.master_seed, 0x11d), options,
                                            &raw_iid);
        write_estimates_csv(dir / "estimates_process.csv", dependent);
        write_estimates_csv(dir / "estimates_iid.csv", iid);
        write_raw_csv(dir / "raw_process.csv", config.queries, raw_process);
        write_raw_csv(dir / "raw_iid.csv", config.queries, raw_iid);
        const auto rows = ph::compare_estimates(dependent, iid);
        std::ostringstream os;
        os << "q,r,s,mean_process,se_process,mean_iid,se_iid,z,status\n";
        json jrows = json::array();
        for (const auto& row : rows) {
            os << row.rect.q << ',' << ph::format_exact(row.rect.r) << ','
               << ph::format_exact(row.rect.s) << ',' << ph::format_exact(row.mean_a) << ','
               << ph::format_exact(row.se_a) << ',' << ph::format_exact(row.mean_b) << ','
               << ph::format_exact(row.se_b) << ',' << ph::format_exact(row.z) << ','
               << status_name(row.status) << '\n';
            jrows.push_back({{"rect", rect_key(row.rect)},
                             {"z", row.z},
                             {"status", status_name(row.status)}});
            worsen(status_name(row.status));
        }
        write_text(dir / "agreement.csv", os.str());
        summary["rows"] = jrows;
        break;
    }
    case ph::ExperimentMode::slln: {
        json jrows = json::array();
        std::ostringstream os;
        os << "q,r,s,n,value\n";
        for (const auto& rect : config.queries.rects) {
            const auto traj = ph::slln_check(config.process, rect, config.n_grid, config.complex,
                                             config.master_seed, options);
            for (size_t ix = 0; ix < traj.n_grid.size(); ++ix)
                os << rect.q << ',' << ph::format_exact(rect.r) << ',' << ph::format_exact(rect.s)
                   << ',' << traj.n_grid[ix] << ',' << ph::format_exact(traj.values[ix]) << '\n';
            json row;
            row["rect"] = rect_key(rect);
            row["n_grid"] = traj.n_grid;
            row["values"] = traj.values;
            row["diagnostic"] = traj.diagnostic;
            jrows.push_back(row);
        }
        write_text(dir / "slln.csv", os.str());
        summary["trajectories"] = jrows;
        break;
    }
    case ph::ExperimentMode::vague: {
        const auto rows =
            ph::vague_convergence_check(config.process, config.queries, config.n_grid,
                                        config.replications, config.complex, config.master_seed,
                                        options);
        json jrows = json::array();
        std::ostringstream os;
        os << "q,r,s,n,mean,se,cauchy_within_3se\n";
        for (const auto& row : rows) {
            for (size_t ix = 0; ix < row.n_grid.size(); ++ix)
                os << row.rect.q << ',' << ph::format_exact(row.rect.r) << ','
                   << ph::format_exact(row.rect.s) << ',' << row.n_grid[ix] << ','
                   << ph::format_exact(row.mean[ix]) << ',' << ph::format_exact(row.se[ix]) << ','
                   << (row.cauchy_within_3se ? 1 : 0) << '\n';
            jrows.push_back({{"rect", rect_key(row.rect)}, {"cauchy", row.cauchy_within_3se}});
            if (!row.cauchy_within_3se) worsen("flag");
        }
        write_text(dir / "vague.csv", os.str());
        summary["rows"] = jrows;
        break;
    }
    case ph::ExperimentMode::geometric_lemma: {
        const auto report = ph::geometric_lemma_suite(config.n_max, config.trials,
                                                      config.master_seed,
                                                      config.process.ambient_dim());
        summary["trials"] = report.trials;
        summary["violations"] = report.violations;
        if (report.violations > 0) worsen("fail");
        break;
    }
    case ph::ExperimentMode::concentration: {
        const auto report = ph::concentration_suite(
            config.process, config.concentration_query, config.concentration_n,
            config.replications, config.master_seed, config.complex, config.concentration,
            options);
        std::ostringstream os;
        os << "t,threshold,empirical_tail,bound,trivial,violated\n";
        for (const auto& row : report.rows)
            os << ph::format_exact(row.t) << ',' << ph::format_exact(row.threshold) << ','
               << ph::format_exact(row.empirical_tail) << ',' << ph::format_exact(row.bound)
               << ',' << (row.trivial ? 1 : 0) << ',' << (row.violated ? 1 : 0) << '\n';
        write_text(dir / "concentration.csv", os.str());
        summary["vacuous"] = report.vacuous_count;
        summary["violations"] = report.violation_count;
        summary["sd_decay_ratio"] = report.sd_decay_ratio;
        if (report.violation_count > 0) worsen("fail");
        break;
    }
    }

    summary["status"] = overall;
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    if (overall != "pass" && config.flags_are_fatal) return kExitStatFlag;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistent Betti numbers of Cech/Rips filtrations from dependent data"};
    app.require_subcommand(1);

    std::string config_path, out_path;

    auto* sample = app.add_subcommand("sample", "draw a point cloud from a process spec");
    sample->add_option("--config", config_path, "JSON config with process, n, master_seed")
        ->required();
    sample->add_option("--out", out_path, "output directory")->required();

    std::string diag_input, diag_kind = "rips", diag_metric = "euclidean", diag_output;
    size_t diag_max_dim = 2;
    double diag_max_radius = 1.0;
    bool diag_allow_outside = false, diag_clearing = false;
    auto* diag = app.add_subcommand("diagram", "persistence diagram of a point-cloud CSV");
    diag->add_option("--input", diag_input, "point cloud CSV")->required();
    diag->add_option("--kind", diag_kind, "rips or cech");
    diag->add_option("--metric", diag_metric, "euclidean or chebyshev (rips only)");
    diag->add_option("--max-dim", diag_max_dim, "simplex dimension cap")->required();
    diag->add_option("--max-radius", diag_max_radius, "filtration value cap")->required();
    diag->add_flag("--allow-outside-cube", diag_allow_outside,
                   "min-max rescale coordinates outside [0,1]");
    diag->add_flag("--clearing", diag_clearing, "enable the clearing optimization");
    diag->add_option("--output", diag_output, "diagram CSV path")->required();

    std::string betti_input, betti_output;
    std::vector<std::string> betti_queries;
    auto* betti = app.add_subcommand("betti", "persistent Betti numbers from a diagram CSV");
    betti->add_option("--input", betti_input, "diagram CSV")->required();
    betti->add_option("--query", betti_queries, "q,r,s (repeatable)")->required();
    betti->add_option("--out", betti_output, "output CSV (stdout if omitted)");

    auto* bounds = app.add_subcommand("bounds", "evaluate concentration bounds over a t-grid");
    bounds->add_option("--config", config_path, "JSON config with a bound block")->required();
    bounds->add_option("--out", out_path, "output directory")->required();

    bool dry_run = false;
    auto* experiment = app.add_subcommand("experiment", "run a limit-theorem experiment");
    experiment->add_option("--config", config_path, "experiment JSON config")->required();
    experiment->add_option("--out", out_path, "output directory")->required();
    experiment->add_flag("--dry-run", dry_run, "print the resolved plan and write nothing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) return cmd_sample(config_path, out_path);
        if (diag->parsed())
            return cmd_diagram(diag_input, diag_kind, diag_max_dim, diag_max_radius, diag_metric,
                               diag_allow_outside, diag_clearing, diag_output);
        if (betti->parsed()) return cmd_betti(betti_input, betti_queries, betti_output);
        if (bounds->parsed()) return cmd_bounds(config_path, out_path);
        if (experiment->parsed()) return cmd_experiment(config_path, out_path, dry_run);
    } catch (const ph::config_error& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return kExitConfig;
    } catch (const ph::budget_error& err) {
        std::cerr << "budget error: " << err.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
