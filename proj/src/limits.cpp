#include "ph/limits.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ph/errors.hpp"

namespace ph {

void RectangleGrid::validate() const {
    for (const auto& rect : rects) {
        if (rect.q < 0) throw config_error("queries", "homology degree q must be >= 0");
        if (!(rect.r <= rect.s)) throw config_error("queries", "rectangle needs r <= s");
        if (rect.r < 0.0) throw config_error("queries", "rectangle needs r >= 0");
    }
}

namespace {

// Runs fn(task) for task in [0, count) on `workers` threads. Results must be
// written to preallocated, task-indexed storage; the first exception wins
// and is rethrown after all threads join.
void run_tasks(size_t count, size_t workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (size_t t = 0; t < count; ++t) fn(t);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const size_t t = next.fetch_add(1);
            if (t >= count) return;
            {
                std::scoped_lock lock(error_mutex);
                if (error) return;
            }
            try {
                fn(t);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const size_t spawn = std::min(workers, count);
    pool.reserve(spawn);
    for (size_t w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

ScalingRegime regime_for(const ProcessSpec& process, const EstimateOptions& options) {
    if (options.regime) return *options.regime;
    return ScalingRegime::critical(process.ambient_dim());
}

FilteredComplex build_rescaled(const PointCloud& cloud, const ComplexSpec& complex, double eta,
                               size_t max_simplices) {
    BuildBudget budget{max_simplices};
    const double raw_radius = complex.max_radius / eta;
    FilteredComplex fc =
        complex.kind == ComplexKind::rips
            ? build_rips(cloud, Metric::euclidean, complex.max_dim, raw_radius, budget)
            : build_cech(cloud, complex.max_dim, raw_radius, budget);
    return rescale_complex(fc, eta);
}

void check_grid_against_complex(const RectangleGrid& grid, const ComplexSpec& complex,
                                size_t ambient_dim) {
    grid.validate();
    for (const auto& rect : grid.rects) {
        int cap = complex.max_dim == 0 ? 0 : static_cast<int>(complex.max_dim) - 1;
        if (complex.kind == ComplexKind::cech)
            cap = std::min(cap, static_cast<int>(ambient_dim) - 1);
        if (rect.q > cap)
            throw config_error("queries", "q = " + std::to_string(rect.q) +
                                              " above the degree cap " + std::to_string(cap) +
                                              " for this complex spec");
        // s beyond max_radius is allowed: the rectangle then counts only
        // essential classes.
    }
}

} // namespace

std::vector<LimitEstimate> estimate_limit(const ProcessSpec& process, const RectangleGrid& grid,
                                          std::span<const size_t> n_grid, size_t replications,
                                          const ComplexSpec& complex, uint64_t seed,
                                          const EstimateOptions& options, ReplicationTable* raw) {
    if (replications < 10) throw config_error("replications", "estimate_limit needs R >= 10");
    for (size_t k = 1; k < n_grid.size(); ++k)
        if (n_grid[k] <= n_grid[k - 1]) throw config_error("n_grid", "must be increasing");
    check_grid_against_complex(grid, complex, process.ambient_dim());

    const ScalingRegime regime = regime_for(process, options);
    const size_t n_count = n_grid.size(), rect_count = grid.rects.size();

    // values[n_index][rect][rep]
    std::vector<std::vector<std::vector<double>>> values(
        n_count, std::vector<std::vector<double>>(rect_count, std::vector<double>(replications)));

    run_tasks(n_count * replications, options.workers, [&](size_t task) {
        const size_t n_ix = task / replications;
        const size_t rep = task % replications;
        const size_t n = n_grid[n_ix];
        const uint64_t rep_seed = derive(derive(derive(seed, kStreamReplication), n_ix), rep);
        const Sample sample = process.draw(n, rep_seed);
        const double eta = regime.eta(n);
        FilteredComplex fc;
        try {
            fc = build_rescaled(sample.cloud, complex, eta, options.max_simplices);
        } catch (const budget_error& err) {
            throw budget_error(std::string(err.what()) + " (n=" + std::to_string(n) +
                                   ", replication=" + std::to_string(rep) + ")",
                               err.requested(), err.cap());
        }
        const PersistenceDiagram dg = diagram(fc);
        for (size_t rx = 0; rx < rect_count; ++rx) {
            const auto& rect = grid.rects[rx];
            const long beta = persistent_betti(dg, {rect.q, rect.r, rect.s});
            values[n_ix][rx][rep] = static_cast<double>(beta) / static_cast<double>(n);
        }
    });

    std::vector<LimitEstimate> estimates(rect_count);
    for (size_t rx = 0; rx < rect_count; ++rx) {
        auto& est = estimates[rx];
        est.rect = grid.rects[rx];
        est.n_grid.assign(n_grid.begin(), n_grid.end());
        est.replications = replications;
        est.seed = seed;
        est.mean.resize(n_count);
        est.se.resize(n_count);
        for (size_t n_ix = 0; n_ix < n_count; ++n_ix) {
            const auto& v = values[n_ix][rx];
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(replications);
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            var /= static_cast<double>(replications - 1);
            est.mean[n_ix] = mean;
            est.se[n_ix] = std::sqrt(var / static_cast<double>(replications));
        }
    }
    if (raw) {
        raw->n_grid.assign(n_grid.begin(), n_grid.end());
        raw->values = std::move(values);
    }
    return estimates;
}

std::vector<AgreementRow> compare_estimates(const std::vector<LimitEstimate>& a,
                                            const std::vector<LimitEstimate>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("compare_estimates: rectangle count mismatch");
    std::vector<AgreementRow> rows;
    rows.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        const size_t last_a = a[i].mean.size() - 1, last_b = b[i].mean.size() - 1;
        AgreementRow row;
        row.rect = a[i].rect;
        row.mean_a = a[i].mean[last_a];
        row.se_a = a[i].se[last_a];
        row.mean_b = b[i].mean[last_b];
        row.se_b = b[i].se[last_b];
        const double pooled = std::sqrt(row.se_a * row.se_a + row.se_b * row.se_b);
        row.z = pooled > 0.0 ? std::fabs(row.mean_a - row.mean_b) / pooled
                             : (row.mean_a == row.mean_b ? 0.0 : INFINITY);
        row.status = row.z <= 3.0   ? AgreementStatus::pass
                     : row.z < 4.0 ? AgreementStatus::flag
                                   : AgreementStatus::fail;
        rows.push_back(row);
    }
    return rows;
}

SllnTrajectory slln_check(const ProcessSpec& process, const Rectangle& query,
                          std::span<const size_t> n_grid, const ComplexSpec& complex,
                          uint64_t seed, const EstimateOptions& options) {
    if (n_grid.empty()) throw config_error("n_grid", "must be nonempty");
    RectangleGrid grid;
    grid.rects = {query};
    check_grid_against_complex(grid, complex, process.ambient_dim());
    const ScalingRegime regime = regime_for(process, options);

    const size_t n_max = n_grid.back();
    const Sample sample = process.draw(n_max, derive(seed, kStreamReplication));

    SllnTrajectory traj;
    traj.rect = query;
    traj.n_grid.assign(n_grid.begin(), n_grid.end());
    traj.values.resize(n_grid.size());

    run_tasks(n_grid.size(), options.workers, [&](size_t ix) {
        const size_t n = n_grid[ix];
        PointCloud prefix;
        prefix.dim = sample.cloud.dim;
        prefix.coords.assign(sample.cloud.coords.begin(),
                             sample.cloud.coords.begin() + static_cast<long>(n * prefix.dim));
        const FilteredComplex fc =
            build_rescaled(prefix, complex, regime.eta(n), options.max_simplices);
        const long beta = persistent_betti(diagram(fc), {query.q, query.r, query.s});
        traj.values[ix] = static_cast<double>(beta) / static_cast<double>(n);
    });

    const size_t tail = std::min<size_t>(3, traj.values.size());
    double worst = 0.0;
    for (size_t i = traj.values.size() - tail; i < traj.values.size(); ++i)
        for (size_t j = i + 1; j < traj.values.size(); ++j)
            worst = std::max(worst, std::fabs(traj.values[i] - traj.values[j]));
    traj.diagnostic = worst;
    return traj;
}

std::vector<VagueRow> vague_convergence_check(const ProcessSpec& process,
                                              const RectangleGrid& grid,
                                              std::span<const size_t> n_grid, size_t replications,
                                              const ComplexSpec& complex, uint64_t seed,
                                              const EstimateOptions& options) {
    const auto estimates =
        estimate_limit(process, grid, n_grid, replications, complex, seed, options);
    std::vector<VagueRow> rows;
    rows.reserve(estimates.size());
    for (const auto& est : estimates) {
        VagueRow row;
        row.rect = est.rect;
        row.n_grid = est.n_grid;
        row.mean = est.mean;
        row.se = est.se;
        if (est.mean.size() >= 2) {
            const size_t last = est.mean.size() - 1;
            const double pooled =
                std::sqrt(est.se[last] * est.se[last] + est.se[last - 1] * est.se[last - 1]);
            row.cauchy_within_3se = std::fabs(est.mean[last] - est.mean[last - 1]) <= 3.0 * pooled;
        } else {
            row.cauchy_within_3se = true;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

GeometricLemmaReport geometric_lemma_suite(size_t n_max, size_t trials, uint64_t seed, size_t p) {
    if (n_max > 12)
        throw std::invalid_argument("geometric_lemma_suite: exhaustive scale means n_max <= 12");
    GeometricLemmaReport report;
    report.trials = trials;
    RngStream rng = make_stream(seed, kStreamSubset);
    for (size_t trial = 0; trial < trials; ++trial) {
        const size_t n_super = 2 + rng.next_u64() % (n_max - 1);
        const Sample super_sample =
            sample_binomial(n_super, std::nullopt, p, derive(seed, trial));

        // Random proper-or-equal subset, kept in index order.
        std::vector<uint32_t> injection;
        for (size_t i = 0; i < n_super; ++i)
            if (rng.next_unit() < 0.6) injection.push_back(static_cast<uint32_t>(i));
        if (injection.empty()) injection.push_back(static_cast<uint32_t>(rng.next_u64() % n_super));

        PointCloud sub_cloud;
        sub_cloud.dim = p;
        for (uint32_t ix : injection) sub_cloud.push_back(super_sample.cloud.point(ix));

        const int q = static_cast<int>(rng.next_u64() % 2);
        const bool use_cech = rng.next_unit() < 0.5;
        const double s = rng.next_uniform(0.05, use_cech ? 0.9 : 1.5);
        const double r = rng.next_uniform(0.0, s);
        const size_t max_dim = static_cast<size_t>(q) + 1;
        const double cap = use_cech ? 1.0 : 2.0;

        FilteredComplex sub_fc, super_fc;
        if (use_cech) {
            sub_fc = build_cech(sub_cloud, max_dim, cap);
            super_fc = build_cech(super_sample.cloud, max_dim, cap);
        } else {
            sub_fc = build_rips(sub_cloud, Metric::euclidean, max_dim, cap);
            super_fc = build_rips(super_sample.cloud, Metric::euclidean, max_dim, cap);
        }
        const auto [lhs, rhs] = geometric_lemma_gap(sub_fc, super_fc, injection, {q, r, s});
        report.max_lhs = std::max(report.max_lhs, lhs);
        if (lhs > rhs) ++report.violations;
    }
    return report;
}

ConcentrationReport concentration_suite(const ProcessSpec& process, const Rectangle& query,
                                        size_t n, size_t replications, uint64_t seed,
                                        const ComplexSpec& complex,
                                        const ConcentrationParams& params,
                                        const EstimateOptions& options) {
    if (replications < 1000)
        throw config_error("replications", "concentration suite needs R >= 1000");
    RectangleGrid grid;
    grid.rects = {query};
    const size_t p = process.ambient_dim();

    auto betas_at = [&](size_t size) {
        ReplicationTable raw;
        const std::vector<size_t> ns{size};
        estimate_limit(process, grid, ns, replications, complex, derive(seed, size), options,
                       &raw);
        std::vector<double> betas(replications);
        for (size_t rep = 0; rep < replications; ++rep)
            betas[rep] = raw.values[0][0][rep] * static_cast<double>(size); // back to beta
        return betas;
    };

    const std::vector<double> betas = betas_at(n);
    double mean = 0.0;
    for (double b : betas) mean += b;
    mean /= static_cast<double>(replications);
    double var = 0.0;
    for (double b : betas) var += (b - mean) * (b - mean);
    var /= static_cast<double>(replications - 1);

    ConcentrationReport report;
    report.sd_small_n = std::sqrt(var) / static_cast<double>(n);

    const std::vector<double> betas2 = betas_at(2 * n);
    double mean2 = 0.0;
    for (double b : betas2) mean2 += b;
    mean2 /= static_cast<double>(replications);
    double var2 = 0.0;
    for (double b : betas2) var2 += (b - mean2) * (b - mean2);
    var2 /= static_cast<double>(replications - 1);
    report.sd_large_n = std::sqrt(var2) / (2.0 * static_cast<double>(n));
    report.sd_decay_ratio =
        report.sd_small_n > 0.0 ? report.sd_large_n / report.sd_small_n : 0.0;

    for (double t : params.t_grid) {
        ConcentrationRow row;
        row.t = t;
        row.threshold = std::pow(static_cast<double>(n), params.a) * t;
        size_t exceed = 0;
        for (double b : betas)
            if (std::fabs(b - mean) >= row.threshold) ++exceed;
        row.empirical_tail = static_cast<double>(exceed) / static_cast<double>(replications);
        const BoundValue bound =
            betti_exp_bound(betti_bound_params_cube(n, p, query.q, params.a, query.s,
                                                    params.f_star, params.gamma_inf,
                                                    Metric::euclidean, t));
        row.bound = bound.value;
        row.trivial = bound.trivial;
        row.violated = !bound.trivial && row.empirical_tail > bound.value;
        if (row.trivial) ++report.vacuous_count;
        if (row.violated) ++report.violation_count;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace ph
