#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ph/coupling.hpp"
#include "ph/persistence.hpp"
#include "ph/samplers.hpp"

namespace ph {

struct Rectangle {
    int q = 0;
    double r = 0.0;
    double s = 0.0;
};

struct RectangleGrid {
    std::vector<Rectangle> rects;

    void validate() const; // r <= s, q >= 0
};

// Complex parameters in rescaled units: the raw complex on X_n is built with
// radius cap max_radius / eta(n) and then rescaled by eta(n).
struct ComplexSpec {
    ComplexKind kind = ComplexKind::rips;
    size_t max_dim = 2;
    double max_radius = 1.5;
};

struct EstimateOptions {
    size_t workers = 1;
    size_t max_simplices = 5'000'000;
    std::optional<ScalingRegime> regime; // default: critical for the ambient dim
};

struct LimitEstimate {
    Rectangle rect;
    std::vector<size_t> n_grid;
    std::vector<double> mean; // mean over replications of n^{-1} beta
    std::vector<double> se;   // standard error of the mean
    size_t replications = 0;
    uint64_t seed = 0;
};

// Raw per-replication values for re-analysis: values[n_index][rect][rep].
struct ReplicationTable {
    std::vector<size_t> n_grid;
    std::vector<std::vector<std::vector<double>>> values;
};

// For each n: R independent samples, complex on eta(n)-rescaled cloud,
// n^{-1} beta_q^{r,s} per rectangle; means and standard errors across
// replications. Budget violations raise budget_error naming (n, replication).
std::vector<LimitEstimate> estimate_limit(const ProcessSpec& process, const RectangleGrid& grid,
                                          std::span<const size_t> n_grid, size_t replications,
                                          const ComplexSpec& complex, uint64_t seed,
                                          const EstimateOptions& options = {},
                                          ReplicationTable* raw = nullptr);

enum class AgreementStatus { pass, flag, fail };

struct AgreementRow {
    Rectangle rect;
    double mean_a = 0.0, se_a = 0.0;
    double mean_b = 0.0, se_b = 0.0;
    double z = 0.0; // |mean_a - mean_b| / pooled se
    AgreementStatus status = AgreementStatus::pass;
};

// Two-sample agreement at the largest n: pass |z| <= 3, flag 3 < |z| < 4,
// fail otherwise.
std::vector<AgreementRow> compare_estimates(const std::vector<LimitEstimate>& a,
                                            const std::vector<LimitEstimate>& b);

struct SllnTrajectory {
    Rectangle rect;
    std::vector<size_t> n_grid;
    std::vector<double> values; // n^{-1} beta along prefixes of one path
    double diagnostic = 0.0;    // max pairwise deviation over the last 3 points
};

SllnTrajectory slln_check(const ProcessSpec& process, const Rectangle& query,
                          std::span<const size_t> n_grid, const ComplexSpec& complex,
                          uint64_t seed, const EstimateOptions& options = {});

struct VagueRow {
    Rectangle rect;
    std::vector<size_t> n_grid;
    std::vector<double> mean, se;
    bool cauchy_within_3se = false; // top two n estimates agree within 3 pooled SE
};

std::vector<VagueRow> vague_convergence_check(const ProcessSpec& process,
                                              const RectangleGrid& grid,
                                              std::span<const size_t> n_grid, size_t replications,
                                              const ComplexSpec& complex, uint64_t seed,
                                              const EstimateOptions& options = {});

struct GeometricLemmaReport {
    size_t trials = 0;
    size_t violations = 0;
    long max_lhs = 0;
};

// Random nested pairs X subset Y (uniform clouds, n <= n_max), random
// queries with q in {0,1}, both complex kinds; counts Lemma violations
// (the report must come back with zero).
GeometricLemmaReport geometric_lemma_suite(size_t n_max, size_t trials, uint64_t seed,
                                           size_t p = 2);

struct ConcentrationRow {
    double t = 0.0;
    double threshold = 0.0; // n^a t
    double empirical_tail = 0.0;
    double bound = 0.0;
    bool trivial = false;
    bool violated = false;
};

struct ConcentrationReport {
    std::vector<ConcentrationRow> rows;
    double sd_small_n = 0.0;
    double sd_large_n = 0.0;
    double sd_decay_ratio = 0.0; // sd(2n)/sd(n) of n^{-1} beta, diagnostic only
    size_t vacuous_count = 0;
    size_t violation_count = 0;
};

struct ConcentrationParams {
    double a = 0.9;
    double f_star = 1.0;
    double gamma_inf = 1.0;
    std::vector<double> t_grid;
};

ConcentrationReport concentration_suite(const ProcessSpec& process, const Rectangle& query,
                                        size_t n, size_t replications, uint64_t seed,
                                        const ComplexSpec& complex,
                                        const ConcentrationParams& params,
                                        const EstimateOptions& options = {});

} // namespace ph
