#include "ph/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "ph/errors.hpp"

namespace ph {

namespace {

std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b,
                            size_t k) {
    std::vector<double> out(k * k, 0.0);
    for (size_t i = 0; i < k; ++i)
        for (size_t l = 0; l < k; ++l) {
            const double v = a[i * k + l];
            if (v == 0.0) continue;
            for (size_t j = 0; j < k; ++j) out[i * k + j] += v * b[l * k + j];
        }
    return out;
}

double max_pair_tv(const std::vector<double>& rows, size_t k) {
    double worst = 0.0;
    for (size_t z = 0; z < k; ++z)
        for (size_t w = z + 1; w < k; ++w) {
            double tv = 0.0;
            for (size_t j = 0; j < k; ++j) tv += std::fabs(rows[z * k + j] - rows[w * k + j]);
            worst = std::max(worst, 0.5 * tv);
        }
    return worst;
}

} // namespace

double pair_tv_at_lag(const HiddenChainSpec& hidden, size_t lag) {
    const size_t k = hidden.states;
    if (lag == 0) return 1.0;
    std::vector<double> power = hidden.transition;
    for (size_t step = 1; step < lag; ++step) power = mat_mul(power, hidden.transition, k);
    return std::min(1.0, max_pair_tv(power, k));
}

namespace {

MixingMatrix matrix_from_lag_profile(size_t n, const std::vector<double>& tv_by_lag) {
    MixingMatrix m;
    m.n = n;
    m.upper.assign(n * (n + 1) / 2, 0.0);
    double worst_row = 0.0;
    size_t pos = 0;
    for (size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (size_t j = i; j < n; ++j) {
            const double v = j == i ? 1.0 : tv_by_lag[j - i];
            m.upper[pos++] = v;
            row_sum += v;
        }
        worst_row = std::max(worst_row, row_sum);
    }
    m.gamma_inf = worst_row;
    return m;
}

} // namespace

MixingMatrix exact_mixing_matrix(const HiddenChainSpec& hidden, size_t n) {
    if (n == 0) throw std::invalid_argument("exact_mixing_matrix: n must be >= 1");
    hidden.validate();
    const size_t k = hidden.states;
    std::vector<double> tv_by_lag(n, 1.0);
    std::vector<double> power = hidden.transition;
    for (size_t lag = 1; lag < n; ++lag) {
        if (lag > 1) power = mat_mul(power, hidden.transition, k);
        tv_by_lag[lag] = std::min(1.0, max_pair_tv(power, k));
    }
    return matrix_from_lag_profile(n, tv_by_lag);
}

MixingMatrix delay_embedded_mixing_matrix(const HiddenChainSpec& hidden, size_t n,
                                          size_t tau_max) {
    if (n == 0) throw std::invalid_argument("delay_embedded_mixing_matrix: n must be >= 1");
    hidden.validate();
    const size_t k = hidden.states;
    // Lag ell within the embedding window is controlled by the one-step TV;
    // beyond the window by the TV at lag ell - tau_max.
    std::vector<double> tv_by_lag(n, 1.0);
    std::vector<double> power = hidden.transition;
    std::vector<double> tv_chain(n, 1.0);
    for (size_t lag = 1; lag < n; ++lag) {
        if (lag > 1) power = mat_mul(power, hidden.transition, k);
        tv_chain[lag] = std::min(1.0, max_pair_tv(power, k));
    }
    for (size_t lag = 1; lag < n; ++lag)
        tv_by_lag[lag] = tv_chain[lag <= tau_max ? 1 : lag - tau_max];
    return matrix_from_lag_profile(n, tv_by_lag);
}

int mixing_time(const HiddenChainSpec& hidden) {
    hidden.validate();
    const size_t k = hidden.states;
    // Irreducible + aperiodic iff some power is strictly positive; the power
    // (k-1)^2 + 1 suffices for primitive matrices.
    {
        std::vector<double> power = hidden.transition;
        const size_t cap = (k - 1) * (k - 1) + 1;
        bool positive = false;
        for (size_t step = 1; step <= cap && !positive; ++step) {
            positive = true;
            for (double v : power)
                if (v <= 0.0) {
                    positive = false;
                    break;
                }
            if (!positive) power = mat_mul(power, hidden.transition, k);
        }
        if (!positive)
            throw std::invalid_argument("mixing_time: chain is not irreducible aperiodic");
    }
    std::vector<double> power = hidden.transition;
    for (int t = 1;; ++t) {
        double worst = 0.0;
        for (size_t z = 0; z < k; ++z) {
            double tv = 0.0;
            for (size_t j = 0; j < k; ++j)
                tv += std::fabs(power[z * k + j] - hidden.initial[j]);
            worst = std::max(worst, 0.5 * tv);
        }
        if (worst <= 0.25) return t;
        if (t > 1000000)
            throw std::runtime_error("mixing_time: no convergence after 1e6 steps");
        power = mat_mul(power, hidden.transition, k);
    }
}

double gamma_inf_bound_delay(size_t tau_max, int t_mix) {
    if (t_mix < 1) throw std::invalid_argument("gamma_inf_bound_delay: t_mix must be >= 1");
    return static_cast<double>(tau_max) + 2.0 * static_cast<double>(t_mix);
}

HiddenChainSpec augment_order_m(size_t k, size_t m, const std::vector<double>& conditional) {
    if (k < 1 || m < 1) throw std::invalid_argument("augment_order_m: k, m must be >= 1");
    size_t states = 1;
    for (size_t i = 0; i < m; ++i) {
        states *= k;
        if (states > 4096)
            throw std::invalid_argument("augment_order_m: K^m exceeds the 4096-state cap");
    }
    if (conditional.size() != states * k)
        throw std::invalid_argument("augment_order_m: conditional must be K^m x K");

    HiddenChainSpec spec;
    spec.states = states;
    spec.transition.assign(states * states, 0.0);
    const size_t tail = states / k; // K^{m-1}
    for (size_t tuple = 0; tuple < states; ++tuple)
        for (size_t z = 0; z < k; ++z)
            spec.transition[tuple * states + (tuple % tail) * k + z] =
                conditional[tuple * k + z];

    // Stationary law by power iteration.
    std::vector<double> pi(states, 1.0 / static_cast<double>(states));
    for (size_t iter = 0; iter < 200000; ++iter) {
        std::vector<double> next(states, 0.0);
        for (size_t i = 0; i < states; ++i) {
            if (pi[i] == 0.0) continue;
            for (size_t j = 0; j < states; ++j) next[j] += pi[i] * spec.transition[i * states + j];
        }
        double delta = 0.0, mass = 0.0;
        for (size_t j = 0; j < states; ++j) {
            delta += std::fabs(next[j] - pi[j]);
            mass += next[j];
        }
        for (double& v : next) v /= mass;
        pi = std::move(next);
        if (delta < 1e-14) break;
    }
    spec.initial = std::move(pi);
    spec.validate();
    return spec;
}

BoundValue abstract_exp_bound(const BoundParams& params) {
    if (!(params.a > 0.5)) throw std::invalid_argument("abstract_exp_bound: requires a > 1/2");
    if (!(params.t > 0.0)) throw std::invalid_argument("abstract_exp_bound: requires t > 0");
    const double n = static_cast<double>(params.n);
    const double gamma = (2.0 * params.a - 1.0) / (2.0 * params.q_tilde + 1.0);
    const double n_gamma = std::pow(n, gamma);
    const double e = std::exp(1.0);

    const double denom1 =
        std::pow(4.0, params.q_tilde) * 2.0 * std::pow(16.0 * params.c2 * params.gamma_inf, 2.0);
    const double term1 = 2.0 * std::exp(-n_gamma * params.t * params.t / denom1);

    const double prefactor = 2.0 * params.c1 * e *
                             std::pow(n, 2.0 * params.q + 1.0 - gamma * params.q_tilde - params.a) /
                             (params.c2 * std::pow(2.0, params.q_tilde) * params.gamma_inf);
    const double middle = std::pow(n, -(params.q - params.a)) + 2.0 * params.c1 / params.t;
    const double tail =
        std::exp(-(n_gamma - params.covering_log - params.f_star * (e - 1.0) * params.ball_sup));
    const double term2 = prefactor * middle * tail;

    BoundValue out;
    out.value = term1 + term2;
    out.trivial = !(out.value < 1.0);
    return out;
}

BoundValue betti_exp_bound(const BettiBoundParams& params) {
    // Persistent-Betti wiring: c1 = 1, c2 = 2, q_tilde = q + 1, r = 2s, so
    // gamma = (2a-1)/(2q+3) and the first denominator is
    // 2 (2^{q+1} 32 gamma_inf)^2.
    BoundParams abstract;
    abstract.n = params.n;
    abstract.t = params.t;
    abstract.a = params.a;
    abstract.q = static_cast<double>(params.q);
    abstract.q_tilde = static_cast<double>(params.q) + 1.0;
    abstract.c1 = 1.0;
    abstract.c2 = 2.0;
    abstract.f_star = params.f_star;
    abstract.gamma_inf = params.gamma_inf;
    abstract.covering_log = params.covering_log;
    abstract.ball_sup = params.ball_sup;
    return abstract_exp_bound(abstract);
}

BettiBoundParams betti_bound_params_cube(size_t n, size_t p, int q, double a, double s,
                                         double f_star, double gamma_inf, Metric metric,
                                         double t) {
    BettiBoundParams params;
    params.n = n;
    params.t = t;
    params.a = a;
    params.q = q;
    params.s = s;
    params.f_star = f_star;
    params.gamma_inf = gamma_inf;
    const double eta = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(p));
    params.covering_log = covering_log_cube(p, 2.0 * s / eta, metric);
    params.ball_sup = static_cast<double>(n) * sup_ball_volume(p, 4.0 * s / eta, metric);
    return params;
}

BoundValue kernel_concentration_bound(size_t n, double t, double f_star, double mu_ball) {
    if (t < 0.0) throw std::invalid_argument("kernel_concentration_bound: t must be >= 0");
    BoundValue out;
    out.value = std::exp(-t + (std::exp(1.0) - 1.0) * f_star * static_cast<double>(n) * mu_ball);
    out.trivial = !(out.value < 1.0);
    return out;
}

double simplex_count_bound(size_t n, size_t j, double r, size_t p, double f_star,
                           double region_measure, Metric metric) {
    const double eta = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(p));
    const double ball = sup_ball_volume(p, 2.0 * r / eta, metric);
    return f_star * f_star * std::pow(static_cast<double>(n), static_cast<double>(j) + 1.0) *
           region_measure * std::pow(ball, static_cast<double>(j));
}

BoundValue mcdiarmid_bound(const MixingMatrix& gamma, std::span<const double> c, double t) {
    if (c.size() != gamma.n) throw std::invalid_argument("mcdiarmid_bound: length mismatch");
    for (double v : c)
        if (v < 0.0) throw std::invalid_argument("mcdiarmid_bound: c must be nonnegative");
    double norm2 = 0.0;
    for (size_t i = 0; i < gamma.n; ++i) {
        double row = 0.0;
        for (size_t j = i; j < gamma.n; ++j) row += gamma.at(i, j) * c[j];
        norm2 += row * row;
    }
    BoundValue out;
    out.value = 2.0 * std::exp(-2.0 * t * t / norm2);
    out.trivial = !(out.value < 1.0);
    return out;
}

std::vector<double> lattice_influence_decay(const LatticeFieldSpec& spec, size_t window) {
    spec.validate();
    const size_t k = spec.density.block_count();

    const double d1 = max_pair_tv(spec.t_axis1, k);
    const double d2 = max_pair_tv(spec.t_axis2, k);
    // Sensitivity of the interior law in each predecessor separately.
    double s1 = 0.0, s2 = 0.0;
    for (size_t fixed = 0; fixed < k; ++fixed) {
        std::vector<double> rows1(k * k), rows2(k * k);
        for (size_t var = 0; var < k; ++var)
            for (size_t j = 0; j < k; ++j) {
                rows1[var * k + j] = spec.t_interior[(var * k + fixed) * k + j];
                rows2[var * k + j] = spec.t_interior[(fixed * k + var) * k + j];
            }
        s1 = std::max(s1, max_pair_tv(rows1, k));
        s2 = std::max(s2, max_pair_tv(rows2, k));
    }

    // Influence of a disagreement at the corner propagated along the
    // factorization: I(v) <= coeff1 * I(v - e1) + coeff2 * I(v - e2).
    std::vector<double> influence(window * window, 0.0);
    influence[0] = 1.0;
    for (size_t i = 0; i < window; ++i)
        for (size_t j = 0; j < window; ++j) {
            if (i == 0 && j == 0) continue;
            double v = 0.0;
            if (j == 0)
                v = d1 * influence[(i - 1) * window];
            else if (i == 0)
                v = d2 * influence[j - 1];
            else
                v = s1 * influence[(i - 1) * window + j] + s2 * influence[i * window + (j - 1)];
            influence[i * window + j] = std::min(1.0, v);
        }

    std::vector<double> decay(window, 0.0);
    for (size_t i = 0; i < window; ++i)
        for (size_t j = 0; j < window; ++j)
            decay[std::max(i, j)] = std::max(decay[std::max(i, j)], influence[i * window + j]);
    return decay;
}

double weighted_decay_sum(std::span<const double> decay, double delta) {
    double sum = 0.0;
    for (size_t k = 1; k < decay.size(); ++k)
        sum += std::pow(static_cast<double>(k), delta) * decay[k];
    return sum;
}

} // namespace ph
