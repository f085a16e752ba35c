#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ph/samplers.hpp"

namespace ph {

// Upper-triangular mixing matrix of a Marton coupling, unit diagonal.
// gamma_inf is the maximum row sum sup_i sum_j Gamma_{i,j}.
struct MixingMatrix {
    size_t n = 0;
    std::vector<double> upper; // row i holds entries (i, i..n-1), packed
    double gamma_inf = 0.0;

    double at(size_t i, size_t j) const {
        if (j < i) return 0.0;
        return upper[i * n - i * (i + 1) / 2 + j];
    }
};

// Gamma_{i,j} = max over state pairs of d_TV(L(Z_j | Z_i = z), L(Z_j | Z_i = z')),
// exact via powers of the transition matrix (Goldstein coupling bound; the
// max over all state pairs upper-bounds the essential supremum).
MixingMatrix exact_mixing_matrix(const HiddenChainSpec& hidden, size_t n);

// Mixing matrix of the delay-embedded process X_t = (Z_t, Z_{t-lag_1}, ...).
// Entry (i,j) = pair TV at lag max(1, j - i - tau_max): within the window
// the Goldstein block coupling cannot do better than the one-step TV.
MixingMatrix delay_embedded_mixing_matrix(const HiddenChainSpec& hidden, size_t n,
                                          size_t tau_max);

// Worst-case pair total variation after k steps, d_bar(k).
double pair_tv_at_lag(const HiddenChainSpec& hidden, size_t lag);

// Smallest t with max_z d_TV(row z of P^t, stationary) <= 1/4. Throws if the
// chain is not irreducible+aperiodic (some power strictly positive).
int mixing_time(const HiddenChainSpec& hidden);

// gamma_inf <= tau_max + 2 t_mix for delay embeddings.
double gamma_inf_bound_delay(size_t tau_max, int t_mix);

// Order-m finite chain collapsed to order 1 by state augmentation.
// `conditional` has K^m rows (tuple index, oldest state most significant)
// and K columns. Capped at K^m <= 4096 states.
HiddenChainSpec augment_order_m(size_t k, size_t m, const std::vector<double>& conditional);

struct BoundValue {
    double value = 0.0;
    bool trivial = false; // >= 1, carries no information
};

// Inputs of the exponential inequalities. covering_log and ball_sup are the
// already-scaled quantities log N(eta_n^{-1} r) and
// n * sup_w mu(B(w, 2 eta_n^{-1} r)); helpers below fill them for the cube.
struct BoundParams {
    size_t n = 0;
    double t = 0.0;
    double a = 0.6;      // requires a > 1/2
    double q = 0.0;      // universal-bound exponent
    double q_tilde = 1.0; // exchange-one-cost exponent
    double c1 = 1.0;
    double c2 = 1.0;
    double f_star = 1.0;
    double gamma_inf = 1.0;
    double covering_log = 0.0;
    double ball_sup = 0.0;
};

// Two-term right-hand side of the abstract exponential inequality with
// gamma = (2a-1)/(2 q_tilde + 1). Returned uncapped; trivial flag when >= 1.
BoundValue abstract_exp_bound(const BoundParams& params);

struct BettiBoundParams {
    size_t n = 0;
    double t = 0.0;
    double a = 0.6;
    int q = 0;           // homology degree
    double s = 0.0;      // filtration parameter (r = 2s wired internally)
    double f_star = 1.0;
    double gamma_inf = 1.0;
    double covering_log = 0.0; // log N(2 eta_n^{-1} s)
    double ball_sup = 0.0;     // n * sup_w mu(B(w, 4 eta_n^{-1} s))
};

// Persistent-Betti exponential inequality: the abstract bound with c1 = 1,
// c2 = 2, q_tilde = q+1 and gamma = (2a-1)/(2q+3).
BoundValue betti_exp_bound(const BettiBoundParams& params);

// Cube defaults for the Betti bound in the critical regime eta_n = n^{1/p}.
BettiBoundParams betti_bound_params_cube(size_t n, size_t p, int q, double a, double s,
                                         double f_star, double gamma_inf, Metric metric,
                                         double t);

// P(sum 1{Z_i in B_n} > t) <= exp(-t + (e-1) f* n mu(B_n)).
BoundValue kernel_concentration_bound(size_t n, double t, double f_star, double mu_ball);

// E[K_j(eta_n X_n, r; A)] <= (f*)^2 n^{j+1} mu(eta_n^{-1} A)
//                            sup_x mu(B(x, 2 eta_n^{-1} r))^j,
// critical regime eta_n = n^{1/p}; region_measure = mu(eta_n^{-1} A).
double simplex_count_bound(size_t n, size_t j, double r, size_t p, double f_star,
                           double region_measure, Metric metric = Metric::euclidean);

// McDiarmid for Marton couplings, partition size 1:
// P(|phi - E phi| >= t) <= 2 exp(-2 t^2 / ||Gamma c||^2).
BoundValue mcdiarmid_bound(const MixingMatrix& gamma, std::span<const double> c, double t);

// Influence-propagation upper bound on the spatial mixing coefficients of a
// blocked lattice field: decay[k] bounds max over v at Chebyshev distance k
// of Gamma^(inf)_{u,v} within the window. Used to check the polynomial
// decay condition sum_k k^delta decay[k] < inf empirically.
std::vector<double> lattice_influence_decay(const LatticeFieldSpec& spec, size_t window);

double weighted_decay_sum(std::span<const double> decay, double delta);

} // namespace ph
