#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ph/geometry.hpp"
#include "ph/rng.hpp"

namespace ph {

struct Box {
    std::vector<double> lo, hi;

    double volume() const;
    bool contains(std::span<const double> x) const;
};

// Piecewise-constant density kappa = sum_i alpha_i 1{A_i} over a box
// partition of [0,1]^p with sum_i alpha_i |A_i| = 1.
struct BlockedDensity {
    std::vector<Box> blocks;
    std::vector<double> weights; // alpha_i > 0
    size_t dim = 1;

    size_t block_count() const { return blocks.size(); }
    std::vector<double> block_masses() const; // alpha_i |A_i|
    double density_at(std::span<const double> x) const;
    size_t block_of(std::span<const double> x) const;

    // Partition + normalization invariants (1e-9). Throws config_error.
    void validate() const;

    // Regular m^p grid with given weights (row-major over the grid).
    static BlockedDensity regular_grid(size_t p, size_t m, std::vector<double> weights);
};

// Finite-state hidden chain driving the block choice. `initial` is the
// stationary distribution and must equal the block masses alpha_i |A_i|.
struct HiddenChainSpec {
    size_t states = 0;
    std::vector<double> transition; // row-major states x states
    std::vector<double> initial;

    double p(size_t from, size_t to) const { return transition[from * states + to]; }

    void validate() const; // row sums, stationarity of initial (1e-9)

    // Chain tied to a blocked density: initial = block masses.
    static HiddenChainSpec for_density(const BlockedDensity& density,
                                       std::vector<double> transition);

    // Lazy mixture theta*I + (1-theta)*Pi with all Pi rows = stationary.
    // Pair total variation after k steps is exactly theta^k.
    static HiddenChainSpec lazy_mixture(const std::vector<double>& stationary, double theta);
};

// Markov chain of order m on [0,1]^p given by the joint density g of
// (X_1, ..., X_{m+1}), continuous and strictly positive.
struct DensityChainSpec {
    size_t order = 1;  // m
    size_t dim = 1;    // p
    std::function<double(std::span<const double>)> joint; // on [0,1]^{(m+1)p}
    double g_min = 1.0;
    double g_max = 1.0;
    size_t burn_in = 0; // 0: default 10 * m * ceil(g_max / g_min)

    size_t effective_burn_in() const;
    void validate() const;
};

// Stationary 2-d lattice random field with blocked conditional densities.
// Sites are visited in the >_d order; the corner uses kappa, axis sites the
// one-predecessor transitions, interior sites the two-predecessor table.
struct LatticeFieldSpec {
    BlockedDensity density;
    std::vector<double> t_axis1;    // K x K, conditional on the axis-1 predecessor
    std::vector<double> t_axis2;    // K x K, conditional on the axis-2 predecessor
    std::vector<double> t_interior; // K x K x K, [pred1][pred2] -> distribution
    std::array<size_t, 2> extent{1, 1};
    double min_extent_ratio = 0.5; // lower bound on min N_i / max N_i

    void validate() const;

    // Interior law lambda * t_axis1[pred1] + (1-lambda) * t_axis2[pred2];
    // with the axis chains stationary this keeps the whole field stationary.
    static LatticeFieldSpec mixture(BlockedDensity density, std::vector<double> t_axis1,
                                    std::vector<double> t_axis2, double lambda,
                                    std::array<size_t, 2> extent, double min_extent_ratio = 0.5);
};

struct Sample {
    PointCloud cloud;
    std::vector<uint32_t> hidden_path; // block indices, empty if not applicable
    uint64_t seed = 0;
    std::string process_tag;
};

// n i.i.d. draws; uniform when density is absent, otherwise block choice by
// mass then uniform within the block.
Sample sample_binomial(size_t n, const std::optional<BlockedDensity>& density, size_t dim,
                       uint64_t seed);

// Hidden path of the stationary chain alone. Consumes only the hidden
// stream of `seed`, so it matches the path inside sample_blocked_chain.
std::vector<uint32_t> sample_hidden_path(const HiddenChainSpec& hidden, size_t n, uint64_t seed);

// coord_salt perturbs only the within-block coordinate stream; the hidden
// path is unchanged. Exposed for the structural invariance test.
Sample sample_blocked_chain(size_t n, const BlockedDensity& density,
                            const HiddenChainSpec& hidden, uint64_t seed,
                            uint64_t coord_salt = 0);

// Rejection sampler: proposals uniform on [0,1]^p accepted with probability
// g(window, proposal) / g_max. Throws on pathological acceptance rates.
Sample sample_density_chain(size_t n, const DensityChainSpec& spec, uint64_t seed);

// X_t = (Z_t, Z_{t-lag_1}, ..., Z_{t-lag_{m-1}}); lags strictly increasing.
PointCloud delay_embed(std::span<const double> series, std::span<const size_t> lags);

Sample sample_lattice_field(const LatticeFieldSpec& spec, uint64_t seed,
                            uint64_t coord_salt = 0);

// Total order >_d on lattice points: lexicographic on the reversed vector
// of l1 prefix sums (S_d, S_{d-1}, ..., S_1).
std::strong_ordering total_order_2d(std::span<const uint64_t> u, std::span<const uint64_t> v);

// Sites of {1..N1} x {1..N2} in ascending >_d order.
std::vector<std::array<uint64_t, 2>> lattice_sites_ordered(std::array<size_t, 2> extent);

// Numerical marginal density of X_t for a density chain (marginalizes all
// but the last coordinate block of g on a regular grid).
double density_chain_marginal(const DensityChainSpec& spec, std::span<const double> x,
                              size_t grid  = 48);

// Blocked kappa_eps on a regular m-grid: cell averages of the chain's
// marginal, masses renormalized to 1. The approximation error is the
// oscillation of kappa within grid cells.
BlockedDensity blocked_marginal_approximation(const DensityChainSpec& spec, size_t grid_m,
                                              size_t quad_per_cell = 8);

// --- declarative process description ---------------------------------------

struct BinomialProcess {
    size_t dim = 1;
    std::optional<BlockedDensity> density;
};

struct BlockedChainProcess {
    BlockedDensity density;
    HiddenChainSpec hidden;
};

struct DensityChainProcess {
    DensityChainSpec spec;
};

struct LatticeFieldProcess {
    LatticeFieldSpec spec;
};

struct DelayEmbeddingProcess {
    BlockedDensity density; // 1-d marginal of the underlying series
    HiddenChainSpec hidden;
    std::vector<size_t> lags;
};

struct ProcessSpec {
    std::variant<BinomialProcess, BlockedChainProcess, DensityChainProcess, LatticeFieldProcess,
                 DelayEmbeddingProcess>
        process;
    std::string tag;

    size_t ambient_dim() const;
    // Lattice fields require n to be a perfect square (extent n^(1/2) x n^(1/2)).
    Sample draw(size_t n, uint64_t seed) const;

    // The i.i.d. process with the same marginal density, where defined.
    ProcessSpec matched_binomial() const;
};

} // namespace ph
