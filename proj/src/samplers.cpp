#include "ph/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ph/errors.hpp"

namespace ph {

double Box::volume() const {
    double v = 1.0;
    for (size_t d = 0; d < lo.size(); ++d) v *= hi[d] - lo[d];
    return v;
}

bool Box::contains(std::span<const double> x) const {
    for (size_t d = 0; d < lo.size(); ++d)
        if (x[d] < lo[d] || x[d] > hi[d]) return false;
    return true;
}

std::vector<double> BlockedDensity::block_masses() const {
    std::vector<double> masses(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) masses[i] = weights[i] * blocks[i].volume();
    return masses;
}

double BlockedDensity::density_at(std::span<const double> x) const {
    return weights[block_of(x)];
}

size_t BlockedDensity::block_of(std::span<const double> x) const {
    // Boundary points belong to the first matching block.
    for (size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].contains(x)) return i;
    throw std::invalid_argument("BlockedDensity: point outside every block");
}

void BlockedDensity::validate() const {
    if (blocks.empty()) throw config_error("blocks", "at least one block required");
    if (blocks.size() != weights.size())
        throw config_error("blocks", "weights/blocks length mismatch");
    double volume_sum = 0.0, mass_sum = 0.0;
    for (size_t i = 0; i < blocks.size(); ++i) {
        const Box& b = blocks[i];
        if (b.lo.size() != dim || b.hi.size() != dim)
            throw config_error("blocks", "box dimension != density dimension");
        for (size_t d = 0; d < dim; ++d) {
            if (!(b.lo[d] >= 0.0 && b.hi[d] <= 1.0 && b.lo[d] < b.hi[d]))
                throw config_error("blocks", "box " + std::to_string(i) +
                                                 " not a nondegenerate sub-box of [0,1]^p");
        }
        if (!(weights[i] > 0.0))
            throw config_error("blocks", "weight " + std::to_string(i) + " must be > 0");
        volume_sum += b.volume();
        mass_sum += weights[i] * b.volume();
    }
    if (std::fabs(volume_sum - 1.0) > 1e-9)
        throw config_error("blocks", "block volumes sum to " + std::to_string(volume_sum) +
                                         ", expected 1 (not a partition)");
    if (std::fabs(mass_sum - 1.0) > 1e-9)
        throw config_error("blocks", "sum alpha_i |A_i| = " + std::to_string(mass_sum) +
                                         ", expected 1 (not a density)");
    // Pairwise disjointness up to boundary: volumes summing to 1 plus
    // non-overlap of interiors; check interiors via midpoint containment.
    for (size_t i = 0; i < blocks.size(); ++i) {
        std::vector<double> mid(dim);
        for (size_t d = 0; d < dim; ++d) mid[d] = 0.5 * (blocks[i].lo[d] + blocks[i].hi[d]);
        for (size_t j = 0; j < blocks.size(); ++j)
            if (j != i && blocks[j].contains(mid))
                throw config_error("blocks", "blocks " + std::to_string(i) + " and " +
                                                 std::to_string(j) + " overlap");
    }
}

BlockedDensity BlockedDensity::regular_grid(size_t p, size_t m, std::vector<double> weights) {
    BlockedDensity density;
    density.dim = p;
    size_t count = 1;
    for (size_t d = 0; d < p; ++d) count *= m;
    if (weights.size() != count)
        throw config_error("blocks", "regular grid needs m^p weights");
    density.weights = std::move(weights);
    std::vector<size_t> idx(p, 0);
    for (size_t c = 0; c < count; ++c) {
        Box box;
        box.lo.resize(p);
        box.hi.resize(p);
        for (size_t d = 0; d < p; ++d) {
            box.lo[d] = static_cast<double>(idx[d]) / static_cast<double>(m);
            box.hi[d] = static_cast<double>(idx[d] + 1) / static_cast<double>(m);
        }
        density.blocks.push_back(std::move(box));
        for (size_t d = 0; d < p; ++d) {
            if (++idx[d] < m) break;
            idx[d] = 0;
        }
    }
    return density;
}

void HiddenChainSpec::validate() const {
    if (states == 0) throw config_error("hidden", "empty state space");
    if (transition.size() != states * states)
        throw config_error("hidden.transition", "expected a " + std::to_string(states) + "x" +
                                                    std::to_string(states) + " matrix");
    if (initial.size() != states)
        throw config_error("hidden.initial", "length mismatch");
    for (size_t i = 0; i < states; ++i) {
        double row = 0.0;
        for (size_t j = 0; j < states; ++j) {
            if (transition[i * states + j] < 0.0)
                throw config_error("hidden.transition", "negative entry");
            row += transition[i * states + j];
        }
        if (std::fabs(row - 1.0) > 1e-12)
            throw config_error("hidden.transition",
                               "row " + std::to_string(i) + " sums to " + std::to_string(row));
    }
    double mass = 0.0;
    for (size_t i = 0; i < states; ++i) {
        if (initial[i] < 0.0) throw config_error("hidden.initial", "negative entry");
        mass += initial[i];
    }
    if (std::fabs(mass - 1.0) > 1e-9)
        throw config_error("hidden.initial", "does not sum to 1");
    for (size_t j = 0; j < states; ++j) {
        double next = 0.0;
        for (size_t i = 0; i < states; ++i) next += initial[i] * transition[i * states + j];
        if (std::fabs(next - initial[j]) > 1e-9)
            throw config_error("hidden.initial", "not stationary for the transition matrix");
    }
}

HiddenChainSpec HiddenChainSpec::for_density(const BlockedDensity& density,
                                             std::vector<double> transition) {
    HiddenChainSpec spec;
    spec.states = density.block_count();
    spec.transition = std::move(transition);
    spec.initial = density.block_masses();
    spec.validate();
    return spec;
}

HiddenChainSpec HiddenChainSpec::lazy_mixture(const std::vector<double>& stationary,
                                              double theta) {
    if (!(theta >= 0.0 && theta < 1.0))
        throw config_error("hidden.theta", "need 0 <= theta < 1");
    HiddenChainSpec spec;
    spec.states = stationary.size();
    spec.initial = stationary;
    spec.transition.assign(spec.states * spec.states, 0.0);
    for (size_t i = 0; i < spec.states; ++i)
        for (size_t j = 0; j < spec.states; ++j)
            spec.transition[i * spec.states + j] =
                theta * (i == j ? 1.0 : 0.0) + (1.0 - theta) * stationary[j];
    spec.validate();
    return spec;
}

size_t DensityChainSpec::effective_burn_in() const {
    if (burn_in > 0) return burn_in;
    return 10 * order * static_cast<size_t>(std::ceil(g_max / g_min));
}

void DensityChainSpec::validate() const {
    if (order < 1) throw config_error("density_chain.order", "order must be >= 1");
    if (dim < 1) throw config_error("density_chain.dim", "dim must be >= 1");
    if (!joint) throw config_error("density_chain.joint", "missing density callable");
    if (!(g_min > 0.0) || !(g_max >= g_min) || !std::isfinite(g_max))
        throw config_error("density_chain.bounds", "need 0 < g_min <= g_max < inf");
}

void LatticeFieldSpec::validate() const {
    density.validate();
    const size_t k = density.block_count();
    auto check_rows = [&](const std::vector<double>& t, size_t rows, const char* name) {
        if (t.size() != rows * k)
            throw config_error(name, "wrong table size");
        for (size_t r = 0; r < rows; ++r) {
            double sum = 0.0;
            for (size_t j = 0; j < k; ++j) {
                if (t[r * k + j] < 0.0) throw config_error(name, "negative entry");
                sum += t[r * k + j];
            }
            if (std::fabs(sum - 1.0) > 1e-12)
                throw config_error(name, "row " + std::to_string(r) + " sums to " +
                                             std::to_string(sum));
        }
    };
    check_rows(t_axis1, k, "lattice.t_axis1");
    check_rows(t_axis2, k, "lattice.t_axis2");
    check_rows(t_interior, k * k, "lattice.t_interior");
    const std::vector<double> pi = density.block_masses();
    for (const auto* t : {&t_axis1, &t_axis2}) {
        for (size_t j = 0; j < k; ++j) {
            double next = 0.0;
            for (size_t i = 0; i < k; ++i) next += pi[i] * (*t)[i * k + j];
            if (std::fabs(next - pi[j]) > 1e-9)
                throw config_error("lattice", "axis transition does not preserve block masses");
        }
    }
    const double lo = static_cast<double>(std::min(extent[0], extent[1]));
    const double hi = static_cast<double>(std::max(extent[0], extent[1]));
    if (extent[0] == 0 || extent[1] == 0)
        throw config_error("lattice.extent", "extent entries must be >= 1");
    if (lo / hi < min_extent_ratio)
        throw config_error("lattice.extent", "min N_i / max N_i below configured ratio");
}

LatticeFieldSpec LatticeFieldSpec::mixture(BlockedDensity density, std::vector<double> t_axis1,
                                           std::vector<double> t_axis2, double lambda,
                                           std::array<size_t, 2> extent,
                                           double min_extent_ratio) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw config_error("lattice.lambda", "need lambda in [0,1]");
    const size_t k = density.block_count();
    LatticeFieldSpec spec;
    spec.density = std::move(density);
    spec.t_axis1 = std::move(t_axis1);
    spec.t_axis2 = std::move(t_axis2);
    spec.t_interior.assign(k * k * k, 0.0);
    for (size_t a = 0; a < k; ++a)
        for (size_t b = 0; b < k; ++b)
            for (size_t j = 0; j < k; ++j)
                spec.t_interior[(a * k + b) * k + j] =
                    lambda * spec.t_axis1[a * k + j] + (1.0 - lambda) * spec.t_axis2[b * k + j];
    spec.extent = extent;
    spec.min_extent_ratio = min_extent_ratio;
    spec.validate();
    return spec;
}

namespace {

void uniform_in_box(const Box& box, RngStream& rng, std::vector<double>& out) {
    out.resize(box.lo.size());
    for (size_t d = 0; d < box.lo.size(); ++d)
        out[d] = rng.next_uniform(box.lo[d], box.hi[d]);
}

size_t discrete_from_row(std::span<const double> row, RngStream& rng) {
    double u = rng.next_unit();
    for (size_t j = 0; j + 1 < row.size(); ++j) {
        u -= row[j];
        if (u < 0.0) return j;
    }
    return row.size() - 1;
}

} // namespace

Sample sample_binomial(size_t n, const std::optional<BlockedDensity>& density, size_t dim,
                       uint64_t seed) {
    if (density) density->validate();
    const size_t p = density ? density->dim : dim;
    Sample sample;
    sample.seed = seed;
    sample.process_tag = "binomial";
    sample.cloud.dim = p;
    sample.cloud.coords.reserve(n * p);
    RngStream hidden = make_stream(seed, kStreamHidden);
    RngStream coord = make_stream(seed, kStreamCoord);
    std::vector<double> masses = density ? density->block_masses() : std::vector<double>{};
    std::vector<double> x(p);
    for (size_t t = 0; t < n; ++t) {
        if (density) {
            const size_t block = discrete_from_row(masses, hidden);
            sample.hidden_path.push_back(static_cast<uint32_t>(block));
            uniform_in_box(density->blocks[block], coord, x);
        } else {
            for (size_t d = 0; d < p; ++d) x[d] = coord.next_unit();
        }
        sample.cloud.push_back(x);
    }
    return sample;
}

std::vector<uint32_t> sample_hidden_path(const HiddenChainSpec& hidden, size_t n,
                                         uint64_t seed) {
    RngStream stream = make_stream(seed, kStreamHidden);
    std::vector<uint32_t> path;
    path.reserve(n);
    size_t state = 0;
    for (size_t t = 0; t < n; ++t) {
        if (t == 0)
            state = discrete_from_row(hidden.initial, stream);
        else
            state = discrete_from_row(
                std::span<const double>(hidden.transition.data() + state * hidden.states,
                                        hidden.states),
                stream);
        path.push_back(static_cast<uint32_t>(state));
    }
    return path;
}

Sample sample_blocked_chain(size_t n, const BlockedDensity& density,
                            const HiddenChainSpec& hidden, uint64_t seed, uint64_t coord_salt) {
    density.validate();
    hidden.validate();
    if (hidden.states != density.block_count())
        throw config_error("hidden", "state count != number of blocks");
    const std::vector<double> masses = density.block_masses();
    for (size_t i = 0; i < hidden.states; ++i)
        if (std::fabs(hidden.initial[i] - masses[i]) > 1e-9)
            throw config_error("hidden.initial", "initial law != block masses alpha_i |A_i|");

    Sample sample;
    sample.seed = seed;
    sample.process_tag = "blocked_chain";
    sample.cloud.dim = density.dim;
    sample.cloud.coords.reserve(n * density.dim);
    sample.hidden_path = sample_hidden_path(hidden, n, seed);
    RngStream coord = make_stream(seed, kStreamCoord, coord_salt);
    std::vector<double> x(density.dim);
    for (size_t t = 0; t < n; ++t) {
        uniform_in_box(density.blocks[sample.hidden_path[t]], coord, x);
        sample.cloud.push_back(x);
    }
    return sample;
}

Sample sample_density_chain(size_t n, const DensityChainSpec& spec, uint64_t seed) {
    spec.validate();
    const size_t m = spec.order, p = spec.dim;
    Sample sample;
    sample.seed = seed;
    sample.process_tag = "density_chain";
    sample.cloud.dim = p;
    sample.cloud.coords.reserve(n * p);

    RngStream proposal = make_stream(seed, kStreamProposal);
    RngStream accept = make_stream(seed, kStreamHidden);

    std::vector<double> window(m * p); // most recent m observations, oldest first
    for (double& w : window) w = proposal.next_unit();

    std::vector<double> args((m + 1) * p);
    size_t accepts = 0, proposals = 0;
    auto draw_next = [&]() {
        std::copy(window.begin(), window.end(), args.begin());
        for (size_t attempt = 0;; ++attempt) {
            if (attempt >= 100000)
                throw std::runtime_error(
                    "density chain rejection envelope too loose: acceptance rate " +
                    std::to_string(static_cast<double>(accepts) /
                                   static_cast<double>(std::max<size_t>(proposals, 1))) +
                    " with g_max " + std::to_string(spec.g_max));
            ++proposals;
            for (size_t d = 0; d < p; ++d) args[m * p + d] = proposal.next_unit();
            const double g = spec.joint(args);
            if (accept.next_unit() * spec.g_max <= g) {
                ++accepts;
                break;
            }
        }
        std::copy(window.begin() + static_cast<long>(p), window.end(), window.begin());
        std::copy(args.begin() + static_cast<long>(m * p), args.end(),
                  window.end() - static_cast<long>(p));
    };

    const size_t burn = spec.effective_burn_in();
    for (size_t t = 0; t < burn; ++t) draw_next();
    for (size_t t = 0; t < n; ++t) {
        draw_next();
        sample.cloud.coords.insert(sample.cloud.coords.end(), window.end() - static_cast<long>(p),
                                   window.end());
    }
    return sample;
}

PointCloud delay_embed(std::span<const double> series, std::span<const size_t> lags) {
    for (size_t k = 1; k < lags.size(); ++k)
        if (lags[k] <= lags[k - 1])
            throw std::invalid_argument("delay_embed: lags must be strictly increasing");
    const size_t tau_max = lags.empty() ? 0 : lags.back();
    if (series.size() <= tau_max)
        throw std::invalid_argument("delay_embed: series shorter than largest lag");
    const size_t m = lags.size() + 1;
    PointCloud cloud;
    cloud.dim = m;
    cloud.coords.reserve((series.size() - tau_max) * m);
    for (size_t t = tau_max; t < series.size(); ++t) {
        cloud.coords.push_back(series[t]);
        for (size_t k = 0; k < lags.size(); ++k) cloud.coords.push_back(series[t - lags[k]]);
    }
    return cloud;
}

std::strong_ordering total_order_2d(std::span<const uint64_t> u, std::span<const uint64_t> v) {
    if (u.size() != v.size()) throw std::invalid_argument("total_order_2d: dimension mismatch");
    // Compare l1 prefix sums from the last index downward.
    uint64_t su = 0, sv = 0;
    std::vector<uint64_t> pu(u.size()), pv(v.size());
    for (size_t k = 0; k < u.size(); ++k) {
        su += u[k];
        sv += v[k];
        pu[k] = su;
        pv[k] = sv;
    }
    for (size_t k = u.size(); k-- > 0;) {
        if (pu[k] != pv[k]) return pu[k] <=> pv[k];
    }
    return std::strong_ordering::equal;
}

std::vector<std::array<uint64_t, 2>> lattice_sites_ordered(std::array<size_t, 2> extent) {
    std::vector<std::array<uint64_t, 2>> sites;
    sites.reserve(extent[0] * extent[1]);
    for (uint64_t i = 1; i <= extent[0]; ++i)
        for (uint64_t j = 1; j <= extent[1]; ++j) sites.push_back({i, j});
    std::sort(sites.begin(), sites.end(), [](const auto& a, const auto& b) {
        return total_order_2d({a.data(), 2}, {b.data(), 2}) == std::strong_ordering::less;
    });
    return sites;
}

Sample sample_lattice_field(const LatticeFieldSpec& spec, uint64_t seed, uint64_t coord_salt) {
    spec.validate();
    const size_t k = spec.density.block_count();
    const auto sites = lattice_sites_ordered(spec.extent);
    const size_t n1 = spec.extent[0], n2 = spec.extent[1];

    Sample sample;
    sample.seed = seed;
    sample.process_tag = "lattice_field";
    sample.cloud.dim = spec.density.dim;
    sample.cloud.coords.reserve(sites.size() * spec.density.dim);
    sample.hidden_path.reserve(sites.size());

    RngStream hidden = make_stream(seed, kStreamHidden);
    RngStream coord = make_stream(seed, kStreamCoord, coord_salt);

    std::vector<uint32_t> block_at(n1 * n2, 0); // (i-1)*n2 + (j-1)
    const std::vector<double> masses = spec.density.block_masses();
    std::vector<double> x(spec.density.dim);
    for (const auto& site : sites) {
        const size_t i = site[0], j = site[1];
        size_t block;
        if (i == 1 && j == 1) {
            block = discrete_from_row(masses, hidden);
        } else if (j == 1) {
            const size_t pred = block_at[(i - 2) * n2];
            block = discrete_from_row({spec.t_axis1.data() + pred * k, k}, hidden);
        } else if (i == 1) {
            const size_t pred = block_at[j - 2];
            block = discrete_from_row({spec.t_axis2.data() + pred * k, k}, hidden);
        } else {
            const size_t pred1 = block_at[(i - 2) * n2 + (j - 1)];
            const size_t pred2 = block_at[(i - 1) * n2 + (j - 2)];
            block = discrete_from_row({spec.t_interior.data() + (pred1 * k + pred2) * k, k},
                                      hidden);
        }
        block_at[(i - 1) * n2 + (j - 1)] = static_cast<uint32_t>(block);
        sample.hidden_path.push_back(static_cast<uint32_t>(block));
        uniform_in_box(spec.density.blocks[block], coord, x);
        sample.cloud.push_back(x);
    }
    return sample;
}

double density_chain_marginal(const DensityChainSpec& spec, std::span<const double> x,
                              size_t grid) {
    // Midpoint rule over the first m coordinate blocks.
    const size_t m = spec.order, p = spec.dim;
    const size_t vars = m * p;
    std::vector<double> args((m + 1) * p);
    std::copy(x.begin(), x.end(), args.begin() + static_cast<long>(vars));
    std::vector<size_t> idx(vars, 0);
    double sum = 0.0;
    const double h = 1.0 / static_cast<double>(grid);
    size_t cells = 1;
    for (size_t v = 0; v < vars; ++v) cells *= grid;
    for (size_t c = 0; c < cells; ++c) {
        for (size_t v = 0; v < vars; ++v)
            args[v] = (static_cast<double>(idx[v]) + 0.5) * h;
        sum += spec.joint(args);
        for (size_t v = 0; v < vars; ++v) {
            if (++idx[v] < grid) break;
            idx[v] = 0;
        }
    }
    return sum * std::pow(h, static_cast<double>(vars));
}

BlockedDensity blocked_marginal_approximation(const DensityChainSpec& spec, size_t grid_m,
                                              size_t quad_per_cell) {
    spec.validate();
    if (grid_m == 0) throw std::invalid_argument("blocked_marginal_approximation: grid_m >= 1");
    const size_t p = spec.dim;
    size_t cells = 1;
    for (size_t d = 0; d < p; ++d) cells *= grid_m;

    std::vector<double> weights(cells, 0.0);
    std::vector<size_t> idx(p, 0);
    std::vector<double> x(p);
    for (size_t c = 0; c < cells; ++c) {
        // cell average of the marginal by a midpoint rule inside the cell
        double acc = 0.0;
        std::vector<size_t> sub(p, 0);
        size_t nodes = 1;
        for (size_t d = 0; d < p; ++d) nodes *= quad_per_cell;
        for (size_t kq = 0; kq < nodes; ++kq) {
            for (size_t d = 0; d < p; ++d)
                x[d] = (static_cast<double>(idx[d]) +
                        (static_cast<double>(sub[d]) + 0.5) / static_cast<double>(quad_per_cell)) /
                       static_cast<double>(grid_m);
            acc += density_chain_marginal(spec, x);
            for (size_t d = 0; d < p; ++d) {
                if (++sub[d] < quad_per_cell) break;
                sub[d] = 0;
            }
        }
        weights[c] = acc / static_cast<double>(nodes);
        for (size_t d = 0; d < p; ++d) {
            if (++idx[d] < grid_m) break;
            idx[d] = 0;
        }
    }
    // renormalize so the block masses sum to exactly 1
    double mass = 0.0;
    const double cell_volume = std::pow(1.0 / static_cast<double>(grid_m), double(p));
    for (double w : weights) mass += w * cell_volume;
    for (double& w : weights) w /= mass;
    return BlockedDensity::regular_grid(p, grid_m, std::move(weights));
}

size_t ProcessSpec::ambient_dim() const {
    return std::visit(
        [](const auto& p) -> size_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BinomialProcess>)
                return p.density ? p.density->dim : p.dim;
            else if constexpr (std::is_same_v<T, BlockedChainProcess>)
                return p.density.dim;
            else if constexpr (std::is_same_v<T, DensityChainProcess>)
                return p.spec.dim;
            else if constexpr (std::is_same_v<T, LatticeFieldProcess>)
                return p.spec.density.dim;
            else
                return p.lags.size() + 1;
        },
        process);
}

Sample ProcessSpec::draw(size_t n, uint64_t seed) const {
    Sample sample = std::visit(
        [&](const auto& p) -> Sample {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BinomialProcess>) {
                return sample_binomial(n, p.density, p.dim, seed);
            } else if constexpr (std::is_same_v<T, BlockedChainProcess>) {
                return sample_blocked_chain(n, p.density, p.hidden, seed);
            } else if constexpr (std::is_same_v<T, DensityChainProcess>) {
                return sample_density_chain(n, p.spec, seed);
            } else if constexpr (std::is_same_v<T, LatticeFieldProcess>) {
                const auto root = static_cast<size_t>(std::llround(std::sqrt(double(n))));
                if (root * root != n)
                    throw config_error("n_grid",
                                       "lattice field needs square n, got " + std::to_string(n));
                LatticeFieldSpec sized = p.spec;
                sized.extent = {root, root};
                return sample_lattice_field(sized, seed);
            } else {
                const size_t tau_max = p.lags.empty() ? 0 : p.lags.back();
                Sample series = sample_blocked_chain(n + tau_max, p.density, p.hidden, seed);
                Sample out;
                out.cloud = delay_embed(series.cloud.coords, p.lags);
                out.hidden_path = std::move(series.hidden_path);
                out.seed = seed;
                out.process_tag = "delay_embedding";
                return out;
            }
        },
        process);
    if (!tag.empty()) sample.process_tag = tag;
    return sample;
}

ProcessSpec ProcessSpec::matched_binomial() const {
    BinomialProcess binom;
    if (const auto* chain = std::get_if<BlockedChainProcess>(&process)) {
        binom.density = chain->density;
        binom.dim = chain->density.dim;
    } else if (const auto* field = std::get_if<LatticeFieldProcess>(&process)) {
        binom.density = field->spec.density;
        binom.dim = field->spec.density.dim;
    } else if (const auto* iid = std::get_if<BinomialProcess>(&process)) {
        binom = *iid;
    } else if (const auto* dc = std::get_if<DensityChainProcess>(&process)) {
        // kappa itself is not blocked; use the blocked epsilon-approximation
        binom.density = blocked_marginal_approximation(dc->spec, 16);
        binom.dim = dc->spec.dim;
    } else {
        throw std::invalid_argument("matched_binomial: no blocked marginal for this process");
    }
    ProcessSpec spec;
    spec.process = std::move(binom);
    spec.tag = "binomial_matched";
    return spec;
}

} // namespace ph
