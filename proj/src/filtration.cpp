#include "ph/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ph/errors.hpp"
#include "ph/kernels.hpp"
#include "ph/miniball.hpp"

namespace ph {

const char* complex_kind_name(ComplexKind k) { return k == ComplexKind::rips ? "rips" : "cech"; }

namespace filtration_detail {

struct SimplexHash {
    size_t operator()(const Simplex& s) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (uint32_t v : s.vertices()) {
            h ^= v;
            h *= 0x100000001b3ull;
        }
        return h ^ s.dim;
    }
};

} // namespace filtration_detail

bool entry_less(const FilteredComplex::Entry& a, const FilteredComplex::Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.simplex.dim != b.simplex.dim) return a.simplex.dim < b.simplex.dim;
    const auto av = a.simplex.vertices(), bv = b.simplex.vertices();
    return std::lexicographical_compare(av.begin(), av.end(), bv.begin(), bv.end());
}

namespace {

// Sparse "upper" neighbor lists: for each i, sorted j > i with
// d(i,j) <= threshold, plus the distances for lookups. Small inputs go
// through the dense kernel rows; large ones through grid bucketing so the
// cost is O(n + edges) rather than O(n^2) memory.
struct NeighborLists {
    std::vector<std::vector<uint32_t>> index;
    std::vector<std::vector<double>> dist;

    double lookup(uint32_t i, uint32_t j) const {
        if (i > j) std::swap(i, j);
        const auto& row = index[i];
        const auto it = std::lower_bound(row.begin(), row.end(), j);
        return dist[i][static_cast<size_t>(it - row.begin())];
    }
};

NeighborLists build_neighbor_lists(const PointCloud& cloud, Metric metric, double threshold) {
    const size_t n = cloud.size(), p = cloud.dim;
    NeighborLists lists;
    lists.index.resize(n);
    lists.dist.resize(n);
    if (n < 2) return lists;

    // Grid cells of side = threshold; any pair within the threshold is in the
    // same or an adjacent cell, for both metrics.
    const double cell = threshold;
    const bool use_grid = n > 1024 && cell > 0.0 && cell < 0.25;
    if (!use_grid) {
        std::vector<double> planes(n * p);
        for (size_t i = 0; i < n; ++i)
            for (size_t d = 0; d < p; ++d) planes[d * n + i] = cloud.coords[i * p + d];
        const auto& backend = kernels::active_backend();
        std::vector<double> row(n), q(p);
        for (size_t i = 0; i < n; ++i) {
            for (size_t d = 0; d < p; ++d) q[d] = cloud.coords[i * p + d];
            if (metric == Metric::chebyshev)
                backend.chebyshev_row(planes.data(), n, p, q.data(), row.data());
            else
                backend.euclidean_row(planes.data(), n, p, q.data(), row.data());
            for (size_t j = i + 1; j < n; ++j)
                if (row[j] <= threshold) {
                    lists.index[i].push_back(static_cast<uint32_t>(j));
                    lists.dist[i].push_back(row[j]);
                }
        }
        return lists;
    }

    const auto cell_of = [&](size_t i, size_t d) {
        return static_cast<long>(std::floor(cloud.coords[i * p + d] / cell));
    };
    const auto cell_key = [&](std::span<const long> cells) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (long c : cells) {
            h ^= static_cast<uint64_t>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    };
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets;
    buckets.reserve(n);
    std::vector<long> cells(p);
    for (size_t i = 0; i < n; ++i) {
        for (size_t d = 0; d < p; ++d) cells[d] = cell_of(i, d);
        buckets[cell_key(cells)].push_back(static_cast<uint32_t>(i));
    }
    const size_t shells = 1;
    std::vector<long> probe(p);
    for (size_t i = 0; i < n; ++i) {
        for (size_t d = 0; d < p; ++d) cells[d] = cell_of(i, d);
        // visit the 3^p adjacent cells
        std::vector<long> offset(p, -static_cast<long>(shells));
        for (;;) {
            for (size_t d = 0; d < p; ++d) probe[d] = cells[d] + offset[d];
            const auto it = buckets.find(cell_key(probe));
            if (it != buckets.end()) {
                for (uint32_t j : it->second) {
                    if (j <= i) continue;
                    const double d = point_distance(cloud.point(i), cloud.point(j), metric);
                    if (d <= threshold) {
                        lists.index[i].push_back(j);
                        lists.dist[i].push_back(d);
                    }
                }
            }
            size_t d = 0;
            while (d < p && ++offset[d] > static_cast<long>(shells)) {
                offset[d] = -static_cast<long>(shells);
                ++d;
            }
            if (d == p) break;
        }
        // Bucket iteration order is not sorted; restore the sorted invariant.
        // Dedupe as well: a cell-key hash collision would make the same
        // bucket show up under two probe offsets.
        std::vector<size_t> order(lists.index[i].size());
        for (size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return lists.index[i][a] < lists.index[i][b]; });
        std::vector<uint32_t> sorted_index;
        std::vector<double> sorted_dist;
        sorted_index.reserve(order.size());
        sorted_dist.reserve(order.size());
        for (size_t k = 0; k < order.size(); ++k) {
            const uint32_t ix = lists.index[i][order[k]];
            if (!sorted_index.empty() && sorted_index.back() == ix) continue;
            sorted_index.push_back(ix);
            sorted_dist.push_back(lists.dist[i][order[k]]);
        }
        lists.index[i] = std::move(sorted_index);
        lists.dist[i] = std::move(sorted_dist);
    }
    return lists;
}

struct Builder {
    const PointCloud& cloud;
    const size_t max_dim;
    const double max_radius;
    const double edge_threshold; // candidate pruning radius on pairwise distances
    const BuildBudget& budget;
    FilteredComplex out;
    NeighborLists neighbors;

    Builder(const PointCloud& c, Metric metric, size_t md, double mr, double edge_thr,
            const BuildBudget& b)
        : cloud(c), max_dim(md), max_radius(mr), edge_threshold(edge_thr), budget(b),
          neighbors(build_neighbor_lists(c, metric, edge_thr)) {}

    double dist(uint32_t i, uint32_t j) const { return neighbors.lookup(i, j); }

    void push(const Simplex& s, double value) {
        if (out.entries.size() >= budget.max_simplices)
            throw budget_error("complex exceeds simplex budget; lower max_radius or max_dim",
                               out.entries.size() + 1, budget.max_simplices);
        out.entries.push_back({value, s});
    }

    // Filtration value of `s` extended by vertex `j`, or a negative value if
    // the extension is not part of the complex. Rips: new diameter; Cech:
    // minimal enclosing ball radius.
    virtual double extend_value(const Simplex& s, double s_value, uint32_t j) = 0;
    virtual ~Builder() = default;

    void expand(const Simplex& s, double s_value, const std::vector<uint32_t>& candidates) {
        if (s.dim >= max_dim) return;
        for (uint32_t j : candidates) {
            const double value = extend_value(s, s_value, j);
            if (value < 0.0) continue;
            Simplex t = s;
            t.v[t.vertex_count()] = j;
            t.dim = static_cast<uint8_t>(t.dim + 1);
            push(t, value);
            if (t.dim < max_dim) {
                std::vector<uint32_t> next;
                std::set_intersection(candidates.begin(), candidates.end(),
                                      neighbors.index[j].begin(), neighbors.index[j].end(),
                                      std::back_inserter(next));
                expand(t, value, next);
            }
        }
    }

    FilteredComplex run(ComplexKind kind) {
        const size_t n = cloud.size();
        out.kind = kind;
        out.max_dim = max_dim;
        out.max_radius = max_radius;
        out.n_points = n;
        out.ambient_dim = cloud.dim;
        for (size_t i = 0; i < n; ++i) {
            Simplex v;
            v.v[0] = static_cast<uint32_t>(i);
            v.dim = 0;
            push(v, 0.0);
            expand(v, 0.0, neighbors.index[i]);
        }
        std::sort(out.entries.begin(), out.entries.end(), entry_less);
        return std::move(out);
    }
};

struct RipsBuilder final : Builder {
    RipsBuilder(const PointCloud& c, Metric metric, size_t md, double mr, const BuildBudget& b)
        : Builder(c, metric, md, mr, mr, b) {}

    double extend_value(const Simplex& s, double s_value, uint32_t j) override {
        double value = s_value;
        for (uint32_t u : s.vertices()) {
            const double d = dist(u, j);
            if (d > max_radius) return -1.0;
            value = d > value ? d : value;
        }
        return value;
    }
};

struct CechBuilder final : Builder {
    // Candidates are pruned on the graph with edge length <= 2*max_radius:
    // diam(sigma) <= 2 * meb_radius(sigma) for every simplex.
    CechBuilder(const PointCloud& c, size_t md, double mr, const BuildBudget& b)
        : Builder(c, Metric::euclidean, md, mr, 2.0 * mr, b) {}

    double extend_value(const Simplex& s, double, uint32_t j) override {
        const size_t p = cloud.dim;
        std::vector<double> pts((s.vertex_count() + 1) * p);
        size_t row = 0;
        for (uint32_t u : s.vertices()) {
            const auto pt = cloud.point(u);
            std::copy(pt.begin(), pt.end(), pts.begin() + long(row++ * p));
        }
        const auto pt = cloud.point(j);
        std::copy(pt.begin(), pt.end(), pts.begin() + long(row * p));
        const Ball ball = min_enclosing_ball(pts, p);
        return ball.radius <= max_radius ? ball.radius : -1.0;
    }
};

} // namespace

FilteredComplex build_rips(const PointCloud& cloud, Metric metric, size_t max_dim,
                           double max_radius, const BuildBudget& budget) {
    if (max_radius < 0.0) throw std::invalid_argument("build_rips: max_radius must be >= 0");
    if (max_dim + 1 > kMaxSimplexVertices)
        throw std::invalid_argument("build_rips: max_dim exceeds supported cap of 7");
    return RipsBuilder(cloud, metric, max_dim, max_radius, budget).run(ComplexKind::rips);
}

namespace {

// Independent per-simplex ball computations can disagree with a face's value
// in the last ulp when both balls share the same support set. Clamping to
// the face maximum restores exact monotonicity; mathematically the clamp is
// a no-op since meb(face) <= meb(coface).
void enforce_value_monotonicity(FilteredComplex& fc) {
    std::unordered_map<Simplex, double, filtration_detail::SimplexHash> value_of;
    value_of.reserve(fc.entries.size());
    std::vector<size_t> by_dim_order(fc.entries.size());
    for (size_t i = 0; i < fc.entries.size(); ++i) by_dim_order[i] = i;
    std::sort(by_dim_order.begin(), by_dim_order.end(), [&](size_t a, size_t b) {
        return fc.entries[a].simplex.dim < fc.entries[b].simplex.dim;
    });
    for (size_t ix : by_dim_order) {
        auto& e = fc.entries[ix];
        const Simplex& s = e.simplex;
        if (s.dim > 0) {
            for (size_t skip = 0; skip < s.vertex_count(); ++skip) {
                Simplex face;
                face.dim = static_cast<uint8_t>(s.dim - 1);
                size_t w = 0;
                for (size_t k = 0; k < s.vertex_count(); ++k)
                    if (k != skip) face.v[w++] = s.v[k];
                const double fv = value_of.at(face);
                if (fv > e.value) e.value = fv;
            }
        }
        value_of.emplace(s, e.value);
    }
    std::sort(fc.entries.begin(), fc.entries.end(), entry_less);
}

} // namespace

FilteredComplex build_cech(const PointCloud& cloud, size_t max_dim, double max_radius,
                           const BuildBudget& budget) {
    if (max_radius < 0.0) throw std::invalid_argument("build_cech: max_radius must be >= 0");
    if (max_dim + 1 > kMaxSimplexVertices)
        throw std::invalid_argument("build_cech: max_dim exceeds supported cap of 7");
    FilteredComplex fc = CechBuilder(cloud, max_dim, max_radius, budget).run(ComplexKind::cech);
    enforce_value_monotonicity(fc);
    return fc;
}

size_t count_simplices(const FilteredComplex& fc, size_t j, double r) {
    size_t count = 0;
    for (const auto& e : fc.entries)
        if (e.simplex.dim == j && e.value <= r) ++count;
    return count;
}

size_t count_simplices_localized(const FilteredComplex& fc, size_t j, double r,
                                 std::span<const uint32_t> vertex_set) {
    std::vector<bool> in_set(fc.n_points, false);
    for (uint32_t v : vertex_set)
        if (v < fc.n_points) in_set[v] = true;
    size_t count = 0;
    for (const auto& e : fc.entries) {
        if (e.simplex.dim != j || e.value > r) continue;
        for (uint32_t v : e.simplex.vertices())
            if (in_set[v]) {
                ++count;
                break;
            }
    }
    return count;
}

FilteredComplex rescale_complex(const FilteredComplex& fc, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("rescale_complex: eta must be > 0");
    FilteredComplex scaled = fc;
    scaled.max_radius = fc.max_radius * eta;
    for (auto& e : scaled.entries) e.value *= eta;
    // Multiplying by a positive constant preserves the total order.
    return scaled;
}

void save_complex(std::ostream& out, const FilteredComplex& fc) {
    for (const auto& e : fc.entries) {
        out << format_exact(e.value);
        for (uint32_t v : e.simplex.vertices()) out << ' ' << v;
        out << '\n';
    }
}

FilteredComplex load_complex(std::istream& in) {
    FilteredComplex fc;
    std::string line;
    size_t max_vertex = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        FilteredComplex::Entry e;
        if (!(ss >> e.value)) throw config_error("complex", "bad value in line: " + line);
        size_t count = 0;
        uint32_t v;
        while (ss >> v) {
            if (count >= kMaxSimplexVertices)
                throw config_error("complex", "too many vertices in line: " + line);
            e.simplex.v[count++] = v;
            max_vertex = std::max<size_t>(max_vertex, v);
        }
        if (count == 0) throw config_error("complex", "simplex with no vertices: " + line);
        e.simplex.dim = static_cast<uint8_t>(count - 1);
        fc.entries.push_back(e);
        fc.max_dim = std::max<size_t>(fc.max_dim, count - 1);
        fc.max_radius = std::max(fc.max_radius, e.value);
    }
    fc.n_points = fc.entries.empty() ? 0 : max_vertex + 1;
    return fc;
}

void validate_complex(const FilteredComplex& fc) {
    std::unordered_map<Simplex, double, filtration_detail::SimplexHash> values;
    values.reserve(fc.entries.size());
    for (size_t i = 0; i < fc.entries.size(); ++i) {
        if (i > 0 && entry_less(fc.entries[i], fc.entries[i - 1]))
            throw std::logic_error("complex not sorted by the filtration total order");
        const auto& s = fc.entries[i].simplex;
        const auto verts = s.vertices();
        for (size_t k = 1; k < verts.size(); ++k)
            if (verts[k - 1] >= verts[k])
                throw std::logic_error("simplex vertices not strictly increasing");
        if (!values.emplace(s, fc.entries[i].value).second)
            throw std::logic_error("duplicate simplex in complex");
    }
    for (const auto& e : fc.entries) {
        const auto& s = e.simplex;
        if (s.dim == 0) continue;
        for (size_t skip = 0; skip < s.vertex_count(); ++skip) {
            Simplex face;
            face.dim = static_cast<uint8_t>(s.dim - 1);
            size_t w = 0;
            for (size_t k = 0; k < s.vertex_count(); ++k)
                if (k != skip) face.v[w++] = s.v[k];
            auto it = values.find(face);
            if (it == values.end()) throw std::logic_error("complex not face-closed");
            if (it->second > e.value)
                throw std::logic_error("face has larger filtration value than coface");
        }
    }
}

} // namespace ph
