#include "ph/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ph/errors.hpp"
#include "ph/geometry.hpp"

namespace ph {

namespace {

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

using SimplexIndex = std::unordered_map<Simplex, uint32_t, SimplexHash>;

SimplexIndex index_simplices(const FilteredComplex& fc) {
    SimplexIndex index;
    index.reserve(fc.entries.size());
    for (size_t i = 0; i < fc.entries.size(); ++i)
        index.emplace(fc.entries[i].simplex, static_cast<uint32_t>(i));
    return index;
}

} // namespace

BoundaryMatrix BoundaryMatrix::from_complex(const FilteredComplex& fc) {
    const SimplexIndex index = index_simplices(fc);
    BoundaryMatrix m;
    m.cols.resize(fc.entries.size());
    for (size_t j = 0; j < fc.entries.size(); ++j) {
        const Simplex& s = fc.entries[j].simplex;
        if (s.dim == 0) continue;
        auto& col = m.cols[j];
        col.reserve(s.vertex_count());
        for (size_t skip = 0; skip < s.vertex_count(); ++skip) {
            Simplex face;
            face.dim = static_cast<uint8_t>(s.dim - 1);
            size_t w = 0;
            for (size_t k = 0; k < s.vertex_count(); ++k)
                if (k != skip) face.v[w++] = s.v[k];
            auto it = index.find(face);
            if (it == index.end())
                throw std::logic_error("boundary: face missing from complex");
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
    }
    return m;
}

namespace {

// target ^= source over F2 (symmetric difference of sorted index lists).
void add_column(std::vector<uint32_t>& target, const std::vector<uint32_t>& source) {
    std::vector<uint32_t> merged;
    merged.reserve(target.size() + source.size());
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(merged));
    target = std::move(merged);
}

} // namespace

ReducedMatrix reduce(const BoundaryMatrix& matrix, const FilteredComplex& fc,
                     const ReduceOptions& options) {
    const size_t m = matrix.cols.size();
    if (m != fc.entries.size())
        throw std::invalid_argument("reduce: matrix/complex size mismatch");

    std::vector<std::vector<uint32_t>> cols = matrix.cols;
    std::vector<uint32_t> pivot_owner(m, UINT32_MAX); // row -> column with that pivot
    std::vector<char> cleared(m, 0);
    std::vector<char> killed(m, 0);
    ReducedMatrix out;

    auto reduce_column = [&](uint32_t j) {
        auto& col = cols[j];
        while (!col.empty()) {
            const uint32_t low = col.back();
            const uint32_t owner = pivot_owner[low];
            if (owner == UINT32_MAX) {
                pivot_owner[low] = j;
                killed[low] = 1;
                out.pairs.emplace_back(low, j);
                return;
            }
            add_column(col, cols[owner]);
        }
    };

    if (options.clearing) {
        // Top dimension first; pivots of dimension d clear positive columns
        // of dimension d-1.
        for (size_t d = fc.max_dim + 1; d-- > 0;) {
            for (uint32_t j = 0; j < m; ++j) {
                if (fc.entries[j].simplex.dim != d || cleared[j]) continue;
                reduce_column(j);
            }
            for (const auto& [row, col] : out.pairs)
                if (fc.entries[col].simplex.dim == d) cleared[row] = 1;
        }
    } else {
        for (uint32_t j = 0; j < m; ++j) reduce_column(j);
    }

    for (uint32_t j = 0; j < m; ++j) {
        const bool positive = cleared[j] || cols[j].empty();
        if (positive && !killed[j]) out.essentials.push_back(j);
    }
    return out;
}

int diagram_degree_cap(const FilteredComplex& fc) {
    int cap = fc.max_dim == 0 ? 0 : static_cast<int>(fc.max_dim) - 1;
    if (fc.kind == ComplexKind::cech)
        cap = std::min(cap, static_cast<int>(fc.ambient_dim) - 1);
    return cap;
}

PersistenceDiagram diagram_from_pairing(const FilteredComplex& fc, const ReducedMatrix& reduced) {
    const int cap = diagram_degree_cap(fc);
    PersistenceDiagram dg;
    for (const auto& [birth_ix, death_ix] : reduced.pairs) {
        const auto& b = fc.entries[birth_ix];
        const auto& d = fc.entries[death_ix];
        if (b.value == d.value) continue; // zero persistence, not in Delta
        if (b.simplex.dim > cap) continue;
        dg.points.push_back({b.value, d.value, b.simplex.dim});
    }
    for (uint32_t ix : reduced.essentials) {
        const auto& b = fc.entries[ix];
        if (b.simplex.dim > cap) continue;
        dg.points.push_back({b.value, kInfiniteDeath, b.simplex.dim});
    }
    std::sort(dg.points.begin(), dg.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    return dg;
}

PersistenceDiagram diagram(const FilteredComplex& fc, const ReduceOptions& options) {
    const BoundaryMatrix matrix = BoundaryMatrix::from_complex(fc);
    return diagram_from_pairing(fc, reduce(matrix, fc, options));
}

long persistent_betti(const PersistenceDiagram& dg, const BettiQuery& query) {
    if (query.r > query.s) throw std::invalid_argument("persistent_betti: requires r <= s");
    long count = 0;
    for (const auto& pt : dg.points)
        if (pt.dim == query.q && pt.birth <= query.r && pt.death > query.s) ++count;
    return count;
}

namespace {

// Rank over F2 of a matrix given as bit columns, destructive elimination.
size_t f2_rank(std::vector<std::vector<uint64_t>>& cols) {
    std::unordered_map<size_t, size_t> pivot_of_row;
    size_t rank = 0;
    auto lowest_row = [](const std::vector<uint64_t>& col) -> long {
        for (size_t w = 0; w < col.size(); ++w)
            if (col[w] != 0)
                return static_cast<long>(w * 64 + static_cast<size_t>(__builtin_ctzll(col[w])));
        return -1;
    };
    for (size_t j = 0; j < cols.size(); ++j) {
        long row = lowest_row(cols[j]);
        while (row >= 0) {
            auto it = pivot_of_row.find(static_cast<size_t>(row));
            if (it == pivot_of_row.end()) break;
            const auto& other = cols[it->second];
            for (size_t w = 0; w < cols[j].size(); ++w) cols[j][w] ^= other[w];
            row = lowest_row(cols[j]);
        }
        if (row >= 0) {
            pivot_of_row.emplace(static_cast<size_t>(row), j);
            ++rank;
        }
    }
    return rank;
}

} // namespace

long persistent_betti_direct(const FilteredComplex& fc, const BettiQuery& query) {
    if (query.r > query.s) throw std::invalid_argument("persistent_betti_direct: requires r <= s");
    if (query.q < 0) throw std::invalid_argument("persistent_betti_direct: q must be >= 0");
    const size_t q = static_cast<size_t>(query.q);
    const BoundaryMatrix boundary = BoundaryMatrix::from_complex(fc);

    // Positions of simplices by (dim, value cutoff).
    auto collect = [&](size_t dim, double cutoff) {
        std::vector<uint32_t> ids;
        for (uint32_t i = 0; i < fc.entries.size(); ++i)
            if (fc.entries[i].simplex.dim == dim && fc.entries[i].value <= cutoff)
                ids.push_back(i);
        return ids;
    };

    const std::vector<uint32_t> q_at_r = collect(q, query.r);

    // dim Z_q(K(r)) = #K_q(r) - rank of boundary_q on K(r).
    size_t rank_dq_r = 0;
    if (q > 0) {
        const std::vector<uint32_t> rows = collect(q - 1, query.r);
        std::unordered_map<uint32_t, size_t> row_pos;
        for (size_t k = 0; k < rows.size(); ++k) row_pos.emplace(rows[k], k);
        const size_t words = (rows.size() + 63) / 64;
        std::vector<std::vector<uint64_t>> cols;
        cols.reserve(q_at_r.size());
        for (uint32_t j : q_at_r) {
            std::vector<uint64_t> col(words, 0);
            for (uint32_t face : boundary.cols[j]) {
                const size_t pos = row_pos.at(face);
                col[pos / 64] |= uint64_t(1) << (pos % 64);
            }
            cols.push_back(std::move(col));
        }
        rank_dq_r = f2_rank(cols);
    }
    const long z_dim = static_cast<long>(q_at_r.size()) - static_cast<long>(rank_dq_r);

    // dim(B_q(K(s)) cap Z_q(K(r))): a boundary supported on K_q(r) is
    // automatically a cycle there, so the dimension is
    // rank(D) - rank(D restricted to rows outside K_q(r)),
    // D = boundary_{q+1} on K(s).
    const std::vector<uint32_t> q_at_s = collect(q, query.s);
    const std::vector<uint32_t> q1_at_s = collect(q + 1, query.s);

    std::unordered_map<uint32_t, size_t> full_pos, band_pos;
    size_t band = 0;
    for (size_t k = 0; k < q_at_s.size(); ++k) {
        full_pos.emplace(q_at_s[k], k);
        if (fc.entries[q_at_s[k]].value > query.r) band_pos.emplace(q_at_s[k], band++);
    }
    const size_t full_words = (q_at_s.size() + 63) / 64;
    const size_t band_words = (band + 63) / 64;
    std::vector<std::vector<uint64_t>> full_cols, band_cols;
    full_cols.reserve(q1_at_s.size());
    band_cols.reserve(q1_at_s.size());
    for (uint32_t j : q1_at_s) {
        std::vector<uint64_t> fcol(full_words, 0), bcol(band_words, 0);
        for (uint32_t face : boundary.cols[j]) {
            const size_t pos = full_pos.at(face);
            fcol[pos / 64] |= uint64_t(1) << (pos % 64);
            auto bit = band_pos.find(face);
            if (bit != band_pos.end()) bcol[bit->second / 64] |= uint64_t(1) << (bit->second % 64);
        }
        full_cols.push_back(std::move(fcol));
        band_cols.push_back(std::move(bcol));
    }
    const size_t rank_full = f2_rank(full_cols);
    const size_t rank_band = f2_rank(band_cols);

    return z_dim - (static_cast<long>(rank_full) - static_cast<long>(rank_band));
}

std::vector<long> betti_numbers_at(const FilteredComplex& fc, const ReducedMatrix& reduced,
                                   double r) {
    std::vector<long> betti(fc.max_dim + 1, 0);
    for (const auto& [birth_ix, death_ix] : reduced.pairs) {
        const auto& b = fc.entries[birth_ix];
        if (b.value <= r && fc.entries[death_ix].value > r) ++betti[b.simplex.dim];
    }
    for (uint32_t ix : reduced.essentials) {
        const auto& b = fc.entries[ix];
        if (b.value <= r) ++betti[b.simplex.dim];
    }
    return betti;
}

std::pair<long, long> geometric_lemma_gap(const FilteredComplex& sub,
                                          const FilteredComplex& super,
                                          std::span<const uint32_t> injection,
                                          const BettiQuery& query) {
    if (injection.size() != sub.n_points)
        throw std::invalid_argument("geometric_lemma_gap: injection size != |X|");
    std::vector<char> in_image(super.n_points, 0);
    for (uint32_t ix : injection) {
        if (ix >= super.n_points)
            throw std::invalid_argument("geometric_lemma_gap: injection index out of range");
        if (in_image[ix]) throw std::invalid_argument("geometric_lemma_gap: injection not injective");
        in_image[ix] = 1;
    }
    if (sub.kind != super.kind || sub.max_dim != super.max_dim)
        throw std::invalid_argument("geometric_lemma_gap: complexes built differently");
    if (static_cast<size_t>(query.q) + 1 > super.max_dim)
        throw std::invalid_argument("geometric_lemma_gap: needs max_dim >= q+1");
    if (query.s > sub.max_radius || query.s > super.max_radius)
        throw std::invalid_argument("geometric_lemma_gap: s beyond complex radius cap");

    const long beta_sub = persistent_betti(diagram(sub), query);
    const long beta_super = persistent_betti(diagram(super), query);
    const long lhs = std::labs(beta_super - beta_sub);

    long rhs = 0;
    for (const auto& e : super.entries) {
        const size_t d = e.simplex.dim;
        if ((d != static_cast<size_t>(query.q) && d != static_cast<size_t>(query.q) + 1) ||
            e.value > query.s)
            continue;
        for (uint32_t v : e.simplex.vertices())
            if (!in_image[v]) {
                ++rhs;
                break;
            }
    }
    return {lhs, rhs};
}

void save_diagram_csv(std::ostream& out, const PersistenceDiagram& dg) {
    out << "dim,birth,death\n";
    for (const auto& pt : dg.points) {
        out << pt.dim << ',' << format_exact(pt.birth) << ',';
        if (std::isinf(pt.death))
            out << "inf";
        else
            out << format_exact(pt.death);
        out << '\n';
    }
}

PersistenceDiagram load_diagram_csv(std::istream& in) {
    PersistenceDiagram dg;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("dim", 0) == 0) continue;
        }
        std::stringstream ss(line);
        std::string dim_s, birth_s, death_s;
        if (!std::getline(ss, dim_s, ',') || !std::getline(ss, birth_s, ',') ||
            !std::getline(ss, death_s))
            throw config_error("diagram", "bad row: " + line);
        DiagramPoint pt;
        pt.dim = std::stoi(dim_s);
        pt.birth = std::stod(birth_s);
        pt.death = death_s == "inf" ? kInfiniteDeath : std::stod(death_s);
        dg.points.push_back(pt);
    }
    return dg;
}

} // namespace ph
