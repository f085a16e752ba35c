#pragma once

// Test-only oracles, deliberately written as plain independent
// re-implementations (no shared code with the library paths they check).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "ph/filtration.hpp"
#include "ph/geometry.hpp"

namespace oracle {

inline double dist(std::span<const double> a, std::span<const double> b, bool chebyshev) {
    double acc = 0.0;
    for (size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        if (chebyshev)
            acc = std::max(acc, std::fabs(diff));
        else
            acc += diff * diff;
    }
    return chebyshev ? acc : std::sqrt(acc);
}

// All subsets of {0..n-1} of size <= k+1 with diameter <= max_radius,
// as (sorted vertex set -> diameter).
inline std::map<std::vector<uint32_t>, double>
rips_by_enumeration(const ph::PointCloud& cloud, bool chebyshev, size_t max_dim,
                    double max_radius) {
    const size_t n = cloud.size();
    std::map<std::vector<uint32_t>, double> out;
    std::vector<uint32_t> subset;
    auto recurse = [&](auto&& self, uint32_t start, double diam) -> void {
        if (!subset.empty()) out[subset] = diam;
        if (subset.size() == max_dim + 1) return;
        for (uint32_t v = start; v < n; ++v) {
            double new_diam = diam;
            bool ok = true;
            for (uint32_t u : subset) {
                const double d = dist(cloud.point(u), cloud.point(v), chebyshev);
                if (d > max_radius) {
                    ok = false;
                    break;
                }
                new_diam = std::max(new_diam, d);
            }
            if (!ok) continue;
            subset.push_back(v);
            self(self, v + 1, new_diam);
            subset.pop_back();
        }
    };
    recurse(recurse, 0, 0.0);
    return out;
}

// Minimal enclosing ball radius for up to 3 points in the plane, analytic.
inline double meb_radius_p2(std::span<const double> pts, size_t count) {
    auto d2 = [&](size_t i, size_t j) {
        const double dx = pts[2 * i] - pts[2 * j], dy = pts[2 * i + 1] - pts[2 * j + 1];
        return dx * dx + dy * dy;
    };
    if (count == 1) return 0.0;
    if (count == 2) return std::sqrt(d2(0, 1)) / 2.0;
    // Largest pairwise distance first: diameter ball if it covers the rest.
    size_t bi = 0, bj = 1;
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j < 3; ++j)
            if (d2(i, j) > d2(bi, bj)) {
                bi = i;
                bj = j;
            }
    const size_t k = 3 - bi - bj;
    const double cx = (pts[2 * bi] + pts[2 * bj]) / 2.0, cy = (pts[2 * bi + 1] + pts[2 * bj + 1]) / 2.0;
    const double rad2 = d2(bi, bj) / 4.0;
    const double dx = pts[2 * k] - cx, dy = pts[2 * k + 1] - cy;
    if (dx * dx + dy * dy <= rad2 * (1.0 + 1e-12)) return std::sqrt(rad2);
    // Circumcircle.
    const double ax = pts[0], ay = pts[1], bx = pts[2], by = pts[3], ex = pts[4], ey = pts[5];
    const double dd = 2.0 * (ax * (by - ey) + bx * (ey - ay) + ex * (ay - by));
    const double ux = ((ax * ax + ay * ay) * (by - ey) + (bx * bx + by * by) * (ey - ay) +
                       (ex * ex + ey * ey) * (ay - by)) /
                      dd;
    const double uy = ((ax * ax + ay * ay) * (ex - bx) + (bx * bx + by * by) * (ax - ex) +
                       (ex * ex + ey * ey) * (bx - ax)) /
                      dd;
    const double rx = ax - ux, ry = ay - uy;
    return std::sqrt(rx * rx + ry * ry);
}

// Dense Gaussian elimination rank over F2, row-echelon over bool rows.
inline size_t f2_rank_dense(std::vector<std::vector<char>> m) {
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    size_t rank = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pivot = row;
        while (pivot < rows && !m[pivot][col]) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[row], m[pivot]);
        for (size_t r = 0; r < rows; ++r)
            if (r != row && m[r][col])
                for (size_t c = col; c < cols; ++c) m[r][c] ^= m[row][c];
        ++row;
        ++rank;
    }
    return rank;
}

// Betti number beta_j(K(r)) by rank-nullity on dense F2 boundary matrices.
inline long betti_rank_nullity(const ph::FilteredComplex& fc, size_t j, double r) {
    std::vector<size_t> idx_j, idx_jm1, idx_jp1;
    for (size_t i = 0; i < fc.entries.size(); ++i) {
        if (fc.entries[i].value > r) continue;
        const size_t d = fc.entries[i].simplex.dim;
        if (d == j) idx_j.push_back(i);
        if (j > 0 && d == j - 1) idx_jm1.push_back(i);
        if (d == j + 1) idx_jp1.push_back(i);
    }
    auto boundary_dense = [&](const std::vector<size_t>& rows_ix,
                              const std::vector<size_t>& cols_ix) {
        std::map<std::vector<uint32_t>, size_t> row_of;
        for (size_t k = 0; k < rows_ix.size(); ++k) {
            const auto verts = fc.entries[rows_ix[k]].simplex.vertices();
            row_of[std::vector<uint32_t>(verts.begin(), verts.end())] = k;
        }
        std::vector<std::vector<char>> m(rows_ix.size(),
                                         std::vector<char>(cols_ix.size(), 0));
        for (size_t c = 0; c < cols_ix.size(); ++c) {
            const auto& s = fc.entries[cols_ix[c]].simplex;
            for (size_t skip = 0; skip < s.vertex_count(); ++skip) {
                std::vector<uint32_t> face;
                for (size_t k = 0; k < s.vertex_count(); ++k)
                    if (k != skip) face.push_back(s.v[k]);
                m[row_of.at(face)][c] = 1;
            }
        }
        return m;
    };
    size_t rank_j = 0;
    if (j > 0 && !idx_j.empty()) {
        auto m = boundary_dense(idx_jm1, idx_j);
        rank_j = f2_rank_dense(std::move(m));
    }
    size_t rank_jp1 = 0;
    if (!idx_jp1.empty()) {
        auto m = boundary_dense(idx_j, idx_jp1);
        rank_jp1 = f2_rank_dense(std::move(m));
    }
    return static_cast<long>(idx_j.size()) - static_cast<long>(rank_j) -
           static_cast<long>(rank_jp1);
}

// Chi-squared upper quantile via the Wilson-Hilferty approximation.
inline double chi2_quantile(size_t dof, double z_upper) {
    const double d = static_cast<double>(dof);
    const double c = 2.0 / (9.0 * d);
    const double term = 1.0 - c + z_upper * std::sqrt(c);
    return d * term * term * term;
}

// Two-sample Kolmogorov-Smirnov critical value at significance alpha=0.01.
inline double ks_critical_1pct(size_t n, size_t m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) /
                             (static_cast<double>(n) * static_cast<double>(m)));
}

inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    return d;
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

inline MeanSd mean_sd(std::span<const double> xs) {
    MeanSd out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    out.sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    return out;
}

} // namespace oracle
