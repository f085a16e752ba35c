#include "ph/miniball.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ph/rng.hpp"

namespace ph {

bool Ball::contains(std::span<const double> x, double slack) const {
    if (radius < 0.0 || center.size() != x.size()) return false;
    double d2 = 0.0;
    for (size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - center[d];
        d2 += diff * diff;
    }
    return d2 <= radius * radius * (1.0 + slack) + 1e-30;
}

namespace {

constexpr double kInvalidRadius = -2.0;

// Smallest ball with all support points on its boundary. The center lies in
// the affine hull of the support: c = r0 + sum_j lambda_j (r_j - r0), where
// lambda solves the Gram system 2 v_i . v_j lambda_j = |v_i|^2.
Ball ball_from_support(const std::vector<std::span<const double>>& support, size_t p) {
    Ball ball;
    const size_t k = support.size();
    if (k == 0) return ball; // empty, radius -1
    ball.center.assign(support[0].begin(), support[0].end());
    ball.radius = 0.0;
    if (k == 1) return ball;

    const size_t m = k - 1;
    std::vector<double> v(m * p);
    for (size_t i = 0; i < m; ++i)
        for (size_t d = 0; d < p; ++d) v[i * p + d] = support[i + 1][d] - support[0][d];

    std::vector<double> a(m * m), b(m);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) {
            double dot = 0.0;
            for (size_t d = 0; d < p; ++d) dot += v[i * p + d] * v[j * p + d];
            a[i * m + j] = 2.0 * dot;
        }
        b[i] = a[i * m + i] / 2.0; // |v_i|^2
    }

    // Gaussian elimination with partial pivoting.
    std::vector<size_t> perm(m);
    for (size_t i = 0; i < m; ++i) perm[i] = i;
    for (size_t col = 0; col < m; ++col) {
        size_t best = col;
        for (size_t r = col + 1; r < m; ++r)
            if (std::fabs(a[perm[r] * m + col]) > std::fabs(a[perm[best] * m + col])) best = r;
        std::swap(perm[col], perm[best]);
        const double pivot = a[perm[col] * m + col];
        if (std::fabs(pivot) < 1e-14) {
            ball.radius = kInvalidRadius; // affinely dependent support
            return ball;
        }
        for (size_t r = col + 1; r < m; ++r) {
            const double factor = a[perm[r] * m + col] / pivot;
            if (factor == 0.0) continue;
            for (size_t c = col; c < m; ++c) a[perm[r] * m + c] -= factor * a[perm[col] * m + c];
            b[perm[r]] -= factor * b[perm[col]];
        }
    }
    std::vector<double> lambda(m);
    for (size_t ri = m; ri-- > 0;) {
        double acc = b[perm[ri]];
        for (size_t c = ri + 1; c < m; ++c) acc -= a[perm[ri] * m + c] * lambda[c];
        lambda[ri] = acc / a[perm[ri] * m + ri];
    }

    std::vector<double> offset(p, 0.0);
    for (size_t i = 0; i < m; ++i)
        for (size_t d = 0; d < p; ++d) offset[d] += lambda[i] * v[i * p + d];
    double r2 = 0.0;
    for (size_t d = 0; d < p; ++d) {
        ball.center[d] += offset[d];
        r2 += offset[d] * offset[d];
    }
    ball.radius = std::sqrt(r2);
    return ball;
}

Ball welzl(const std::vector<std::span<const double>>& pts, size_t count,
           std::vector<std::span<const double>>& support, size_t p) {
    if (count == 0 || support.size() == p + 1) return ball_from_support(support, p);
    const auto x = pts[count - 1];
    Ball ball = welzl(pts, count - 1, support, p);
    if (ball.radius >= 0.0 && ball.contains(x)) return ball;
    support.push_back(x);
    ball = welzl(pts, count - 1, support, p);
    support.pop_back();
    return ball;
}

Ball brute_force_ball(const std::vector<std::span<const double>>& pts, size_t p) {
    const size_t n = pts.size();
    if (n > 16) throw std::runtime_error("min_enclosing_ball: degenerate large input");
    Ball best;
    best.radius = -1.0;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        if (static_cast<size_t>(__builtin_popcount(mask)) > p + 1) continue;
        std::vector<std::span<const double>> subset;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) subset.push_back(pts[i]);
        Ball candidate = ball_from_support(subset, p);
        if (candidate.radius < 0.0) continue;
        bool covers = true;
        for (const auto& q : pts)
            if (!candidate.contains(q)) {
                covers = false;
                break;
            }
        if (covers && (best.radius < 0.0 || candidate.radius < best.radius)) best = candidate;
    }
    return best;
}

} // namespace

Ball min_enclosing_ball(std::span<const double> points, size_t p) {
    if (p == 0) throw std::invalid_argument("min_enclosing_ball: p must be >= 1");
    const size_t n = points.size() / p;
    Ball empty;
    if (n == 0) return empty;

    std::vector<std::span<const double>> pts;
    pts.reserve(n);
    for (size_t i = 0; i < n; ++i) pts.emplace_back(points.data() + i * p, p);

    // Canonical order plus dedup: result independent of input point order.
    auto lex_less = [](std::span<const double> a, std::span<const double> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    };
    auto same = [](std::span<const double> a, std::span<const double> b) {
        return std::equal(a.begin(), a.end(), b.begin());
    };
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end(), same), pts.end());

    // Deterministic shuffle for the expected-linear recursion depth.
    RngStream rng(derive(0x6d696e6962616c6cull, pts.size()));
    for (size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[rng.next_u64() % i]);

    std::vector<std::span<const double>> support;
    Ball ball = welzl(pts, pts.size(), support, p);
    for (const auto& q : pts)
        if (ball.radius < 0.0 || !ball.contains(q, 1e-7)) return brute_force_ball(pts, p);
    return ball;
}

} // namespace ph
