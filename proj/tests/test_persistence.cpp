#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "ph/persistence.hpp"
#include "ph/rng.hpp"

using ph::BettiQuery;
using ph::ComplexKind;
using ph::FilteredComplex;
using ph::Metric;
using ph::PersistenceDiagram;
using ph::PointCloud;

namespace {

PointCloud random_cloud(size_t n, size_t p, uint64_t seed) {
    ph::RngStream rng(ph::derive(seed, 41));
    PointCloud cloud;
    cloud.dim = p;
    cloud.coords.resize(n * p);
    for (auto& c : cloud.coords) c = rng.next_unit();
    return cloud;
}

PointCloud unit_square() {
    PointCloud cloud;
    cloud.dim = 2;
    // corners of a side-0.5 square: the dim-1 pair is (0.5, 0.5*sqrt(2))
    cloud.coords = {0.2, 0.2, 0.7, 0.2, 0.7, 0.7, 0.2, 0.7};
    return cloud;
}

std::multiset<std::tuple<int, double, double>> as_multiset(const PersistenceDiagram& dg) {
    std::multiset<std::tuple<int, double, double>> out;
    for (const auto& pt : dg.points) out.insert({pt.dim, pt.birth, pt.death});
    return out;
}

} // namespace

TEST_CASE("boundary of a boundary vanishes over F2") {
    for (uint64_t seed : {3ull, 4ull}) {
        const auto cloud = random_cloud(9, 2, seed);
        const auto fc = ph::build_rips(cloud, Metric::euclidean, 3, 0.8);
        const auto matrix = ph::BoundaryMatrix::from_complex(fc);
        for (size_t j = 0; j < matrix.cols.size(); ++j) {
            // XOR of the boundaries of the faces must cancel completely.
            std::set<uint32_t> acc;
            for (uint32_t face : matrix.cols[j])
                for (uint32_t ff : matrix.cols[face]) {
                    auto it = acc.find(ff);
                    if (it == acc.end())
                        acc.insert(ff);
                    else
                        acc.erase(it);
                }
            CHECK(acc.empty());
        }
    }
}

TEST_CASE("single vertex: one essential class in dimension 0") {
    PointCloud cloud;
    cloud.dim = 2;
    cloud.coords = {0.5, 0.5};
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 1, 1.0);
    const auto dg = ph::diagram(fc);
    REQUIRE(dg.points.size() == 1);
    CHECK(dg.points[0].dim == 0);
    CHECK(dg.points[0].birth == 0.0);
    CHECK(std::isinf(dg.points[0].death));
}

TEST_CASE("two vertices and an edge: the edge kills the younger vertex") {
    PointCloud cloud;
    cloud.dim = 1;
    cloud.coords = {0.2, 0.6};
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 1, 1.0);
    const auto matrix = ph::BoundaryMatrix::from_complex(fc);
    const auto reduced = ph::reduce(matrix, fc);
    REQUIRE(reduced.pairs.size() == 1);
    CHECK(reduced.essentials.size() == 1);
    const auto dg = ph::diagram(fc);
    REQUIRE(dg.points.size() == 2);
    CHECK(dg.points[0].birth == 0.0);
    CHECK(dg.points[0].death == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(std::isinf(dg.points[1].death));
}

TEST_CASE("Betti numbers from the pairing match the rank-nullity oracle") {
    for (uint64_t seed : {10ull, 11ull, 12ull}) {
        const auto cloud = random_cloud(10, 2, seed);
        const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.0);
        const auto reduced = ph::reduce(ph::BoundaryMatrix::from_complex(fc), fc);
        std::vector<double> values;
        for (const auto& e : fc.entries) values.push_back(e.value);
        values.push_back(1.5);
        for (double r : values) {
            const auto betti = ph::betti_numbers_at(fc, reduced, r);
            for (size_t q = 0; q <= 2; ++q)
                CHECK(betti[q] == oracle::betti_rank_nullity(fc, q, r));
        }
    }
}

TEST_CASE("unit square: exactly one dim-1 pair (side, diagonal)") {
    const auto fc = ph::build_rips(unit_square(), Metric::euclidean, 2, 2.0);
    const auto dg = ph::diagram(fc);
    std::vector<ph::DiagramPoint> dim1;
    for (const auto& pt : dg.points)
        if (pt.dim == 1) dim1.push_back(pt);
    REQUIRE(dim1.size() == 1);
    CHECK(dim1[0].birth == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dim1[0].death == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("equilateral triangle: no dim-1 pairs under the diameter filtration") {
    PointCloud cloud;
    cloud.dim = 2;
    cloud.coords = {0.1, 0.1, 0.6, 0.1, 0.35, 0.1 + std::sqrt(3.0) / 4.0};
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.0);
    const auto dg = ph::diagram(fc);
    for (const auto& pt : dg.points) CHECK(pt.dim == 0);
}

TEST_CASE("persistent_betti on the unit square and edge cases") {
    const auto fc = ph::build_rips(unit_square(), Metric::euclidean, 2, 2.0);
    const auto dg = ph::diagram(fc);
    CHECK(ph::persistent_betti(dg, {1, 0.5, 0.6}) == 1);
    CHECK(ph::persistent_betti(dg, {0, 100.0, 100.0}) == 1); // one component survives
    CHECK(ph::persistent_betti(PersistenceDiagram{}, {0, 0.0, 0.0}) == 0);
    CHECK_THROWS(ph::persistent_betti(dg, {0, 2.0, 1.0}));
}

TEST_CASE("diagram route equals the rank-based definition") {
    ph::RngStream rng(ph::derive(100, 1));
    for (int instance = 0; instance < 20; ++instance) {
        const size_t n = 4 + instance % 7;
        const auto cloud = random_cloud(n, 2, 200 + instance);
        const bool cech = instance % 3 == 0;
        const auto fc = cech ? ph::build_cech(cloud, 2, 1.0)
                             : ph::build_rips(cloud, Metric::euclidean, 3, 1.2);
        const auto dg = ph::diagram(fc);
        const int q_cap = ph::diagram_degree_cap(fc);
        for (int trial = 0; trial < 25; ++trial) {
            const int q = static_cast<int>(rng.next_u64() % (q_cap + 1));
            double r = rng.next_uniform(0.0, 1.2);
            double s = rng.next_uniform(0.0, 1.2);
            if (r > s) std::swap(r, s);
            const BettiQuery query{q, r, s};
            CHECK(ph::persistent_betti(dg, query) == ph::persistent_betti_direct(fc, query));
        }
    }
}

TEST_CASE("direct route special cases") {
    const auto cloud = random_cloud(7, 2, 301);
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.0);
    // r = s: ordinary Betti number.
    const auto reduced = ph::reduce(ph::BoundaryMatrix::from_complex(fc), fc);
    for (double r : {0.2, 0.5, 0.9}) {
        const auto betti = ph::betti_numbers_at(fc, reduced, r);
        for (int q : {0, 1})
            CHECK(ph::persistent_betti_direct(fc, {q, r, r}) == betti[q]);
    }
    // truncate at r=0 with distinct points: n singleton components.
    CHECK(ph::persistent_betti_direct(fc, {0, 0.0, 0.0}) == 7);
}

TEST_CASE("monotonicity of the persistent Betti function") {
    const auto cloud = random_cloud(9, 2, 57);
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.5);
    const auto dg = ph::diagram(fc);
    for (int q : {0, 1}) {
        // nondecreasing in r for fixed s
        long prev = -1;
        for (double r = 0.0; r <= 1.0; r += 0.1) {
            const long b = ph::persistent_betti(dg, {q, r, 1.0});
            CHECK(b >= prev);
            prev = b;
        }
        // nonincreasing in s for fixed r
        prev = LONG_MAX;
        for (double s = 0.5; s <= 1.5; s += 0.1) {
            const long b = ph::persistent_betti(dg, {q, 0.5, s});
            CHECK(b <= prev);
            prev = b;
        }
    }
}

TEST_CASE("tie-break invariance: diagrams ignore the input point order") {
    for (auto kind : {ComplexKind::rips, ComplexKind::cech}) {
        const auto cloud = random_cloud(8, 2, 71);
        const auto fc = kind == ComplexKind::rips
                            ? ph::build_rips(cloud, Metric::euclidean, 2, 1.2)
                            : ph::build_cech(cloud, 2, 0.8);
        const auto base = as_multiset(ph::diagram(fc));

        ph::RngStream rng(ph::derive(71, 4));
        for (int shuffle = 0; shuffle < 5; ++shuffle) {
            std::vector<size_t> perm(cloud.size());
            for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            for (size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[rng.next_u64() % i]);
            PointCloud permuted;
            permuted.dim = cloud.dim;
            for (size_t i : perm) permuted.push_back(cloud.point(i));
            const auto pfc = kind == ComplexKind::rips
                                 ? ph::build_rips(permuted, Metric::euclidean, 2, 1.2)
                                 : ph::build_cech(permuted, 2, 0.8);
            CHECK(as_multiset(ph::diagram(pfc)) == base);
        }
    }
}

TEST_CASE("scaling equivariance with power-of-two factors is exact") {
    for (auto kind : {ComplexKind::rips, ComplexKind::cech}) {
        const auto cloud = random_cloud(8, 2, 73);
        const double eta = 0.5; // exact in floating point
        PointCloud scaled;
        scaled.dim = cloud.dim;
        scaled.coords = cloud.coords;
        for (auto& c : scaled.coords) c *= eta;
        const auto base = kind == ComplexKind::rips
                              ? ph::build_rips(cloud, Metric::euclidean, 2, 2.0)
                              : ph::build_cech(cloud, 2, 1.0);
        const auto shrunk = kind == ComplexKind::rips
                                ? ph::build_rips(scaled, Metric::euclidean, 2, 1.0)
                                : ph::build_cech(scaled, 2, 0.5);
        const auto dg_base = ph::diagram(base);
        const auto dg_shrunk = ph::diagram(shrunk);
        REQUIRE(dg_base.points.size() == dg_shrunk.points.size());
        for (size_t i = 0; i < dg_base.points.size(); ++i) {
            CHECK(dg_shrunk.points[i].dim == dg_base.points[i].dim);
            CHECK(dg_shrunk.points[i].birth == dg_base.points[i].birth * eta);
            if (std::isinf(dg_base.points[i].death))
                CHECK(std::isinf(dg_shrunk.points[i].death));
            else
                CHECK(dg_shrunk.points[i].death == dg_base.points[i].death * eta);
        }
    }
}

TEST_CASE("Euler consistency at random filtration values") {
    ph::RngStream rng(ph::derive(5, 5));
    for (uint64_t seed : {81ull, 82ull}) {
        const auto cloud = random_cloud(9, 2, seed);
        const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.1);
        const auto reduced = ph::reduce(ph::BoundaryMatrix::from_complex(fc), fc);
        for (int trial = 0; trial < 20; ++trial) {
            const double r = rng.next_uniform(0.0, 1.2);
            const auto betti = ph::betti_numbers_at(fc, reduced, r);
            long euler_betti = 0, euler_counts = 0;
            for (size_t q = 0; q <= fc.max_dim; ++q) {
                const long sign = q % 2 == 0 ? 1 : -1;
                euler_betti += sign * betti[q];
                euler_counts += sign * static_cast<long>(ph::count_simplices(fc, q, r));
            }
            CHECK(euler_betti == euler_counts);
        }
    }
}

TEST_CASE("clearing optimization yields the same pairing") {
    const auto cloud = random_cloud(10, 2, 91);
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 3, 1.0);
    const auto matrix = ph::BoundaryMatrix::from_complex(fc);
    const auto plain = ph::reduce(matrix, fc, {false});
    const auto cleared = ph::reduce(matrix, fc, {true});
    auto sorted_pairs = [](ph::ReducedMatrix m) {
        std::sort(m.pairs.begin(), m.pairs.end());
        std::sort(m.essentials.begin(), m.essentials.end());
        return m;
    };
    const auto a = sorted_pairs(plain), b = sorted_pairs(cleared);
    CHECK(a.pairs == b.pairs);
    CHECK(a.essentials == b.essentials);
}

TEST_CASE("zero-persistence pairs stay out of the diagram but in the pairing") {
    // Equilateral triangle: the 2-simplex and the last edge enter together.
    PointCloud cloud;
    cloud.dim = 2;
    cloud.coords = {0.1, 0.1, 0.6, 0.1, 0.35, 0.1 + std::sqrt(3.0) / 4.0};
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.0);
    const auto reduced = ph::reduce(ph::BoundaryMatrix::from_complex(fc), fc);
    CHECK(reduced.pairs.size() == 3); // 2 vertex deaths + 1 zero-persistence loop
    const auto dg = ph::diagram(fc);
    CHECK(dg.points.size() == 3); // vertex deaths + essential; the loop is dropped
    for (const auto& pt : dg.points) CHECK(pt.dim == 0);
}

TEST_CASE("geometric lemma gap: identical clouds and a single far vertex") {
    const auto cloud = random_cloud(6, 2, 95);
    const auto fc = ph::build_rips(cloud, Metric::euclidean, 2, 1.5);
    std::vector<uint32_t> identity{0, 1, 2, 3, 4, 5};
    const auto [lhs_same, rhs_same] = ph::geometric_lemma_gap(fc, fc, identity, {0, 0.1, 0.2});
    CHECK(lhs_same == 0);
    CHECK(rhs_same == 0);

    PointCloud one, two;
    one.dim = 2;
    one.coords = {0.1, 0.1};
    two.dim = 2;
    two.coords = {0.1, 0.1, 0.9, 0.9};
    const auto sub = ph::build_rips(one, Metric::euclidean, 1, 1.5);
    const auto super = ph::build_rips(two, Metric::euclidean, 1, 1.5);
    const std::vector<uint32_t> inj{0};
    const auto [lhs, rhs] = ph::geometric_lemma_gap(sub, super, inj, {0, 0.05, 0.05});
    CHECK(lhs == 1);
    CHECK(rhs == 1);

    const std::vector<uint32_t> bad{5};
    CHECK_THROWS(ph::geometric_lemma_gap(sub, super, bad, {0, 0.05, 0.05}));
    const std::vector<uint32_t> dup{0, 0};
    CHECK_THROWS(ph::geometric_lemma_gap(super, super, dup, {0, 0.05, 0.05}));
}

TEST_CASE("geometric lemma holds on random nested pairs") {
    ph::RngStream rng(ph::derive(6, 6));
    for (int trial = 0; trial < 120; ++trial) {
        const size_t n = 3 + rng.next_u64() % 6;
        const auto cloud = random_cloud(n, 2, 400 + trial);
        std::vector<uint32_t> injection;
        for (uint32_t i = 0; i < n; ++i)
            if (rng.next_unit() < 0.6) injection.push_back(i);
        if (injection.empty()) injection.push_back(0);
        PointCloud sub_cloud;
        sub_cloud.dim = 2;
        for (uint32_t ix : injection) sub_cloud.push_back(cloud.point(ix));
        const int q = static_cast<int>(rng.next_u64() % 2);
        double s = rng.next_uniform(0.05, 1.2);
        double r = rng.next_uniform(0.0, s);
        const auto sub = ph::build_rips(sub_cloud, Metric::euclidean, 2, 1.5);
        const auto super = ph::build_rips(cloud, Metric::euclidean, 2, 1.5);
        const auto [lhs, rhs] = ph::geometric_lemma_gap(sub, super, injection, {q, r, s});
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("diagram CSV round trip with infinite deaths") {
    const auto fc = ph::build_rips(unit_square(), Metric::euclidean, 2, 2.0);
    const auto dg = ph::diagram(fc);
    std::stringstream buffer;
    ph::save_diagram_csv(buffer, dg);
    const auto back = ph::load_diagram_csv(buffer);
    CHECK(as_multiset(back) == as_multiset(dg));
    CHECK(buffer.str().find("inf") != std::string::npos);
}

TEST_CASE("degree caps: cech stops at p-1, rips at max_dim-1") {
    const auto cloud = random_cloud(8, 2, 97);
    const auto cech = ph::build_cech(cloud, 3, 0.9);
    CHECK(ph::diagram_degree_cap(cech) == 1); // p - 1
    const auto rips = ph::build_rips(cloud, Metric::euclidean, 3, 0.9);
    CHECK(ph::diagram_degree_cap(rips) == 2); // max_dim - 1
    for (const auto& pt : ph::diagram(cech).points) CHECK(pt.dim <= 1);
}
