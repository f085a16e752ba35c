#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ph/geometry.hpp"

namespace ph {

enum class ComplexKind { rips, cech };

const char* complex_kind_name(ComplexKind k);

// Hard cap on simplex vertex count (max_dim <= 7); desk-scale complexes
// never get close, and it keeps simplex storage flat.
inline constexpr size_t kMaxSimplexVertices = 8;

struct Simplex {
    std::array<uint32_t, kMaxSimplexVertices> v{};
    uint8_t dim = 0; // |vertices| - 1

    size_t vertex_count() const { return size_t(dim) + 1; }
    std::span<const uint32_t> vertices() const { return {v.data(), vertex_count()}; }

    friend bool operator==(const Simplex& a, const Simplex& b) {
        return a.dim == b.dim &&
               std::equal(a.v.begin(), a.v.begin() + long(a.vertex_count()), b.v.begin());
    }
};

// Filtered simplicial complex: face-closed, value-monotone, sorted by the
// total order (value, dim, lexicographic vertices).
struct FilteredComplex {
    struct Entry {
        double value = 0.0;
        Simplex simplex;
    };

    ComplexKind kind = ComplexKind::rips;
    size_t max_dim = 0;
    double max_radius = 0.0;
    size_t n_points = 0;
    size_t ambient_dim = 1;
    std::vector<Entry> entries;

    size_t size() const { return entries.size(); }
};

struct BuildBudget {
    size_t max_simplices = 5'000'000;
};

// Vietoris-Rips: simplex value = diameter (max pairwise distance). Note the
// filtration parameter is the diameter itself, not half of it: the edge
// {i,j} appears at r = d(x_i, x_j).
FilteredComplex build_rips(const PointCloud& cloud, Metric metric, size_t max_dim,
                           double max_radius, const BuildBudget& budget = {});

// Cech: simplex value = radius of the minimal enclosing ball. Euclidean only.
FilteredComplex build_cech(const PointCloud& cloud, size_t max_dim, double max_radius,
                           const BuildBudget& budget = {});

// #{sigma : dim = j, value <= r}.
size_t count_simplices(const FilteredComplex& fc, size_t j, double r);

// Same, restricted to simplices with at least one vertex in vertex_set.
size_t count_simplices_localized(const FilteredComplex& fc, size_t j, double r,
                                 std::span<const uint32_t> vertex_set);

// Same complex with every filtration value multiplied by eta > 0.
FilteredComplex rescale_complex(const FilteredComplex& fc, double eta);

// Total order used everywhere: (value, dim, lex vertices).
bool entry_less(const FilteredComplex::Entry& a, const FilteredComplex::Entry& b);

// One line per simplex: "value v0 v1 ... vk", in filtration order.
// Round-trips exactly (values are written with full precision).
void save_complex(std::ostream& out, const FilteredComplex& fc);
FilteredComplex load_complex(std::istream& in);

// Test/validation support: verifies face-closure, monotone values and sorted
// order; throws std::logic_error on violation.
void validate_complex(const FilteredComplex& fc);

} // namespace ph
