#pragma once

#include <span>
#include <vector>

namespace ph {

struct Ball {
    std::vector<double> center;
    double radius = -1.0; // negative: empty ball

    bool contains(std::span<const double> x, double slack = 1e-10) const;
};

// Smallest enclosing Euclidean ball, recursive Welzl procedure with support
// sets of at most p+1 points. Exact duplicates are collapsed first; the
// input is canonicalized (lexicographic point order) so the result does not
// depend on point order, which makes Cech filtration values invariant under
// relabeling of the cloud.
//
// points: row-major k x p.
Ball min_enclosing_ball(std::span<const double> points, size_t p);

} // namespace ph
