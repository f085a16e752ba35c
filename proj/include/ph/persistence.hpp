#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ph/filtration.hpp"

namespace ph {

inline constexpr double kInfiniteDeath = std::numeric_limits<double>::infinity();

// Sparse boundary matrix over F2. Column j lists the indices of the
// (dim-1)-faces of simplex j, ascending; vertices have empty columns.
struct BoundaryMatrix {
    std::vector<std::vector<uint32_t>> cols;

    static BoundaryMatrix from_complex(const FilteredComplex& fc);
};

struct ReduceOptions {
    // Clearing skips columns already known to be positive (they appeared as
    // pivots in dimension above). Off by default: the plain left-to-right
    // reduction is the one the oracles mirror; clearing is for benchmarks.
    bool clearing = false;
};

// Outcome of column reduction: one (birth simplex, death simplex) pair per
// negative column, zero-persistence pairs included; essential simplices are
// the positive columns never killed.
struct ReducedMatrix {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    std::vector<uint32_t> essentials;
};

ReducedMatrix reduce(const BoundaryMatrix& matrix, const FilteredComplex& fc,
                     const ReduceOptions& options = {});

struct DiagramPoint {
    double birth = 0.0;
    double death = kInfiniteDeath;
    int dim = 0;
};

// Multiset of (birth, death, dim) with birth < death; sorted by
// (dim, birth, death).
struct PersistenceDiagram {
    std::vector<DiagramPoint> points;
};

// Homology degrees reported by diagram(): Cech stops at ambient_dim - 1
// (no higher cycles exist in R^p), Rips at max_dim - 1 (deaths in higher
// degree are invisible under the dimension cap).
int diagram_degree_cap(const FilteredComplex& fc);

PersistenceDiagram diagram(const FilteredComplex& fc, const ReduceOptions& options = {});

// Diagram from a precomputed pairing, same filtering rules.
PersistenceDiagram diagram_from_pairing(const FilteredComplex& fc, const ReducedMatrix& reduced);

struct BettiQuery {
    int q = 0;
    double r = 0.0;
    double s = 0.0;
};

// beta_q^{r,s} = #{(b,d,q) in diagram : b <= r, d > s}. Throws on r > s.
long persistent_betti(const PersistenceDiagram& dg, const BettiQuery& query);

// Same quantity straight from its definition by F2 rank computations on the
// truncated complexes: dim Z_q(K(r)) - dim(B_q(K(s)) cap Z_q(K(r))).
// Independent of the reduction/pairing path; serves as its oracle.
long persistent_betti_direct(const FilteredComplex& fc, const BettiQuery& query);

// Ordinary Betti number of the r-truncation, from the full pairing
// (all degrees, truncation-essentials included). Used by Euler checks.
std::vector<long> betti_numbers_at(const FilteredComplex& fc, const ReducedMatrix& reduced,
                                   double r);

// Geometric Lemma instance: X embeds into Y via `injection` (X point i is
// Y point injection[i], coordinates must match). Returns
// (|beta(Y) - beta(X)|, added j-simplex count for j = q, q+1 at value <= s).
std::pair<long, long> geometric_lemma_gap(const FilteredComplex& sub,
                                          const FilteredComplex& super,
                                          std::span<const uint32_t> injection,
                                          const BettiQuery& query);

// CSV: header "dim,birth,death", death may be "inf".
void save_diagram_csv(std::ostream& out, const PersistenceDiagram& dg);
PersistenceDiagram load_diagram_csv(std::istream& in);

} // namespace ph
