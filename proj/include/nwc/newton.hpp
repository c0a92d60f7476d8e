#pragma once

// Exact geometry of the Newton polytope of a polynomial: the convex hull of
// its exponent support, the face lattice, supporting faces of linear
// functionals (argmin convention: d(q) = min over the polytope of <q, .>),
// the subset of faces reachable with some q having a negative coordinate
// (the boundary "at infinity" that governs compactness of the zero set),
// and exact lattice-point enumeration for the monomial comparison sums.
//
// Everything is exact rational/integer arithmetic.  Algorithms are
// exhaustive by design and guarded by scale limits (n <= 6, support <= 64):
// inputs of interest are small, and exactness beats asymptotics here.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwc/linalg.hpp"
#include "nwc/polynomial.hpp"

namespace nwc {

inline constexpr int kMaxVariables = 6;
inline constexpr std::size_t kMaxSupportPoints = 64;
inline constexpr std::uint64_t kMaxLatticeBox = 1000000;

struct Facet {
    IntVec normal;  // primitive; <normal, x> >= offset on the polytope
    Int offset;
};

struct AffineEquality {
    IntVec normal;  // primitive; <normal, x> == offset on the polytope
    Int offset;
};

struct NewtonPolytope {
    int n = 0;                              // ambient dimension
    int dim = 0;                            // affine dimension of the hull
    std::vector<ExponentVec> support;       // all exponents of f, sorted
    std::vector<ExponentVec> vertices;      // extreme points, sorted
    std::vector<Facet> facets;              // empty when dim == 0
    std::vector<AffineEquality> affine_hull;  // empty when dim == n
};

struct Face {
    std::vector<int> vertex_indices;  // sorted indices into polytope.vertices
    int dim = 0;
    bool improper = false;      // the whole polytope viewed as a face
    bool has_witness = true;    // false only for the improper face of a
                                // full-dimensional polytope
    IntVec witness_normal;      // q with argmin face == this face
    Int offset;                 // d(q) = min <q, .> for that witness
    bool at_infinity = false;   // some q with min_j q_j < 0 selects this face
};

// Hull of the support of f.  Rejects the zero polynomial (its hull is empty)
// and inputs beyond the scale limits.
NewtonPolytope newton_polytope(const Polynomial& f);

// d(q) = min over vertices of <q, v>, plus the face where the minimum is
// attained.  q may be rational; the face's stored witness is q scaled to a
// primitive integer vector, with the offset scaled along.  The at_infinity
// flag is set from this q alone (min_j q_j < 0); enumerate_faces +
// boundary_at_infinity decide the face-level property exactly.
std::pair<Rat, Face> supporting_face(const NewtonPolytope& p, const RatVec& q);

// The full face lattice except the empty face, the improper face included,
// sorted by (dim, vertex_indices).  Proper faces carry a witness normal
// (sum of the normals of the facets containing them); the improper face
// carries one only when dim < n (an affine-hull normal works there).
std::vector<Face> enumerate_faces(const NewtonPolytope& p);

// Sets at_infinity on each face: true iff some q with min_j q_j < 0 has
// exactly this face as its argmin.  Decided by an exact feasibility program
// per face and candidate negative coordinate; on success the feasible q
// (scaled primitive) replaces the face's witness.
void boundary_at_infinity(const NewtonPolytope& p, std::vector<Face>& faces);

// Integer points of the polytope / of a face, by exact filtering of the
// bounding box (guarded against boxes over ~1e6 candidates).
std::vector<ExponentVec> lattice_points(const NewtonPolytope& p);
std::vector<ExponentVec> lattice_points(const NewtonPolytope& p, const Face& face);

// (1/#lattice points, 1): the constants relating the vertex-only monomial
// sum to the full lattice monomial sum.
std::pair<Rat, Rat> comparability_constants(const NewtonPolytope& p);

// sum over the given exponents alpha of |x^alpha|, exactly.
Rat abs_monomial_sum(const std::vector<ExponentVec>& exponents, const std::vector<Rat>& x);

// Terms of f supported on the face (membership via the witness equality
// <q, alpha> == d; for the improper face, f itself).
Polynomial face_polynomial(const Polynomial& f, const NewtonPolytope& p, const Face& face);

// {"dim", "vertices", "facets", "faces"}; faces reference vertices by index
// and carry q/d (null when the face has no witness) and at_infinity.
nlohmann::ordered_json polytope_to_json(const NewtonPolytope& p,
                                        const std::vector<Face>& faces);

// 64-bit FNV-1a of the canonical JSON dump, as fixed-width hex.
std::string geometry_digest(const NewtonPolytope& p, const std::vector<Face>& faces);

// Deterministic SVG rendering for n == 2: lattice grid, hull, support
// points, and the at-infinity faces highlighted.
std::string polytope_to_svg(const NewtonPolytope& p, const std::vector<Face>& faces);

}  // namespace nwc
