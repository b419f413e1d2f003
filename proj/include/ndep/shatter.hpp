#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ndep/errors.hpp"
#include "ndep/gf.hpp"
#include "ndep/linalg.hpp"
#include "ndep/opg.hpp"

namespace ndep {
namespace shatter {

/* Finite semantics of phi(x; y_1,...,y_n): n parameter parts with index
   ranges 0..parts[i]-1, and one n-dimensional bit tensor per witness
   (row-major, last coordinate fastest). ids name the witnesses in reports. */
struct WitnessedRelation {
  std::vector<int> parts;
  std::vector<long long> ids;
  std::vector<std::vector<uint8_t>> tensors;

  int n() const { return static_cast<int>(parts.size()); }
  long long cell_count() const;
  size_t flat(const std::vector<int>& idx) const;
  void validate() const;  // throws DomainError
};

/* One index subset per part, sorted strictly ascending. */
struct Grid {
  std::vector<std::vector<int>> subsets;
  long long cells() const;
};

/* True iff every subset of the grid's cell product is the trace of some
   witness. Traces are collected as canonical bitsets over the cells in
   odometer order; the count is compared against 2^{cells}. With no witnesses
   nothing is shattered, not even the empty grid. */
bool shatters(const WitnessedRelation& rel, const Grid& g);

struct MaxGridResult {
  /* Largest d with some shattered d x ... x d grid inside the caps; -1 when
     not even the empty grid is shattered (empty witness set). */
  int side = -1;
  Grid grid;  // lexicographically least witness grid for that side
};

/* Exhaustive over square grids, largest side first, subsets in lexicographic
   order per part; sides whose 2^{d^n} exceeds the witness count are skipped
   up front (cardinality bound). */
MaxGridResult max_shattered_grid(const WitnessedRelation& rel, const std::vector<int>& caps);

/* psi(y1; y2, y3) := R(f_1(y_{s_1}, y_{t_1}), ..., f_d(y_{s_d}, y_{t_d})) with
   each (s_i, t_i) one of (1,2), (1,3), (2,3). The result has witness role y1
   and parameter parts y2, y3, all ranging over M = {0..msize-1}; base is the
   d-dimensional tensor of R over M^d (row-major), tables[i] is the function
   table of f_i (row-major over M^2). */
WitnessedRelation compose_relation(const std::vector<uint8_t>& base, int arity, int msize,
                                   const std::vector<std::pair<int, int>>& coords,
                                   const std::vector<std::vector<int>>& tables);

/* V = K^m with the form [x,y] = x^T G y for a non-degenerate Gram matrix G,
   symmetric or alternating per the flag. */
struct BilinearSpace {
  algebra::FieldPtr field;
  int m = 0;
  algebra::Mat<algebra::GFElem> gram;
  bool alternating = false;
};

/* Validates non-degeneracy and that the flag matches the matrix shape
   (alternating: zero diagonal and G^T = -G; symmetric: G^T = G). */
BilinearSpace make_space(algebra::FieldPtr field, algebra::Mat<algebra::GFElem> gram,
                         bool alternating);
BilinearSpace identity_space(const algebra::FieldPtr& field, int m);
/* Block-diagonal [[0,1],[-1,0]] pairs; m must be even. */
BilinearSpace symplectic_space(const algebra::FieldPtr& field, int m);

algebra::GFElem pair_with(const BilinearSpace& s, const std::vector<algebra::GFElem>& x,
                          const std::vector<algebra::GFElem>& y);

struct Encoded {
  std::vector<std::vector<algebra::GFElem>> a;
  std::vector<std::vector<algebra::GFElem>> b;
};

/* a_1..a_d linearly independent (standard basis vectors) and b_1..b_d solving
   [a_i, b_j] = C_{ij} exactly, one Gram-matrix linear system per column of C;
   the identity is rechecked after the solve. */
Encoded bilinear_encode(const BilinearSpace& s, const algebra::Mat<algebra::GFElem>& c);

struct BilinearDemoReport {
  long long q = 0;
  int m = 0;
  int d = 0;
  algebra::Mat<algebra::GFElem> c;
  Encoded vectors;
  long long witness_count = 0;  // 2^q subset witnesses
  bool entries_distinct = false;
  bool shattered = false;
  bool passed() const { return entries_distinct && shattered; }
};

/* Encodes C_{ij} = the (i*d+j)-th field element (pairwise distinct, needs
   d^2 <= q), takes every subset S of K as a witness acting by [y,z] in S, and
   checks that the full d x d grid is shattered. */
BilinearDemoReport bilinear_shatter_demo(const BilinearSpace& s, int d);

struct RamseyResult {
  int l = 0, m = 0, n = 0;
  int R = 0;
  /* A coloring of (R-1)^n with no monochromatic l-box, flat odometer order
     (empty when R-1 = 0, where boxes cannot fit for l >= 1). */
  std::vector<int> bad_coloring;
};

inline constexpr long long kDefaultRamseyBudget = 50'000'000;

/* Least R such that every f: R^n -> m colors some s_0 x ... x s_{n-1} with
   |s_i| >= l monochromatically. Exhaustive search over colorings, pruned by
   color first-occurrence canonicalization and axis permutations; DFS branches
   die as soon as a monochromatic box is complete. Throws BudgetExceeded with
   the verified bounds when the node budget runs out. */
RamseyResult ramsey_partite(int l, int m, int n, long long budget = kDefaultRamseyBudget);

/* Independent recheck helper: does f (flat, side^n cells) admit a
   monochromatic l-box? */
bool has_mono_box(const std::vector<int>& coloring, int side, int n, int l);

struct BlindPair {
  std::array<int, 3> g;  // per-part vertex indices, an edge
  std::array<int, 3> h;  // same binary-atom pattern, a non-edge
};

/* Searches all pairs of one-per-part triples of H (n = 3) for an edge and a
   non-edge with identical quantifier-free binary-atom patterns: global order
   comparisons, equalities, part predicates, and every supplied binary
   relation evaluated on all ordered pairs from the triple. Relations are
   given as ordered pairs of global vertex ids. Returns the lexicographically
   least pair (g then h), or nullopt. */
std::optional<BlindPair> find_lowarity_blind_pair(
    const opg::OrderedPartiteHypergraph& h,
    const std::vector<std::vector<std::pair<int, int>>>& binary_relations);

}  // namespace shatter
}  // namespace ndep
