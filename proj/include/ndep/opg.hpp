#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ndep/errors.hpp"

namespace ndep {
namespace opg {

/* Ordered n-partite hypergraph. Part i has parts[i] vertices named
   0..parts[i]-1 in their part order; the global linear order places all of
   part i before part i+1, so the global id of vertex v in part i is
   offset(i) + v.  Edges take exactly one vertex per part and are stored as
   index tuples (entry i = the part-i vertex), kept sorted and deduplicated. */
struct OrderedPartiteHypergraph {
  std::vector<int> parts;
  std::vector<std::vector<int>> edges;

  int n() const { return static_cast<int>(parts.size()); }
  long long vertex_count() const;
  long long offset(int part) const;
  bool has_edge(const std::vector<int>& e) const;  // binary search, e validated
  void normalize();                                // sort + dedupe edges
  void validate() const;                           // throws DomainError
};

/* Every candidate edge (lexicographic order) is included independently with
   probability num/den, drawn as mt19937_64() % den < num. Reproducible. */
OrderedPartiteHypergraph random_opg(const std::vector<int>& sizes, long long num,
                                    long long den, uint64_t seed);

/* One extension demand: part j, bounds b0 < b1 inside part j, and disjoint
   link/nolink sets of cross-tuples (one vertex per part != j, ascending part
   order). Satisfied by b in part j with b0 < b < b1, an edge through b and
   every link tuple, and no edge through b and any nolink tuple. */
struct ExtensionFailure {
  int part = 0;
  int b0 = 0, b1 = 0;
  std::vector<std::vector<int>> link;
  std::vector<std::vector<int>> nolink;
  bool betweenness = false;  // no vertex strictly between b0 and b1 at all
};

struct ExtensionReport {
  int k = 0;
  long long demands = 0;
  long long satisfied = 0;
  long long betweenness_failures = 0;
  long long linkage_failures = 0;
  std::vector<ExtensionFailure> failures;  // canonical demand order
  bool all_satisfied() const { return demands == satisfied; }
};

/* Checks every demand with |link| + |nolink| <= k. Finite parts always fail
   the density clause somewhere, so this grades satisfaction rather than
   deciding a model check; failures carry whether betweenness or linkage broke. */
ExtensionReport check_extension(const OrderedPartiteHypergraph& h, int k);

/* Per-part inclusive index intervals [lo, hi]. */
struct Box {
  std::vector<std::pair<int, int>> ranges;
};

Box full_box(const OrderedPartiteHypergraph& h);

/* Order/part-preserving injection with exact edge agreement on every
   one-per-part tuple, vertices inside the box. Returns the lexicographically
   least embedding (per-part index lists, part-major), or nullopt. */
std::optional<std::vector<std::vector<int>>> find_induced_copy(
    const OrderedPartiteHypergraph& h, const OrderedPartiteHypergraph& pattern,
    const Box& box);

/* Per-part vertex maps of an embedding source -> target. */
struct Embedding {
  std::vector<std::vector<int>> map;
};

/* True iff map is strictly increasing per part, in range, and edge/non-edge
   exact on all one-per-part tuples of the source. */
bool is_induced_embedding(const OrderedPartiteHypergraph& sub,
                          const OrderedPartiteHypergraph& sup, const Embedding& e);

struct Amalgam {
  OrderedPartiteHypergraph h;
  Embedding a_map;
  Embedding b_map;
};

/* Free amalgam of a and b over c: identify the two images of c, keep all a-
   and b-edges, add nothing else. Within each part the order interleaves each
   gap between consecutive c-images as (a-only vertices, then b-only vertices).
   Both factors are re-verified to embed induced into the result. */
Amalgam amalgamate(const OrderedPartiteHypergraph& a, const OrderedPartiteHypergraph& b,
                   const OrderedPartiteHypergraph& c, const Embedding& c_in_a,
                   const Embedding& c_in_b);

}  // namespace opg
}  // namespace ndep
