#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ndep/errors.hpp"
#include "ndep/gf.hpp"

namespace ndep {
namespace chaincond {

/* F_p-subspace of F_{p^k} (coordinates in the power basis of the canonical
   modulus root), held as a reduced row echelon basis so equal subspaces have
   equal representations. */
struct SubspaceSubgroup {
  int p = 0;
  int k = 0;
  std::vector<std::vector<int>> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  bool contains(const std::vector<int>& v) const;
  bool contains(const algebra::GFElem& x) const;
  bool operator==(const SubspaceSubgroup& o) const {
    return p == o.p && k == o.k && basis == o.basis;
  }
  bool operator!=(const SubspaceSubgroup& o) const { return !(*this == o); }
};

SubspaceSubgroup span_of(int p, int k, const std::vector<std::vector<int>>& vectors);
SubspaceSubgroup whole_space(int p, int k);
/* Orthogonal complement under the standard dot product. */
SubspaceSubgroup complement(const SubspaceSubgroup& s);
/* Joint kernel: dual of the sum of the duals. */
SubspaceSubgroup intersect(const SubspaceSubgroup& u, const SubspaceSubgroup& w);

/* The F_p-subspace b * wp(F_{p^k}); wp has kernel F_p, so the dimension is
   always k-1. b = 0 is a domain error. */
SubspaceSubgroup wp_image_subgroup(const algebra::GFElem& b);

/* Parameter-tuple -> subgroup constructors for the family arrays. */
enum class FamilyKind {
  kProduct,         // (b_0 * ... * b_{n-1}) * wp(K)
  kFrobeniusTwist,  // phi(b_0 * ... * b_{n-1}) * wp(K)
  kAmbient,         // the whole group, constant in the parameters
};

/* Array (b_{i,j} : i < n, j < d) of nonzero parameters together with the
   subgroup families evaluated on its rows; H^t_eta is family t applied to
   (b_{0,eta_0}, ..., b_{n-1,eta_{n-1}}). */
struct FamilyArray {
  algebra::FieldPtr field;
  int n = 0;
  int d = 0;
  std::vector<std::vector<algebra::GFElem>> params;  // [i][j]
  std::vector<FamilyKind> families;                  // t entries, 1 <= t < k

  SubspaceSubgroup subgroup(int t, const std::vector<int>& eta) const;
  void validate() const;
};

/* Lexicographically smallest nu in d^n with, for every family t,
   intersection over eta != nu  ==  intersection over all eta
   (the empty intersection is the whole group), or nullopt. */
std::optional<std::vector<int>> find_redundant(const FamilyArray& fa);

struct ThresholdResult {
  int d = 0;  // least width where every sampled array had a redundant index
  bool found_failing = false;
  std::vector<std::vector<algebra::GFElem>> failing_params;  // an array failing at d-1
};

/* Empirical estimate: widths d = 1, 2, ... are sampled with `trials` random
   nonzero parameter arrays each until every trial admits a redundant index.
   Throws BudgetExceeded past max_d. */
ThresholdResult baldwin_saxl_threshold(const algebra::FieldPtr& field, int n,
                                       const std::vector<FamilyKind>& families, int trials,
                                       uint64_t seed, int max_d = 16);

}  // namespace chaincond
}  // namespace ndep
