#include "ndep/moore.hpp"

namespace ndep {
namespace moore {

std::vector<GFElem> artin_schreier_roots(const GFElem& a) {
  /* wp is F_p-linear on F_{p^k} viewed as F_p^k; solve the linear system by
     elimination over F_p on the k x k matrix of wp applied to basis vectors. */
  const FieldPtr field = a.field();
  int p = field->p(), k = field->k();
  std::vector<std::vector<int>> cols;
  for (int i = 0; i < k; ++i) {
    std::vector<int> e(static_cast<size_t>(k), 0);
    e[static_cast<size_t>(i)] = 1;
    cols.push_back(algebra::wp(field->from_coeffs(e)).coeffs());
  }
  /* Augmented system M x = a over F_p. */
  std::vector<std::vector<int>> m(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k + 1), 0));
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) m[static_cast<size_t>(r)][static_cast<size_t>(c)] = cols[static_cast<size_t>(c)][static_cast<size_t>(r)];
    m[static_cast<size_t>(r)][static_cast<size_t>(k)] = a.coeffs()[static_cast<size_t>(r)];
  }
  auto inv_mod = [p](int v) {
    int r = 1;
    long long b = v, e = p - 2;
    while (e > 0) {
      if (e & 1) r = static_cast<int>(r * b % p);
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::vector<int> pivot_col(static_cast<size_t>(k), -1);
  int rank = 0;
  for (int c = 0; c < k && rank < k; ++c) {
    int pr = -1;
    for (int r = rank; r < k; ++r)
      if (m[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[static_cast<size_t>(pr)], m[static_cast<size_t>(rank)]);
    int inv = inv_mod(m[static_cast<size_t>(rank)][static_cast<size_t>(c)]);
    for (int j = 0; j <= k; ++j)
      m[static_cast<size_t>(rank)][static_cast<size_t>(j)] =
          static_cast<int>(static_cast<long long>(m[static_cast<size_t>(rank)][static_cast<size_t>(j)]) * inv % p);
    for (int r = 0; r < k; ++r) {
      if (r == rank) continue;
      int f = m[static_cast<size_t>(r)][static_cast<size_t>(c)];
      if (f == 0) continue;
      for (int j = 0; j <= k; ++j) {
        long long v = m[static_cast<size_t>(r)][static_cast<size_t>(j)] -
                      static_cast<long long>(f) * m[static_cast<size_t>(rank)][static_cast<size_t>(j)] % p;
        m[static_cast<size_t>(r)][static_cast<size_t>(j)] = static_cast<int>(((v % p) + p) % p);
      }
    }
    pivot_col[static_cast<size_t>(rank)] = c;
    ++rank;
  }
  for (int r = rank; r < k; ++r)
    if (m[static_cast<size_t>(r)][static_cast<size_t>(k)] != 0) return {};  // inconsistent: no roots

  /* Particular solution with free coordinates zero. */
  std::vector<int> x0(static_cast<size_t>(k), 0);
  for (int r = 0; r < rank; ++r)
    x0[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] = m[static_cast<size_t>(r)][static_cast<size_t>(k)];
  GFElem base = field->from_coeffs(x0);

  /* Roots form a coset of ker(wp) = F_p. */
  std::vector<GFElem> roots;
  for (int c = 0; c < p; ++c) {
    std::vector<int> cv(static_cast<size_t>(k), 0);
    cv[0] = c;
    GFElem r = base + field->from_coeffs(cv);
    if (!(algebra::wp(r) == a)) throw ShapeError("Artin-Schreier solver produced a non-root");
    roots.push_back(r);
  }
  return roots;
}

}  // namespace moore
}  // namespace ndep
