#include "ndep/shatter.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace ndep {
namespace shatter {

using algebra::GFElem;
using algebra::Mat;

long long WitnessedRelation::cell_count() const {
  long long c = 1;
  for (int d : parts) {
    if (d < 0) throw DomainError("negative part size");
    c *= d;
  }
  return c;
}

size_t WitnessedRelation::flat(const std::vector<int>& idx) const {
  size_t f = 0;
  for (size_t i = 0; i < parts.size(); ++i)
    f = f * static_cast<size_t>(parts[i]) + static_cast<size_t>(idx[i]);
  return f;
}

void WitnessedRelation::validate() const {
  if (parts.empty()) throw DomainError("relation needs at least one parameter part");
  long long c = cell_count();
  if (ids.size() != tensors.size())
    throw DomainError("witness ids and tensors must be parallel");
  for (const auto& t : tensors)
    if (static_cast<long long>(t.size()) != c)
      throw DomainError("witness tensor size does not match the part sizes");
}

long long Grid::cells() const {
  long long c = 1;
  for (const auto& s : subsets) c *= static_cast<long long>(s.size());
  return c;
}

namespace {

void check_grid(const WitnessedRelation& rel, const Grid& g) {
  if (static_cast<int>(g.subsets.size()) != rel.n())
    throw DomainError("grid must pick one subset per part");
  for (size_t i = 0; i < g.subsets.size(); ++i) {
    int prev = -1;
    for (int v : g.subsets[i]) {
      if (v <= prev) throw DomainError("grid subsets must be sorted strictly ascending");
      if (v < 0 || v >= rel.parts[i]) throw DomainError("grid index out of range");
      prev = v;
    }
  }
}

/* Flat tensor indices of the grid's cells, odometer order over the subsets. */
std::vector<size_t> grid_cells(const WitnessedRelation& rel, const Grid& g) {
  std::vector<size_t> cells;
  int n = rel.n();
  std::vector<size_t> pos(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = g.subsets[static_cast<size_t>(i)][pos[static_cast<size_t>(i)]];
    cells.push_back(rel.flat(idx));
    int i = n - 1;
    while (i >= 0) {
      if (++pos[static_cast<size_t>(i)] < g.subsets[static_cast<size_t>(i)].size()) break;
      pos[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return cells;
}

}  // namespace

bool shatters(const WitnessedRelation& rel, const Grid& g) {
  rel.validate();
  check_grid(rel, g);
  if (rel.tensors.empty()) return false;  // no witness traces any subset, not even {}
  long long c = g.cells();
  if (c == 0) return true;
  /* 2^c distinct traces are required and at most |W| exist; beyond 62 cells
     no in-memory witness set can reach that. */
  if (c > 62) return false;
  uint64_t want = uint64_t{1} << c;
  if (rel.tensors.size() < want) return false;
  std::vector<size_t> cells = grid_cells(rel, g);
  std::set<uint64_t> traces;
  for (const auto& t : rel.tensors) {
    uint64_t tr = 0;
    for (size_t b = 0; b < cells.size(); ++b)
      if (t[cells[b]]) tr |= uint64_t{1} << b;
    traces.insert(tr);
    if (traces.size() == want) return true;
  }
  return false;
}

namespace {

/* First/next size-d subset of 0..limit-1 in lexicographic order. */
bool next_combination(std::vector<int>& comb, int limit) {
  int d = static_cast<int>(comb.size());
  for (int i = d - 1; i >= 0; --i) {
    if (comb[static_cast<size_t>(i)] < limit - (d - i)) {
      ++comb[static_cast<size_t>(i)];
      for (int j = i + 1; j < d; ++j)
        comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_combination(int d) {
  std::vector<int> c(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = i;
  return c;
}

}  // namespace

MaxGridResult max_shattered_grid(const WitnessedRelation& rel, const std::vector<int>& caps) {
  rel.validate();
  if (static_cast<int>(caps.size()) != rel.n())
    throw DomainError("one cap per part expected");
  int n = rel.n();
  int maxd = rel.parts[0];
  for (int i = 0; i < n; ++i) maxd = std::min(maxd, std::min(caps[static_cast<size_t>(i)], rel.parts[static_cast<size_t>(i)]));
  MaxGridResult best;
  if (rel.tensors.empty()) return best;  // side -1: nothing shattered at all
  best.side = 0;
  best.grid.subsets.assign(static_cast<size_t>(n), {});
  for (int d = maxd; d >= 1; --d) {
    /* Cardinality bound: d^n cells demand 2^{d^n} traces. */
    long long cells = 1;
    bool too_big = false;
    for (int i = 0; i < n && !too_big; ++i) {
      cells *= d;
      if (cells > 62) too_big = true;
    }
    if (too_big || rel.tensors.size() < (uint64_t{1} << cells)) continue;
    /* Odometer over per-part combinations, part-major, so the first hit is
       the lexicographically least witness grid. */
    Grid g;
    g.subsets.assign(static_cast<size_t>(n), {});
    for (int i = 0; i < n; ++i) g.subsets[static_cast<size_t>(i)] = first_combination(d);
    while (true) {
      if (shatters(rel, g)) {
        best.side = d;
        best.grid = g;
        return best;
      }
      int i = n - 1;
      while (i >= 0) {
        if (next_combination(g.subsets[static_cast<size_t>(i)], rel.parts[static_cast<size_t>(i)])) break;
        g.subsets[static_cast<size_t>(i)] = first_combination(d);
        --i;
      }
      if (i < 0) break;
    }
  }
  return best;
}

WitnessedRelation compose_relation(const std::vector<uint8_t>& base, int arity, int msize,
                                   const std::vector<std::pair<int, int>>& coords,
                                   const std::vector<std::vector<int>>& tables) {
  if (arity < 1) throw DomainError("base relation needs positive arity");
  if (msize < 1) throw DomainError("base domain must be nonempty");
  size_t want = 1;
  for (int i = 0; i < arity; ++i) want *= static_cast<size_t>(msize);
  if (base.size() != want) throw DomainError("base tensor size does not match msize^arity");
  if (static_cast<int>(coords.size()) != arity || static_cast<int>(tables.size()) != arity)
    throw DomainError("arity mismatch: one coordinate pair and one table per base slot");
  for (const auto& [s, t] : coords)
    if (!((s == 1 && t == 2) || (s == 1 && t == 3) || (s == 2 && t == 3)))
      throw DomainError("coordinate pairs must be (1,2), (1,3) or (2,3)");
  for (const auto& tab : tables) {
    if (tab.size() != static_cast<size_t>(msize) * static_cast<size_t>(msize))
      throw DomainError("function table must cover M^2");
    for (int v : tab)
      if (v < 0 || v >= msize) throw DomainError("function table value out of range");
  }

  WitnessedRelation rel;
  rel.parts = {msize, msize};
  size_t plane = static_cast<size_t>(msize) * static_cast<size_t>(msize);
  for (int w = 0; w < msize; ++w) {
    std::vector<uint8_t> tensor(plane, 0);
    int roles[4] = {0, w, 0, 0};
    for (int y2 = 0; y2 < msize; ++y2) {
      roles[2] = y2;
      for (int y3 = 0; y3 < msize; ++y3) {
        roles[3] = y3;
        size_t idx = 0;
        for (int i = 0; i < arity; ++i) {
          int u = roles[coords[static_cast<size_t>(i)].first];
          int v = roles[coords[static_cast<size_t>(i)].second];
          int arg = tables[static_cast<size_t>(i)][static_cast<size_t>(u) * msize + v];
          idx = idx * static_cast<size_t>(msize) + static_cast<size_t>(arg);
        }
        tensor[static_cast<size_t>(y2) * msize + y3] = base[idx];
      }
    }
    rel.ids.push_back(w);
    rel.tensors.push_back(std::move(tensor));
  }
  return rel;
}

BilinearSpace make_space(algebra::FieldPtr field, Mat<GFElem> gram, bool alternating) {
  if (gram.rows() != gram.cols()) throw DomainError("Gram matrix must be square");
  int m = gram.rows();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!gram.at(i, j).field()->same_as(*field))
        throw DomainError("Gram entries must live in the space's field");
  if (is_zero(det(gram))) throw DomainError("Gram matrix is degenerate");
  for (int i = 0; i < m; ++i) {
    if (alternating && !gram.at(i, i).is_zero())
      throw DomainError("alternating form needs a zero diagonal");
    for (int j = 0; j < m; ++j) {
      GFElem want = alternating ? -gram.at(j, i) : gram.at(j, i);
      if (gram.at(i, j) != want)
        throw DomainError(alternating ? "alternating form needs G^T = -G"
                                      : "symmetric form needs G^T = G");
    }
  }
  return BilinearSpace{std::move(field), m, std::move(gram), alternating};
}

BilinearSpace identity_space(const algebra::FieldPtr& field, int m) {
  if (m < 1) throw DomainError("dimension must be positive");
  return make_space(field, Mat<GFElem>::identity(m, field->zero()), false);
}

BilinearSpace symplectic_space(const algebra::FieldPtr& field, int m) {
  if (m < 2 || m % 2 != 0) throw DomainError("symplectic form needs even positive dimension");
  Mat<GFElem> g(m, m, field->zero());
  for (int b = 0; b < m; b += 2) {
    g.at(b, b + 1) = field->one();
    g.at(b + 1, b) = -field->one();
  }
  /* In characteristic 2 this matrix is symmetric with zero diagonal, which is
     exactly the alternating condition there. */
  return make_space(field, std::move(g), true);
}

GFElem pair_with(const BilinearSpace& s, const std::vector<GFElem>& x,
                 const std::vector<GFElem>& y) {
  if (static_cast<int>(x.size()) != s.m || static_cast<int>(y.size()) != s.m)
    throw DomainError("vectors must have the space's dimension");
  GFElem acc = s.field->zero();
  for (int i = 0; i < s.m; ++i)
    for (int j = 0; j < s.m; ++j) acc = acc + x[static_cast<size_t>(i)] * s.gram.at(i, j) * y[static_cast<size_t>(j)];
  return acc;
}

Encoded bilinear_encode(const BilinearSpace& s, const Mat<GFElem>& c) {
  if (c.rows() != c.cols()) throw DomainError("target matrix must be square");
  int d = c.rows();
  if (d > s.m) throw DomainError("cannot encode more vectors than the dimension");
  Encoded enc;
  for (int i = 0; i < d; ++i) {
    std::vector<GFElem> e(static_cast<size_t>(s.m), s.field->zero());
    e[static_cast<size_t>(i)] = s.field->one();
    enc.a.push_back(std::move(e));
  }
  /* With a_i = e_i, [a_i, b] = (G b)_i, so column j of C prescribes the first
     d coordinates of G b_j; the rest are pinned to zero. */
  for (int j = 0; j < d; ++j) {
    std::vector<GFElem> rhs(static_cast<size_t>(s.m), s.field->zero());
    for (int i = 0; i < d; ++i) rhs[static_cast<size_t>(i)] = c.at(i, j);
    enc.b.push_back(solve(s.gram, rhs));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (pair_with(s, enc.a[static_cast<size_t>(i)], enc.b[static_cast<size_t>(j)]) != c.at(i, j))
        throw ShapeError("encoded vectors fail the [a_i, b_j] = C_ij recheck");
  return enc;
}

BilinearDemoReport bilinear_shatter_demo(const BilinearSpace& s, int d) {
  long long q = static_cast<long long>(s.field->size());
  if (d < 1) throw DomainError("grid side must be positive");
  if (static_cast<long long>(d) * d > q)
    throw DomainError("need d^2 <= |K| for pairwise distinct entries");
  if (d > s.m) throw DomainError("cannot encode more vectors than the dimension");
  if (q > 20)
    throw DomainError("subset witness family 2^|K| too large to materialize (|K| > 20)");

  Mat<GFElem> c(d, d, s.field->zero());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c.at(i, j) = s.field->from_int(static_cast<uint64_t>(i) * d + j);
  bool distinct = true;
  for (int u = 0; u < d * d && distinct; ++u)
    for (int v = u + 1; v < d * d && distinct; ++v)
      if (c.at(u / d, u % d) == c.at(v / d, v % d)) distinct = false;

  Encoded enc = bilinear_encode(s, c);

  /* Witness S subset K acts by [y, z] in S; cell (i, j) carries the field value
     C_ij, so its bit is C_ij's bit of the subset mask. */
  WitnessedRelation rel;
  rel.parts = {d, d};
  uint64_t subsets = uint64_t{1} << q;
  std::vector<uint64_t> cellbit(static_cast<size_t>(d) * static_cast<size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      cellbit[static_cast<size_t>(i) * d + j] = c.at(i, j).index();
  for (uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<uint8_t> tensor(cellbit.size());
    for (size_t t = 0; t < cellbit.size(); ++t)
      tensor[t] = static_cast<uint8_t>((mask >> cellbit[t]) & 1u);
    rel.ids.push_back(static_cast<long long>(mask));
    rel.tensors.push_back(std::move(tensor));
  }

  Grid full;
  full.subsets.assign(2, first_combination(d));
  bool shat = shatters(rel, full);
  if (!shat) throw ShapeError("distinct-entry bilinear grid failed to shatter");
  return BilinearDemoReport{q, s.m, d, std::move(c), std::move(enc),
                            static_cast<long long>(subsets), distinct, shat};
}

bool has_mono_box(const std::vector<int>& coloring, int side, int n, int l) {
  if (l == 0) return true;
  if (l > side) return false;
  std::vector<std::vector<int>> combs(static_cast<size_t>(n), first_combination(l));
  while (true) {
    int color = -1;
    bool mono = true;
    std::vector<size_t> pos(static_cast<size_t>(n), 0);
    while (mono) {
      size_t flat = 0;
      for (int i = 0; i < n; ++i)
        flat = flat * static_cast<size_t>(side) +
               static_cast<size_t>(combs[static_cast<size_t>(i)][pos[static_cast<size_t>(i)]]);
      int cc = coloring[flat];
      if (color < 0) color = cc;
      else if (cc != color) mono = false;
      int i = n - 1;
      while (i >= 0) {
        if (++pos[static_cast<size_t>(i)] < static_cast<size_t>(l)) break;
        pos[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    if (mono) return true;
    int i = n - 1;
    while (i >= 0) {
      if (next_combination(combs[static_cast<size_t>(i)], side)) break;
      combs[static_cast<size_t>(i)] = first_combination(l);
      --i;
    }
    if (i < 0) return false;
  }
}

namespace {

struct BadSearch {
  int side, n, m, l;
  long long* budget;
  std::vector<int> f;                       // flat coloring, -1 unassigned
  std::vector<std::vector<int>> coords;     // coords of each flat cell
  std::vector<std::vector<size_t>> perms;   // non-identity axis permutations of flat cells

  bool completes_mono_box(size_t t) const {
    /* Only boxes whose lexicographically last cell is t can have just become
       complete; their per-axis sets are {x_i} plus l-1 smaller indices. */
    const std::vector<int>& x = coords[t];
    for (int i = 0; i < n; ++i)
      if (x[static_cast<size_t>(i)] < l - 1) return false;
    int color = f[t];
    std::vector<std::vector<int>> combs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) combs[static_cast<size_t>(i)] = first_combination(l - 1);
    if (l == 1) {
      return true;  // the singleton box {x} is monochromatic by itself
    }
    while (true) {
      bool mono = true;
      /* Box axis i = combs[i] together with x_i; iterate its l^n cells. */
      std::vector<int> sel(static_cast<size_t>(n), 0);
      while (mono) {
        size_t flat = 0;
        for (int i = 0; i < n; ++i) {
          int s = sel[static_cast<size_t>(i)];
          int v = s < l - 1 ? combs[static_cast<size_t>(i)][static_cast<size_t>(s)] : x[static_cast<size_t>(i)];
          flat = flat * static_cast<size_t>(side) + static_cast<size_t>(v);
        }
        if (f[flat] != color) mono = false;
        int i = n - 1;
        while (i >= 0) {
          if (++sel[static_cast<size_t>(i)] < l) break;
          sel[static_cast<size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
      if (mono) return true;
      int i = n - 1;
      while (i >= 0) {
        if (next_combination(combs[static_cast<size_t>(i)], x[static_cast<size_t>(i)])) break;
        combs[static_cast<size_t>(i)] = first_combination(l - 1);
        --i;
      }
      if (i < 0) return false;
    }
  }

  /* Keep only colorings lexicographically minimal under axis permutations;
     compare as far as the permuted prefix is assigned. */
  bool axis_minimal(size_t t) const {
    for (const auto& perm : perms) {
      for (size_t u = 0; u <= t; ++u) {
        size_t v = perm[u];
        if (v > t) break;  // undetermined beyond here
        if (f[u] < f[v]) break;
        if (f[u] > f[v]) return false;
      }
    }
    return true;
  }

  bool dfs(size_t t, int used, std::vector<int>* out) {
    if (t == f.size()) {
      *out = f;
      return true;
    }
    int top = std::min(m - 1, used);  // color canonicalization: at most one new color
    for (int c = 0; c <= top; ++c) {
      if (--*budget < 0)
        throw BudgetExceeded("partite Ramsey search budget exhausted", "");
      f[t] = c;
      if (!completes_mono_box(t) && axis_minimal(t) &&
          dfs(t + 1, std::max(used, c + 1), out))
        return true;
    }
    f[t] = -1;
    return false;
  }
};

/* All non-identity coordinate permutations, as flat-cell maps. */
std::vector<std::vector<size_t>> axis_perm_maps(int side, int n, size_t cells) {
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  std::vector<std::vector<size_t>> maps;
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<size_t> map(cells);
    for (size_t u = 0; u < cells; ++u) {
      size_t rem = u, flat = 0;
      std::vector<int> x(static_cast<size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        x[static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(side));
        rem /= static_cast<size_t>(side);
      }
      for (int i = 0; i < n; ++i)
        flat = flat * static_cast<size_t>(side) + static_cast<size_t>(x[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
      map[u] = flat;
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

/* A coloring of side^n with no monochromatic l-box, or nullopt. */
std::optional<std::vector<int>> find_bad_coloring(int side, int n, int m, int l,
                                                  long long* budget) {
  if (side == 0) {
    if (l >= 1) return std::vector<int>{};  // boxes cannot fit: vacuously bad
    return std::nullopt;
  }
  size_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= static_cast<size_t>(side);
  BadSearch s{side, n, m, l, budget, std::vector<int>(cells, -1), {}, {}};
  s.coords.resize(cells);
  for (size_t u = 0; u < cells; ++u) {
    size_t rem = u;
    s.coords[u].resize(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      s.coords[u][static_cast<size_t>(i)] = static_cast<int>(rem % static_cast<size_t>(side));
      rem /= static_cast<size_t>(side);
    }
  }
  s.perms = axis_perm_maps(side, n, cells);
  std::vector<int> out;
  if (s.dfs(0, 0, &out)) return out;
  return std::nullopt;
}

}  // namespace

RamseyResult ramsey_partite(int l, int m, int n, long long budget) {
  if (l < 0 || m < 1 || n < 1) throw DomainError("need l >= 0, m >= 1, n >= 1");
  if (l == 0) return RamseyResult{l, m, n, 0, {}};
  int R = l;  // s_i subset [R] with |s_i| >= l forces R >= l
  std::optional<std::vector<int>> prev;
  try {
    prev = find_bad_coloring(R - 1, n, m, l, &budget);
    if (!prev)
      throw ShapeError("side below l admitted a box; search is inconsistent");
    while (true) {
      auto bad = find_bad_coloring(R, n, m, l, &budget);
      if (!bad) return RamseyResult{l, m, n, R, std::move(*prev)};
      prev = std::move(bad);
      ++R;
    }
  } catch (const BudgetExceeded&) {
    std::string partial = "{\"l\":" + std::to_string(l) + ",\"m\":" + std::to_string(m) +
                          ",\"n\":" + std::to_string(n) +
                          ",\"lower_bound\":" + std::to_string(R) + ",\"upper_bound\":null}";
    throw BudgetExceeded("partite Ramsey search budget exhausted; R >= " + std::to_string(R),
                         partial);
  }
}

std::optional<BlindPair> find_lowarity_blind_pair(
    const opg::OrderedPartiteHypergraph& h,
    const std::vector<std::vector<std::pair<int, int>>>& binary_relations) {
  h.validate();
  if (h.n() != 3) throw DomainError("blind-pair search is defined for 3 parts");
  long long total = h.vertex_count();
  std::vector<std::vector<uint8_t>> rels;
  for (const auto& pairs : binary_relations) {
    std::vector<uint8_t> dense(static_cast<size_t>(total) * static_cast<size_t>(total), 0);
    for (const auto& [u, v] : pairs) {
      if (u < 0 || v < 0 || u >= total || v >= total)
        throw DomainError("binary relation vertex id out of range");
      dense[static_cast<size_t>(u) * static_cast<size_t>(total) + static_cast<size_t>(v)] = 1;
    }
    rels.push_back(std::move(dense));
  }
  int s1 = h.parts[0], s2 = h.parts[1], s3 = h.parts[2];
  std::vector<uint8_t> edge(static_cast<size_t>(s1) * s2 * s3, 0);
  for (const auto& e : h.edges)
    edge[(static_cast<size_t>(e[0]) * s2 + static_cast<size_t>(e[1])) * s3 + static_cast<size_t>(e[2])] = 1;

  long long off2 = h.offset(1), off3 = h.offset(2);
  auto pattern = [&](int v1, int v2, int v3, std::vector<int>* out) {
    long long g[3] = {v1, off2 + v2, off3 + v3};
    out->clear();
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        out->push_back(g[i] < g[j] ? -1 : (g[i] == g[j] ? 0 : 1));
    for (const auto& r : rels)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          out->push_back(r[static_cast<size_t>(g[i]) * static_cast<size_t>(total) + static_cast<size_t>(g[j])]);
  };

  std::vector<int> pg, ph;
  for (int g1 = 0; g1 < s1; ++g1)
    for (int g2 = 0; g2 < s2; ++g2)
      for (int g3 = 0; g3 < s3; ++g3) {
        if (!edge[(static_cast<size_t>(g1) * s2 + static_cast<size_t>(g2)) * s3 + static_cast<size_t>(g3)]) continue;
        pattern(g1, g2, g3, &pg);
        for (int h1 = 0; h1 < s1; ++h1)
          for (int h2 = 0; h2 < s2; ++h2)
            for (int h3 = 0; h3 < s3; ++h3) {
              if (edge[(static_cast<size_t>(h1) * s2 + static_cast<size_t>(h2)) * s3 + static_cast<size_t>(h3)]) continue;
              pattern(h1, h2, h3, &ph);
              if (pg == ph) return BlindPair{{g1, g2, g3}, {h1, h2, h3}};
            }
      }
  return std::nullopt;
}

}  // namespace shatter
}  // namespace ndep
