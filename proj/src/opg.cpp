#include "ndep/opg.hpp"

#include <algorithm>
#include <random>

namespace ndep {
namespace opg {

long long OrderedPartiteHypergraph::vertex_count() const {
  long long c = 0;
  for (int s : parts) c += s;
  return c;
}

long long OrderedPartiteHypergraph::offset(int part) const {
  long long c = 0;
  for (int i = 0; i < part; ++i) c += parts[static_cast<size_t>(i)];
  return c;
}

bool OrderedPartiteHypergraph::has_edge(const std::vector<int>& e) const {
  if (e.size() != parts.size()) throw DomainError("edge tuple needs one vertex per part");
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i] < 0 || e[i] >= parts[i]) throw DomainError("edge vertex out of range");
  return std::binary_search(edges.begin(), edges.end(), e);
}

void OrderedPartiteHypergraph::normalize() {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void OrderedPartiteHypergraph::validate() const {
  if (parts.empty()) throw DomainError("hypergraph needs at least one part");
  for (int s : parts)
    if (s < 0) throw DomainError("negative part size");
  for (const auto& e : edges) {
    if (e.size() != parts.size())
      throw DomainError("edge must take exactly one vertex per part");
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] < 0 || e[i] >= parts[i]) throw DomainError("edge vertex out of range");
  }
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw DomainError("edge set must be sorted and duplicate-free");
}

OrderedPartiteHypergraph random_opg(const std::vector<int>& sizes, long long num,
                                    long long den, uint64_t seed) {
  if (sizes.empty()) throw DomainError("need at least one part");
  for (int s : sizes)
    if (s < 1) throw DomainError("part sizes must be >= 1");
  if (den < 1 || num < 0 || num > den) throw DomainError("density must be a rational in [0, 1]");
  OrderedPartiteHypergraph h;
  h.parts = sizes;
  std::mt19937_64 rng(seed);
  int n = h.n();
  std::vector<int> e(static_cast<size_t>(n), 0);
  while (true) {
    if (static_cast<long long>(rng() % static_cast<uint64_t>(den)) < num)
      h.edges.push_back(e);
    int i = n - 1;
    while (i >= 0) {
      if (++e[static_cast<size_t>(i)] < sizes[static_cast<size_t>(i)]) break;
      e[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  h.normalize();  // lexicographic generation order is already sorted; keeps the invariant explicit
  return h;
}

namespace {

/* Cross-tuples for part j: one vertex per part != j, ascending part order,
   lexicographic enumeration. */
std::vector<std::vector<int>> cross_tuples(const OrderedPartiteHypergraph& h, int j) {
  std::vector<int> dims;
  for (int i = 0; i < h.n(); ++i)
    if (i != j) dims.push_back(h.parts[static_cast<size_t>(i)]);
  std::vector<std::vector<int>> out;
  for (int d : dims)
    if (d == 0) return out;
  std::vector<int> t(dims.size(), 0);
  while (true) {
    out.push_back(t);
    int i = static_cast<int>(dims.size()) - 1;
    while (i >= 0) {
      if (++t[static_cast<size_t>(i)] < dims[static_cast<size_t>(i)]) break;
      t[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<int> splice(int j, int b, const std::vector<int>& cross) {
  std::vector<int> e;
  e.reserve(cross.size() + 1);
  size_t c = 0;
  for (int i = 0; i <= static_cast<int>(cross.size()); ++i) {
    if (i == j) e.push_back(b);
    else e.push_back(cross[c++]);
  }
  return e;
}

}  // namespace

ExtensionReport check_extension(const OrderedPartiteHypergraph& h, int k) {
  h.validate();
  if (k < 1) throw DomainError("extension demand size must be >= 1");
  ExtensionReport rep;
  rep.k = k;
  for (int j = 0; j < h.n(); ++j) {
    auto cross = cross_tuples(h, j);
    int c = static_cast<int>(cross.size());
    int sj = h.parts[static_cast<size_t>(j)];
    /* Demand sets: pick |T| <= k cross-tuples (lexicographic combinations),
       then split T into link/nolink by binary counter, nolink bits first. */
    auto run_demands = [&](const std::vector<int>& chosen) {
      int s = static_cast<int>(chosen.size());
      for (uint32_t split = 0; split < (1u << s); ++split) {
        for (int b0 = 0; b0 < sj; ++b0)
          for (int b1 = b0 + 1; b1 < sj; ++b1) {
            ++rep.demands;
            bool gap = b1 - b0 >= 2;
            bool found = false;
            for (int b = b0 + 1; b < b1 && !found; ++b) {
              bool ok = true;
              for (int t = 0; t < s && ok; ++t) {
                bool want = ((split >> t) & 1u) == 0;
                if (h.has_edge(splice(j, b, cross[static_cast<size_t>(chosen[static_cast<size_t>(t)])])) != want)
                  ok = false;
              }
              found = ok;
            }
            if (found) {
              ++rep.satisfied;
            } else {
              ExtensionFailure f;
              f.part = j;
              f.b0 = b0;
              f.b1 = b1;
              for (int t = 0; t < s; ++t) {
                const auto& tup = cross[static_cast<size_t>(chosen[static_cast<size_t>(t)])];
                if ((split >> t) & 1u) f.nolink.push_back(tup);
                else f.link.push_back(tup);
              }
              f.betweenness = !gap;
              if (f.betweenness) ++rep.betweenness_failures;
              else ++rep.linkage_failures;
              rep.failures.push_back(std::move(f));
            }
          }
      }
    };
    /* Sizes 0..k, combinations in lexicographic order per size. */
    std::vector<int> comb;
    run_demands(comb);
    for (int s = 1; s <= k && s <= c; ++s) {
      comb.resize(static_cast<size_t>(s));
      for (int i = 0; i < s; ++i) comb[static_cast<size_t>(i)] = i;
      while (true) {
        run_demands(comb);
        int i = s - 1;
        for (; i >= 0; --i)
          if (comb[static_cast<size_t>(i)] < c - (s - i)) break;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (int t = i + 1; t < s; ++t) comb[static_cast<size_t>(t)] = comb[static_cast<size_t>(t - 1)] + 1;
      }
    }
  }
  return rep;
}

Box full_box(const OrderedPartiteHypergraph& h) {
  Box b;
  for (int s : h.parts) b.ranges.emplace_back(0, s - 1);
  return b;
}

namespace {

bool tuples_agree(const OrderedPartiteHypergraph& h, const OrderedPartiteHypergraph& pattern,
                  const std::vector<std::vector<int>>& map) {
  int n = pattern.n();
  for (int s : pattern.parts)
    if (s == 0) return true;  // no one-per-part tuples exist
  std::vector<int> t(static_cast<size_t>(n), 0);
  while (true) {
    std::vector<int> img(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      img[static_cast<size_t>(i)] = map[static_cast<size_t>(i)][static_cast<size_t>(t[static_cast<size_t>(i)])];
    if (pattern.has_edge(t) != h.has_edge(img)) return false;
    int i = n - 1;
    while (i >= 0) {
      if (++t[static_cast<size_t>(i)] < pattern.parts[static_cast<size_t>(i)]) break;
      t[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return true;
}

}  // namespace

std::optional<std::vector<std::vector<int>>> find_induced_copy(
    const OrderedPartiteHypergraph& h, const OrderedPartiteHypergraph& pattern,
    const Box& box) {
  h.validate();
  pattern.validate();
  if (pattern.n() != h.n()) throw DomainError("pattern and host must have the same parts");
  if (static_cast<int>(box.ranges.size()) != h.n())
    throw DomainError("one interval per part expected");
  int n = h.n();
  for (int i = 0; i < n; ++i) {
    auto [lo, hi] = box.ranges[static_cast<size_t>(i)];
    if (lo < 0 || hi >= h.parts[static_cast<size_t>(i)] || lo > hi + 1)
      throw DomainError("box interval out of range");
    if (pattern.parts[static_cast<size_t>(i)] > hi - lo + 1) return std::nullopt;  // cannot fit
  }
  /* Odometer over per-part increasing index lists inside the box, part-major,
     so the first success is the lexicographically least embedding. Edges are
     checked once every part has candidates (any partial tuple misses a part). */
  std::vector<std::vector<int>> map(static_cast<size_t>(n));
  auto first_choice = [&](int i) {
    int d = pattern.parts[static_cast<size_t>(i)];
    int lo = box.ranges[static_cast<size_t>(i)].first;
    std::vector<int> v(static_cast<size_t>(d));
    for (int t = 0; t < d; ++t) v[static_cast<size_t>(t)] = lo + t;
    return v;
  };
  auto next_choice = [&](std::vector<int>& v, int i) {
    int d = static_cast<int>(v.size());
    int hi = box.ranges[static_cast<size_t>(i)].second;
    for (int t = d - 1; t >= 0; --t) {
      if (v[static_cast<size_t>(t)] < hi - (d - 1 - t)) {
        ++v[static_cast<size_t>(t)];
        for (int u = t + 1; u < d; ++u) v[static_cast<size_t>(u)] = v[static_cast<size_t>(u - 1)] + 1;
        return true;
      }
    }
    return false;
  };
  for (int i = 0; i < n; ++i) map[static_cast<size_t>(i)] = first_choice(i);
  while (true) {
    if (tuples_agree(h, pattern, map)) return map;
    int i = n - 1;
    while (i >= 0) {
      if (next_choice(map[static_cast<size_t>(i)], i)) break;
      map[static_cast<size_t>(i)] = first_choice(i);
      --i;
    }
    if (i < 0) break;
  }
  return std::nullopt;
}

bool is_induced_embedding(const OrderedPartiteHypergraph& sub,
                          const OrderedPartiteHypergraph& sup, const Embedding& e) {
  if (static_cast<int>(e.map.size()) != sub.n() || sub.n() != sup.n()) return false;
  for (int i = 0; i < sub.n(); ++i) {
    const auto& m = e.map[static_cast<size_t>(i)];
    if (static_cast<int>(m.size()) != sub.parts[static_cast<size_t>(i)]) return false;
    int prev = -1;
    for (int v : m) {
      if (v <= prev || v >= sup.parts[static_cast<size_t>(i)]) return false;
      prev = v;
    }
  }
  return tuples_agree(sup, sub, e.map);
}

Amalgam amalgamate(const OrderedPartiteHypergraph& a, const OrderedPartiteHypergraph& b,
                   const OrderedPartiteHypergraph& c, const Embedding& c_in_a,
                   const Embedding& c_in_b) {
  a.validate();
  b.validate();
  c.validate();
  if (a.n() != b.n() || a.n() != c.n())
    throw DomainError("factors and base must have the same number of parts");
  if (!is_induced_embedding(c, a, c_in_a) || !is_induced_embedding(c, b, c_in_b))
    throw DomainError("inconsistent embeddings: the common part must embed induced into both factors");

  int n = a.n();
  Amalgam am;
  am.a_map.map.resize(static_cast<size_t>(n));
  am.b_map.map.resize(static_cast<size_t>(n));
  am.h.parts.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    int ca = a.parts[static_cast<size_t>(i)];
    int cb = b.parts[static_cast<size_t>(i)];
    int cc = c.parts[static_cast<size_t>(i)];
    const auto& ia = c_in_a.map[static_cast<size_t>(i)];
    const auto& ib = c_in_b.map[static_cast<size_t>(i)];
    std::vector<int>& ma = am.a_map.map[static_cast<size_t>(i)];
    std::vector<int>& mb = am.b_map.map[static_cast<size_t>(i)];
    ma.assign(static_cast<size_t>(ca), -1);
    mb.assign(static_cast<size_t>(cb), -1);
    /* Gap g holds the a-vertices then b-vertices strictly between the (g-1)-th
       and g-th c-images, followed by the g-th c vertex itself. */
    int pos = 0, va = 0, vb = 0;
    for (int g = 0; g <= cc; ++g) {
      int stop_a = g < cc ? ia[static_cast<size_t>(g)] : ca;
      int stop_b = g < cc ? ib[static_cast<size_t>(g)] : cb;
      while (va < stop_a) ma[static_cast<size_t>(va++)] = pos++;
      while (vb < stop_b) mb[static_cast<size_t>(vb++)] = pos++;
      if (g < cc) {
        ma[static_cast<size_t>(va++)] = pos;
        mb[static_cast<size_t>(vb++)] = pos;
        ++pos;
      }
    }
    am.h.parts[static_cast<size_t>(i)] = pos;
  }
  for (const auto& e : a.edges) {
    std::vector<int> img(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) img[static_cast<size_t>(i)] = am.a_map.map[static_cast<size_t>(i)][static_cast<size_t>(e[static_cast<size_t>(i)])];
    am.h.edges.push_back(std::move(img));
  }
  for (const auto& e : b.edges) {
    std::vector<int> img(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) img[static_cast<size_t>(i)] = am.b_map.map[static_cast<size_t>(i)][static_cast<size_t>(e[static_cast<size_t>(i)])];
    am.h.edges.push_back(std::move(img));
  }
  am.h.normalize();
  if (!is_induced_embedding(a, am.h, am.a_map) || !is_induced_embedding(b, am.h, am.b_map))
    throw ShapeError("free amalgam failed to keep a factor induced");
  return am;
}

}  // namespace opg
}  // namespace ndep
