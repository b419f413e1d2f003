#include "ndep/cli.hpp"

#include <algorithm>
#include <functional>
#include <cctype>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ndep/accept.hpp"
#include "ndep/chaincond.hpp"
#include "ndep/moore.hpp"
#include "ndep/opg.hpp"
#include "ndep/shatter.hpp"
#include "ndep/valo.hpp"

namespace ndep {
namespace cli {

using algebra::FieldPtr;
using algebra::GaloisField;
using algebra::GFElem;
using algebra::Mat;
using algebra::PExp;
using algebra::TruncatedSeries;
using ser::Json;

namespace {

constexpr const char* kSchema = "ndep-report/1";
constexpr const char* kVersion = "1.0.0";

/* Usage-class failure (bad literal, bad flag value): exit 2, message to stderr. */
struct UsageError {
  std::string message;
};

[[noreturn]] void usage(const std::string& message) { throw UsageError{message}; }

/* ---- small literal parsers ---------------------------------------------- */

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

long long parse_ll(const std::string& tok, const std::string& what) {
  try {
    size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) usage(what + ": trailing characters in '" + tok + "'");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    usage(what + ": '" + tok + "' is not an integer");
  }
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& tok : split_on(s, ','))
    out.push_back(static_cast<int>(parse_ll(tok, what)));
  return out;
}

std::vector<std::vector<int>> parse_int_rows(const std::string& s, const std::string& what) {
  std::vector<std::vector<int>> out;
  for (const auto& row : split_on(s, ';')) out.push_back(parse_int_list(row, what));
  return out;
}

std::vector<GFElem> parse_elem_list(const std::string& s, const FieldPtr& f,
                                    const std::string& what) {
  std::vector<GFElem> out;
  for (int v : parse_int_list(s, what)) {
    if (v < 0 || static_cast<uint64_t>(v) >= f->size())
      usage(what + ": element index " + std::to_string(v) + " outside 0.." +
            std::to_string(f->size() - 1));
    out.push_back(f->from_int(static_cast<uint64_t>(v)));
  }
  return out;
}

/* "a" or "a/b" with b a power of p. */
PExp parse_pexp(const std::string& s, int p, const std::string& what) {
  auto parts = split_on(s, '/');
  if (parts.size() > 2) usage(what + ": '" + s + "' has more than one '/'");
  long long num = parse_ll(parts[0], what);
  int dlog = 0;
  if (parts.size() == 2) {
    long long den = parse_ll(parts[1], what);
    if (den <= 0) usage(what + ": denominator must be positive");
    while (den % p == 0) {
      den /= p;
      ++dlog;
    }
    if (den != 1)
      usage(what + ": denominator must be a power of " + std::to_string(p));
  }
  return PExp(num, dlog, p);
}

shatter::Grid parse_grid(const std::string& s) {
  shatter::Grid g;
  for (const auto& row : split_on(s, ';'))
    g.subsets.push_back(row.empty() ? std::vector<int>{}
                                    : parse_int_list(row, "--grid"));
  return g;
}

opg::Box parse_box(const std::string& s) {
  opg::Box b;
  for (const auto& row : split_on(s, ';')) {
    auto ends = split_on(row, '-');
    if (ends.size() != 2) usage("--box: each part needs lo-hi, got '" + row + "'");
    b.ranges.emplace_back(static_cast<int>(parse_ll(ends[0], "--box")),
                          static_cast<int>(parse_ll(ends[1], "--box")));
  }
  return b;
}

opg::Embedding parse_embedding(const std::string& s, const std::string& what) {
  opg::Embedding e;
  for (const auto& row : split_on(s, ';'))
    e.map.push_back(row.empty() ? std::vector<int>{} : parse_int_list(row, what));
  return e;
}

std::vector<chaincond::FamilyKind> parse_families(const std::string& s) {
  std::vector<chaincond::FamilyKind> out;
  for (const auto& tok : split_on(s, ',')) {
    if (tok == "product")
      out.push_back(chaincond::FamilyKind::kProduct);
    else if (tok == "twist")
      out.push_back(chaincond::FamilyKind::kFrobeniusTwist);
    else if (tok == "ambient")
      out.push_back(chaincond::FamilyKind::kAmbient);
    else
      usage("--families: '" + tok + "' is not one of product, twist, ambient");
  }
  return out;
}

opg::OrderedPartiteHypergraph load_graph(const std::string& path) {
  return ser::opg_from_json(ser::load_json_file(path));
}

shatter::WitnessedRelation load_relation(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return ser::relation_from_json(ser::load_json_file(path));
  return ser::relation_from_text(ser::load_text_file(path));
}

/* ---- report plumbing ----------------------------------------------------- */

std::string pexp_str(const PExp& e) { return e.str(); }

Json pexp_list(const std::vector<PExp>& v) {
  Json a = Json::array();
  for (const auto& e : v) a.push_back(e.str());
  return a;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

void RunReport::require(const std::string& claim, const std::string& expected,
                        const std::string& computed, bool pass) {
  assertions.push_back({claim, expected, computed, pass});
}

bool RunReport::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

Json RunReport::to_json() const {
  Json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["command"] = command;
  Json echo = Json::array();
  for (const auto& s : argv_echo) echo.push_back(s);
  j["argv"] = std::move(echo);
  j["seed"] = seed.has_value() ? Json(*seed) : Json(nullptr);
  j["params"] = params;
  j["values"] = values;
  Json as = Json::array();
  for (const auto& a : assertions) {
    Json e;
    e["claim"] = a.claim;
    e["expected"] = a.expected;
    e["computed"] = a.computed;
    e["pass"] = a.pass;
    as.push_back(std::move(e));
  }
  j["assertions"] = std::move(as);
  j["pass"] = all_pass();
  return j;
}

std::string RunReport::pretty() const {
  std::ostringstream o;
  o << "command: " << command << "\n";
  if (seed.has_value()) o << "seed: " << *seed << "\n";
  if (!params.empty()) {
    o << "params:\n";
    for (const auto& [k, v] : params.items()) o << "  " << k << " = " << v.dump() << "\n";
  }
  if (!values.empty()) {
    o << "values:\n";
    for (const auto& [k, v] : values.items()) o << "  " << k << " = " << v.dump() << "\n";
  }
  if (!assertions.empty()) {
    o << "assertions:\n";
    for (const auto& a : assertions)
      o << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.claim << " (expected " << a.expected
        << ", computed " << a.computed << ")\n";
  }
  o << "overall: " << (all_pass() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

/* ---- series literal ------------------------------------------------------ */

namespace {

struct Scanner {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  void advance() { ++i; }

  [[noreturn]] void fail(size_t lo, size_t hi, const std::string& msg) const {
    throw DomainError("series literal: " + msg + " at " + std::to_string(lo) + ".." +
                      std::to_string(hi) + " in '" + s + "'");
  }

  long long digits(const std::string& what) {
    skip_ws();
    size_t lo = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == lo) fail(lo, lo, "expected " + what);
    try {
      return std::stoll(s.substr(lo, i - lo));
    } catch (const std::exception&) {
      fail(lo, i - 1, what + " out of range");
    }
  }

  long long signed_digits(const std::string& what) {
    bool neg = peek() == '-';
    if (neg) advance();
    long long v = digits(what);
    return neg ? -v : v;
  }
};

}  // namespace

TruncatedSeries parse_series_literal(const std::string& text, const FieldPtr& field, int cap,
                                     const std::optional<PExp>& precision) {
  int p = field->p();
  Scanner sc{text};
  std::vector<algebra::SeriesTerm> terms;
  std::optional<PExp> max_exp;
  bool negate = false;
  if (sc.peek() == '-') {
    negate = true;
    sc.advance();
  }
  for (;;) {
    // term := [coeff '*'] 't' ['^' exp] | coeff
    size_t term_lo = sc.i;
    uint64_t coeff_idx = 1;
    bool have_t = false;
    if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
      long long c = sc.digits("a coefficient");
      if (c < 0 || static_cast<uint64_t>(c) >= field->size())
        sc.fail(term_lo, sc.i - 1, "coefficient index " + std::to_string(c) + " outside 0.." +
                                       std::to_string(field->size() - 1));
      coeff_idx = static_cast<uint64_t>(c);
      if (sc.peek() == '*') {
        sc.advance();
        if (sc.peek() != 't') sc.fail(sc.i, sc.i, "expected 't' after '*'");
        sc.advance();
        have_t = true;
      }
    } else if (sc.peek() == 't') {
      sc.advance();
      have_t = true;
    } else {
      sc.fail(sc.i, sc.i, "expected a term");
    }

    PExp exp = PExp::integer(have_t ? 1 : 0, p);
    if (have_t && sc.peek() == '^') {
      sc.advance();
      if (sc.peek() == '(') {
        size_t lo = sc.i;
        sc.advance();
        long long num = sc.signed_digits("an exponent numerator");
        if (sc.peek() != '/') sc.fail(sc.i, sc.i, "expected '/' in a fractional exponent");
        sc.advance();
        size_t den_lo = sc.i;
        long long den = sc.digits("an exponent denominator");
        if (den <= 0) sc.fail(den_lo, sc.i - 1, "denominator must be positive");
        int dlog = 0;
        long long rest = den;
        while (rest % p == 0) {
          rest /= p;
          ++dlog;
        }
        if (rest != 1)
          sc.fail(den_lo, sc.i - 1,
                  "denominator " + std::to_string(den) + " is not a power of " +
                      std::to_string(p));
        if (dlog > cap)
          sc.fail(den_lo, sc.i - 1,
                  "denominator exceeds the perfection cap " + std::to_string(cap));
        if (sc.peek() != ')') sc.fail(lo, sc.i, "unclosed fractional exponent");
        sc.advance();
        exp = PExp(num, dlog, p);
      } else {
        exp = PExp::integer(sc.signed_digits("an exponent"), p);
      }
    }

    GFElem coeff = field->from_int(coeff_idx);
    if (negate) coeff = -coeff;
    terms.push_back({exp, coeff});
    if (!max_exp.has_value() || *max_exp < exp) max_exp = exp;

    char c = sc.peek();
    if (c == '\0') break;
    if (c == '+') {
      negate = false;
      sc.advance();
    } else if (c == '-') {
      negate = true;
      sc.advance();
    } else {
      sc.fail(sc.i, sc.i, std::string("unexpected character '") + c + "'");
    }
  }

  PExp prec = precision.has_value()
                  ? *precision
                  : (max_exp.has_value() ? *max_exp : PExp::integer(0, p)) + PExp::integer(40, p);
  for (const auto& t : terms)
    if (!(t.exp < prec))
      throw DomainError("series literal: term exponent " + t.exp.str() +
                        " is not below the precision " + prec.str() + " in '" + text + "'");
  return TruncatedSeries(field, cap, std::move(terms), prec);
}

/* ---- subcommand runners -------------------------------------------------- */

namespace {

std::vector<TruncatedSeries> parse_series_tuple(const std::string& text, const FieldPtr& f,
                                                int cap, const std::optional<PExp>& prec) {
  std::vector<TruncatedSeries> out;
  try {
    for (const auto& tok : split_on(text, ',')) out.push_back(parse_series_literal(tok, f, cap, prec));
  } catch (const DomainError& e) {
    usage(e.what());
  }
  return out;
}

void run_field(RunReport& r, int p, int k) {
  auto f = GaloisField::make(p, k);
  r.params["p"] = p;
  r.params["k"] = k;
  Json mod = Json::array();
  for (int c : f->modulus()) mod.push_back(c);
  r.values["modulus"] = std::move(mod);
  r.values["size"] = f->size();

  r.require("canonical modulus is irreducible over the prime field", "true",
            bool_str(algebra::zp_poly_irreducible(f->modulus(), p)),
            algebra::zp_poly_irreducible(f->modulus(), p));

  bool kernel_ok = true;
  uint64_t kernel = 0;
  for (uint64_t v = 0; v < f->size(); ++v) {
    GFElem x = f->from_int(v);
    bool in_kernel = algebra::wp(x).is_zero();
    if (in_kernel) ++kernel;
    kernel_ok = kernel_ok && (in_kernel == (v < static_cast<uint64_t>(p)));
  }
  r.require("Artin-Schreier kernel is exactly the prime subfield", std::to_string(p),
            std::to_string(kernel), kernel_ok && kernel == static_cast<uint64_t>(p));

  bool frob_id = true;
  for (uint64_t v = 0; v < f->size(); ++v) {
    GFElem x = f->from_int(v);
    frob_id = frob_id && x.frobenius(k) == x;
  }
  r.require("Frobenius to the k-th power is the identity", "true", bool_str(frob_id), frob_id);

  if (k >= 2) {
    GFElem g = f->gen();
    r.values["generator"] = ser::gfelem_to_json(g);
    uint64_t order = 1;
    GFElem acc = g;
    while (!(acc == f->one()) && order <= f->size()) {
      acc = acc * g;
      ++order;
    }
    r.require("distinguished generator spans the multiplicative group",
              std::to_string(f->size() - 1), std::to_string(order), order == f->size() - 1);
  }
}

bool combination_dependent(const std::vector<GFElem>& c) {
  const FieldPtr& f = c.front().field();
  int p = f->p();
  int m = static_cast<int>(c.size());
  std::vector<int> lam(static_cast<size_t>(m), 0);
  for (;;) {
    int pos = 0;
    while (pos < m && ++lam[static_cast<size_t>(pos)] == p) lam[static_cast<size_t>(pos++)] = 0;
    if (pos == m) return false;
    GFElem s = f->zero();
    for (int i = 0; i < m; ++i)
      s = s + f->from_int(static_cast<uint64_t>(lam[static_cast<size_t>(i)])) *
                  c[static_cast<size_t>(i)];
    if (s.is_zero()) return true;
  }
}

void run_moore(RunReport& r, int p, int k, const std::string& tuple) {
  auto f = GaloisField::make(p, k);
  auto c = parse_elem_list(tuple, f, "--tuple");
  if (c.empty()) usage("--tuple: need at least one element");
  r.params["p"] = p;
  r.params["k"] = k;
  r.params["tuple"] = parse_int_list(tuple, "--tuple");

  auto mat = moore::moore_matrix(c);
  Json jm = Json::array();
  for (int i = 0; i < mat.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < mat.cols(); ++j) row.push_back(ser::gfelem_to_json(mat.at(i, j)));
    jm.push_back(std::move(row));
  }
  r.values["moore_matrix"] = std::move(jm);
  GFElem d = moore::moore_det(c);
  r.values["det"] = ser::gfelem_to_json(d);
  bool indep = moore::is_fp_independent(c);
  r.values["independent"] = indep;

  double combos = 1;
  for (size_t i = 0; i < c.size(); ++i) combos *= p;
  if (combos <= 1e6) {
    bool oracle = !combination_dependent(c);
    r.require("Moore-determinant decision matches the exhaustive combination oracle",
              bool_str(oracle), bool_str(indep), indep == oracle);
  }
}

void run_iso(RunReport& r, int p, int k, const std::string& tuple) {
  auto f = GaloisField::make(p, k);
  auto a = parse_elem_list(tuple, f, "--a");
  if (a.empty()) usage("--a: need at least one element");
  r.params["p"] = p;
  r.params["k"] = k;
  r.params["a"] = parse_int_list(tuple, "--a");

  auto iso = moore::build_iso(a);
  r.values["iso"] = ser::iso_to_json(iso);

  r.require("derived coefficients are F_p-independent", "true",
            bool_str(moore::is_fp_independent(iso.alpha)),
            moore::is_fp_independent(iso.alpha));

  // Closed-form audit: A alpha = e_m (only the top Frobenius row survives).
  int m = static_cast<int>(a.size()) - 1;
  bool column_ok = true;
  for (int i = 0; i <= m; ++i) {
    GFElem s = f->zero();
    for (int j = 0; j <= m; ++j) s = s + iso.moore_a.at(i, j) * iso.alpha[static_cast<size_t>(j)];
    column_ok = column_ok && (i == m ? s == f->one() : s.is_zero());
  }
  r.require("Moore matrix times the coefficient column is the last unit vector", "true",
            bool_str(column_ok), column_ok);

  bool round_ok = true;
  std::set<uint64_t> image;
  for (uint64_t v = 0; v < f->size(); ++v) {
    GFElem t = f->from_int(v);
    auto x = moore::f_inv_apply(iso, t);
    round_ok = round_ok && moore::f_apply(iso, x.x) == t;
    uint64_t key = 0;
    for (const auto& xi : x.x) key = key * f->size() + xi.index();
    image.insert(key);
  }
  r.require("map composed with its inverse is the identity on the field", "true",
            bool_str(round_ok), round_ok);
  r.require("inverse image points are pairwise distinct", std::to_string(f->size()),
            std::to_string(image.size()), image.size() == f->size());
}

void run_valo_alpha(RunReport& r, int p, const std::string& a_lit, int cap,
                    const std::optional<PExp>& prec) {
  auto f = GaloisField::make(p, 1);
  auto a = parse_series_tuple(a_lit, f, cap, prec);
  r.params["p"] = p;
  r.params["a"] = a_lit;
  r.params["cap"] = cap;

  auto rep = valo::verify_alpha_vals(a);
  r.values["a_vals"] = pexp_list(rep.a_vals);
  r.values["direct"] = pexp_list(rep.direct);
  r.values["closed_form"] = pexp_list(rep.closed_form);

  r.require("direct coefficient valuations equal the closed form",
            r.values["closed_form"].dump(), r.values["direct"].dump(), rep.match);
  r.require("sorted profile gives strictly increasing coefficient valuations", "true",
            bool_str(rep.increasing_when_sorted), rep.increasing_when_sorted);
  if (rep.permutation_rule_checked)
    r.require("permuted profiles follow the rank-permutation rule", "true",
              bool_str(rep.permutation_rule_ok), rep.permutation_rule_ok);
}

void run_valo_preimage(RunReport& r, int p, const std::string& a_lit, const std::string& y_lit,
                       int cap, const std::optional<PExp>& prec) {
  auto f = GaloisField::make(p, 1);
  auto a = parse_series_tuple(a_lit, f, cap, prec);
  auto ys = parse_series_tuple(y_lit, f, cap, prec);
  if (ys.size() != 1) usage("--y: expected a single series literal");
  r.params["p"] = p;
  r.params["a"] = a_lit;
  r.params["y"] = y_lit;
  r.params["cap"] = cap;

  auto rep = valo::preimage_valuations(a, ys[0]);
  r.values["a_vals"] = pexp_list(rep.a_vals);
  r.values["alpha_vals"] = pexp_list(rep.alpha_vals);
  r.values["y_val"] = pexp_str(rep.y_val);
  r.values["x_vals"] = pexp_list(rep.x_vals);
  r.values["ofe_value"] = pexp_str(rep.ofe_value);

  r.require("every preimage coordinate has positive valuation", "true",
            bool_str(rep.all_positive), rep.all_positive);
  if (rep.xn0_checked)
    r.require("last coordinate valuation is val(y) - val(a_m)", pexp_str(rep.xn0_expected),
              pexp_str(rep.x_vals.back()), rep.xn0_ok);
  r.require("order-of-vanishing equation holds across coordinates", "true",
            bool_str(rep.ofe_ok), rep.ofe_ok);
  r.require("pairwise valuation comparisons follow the profile", "true",
            bool_str(rep.ordxi1_ok && rep.ordxi2_ok), rep.ordxi1_ok && rep.ordxi2_ok);
}

void run_valo_rho_finite(RunReport& r, int p, int k, const std::string& tuple) {
  auto f = GaloisField::make(p, k);
  auto a = parse_elem_list(tuple, f, "--a");
  r.params["p"] = p;
  r.params["k"] = k;
  r.params["a"] = parse_int_list(tuple, "--a");

  auto fit = valo::rho_prime_fit(a);
  Json gam = Json::array();
  for (const auto& g : fit.gamma) gam.push_back(ser::gfelem_to_json(g));
  r.values["gamma"] = std::move(gam);
  r.values["c"] = ser::gfelem_to_json(fit.c);

  r.require("constant-row coefficient is -c", "true",
            bool_str(fit.gamma[0] == -fit.c), fit.gamma[0] == -fit.c);
  bool higher = true;
  for (size_t j = 2; j < fit.gamma.size(); ++j) higher = higher && fit.gamma[j].is_zero();
  r.require("higher Frobenius coefficients vanish", "true", bool_str(higher), higher);
  bool eval_ok = true;
  for (uint64_t v = 0; v < f->size(); ++v) {
    GFElem x = f->from_int(v);
    eval_ok = eval_ok && valo::rho_prime_eval(fit, x) == fit.c * (x.frobenius(1) - x);
  }
  r.require("evaluation equals c(t^p - t) on every field element", "true", bool_str(eval_ok),
            eval_ok);
}

void run_valo_rho_series(RunReport& r, int p, const std::string& a_lit, int cap,
                         const std::optional<PExp>& prec) {
  auto f = GaloisField::make(p, 1);
  auto a = parse_series_tuple(a_lit, f, cap, prec);
  r.params["p"] = p;
  r.params["a"] = a_lit;
  r.params["cap"] = cap;

  auto fit = valo::rho_prime_fit(a);
  r.values["c"] = ser::series_to_json(fit.c);
  r.values["c_val"] = pexp_str(fit.c.valuation_or_throw());

  auto x = parse_series_literal("t", f, cap, prec);
  bool eval_ok = substrate_eq(valo::rho_prime_eval(fit, x), fit.c * wp(x));
  r.require("evaluation equals c(t^p - t) on the sample point t", "true", bool_str(eval_ok),
            eval_ok);
}

void run_valo_pipeline(RunReport& r, int p, const std::string& a_lit, const std::string& u_lit,
                       int cap, const std::optional<PExp>& prec) {
  auto f = GaloisField::make(p, 1);
  auto a = parse_series_tuple(a_lit, f, cap, prec);
  auto us = parse_series_tuple(u_lit, f, cap, prec);
  if (us.size() != 1) usage("--u: expected a single series literal");
  r.params["p"] = p;
  r.params["a"] = a_lit;
  r.params["u"] = u_lit;
  r.params["cap"] = cap;

  auto res = valo::preimage_small_val(a, us[0]);
  r.values["u_val"] = pexp_str(res.u_val);
  r.values["w_val"] = pexp_str(res.w_val);
  r.require("preimage valuation lies strictly between 0 and val(u)",
            "0 < val(w) < " + pexp_str(res.u_val), pexp_str(res.w_val), res.val_ok);
  r.require("descent map sends the preimage back to u up to precision", "true",
            bool_str(res.rho_ok), res.rho_ok);

  auto root = valo::as_root_in_maximal_ideal(a, us[0]);
  r.values["c_val"] = pexp_str(root.c_val);
  r.values["wprime_val"] = pexp_str(root.second.w_val);
  r.require("correction factor has positive valuation val(y) - val(w)",
            pexp_str(root.y_val - root.first.w_val), pexp_str(root.c_val), root.c_val_ok);
  r.require("Artin-Schreier image of the root is y up to precision", "true",
            bool_str(root.root_ok), root.root_ok);
  r.require("root lies in the maximal ideal", "true", bool_str(root.wprime_positive),
            root.wprime_positive);
}

void run_valo_bgrid(RunReport& r, int p, int n, int ell, const std::string& y_lit, int gap,
                    std::optional<int> cap_opt) {
  auto f = GaloisField::make(p, 1);
  int cap = cap_opt.value_or(n * ell * gap + 2);
  auto ys = parse_series_tuple(y_lit, f, cap, std::nullopt);
  if (ys.size() != 1) usage("--y: expected a single series literal");
  r.params["p"] = p;
  r.params["n"] = n;
  r.params["ell"] = ell;
  r.params["gap"] = gap;
  r.params["cap"] = cap;
  r.params["y"] = y_lit;

  auto grid = valo::build_b_grid(n, ell, ys[0], gap);
  Json prods = Json::array();
  for (const auto& pr : grid.products) {
    Json e;
    Json idx = Json::array();
    for (int i : pr.idx) idx.push_back(i);
    e["idx"] = std::move(idx);
    e["val"] = pexp_str(pr.val);
    prods.push_back(std::move(e));
  }
  r.values["products"] = std::move(prods);

  r.require("grid rows satisfy the selection constraints", "true",
            bool_str(grid.constraints_ok), grid.constraints_ok);
  r.require("every product valuation lies in (0, val(y))", "true", bool_str(grid.in_range_ok),
            grid.in_range_ok);
  r.require("valuation order equals reversed-lex index order", "true",
            bool_str(grid.lex_law_ok), grid.lex_law_ok);
}

void run_shatter_decide(RunReport& r, const std::string& rel_path, const std::string& grid_lit) {
  auto rel = load_relation(rel_path);
  auto g = parse_grid(grid_lit);
  r.params["rel"] = rel_path;
  r.params["grid"] = grid_lit;
  r.values["witnesses"] = rel.tensors.size();
  r.values["cells"] = g.cells();
  r.values["shattered"] = shatter::shatters(rel, g);
}

void run_shatter_max(RunReport& r, const std::string& rel_path, const std::string& caps_lit) {
  auto rel = load_relation(rel_path);
  auto caps = parse_int_list(caps_lit, "--caps");
  r.params["rel"] = rel_path;
  r.params["caps"] = caps;
  auto res = shatter::max_shattered_grid(rel, caps);
  r.values["side"] = res.side;
  Json subsets = Json::array();
  for (const auto& s : res.grid.subsets) {
    Json row = Json::array();
    for (int v : s) row.push_back(v);
    subsets.push_back(std::move(row));
  }
  r.values["grid"] = std::move(subsets);
}

void run_shatter_compose(RunReport& r, int msize, int arity, const std::string& base_bits,
                         const std::string& coords_lit, const std::string& tables_lit,
                         const std::string& out_path) {
  std::vector<uint8_t> base;
  for (char c : base_bits) {
    if (c != '0' && c != '1') usage("--base: expected a 0/1 string");
    base.push_back(static_cast<uint8_t>(c - '0'));
  }
  std::vector<std::pair<int, int>> coords;
  for (const auto& row : parse_int_rows(coords_lit, "--coords")) {
    if (row.size() != 2) usage("--coords: each entry needs two coordinates");
    coords.emplace_back(row[0], row[1]);
  }
  std::vector<std::vector<int>> tables;
  for (const auto& name : split_on(tables_lit, ',')) {
    std::vector<int> t;
    for (int x = 0; x < msize; ++x)
      for (int y = 0; y < msize; ++y) {
        if (name == "add")
          t.push_back((x + y) % msize);
        else if (name == "mul")
          t.push_back((x * y) % msize);
        else if (name == "sub")
          t.push_back(((x - y) % msize + msize) % msize);
        else
          usage("--tables: '" + name + "' is not one of add, mul, sub");
      }
    tables.push_back(std::move(t));
  }
  r.params["msize"] = msize;
  r.params["arity"] = arity;
  r.params["coords"] = coords_lit;
  r.params["tables"] = tables_lit;

  auto rel = shatter::compose_relation(base, arity, msize, coords, tables);
  r.values["parts"] = Json::array({rel.parts[0], rel.parts[1]});
  r.values["witnesses"] = rel.tensors.size();
  if (!out_path.empty()) {
    ser::save_text_file(out_path, ser::relation_to_json(rel).dump(2) + "\n");
    r.values["out"] = out_path;
  }
}

void run_shatter_bilinear(RunReport& r, int p, int k, int m, int d, bool symplectic, bool demo,
                          std::optional<uint64_t> seed) {
  auto f = GaloisField::make(p, k);
  auto space = symplectic ? shatter::symplectic_space(f, m) : shatter::identity_space(f, m);
  r.params["p"] = p;
  r.params["k"] = k;
  r.params["m"] = m;
  r.params["d"] = d;
  r.params["form"] = symplectic ? "symplectic" : "identity";

  if (demo) {
    auto rep = shatter::bilinear_shatter_demo(space, d);
    r.values["q"] = rep.q;
    r.values["witness_count"] = rep.witness_count;
    r.require("encoded target entries are pairwise distinct", "true",
              bool_str(rep.entries_distinct), rep.entries_distinct);
    r.require("subset witnesses shatter the full grid", "true", bool_str(rep.shattered),
              rep.shattered);
    return;
  }
  if (!seed.has_value()) usage("shatter bilinear: --seed is required without --demo");
  std::mt19937_64 rng(*seed);
  Mat<GFElem> c(d, d, f->zero());
  Json jc = Json::array();
  for (int i = 0; i < d; ++i) {
    Json row = Json::array();
    for (int j = 0; j < d; ++j) {
      c.at(i, j) = f->from_int(rng() % f->size());
      row.push_back(ser::gfelem_to_json(c.at(i, j)));
    }
    jc.push_back(std::move(row));
  }
  r.values["c"] = std::move(jc);
  auto enc = shatter::bilinear_encode(space, c);
  bool all = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      all = all && shatter::pair_with(space, enc.a[static_cast<size_t>(i)],
                                      enc.b[static_cast<size_t>(j)]) == c.at(i, j);
  r.require("pairing of the encoded vectors reproduces the target matrix exactly", "true",
            bool_str(all), all);
}

void run_shatter_ramsey(RunReport& r, int l, int m, int n, long long budget) {
  r.params["l"] = l;
  r.params["m"] = m;
  r.params["n"] = n;
  r.params["budget"] = budget;
  auto res = shatter::ramsey_partite(l, m, n, budget);
  r.values["R"] = res.R;
  Json bad = Json::array();
  for (int c : res.bad_coloring) bad.push_back(c);
  r.values["bad_coloring"] = std::move(bad);
  bool cert = res.R < 2 ? res.bad_coloring.empty()
                        : !shatter::has_mono_box(res.bad_coloring, res.R - 1, n, l);
  r.require("witness coloring one below R has no monochromatic box", "true", bool_str(cert),
            cert);
}

void run_shatter_blindpair(RunReport& r, const std::string& graph_path,
                           const std::vector<std::string>& rel_lits) {
  auto h = load_graph(graph_path);
  std::vector<std::vector<std::pair<int, int>>> rels;
  for (const auto& lit : rel_lits) {
    std::vector<std::pair<int, int>> rel;
    if (!lit.empty())
      for (const auto& row : parse_int_rows(lit, "--binrel")) {
        if (row.size() != 2) usage("--binrel: each pair needs two vertex ids");
        rel.emplace_back(row[0], row[1]);
      }
    rels.push_back(std::move(rel));
  }
  r.params["graph"] = graph_path;
  r.params["binary_relations"] = rels.size();

  auto pair = shatter::find_lowarity_blind_pair(h, rels);
  r.values["found"] = pair.has_value();
  if (pair.has_value()) {
    r.values["g"] = Json::array({pair->g[0], pair->g[1], pair->g[2]});
    r.values["h"] = Json::array({pair->h[0], pair->h[1], pair->h[2]});
    std::vector<int> ge{pair->g[0], pair->g[1], pair->g[2]};
    std::vector<int> he{pair->h[0], pair->h[1], pair->h[2]};
    r.require("first triple is an edge and the second is not", "true",
              bool_str(h.has_edge(ge) && !h.has_edge(he)),
              h.has_edge(ge) && !h.has_edge(he));
  }
}

void run_opg_gen(RunReport& r, const std::string& parts_lit, long long num, long long den,
                 uint64_t seed, const std::string& out_path) {
  auto parts = parse_int_list(parts_lit, "--parts");
  r.params["parts"] = parts;
  r.params["num"] = num;
  r.params["den"] = den;
  auto h = opg::random_opg(parts, num, den, seed);
  r.values["edges"] = h.edges.size();
  r.values["graph"] = ser::opg_to_json(h);
  if (!out_path.empty()) {
    ser::save_text_file(out_path, ser::opg_to_json(h).dump(2) + "\n");
    r.values["out"] = out_path;
  }
}

void run_opg_check(RunReport& r, const std::string& graph_path, int k, int max_failures) {
  auto h = load_graph(graph_path);
  r.params["graph"] = graph_path;
  r.params["k"] = k;
  auto rep = opg::check_extension(h, k);
  r.values["demands"] = rep.demands;
  r.values["satisfied"] = rep.satisfied;
  r.values["betweenness_failures"] = rep.betweenness_failures;
  r.values["linkage_failures"] = rep.linkage_failures;
  r.values["all_satisfied"] = rep.all_satisfied();
  Json fs = Json::array();
  for (const auto& fl : rep.failures) {
    if (static_cast<int>(fs.size()) >= max_failures) break;
    Json e;
    e["part"] = fl.part;
    e["b0"] = fl.b0;
    e["b1"] = fl.b1;
    Json link = Json::array(), nolink = Json::array();
    for (const auto& t : fl.link) {
      Json tt = Json::array();
      for (int v : t) tt.push_back(v);
      link.push_back(std::move(tt));
    }
    for (const auto& t : fl.nolink) {
      Json tt = Json::array();
      for (int v : t) tt.push_back(v);
      nolink.push_back(std::move(tt));
    }
    e["link"] = std::move(link);
    e["nolink"] = std::move(nolink);
    e["betweenness"] = fl.betweenness;
    fs.push_back(std::move(e));
  }
  r.values["failures_shown"] = std::move(fs);
}

void run_opg_copy(RunReport& r, const std::string& graph_path, const std::string& pattern_path,
                  const std::string& box_lit) {
  auto h = load_graph(graph_path);
  auto pat = load_graph(pattern_path);
  auto box = box_lit.empty() ? opg::full_box(h) : parse_box(box_lit);
  r.params["graph"] = graph_path;
  r.params["pattern"] = pattern_path;
  if (!box_lit.empty()) r.params["box"] = box_lit;

  auto got = opg::find_induced_copy(h, pat, box);
  r.values["found"] = got.has_value();
  if (got.has_value()) {
    Json em = Json::array();
    for (const auto& row : *got) {
      Json jr = Json::array();
      for (int v : row) jr.push_back(v);
      em.push_back(std::move(jr));
    }
    r.values["embedding"] = std::move(em);
    bool ok = opg::is_induced_embedding(pat, h, opg::Embedding{*got});
    r.require("returned embedding is induced", "true", bool_str(ok), ok);
  }
}

void run_opg_amalgamate(RunReport& r, const std::string& a_path, const std::string& b_path,
                        const std::string& c_path, const std::string& c_in_a_lit,
                        const std::string& c_in_b_lit, const std::string& out_path) {
  auto a = load_graph(a_path);
  auto b = load_graph(b_path);
  auto c = load_graph(c_path);
  auto c_in_a = parse_embedding(c_in_a_lit, "--c-in-a");
  auto c_in_b = parse_embedding(c_in_b_lit, "--c-in-b");
  r.params["a"] = a_path;
  r.params["b"] = b_path;
  r.params["c"] = c_path;

  auto am = opg::amalgamate(a, b, c, c_in_a, c_in_b);
  r.values["graph"] = ser::opg_to_json(am.h);
  auto emb_json = [](const opg::Embedding& e) {
    Json m = Json::array();
    for (const auto& row : e.map) {
      Json jr = Json::array();
      for (int v : row) jr.push_back(v);
      m.push_back(std::move(jr));
    }
    return m;
  };
  r.values["a_map"] = emb_json(am.a_map);
  r.values["b_map"] = emb_json(am.b_map);

  bool a_ok = opg::is_induced_embedding(a, am.h, am.a_map);
  bool b_ok = opg::is_induced_embedding(b, am.h, am.b_map);
  r.require("first factor embeds induced into the amalgam", "true", bool_str(a_ok), a_ok);
  r.require("second factor embeds induced into the amalgam", "true", bool_str(b_ok), b_ok);
  bool agree = true;
  for (int i = 0; i < c.n(); ++i)
    for (size_t v = 0; v < c_in_a.map[static_cast<size_t>(i)].size(); ++v)
      agree = agree && am.a_map.map[static_cast<size_t>(i)][static_cast<size_t>(
                           c_in_a.map[static_cast<size_t>(i)][v])] ==
                           am.b_map.map[static_cast<size_t>(i)][static_cast<size_t>(
                               c_in_b.map[static_cast<size_t>(i)][v])];
  r.require("both factor images agree on the shared core", "true", bool_str(agree), agree);

  if (!out_path.empty()) {
    ser::save_text_file(out_path, ser::opg_to_json(am.h).dump(2) + "\n");
    r.values["out"] = out_path;
  }
}

chaincond::FamilyArray build_family_array(const FieldPtr& f, int n, int d,
                                          const std::vector<std::vector<int>>& rows,
                                          const std::vector<chaincond::FamilyKind>& fams) {
  chaincond::FamilyArray fa;
  fa.field = f;
  fa.n = n;
  fa.d = d;
  for (const auto& row : rows) {
    std::vector<GFElem> er;
    for (int v : row) {
      if (v < 0 || static_cast<uint64_t>(v) >= f->size())
        usage("--params: element index " + std::to_string(v) + " outside 0.." +
              std::to_string(f->size() - 1));
      er.push_back(f->from_int(static_cast<uint64_t>(v)));
    }
    fa.params.push_back(std::move(er));
  }
  fa.families = fams;
  fa.validate();
  return fa;
}

/* Direct leave-one-out recheck, bypassing the prefix/suffix optimization. */
bool recheck_redundant(const chaincond::FamilyArray& fa, const std::vector<int>& nu) {
  for (size_t t = 0; t < fa.families.size(); ++t) {
    auto full = chaincond::whole_space(fa.field->p(), fa.field->k());
    auto without = full;
    std::vector<int> eta(static_cast<size_t>(fa.n), 0);
    for (;;) {
      auto sub = fa.subgroup(static_cast<int>(t), eta);
      full = chaincond::intersect(full, sub);
      if (eta != nu) without = chaincond::intersect(without, sub);
      int pos = fa.n - 1;
      while (pos >= 0 && ++eta[static_cast<size_t>(pos)] == fa.d)
        eta[static_cast<size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
    if (!(full == without)) return false;
  }
  return true;
}

void run_chaincond_redundant(RunReport& r, int p, int k, int n, int d,
                             const std::string& params_lit, const std::string& families_lit) {
  auto f = GaloisField::make(p, k);
  auto rows = parse_int_rows(params_lit, "--params");
  auto fams = parse_families(families_lit);
  auto fa = build_family_array(f, n, d, rows, fams);
  r.params["p"] = p;
  r.params["k"] = k;
  r.params["n"] = n;
  r.params["width"] = d;
  r.params["params"] = rows;
  r.params["families"] = families_lit;

  auto nu = chaincond::find_redundant(fa);
  r.values = ser::redundancy_to_json(d, nu, static_cast<int>(fams.size()));
  if (nu.has_value()) {
    bool ok = recheck_redundant(fa, *nu);
    r.require("dropping the returned index leaves every family intersection unchanged", "true",
              bool_str(ok), ok);
  }
}

void run_chaincond_threshold(RunReport& r, int p, int k, int n, const std::string& families_lit,
                             int trials, uint64_t seed, int max_d, bool proof_bound) {
  auto f = GaloisField::make(p, k);
  auto fams = parse_families(families_lit);
  r.params["p"] = p;
  r.params["k"] = k;
  r.params["n"] = n;
  r.params["families"] = families_lit;
  r.params["trials"] = trials;
  r.params["max_d"] = max_d;

  auto res = chaincond::baldwin_saxl_threshold(f, n, fams, trials, seed, max_d);
  r.values["d"] = res.d;
  r.values["found_failing"] = res.found_failing;
  if (res.found_failing) {
    Json rows = Json::array();
    for (const auto& row : res.failing_params) {
      Json jr = Json::array();
      for (const auto& e : row) jr.push_back(e.index());
      rows.push_back(std::move(jr));
    }
    r.values["failing_params"] = std::move(rows);
    chaincond::FamilyArray cert;
    cert.field = f;
    cert.n = n;
    cert.d = res.d - 1;
    cert.params = res.failing_params;
    cert.families = fams;
    cert.validate();
    bool no_red = !chaincond::find_redundant(cert).has_value();
    r.require("certificate array one below the threshold admits no redundant index", "true",
              bool_str(no_red), no_red);
  }

  if (proof_bound) {
    if (fams.size() == 2) {
      auto r1 = chaincond::baldwin_saxl_threshold(f, n, {fams[0]}, trials, seed + 1, max_d);
      auto r2 = chaincond::baldwin_saxl_threshold(f, n, {fams[1]}, trials, seed + 2, max_d);
      r.values["m1"] = r1.d;
      r.values["m2"] = r2.d;
      long long m1n = 1;
      for (int i = 0; i < n; ++i) m1n *= r1.d;
      if (n == 1 && r1.d <= 4 && r2.d <= 4) {
        auto rr = shatter::ramsey_partite(r2.d, static_cast<int>(m1n), n);
        long long bound = static_cast<long long>(rr.R) * r1.d;
        r.values["proof_bound"] = bound;
        r.require("empirical simultaneous threshold is within the composition bound",
                  "<= " + std::to_string(bound), std::to_string(res.d), res.d <= bound);
      } else {
        r.values["proof_bound"] = nullptr;
      }
    } else {
      r.values["proof_bound"] = nullptr;
    }
  }
}

void run_suite(RunReport& r, std::ostream& progress) {
  auto results = accept::run_battery(progress);
  Json arr = Json::array();
  for (const auto& res : results) {
    Json e;
    e["number"] = res.number;
    e["name"] = res.name;
    e["ok"] = res.ok;
    e["within_limit"] = res.within_limit;
    e["detail"] = res.detail;
    arr.push_back(std::move(e));
    r.require(res.name, "pass within " + std::to_string(static_cast<int>(res.limit_seconds)) +
                            "s",
              res.detail, res.passed());
  }
  r.values["criteria"] = std::move(arr);
}

}  // namespace

/* ---- dispatch ------------------------------------------------------------ */

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact tools for Artin-Schreier groups, valued series, shattering, and "
               "partite hypergraphs"};
  app.require_subcommand(1);
  app.footer(
      "series literals (valo commands):\n"
      "  sum of terms joined by + or -, each term [c*]t[^e] or a bare constant c;\n"
      "  c is a canonical element index (default 1), e an integer or a parenthesized\n"
      "  fraction (a/b) whose denominator must be a power of p.  Tuples are comma-\n"
      "  separated.  Examples: t,t^3    2*t^(3/2)+t-1    t^-2+5");
  bool pretty = false;
  app.add_flag("--pretty", pretty, "human-readable table instead of JSON");

  std::optional<RunReport> report;
  std::string active;
  auto fresh = [&](const std::string& name) {
    RunReport r;
    r.command = name;
    for (int i = 0; i < argc; ++i) r.argv_echo.push_back(argv[i]);
    active = name;
    return r;
  };

  // field
  {
    auto* c = app.add_subcommand("field", "inspect a finite field and its invariants");
    auto p = std::make_shared<int>(0);
    auto k = std::make_shared<int>(1);
    c->add_option("--p", *p, "characteristic")->required();
    c->add_option("--k", *k, "extension degree");
    c->callback([&, p, k] {
      auto r = fresh("field");
      run_field(r, *p, *k);
      report = std::move(r);
    });
  }

  // moore
  {
    auto* c = app.add_subcommand("moore", "Frobenius-power determinant independence test");
    auto p = std::make_shared<int>(0), k = std::make_shared<int>(1);
    auto tuple = std::make_shared<std::string>();
    c->add_option("--p", *p, "characteristic")->required();
    c->add_option("--k", *k, "extension degree");
    c->add_option("--tuple", *tuple, "comma-separated canonical element indices")->required();
    c->callback([&, p, k, tuple] {
      auto r = fresh("moore");
      run_moore(r, *p, *k, *tuple);
      report = std::move(r);
    });
  }

  // iso
  {
    auto* c = app.add_subcommand("iso", "additive isomorphism data for a coefficient tuple");
    auto p = std::make_shared<int>(0), k = std::make_shared<int>(1);
    auto tuple = std::make_shared<std::string>();
    c->add_option("--p", *p, "characteristic")->required();
    c->add_option("--k", *k, "extension degree");
    c->add_option("--a", *tuple, "comma-separated canonical element indices")->required();
    c->callback([&, p, k, tuple] {
      auto r = fresh("iso");
      run_iso(r, *p, *k, *tuple);
      report = std::move(r);
    });
  }

  // valo
  {
    auto* valo_cmd = app.add_subcommand("valo", "valuation lemmas on truncated series");
    valo_cmd->require_subcommand(1);
    auto p = std::make_shared<int>(0);
    auto cap = std::make_shared<int>(6);
    auto prec_lit = std::make_shared<std::string>();
    auto add_common = [&](CLI::App* c, bool with_cap = true) {
      c->add_option("--p", *p, "characteristic")->required();
      if (with_cap) c->add_option("--cap", *cap, "perfection cap (default 6)");
      c->add_option("--prec", *prec_lit,
                    "series precision as a or a/b with b a power of p (default: last term + 40)");
    };
    auto prec_of = [p, prec_lit]() -> std::optional<PExp> {
      if (prec_lit->empty()) return std::nullopt;
      return parse_pexp(*prec_lit, *p, "--prec");
    };

    auto a_lit = std::make_shared<std::string>();
    auto y_lit = std::make_shared<std::string>();
    auto u_lit = std::make_shared<std::string>();
    auto kk = std::make_shared<int>(1);
    auto n = std::make_shared<int>(0), ell = std::make_shared<int>(0),
         gap = std::make_shared<int>(2);
    auto bg_cap = std::make_shared<int>(-1);

    auto* alpha = valo_cmd->add_subcommand(
        "alpha", "coefficient valuations: direct vs closed form");
    add_common(alpha);
    alpha->add_option("--a", *a_lit, "comma-separated series literals, e.g. t,t^3")->required();
    alpha->callback([&, p, cap, a_lit, prec_of] {
      auto r = fresh("valo alpha");
      run_valo_alpha(r, *p, *a_lit, *cap, prec_of());
      report = std::move(r);
    });

    auto* pre = valo_cmd->add_subcommand("preimage", "preimage coordinate valuations");
    add_common(pre);
    pre->add_option("--a", *a_lit, "comma-separated series literals")->required();
    pre->add_option("--y", *y_lit, "target series literal")->required();
    pre->callback([&, p, cap, a_lit, y_lit, prec_of] {
      auto r = fresh("valo preimage");
      run_valo_preimage(r, *p, *a_lit, *y_lit, *cap, prec_of());
      report = std::move(r);
    });

    auto* rho = valo_cmd->add_subcommand(
        "rho", "composed descent map; finite field when --k >= 2, series otherwise");
    add_common(rho);
    rho->add_option("--k", *kk, "extension degree (>= 2 selects the finite substrate)");
    rho->add_option("--a", *a_lit, "element indices (finite) or series literals")->required();
    rho->callback([&, p, cap, a_lit, kk, prec_of] {
      auto r = fresh("valo rho");
      if (*kk >= 2)
        run_valo_rho_finite(r, *p, *kk, *a_lit);
      else
        run_valo_rho_series(r, *p, *a_lit, *cap, prec_of());
      report = std::move(r);
    });

    auto* pipe = valo_cmd->add_subcommand("pipeline",
                                          "small-valuation preimage and Artin-Schreier root");
    add_common(pipe);
    pipe->add_option("--a", *a_lit, "comma-separated series literals")->required();
    pipe->add_option("--u", *u_lit, "target series literal")->required();
    pipe->callback([&, p, cap, a_lit, u_lit, prec_of] {
      auto r = fresh("valo pipeline");
      run_valo_pipeline(r, *p, *a_lit, *u_lit, *cap, prec_of());
      report = std::move(r);
    });

    auto* bgrid = valo_cmd->add_subcommand("bgrid", "scaled grid with the reversed-lex law");
    add_common(bgrid, false);
    bgrid->add_option("--n", *n, "grid dimensions")->required();
    bgrid->add_option("--ell", *ell, "grid side")->required();
    bgrid->add_option("--y", *y_lit, "scale series literal")->required();
    bgrid->add_option("--gap", *gap, "scale gap, needs p^gap > n (default 2)");
    bgrid->add_option("--cap", *bg_cap, "perfection cap (default n*ell*gap + 2)");
    bgrid->callback([&, p, y_lit, n, ell, gap, bg_cap] {
      auto r = fresh("valo bgrid");
      run_valo_bgrid(r, *p, *n, *ell, *y_lit, *gap,
                     *bg_cap >= 0 ? std::optional<int>(*bg_cap) : std::nullopt);
      report = std::move(r);
    });
  }

  // shatter
  {
    auto* sh = app.add_subcommand("shatter", "finite shattering semantics");
    sh->require_subcommand(1);

    auto rel_path = std::make_shared<std::string>();
    auto grid_lit = std::make_shared<std::string>();
    auto* decide = sh->add_subcommand("decide", "is the given grid shattered?");
    decide->add_option("--rel", *rel_path, "relation file (.json or 0/1 text)")->required();
    decide->add_option("--grid", *grid_lit, "subsets per part, e.g. 0,1;2,3")->required();
    decide->callback([&, rel_path, grid_lit] {
      auto r = fresh("shatter decide");
      run_shatter_decide(r, *rel_path, *grid_lit);
      report = std::move(r);
    });

    auto caps_lit = std::make_shared<std::string>();
    auto* mx = sh->add_subcommand("max", "largest shattered square grid under caps");
    mx->add_option("--rel", *rel_path, "relation file (.json or 0/1 text)")->required();
    mx->add_option("--caps", *caps_lit, "per-part subset size caps, e.g. 2,2")->required();
    mx->callback([&, rel_path, caps_lit] {
      auto r = fresh("shatter max");
      run_shatter_max(r, *rel_path, *caps_lit);
      report = std::move(r);
    });

    auto msize = std::make_shared<int>(0), arity = std::make_shared<int>(0);
    auto base_bits = std::make_shared<std::string>(), coords_lit = std::make_shared<std::string>(),
         tables_lit = std::make_shared<std::string>(), out_path = std::make_shared<std::string>();
    auto* comp = sh->add_subcommand("compose",
                                    "witness relation from a base predicate and pair functions");
    comp->add_option("--msize", *msize, "carrier size")->required();
    comp->add_option("--arity", *arity, "base predicate arity")->required();
    comp->add_option("--base", *base_bits, "0/1 string of length msize^arity")->required();
    comp->add_option("--coords", *coords_lit, "pairs per slot, e.g. 1,2;1,3;2,3")->required();
    comp->add_option("--tables", *tables_lit, "table names per slot from add,mul,sub")
        ->required();
    comp->add_option("--out", *out_path, "write the composed relation JSON here");
    comp->callback([&, msize, arity, base_bits, coords_lit, tables_lit, out_path] {
      auto r = fresh("shatter compose");
      run_shatter_compose(r, *msize, *arity, *base_bits, *coords_lit, *tables_lit, *out_path);
      report = std::move(r);
    });

    auto bp = std::make_shared<int>(0), bk = std::make_shared<int>(1), bm = std::make_shared<int>(0),
         bd = std::make_shared<int>(0);
    auto symplectic = std::make_shared<bool>(false), demo = std::make_shared<bool>(false);
    auto bseed = std::make_shared<uint64_t>(0);
    auto* bil = sh->add_subcommand("bilinear", "pairing encoder on K^m");
    bil->add_option("--p", *bp, "characteristic")->required();
    bil->add_option("--k", *bk, "extension degree");
    bil->add_option("--m", *bm, "space dimension")->required();
    bil->add_option("--d", *bd, "target matrix side")->required();
    bil->add_flag("--symplectic", *symplectic, "use the block-alternating form");
    bil->add_flag("--demo", *demo, "run the subset-shattering demo instead of a random target");
    auto* bseed_opt = bil->add_option("--seed", *bseed, "RNG seed for the random target");
    bil->callback([&, bp, bk, bm, bd, symplectic, demo, bseed, bseed_opt] {
      auto r = fresh("shatter bilinear");
      std::optional<uint64_t> s;
      if (bseed_opt->count() > 0) s = *bseed;
      if (s.has_value()) r.seed = s;
      run_shatter_bilinear(r, *bp, *bk, *bm, *bd, *symplectic, *demo, s);
      report = std::move(r);
    });

    auto l = std::make_shared<int>(0), m = std::make_shared<int>(0), n = std::make_shared<int>(0);
    auto budget = std::make_shared<long long>(shatter::kDefaultRamseyBudget);
    auto* ram = sh->add_subcommand("ramsey", "least side forcing a monochromatic box");
    ram->add_option("--l", *l, "box side")->required();
    ram->add_option("--m", *m, "colors")->required();
    ram->add_option("--n", *n, "dimensions")->required();
    ram->add_option("--budget", *budget, "search node budget");
    ram->callback([&, l, m, n, budget] {
      auto r = fresh("shatter ramsey");
      run_shatter_ramsey(r, *l, *m, *n, *budget);
      report = std::move(r);
    });

    auto graph_path = std::make_shared<std::string>();
    auto binrels = std::make_shared<std::vector<std::string>>();
    auto* bl = sh->add_subcommand("blindpair",
                                  "edge/non-edge pair with equal binary-atom patterns");
    bl->add_option("--graph", *graph_path, "3-partite hypergraph JSON")->required();
    bl->add_option("--binrel", *binrels,
                   "binary relation as global-id pairs, e.g. 0,4;1,3 (repeatable)");
    bl->callback([&, graph_path, binrels] {
      auto r = fresh("shatter blindpair");
      run_shatter_blindpair(r, *graph_path, *binrels);
      report = std::move(r);
    });
  }

  // opg
  {
    auto* og = app.add_subcommand("opg", "ordered partite hypergraphs");
    og->require_subcommand(1);

    auto parts_lit = std::make_shared<std::string>(), out_path = std::make_shared<std::string>();
    auto num = std::make_shared<long long>(1), den = std::make_shared<long long>(2);
    auto seed = std::make_shared<uint64_t>(0);
    auto* gen = og->add_subcommand("gen", "reproducible random hypergraph");
    gen->add_option("--parts", *parts_lit, "part sizes, e.g. 8,8,8")->required();
    gen->add_option("--num", *num, "edge probability numerator");
    gen->add_option("--den", *den, "edge probability denominator");
    gen->add_option("--seed", *seed, "RNG seed")->required();
    gen->add_option("--out", *out_path, "write the hypergraph JSON here");
    gen->callback([&, parts_lit, num, den, seed, out_path] {
      auto r = fresh("opg gen");
      r.seed = *seed;
      run_opg_gen(r, *parts_lit, *num, *den, *seed, *out_path);
      report = std::move(r);
    });

    auto graph_path = std::make_shared<std::string>();
    auto k = std::make_shared<int>(1);
    auto max_failures = std::make_shared<int>(20);
    auto* chk = og->add_subcommand("check", "grade the k-bounded extension demands");
    chk->add_option("--graph", *graph_path, "hypergraph JSON")->required();
    chk->add_option("--k", *k, "demand size bound (default 1)");
    chk->add_option("--max-failures", *max_failures, "failures listed in the report");
    chk->callback([&, graph_path, k, max_failures] {
      auto r = fresh("opg check");
      run_opg_check(r, *graph_path, *k, *max_failures);
      report = std::move(r);
    });

    auto pattern_path = std::make_shared<std::string>(), box_lit = std::make_shared<std::string>();
    auto* cp = og->add_subcommand("copy", "least induced copy of a pattern inside a box");
    cp->add_option("--graph", *graph_path, "hypergraph JSON")->required();
    cp->add_option("--pattern", *pattern_path, "pattern hypergraph JSON")->required();
    cp->add_option("--box", *box_lit, "per-part lo-hi ranges, e.g. 0-3;0-2;1-4");
    cp->callback([&, graph_path, pattern_path, box_lit] {
      auto r = fresh("opg copy");
      run_opg_copy(r, *graph_path, *pattern_path, *box_lit);
      report = std::move(r);
    });

    auto a_path = std::make_shared<std::string>(), b_path = std::make_shared<std::string>(),
         c_path = std::make_shared<std::string>();
    auto c_in_a = std::make_shared<std::string>(), c_in_b = std::make_shared<std::string>();
    auto* am = og->add_subcommand("amalgamate", "free amalgam of two factors over a core");
    am->add_option("--a", *a_path, "first factor JSON")->required();
    am->add_option("--b", *b_path, "second factor JSON")->required();
    am->add_option("--c", *c_path, "shared core JSON")->required();
    am->add_option("--c-in-a", *c_in_a, "core embedding per part, e.g. 0,2;1")->required();
    am->add_option("--c-in-b", *c_in_b, "core embedding per part")->required();
    am->add_option("--out", *out_path, "write the amalgam JSON here");
    am->callback([&, a_path, b_path, c_path, c_in_a, c_in_b, out_path] {
      auto r = fresh("opg amalgamate");
      run_opg_amalgamate(r, *a_path, *b_path, *c_path, *c_in_a, *c_in_b, *out_path);
      report = std::move(r);
    });
  }

  // chaincond
  {
    auto* cc = app.add_subcommand("chaincond", "uniform subgroup families and redundancy");
    cc->require_subcommand(1);

    auto p = std::make_shared<int>(0), k = std::make_shared<int>(0), n = std::make_shared<int>(0),
         d = std::make_shared<int>(0);
    auto params_lit = std::make_shared<std::string>(), families_lit = std::make_shared<std::string>();
    auto* red = cc->add_subcommand("redundant", "find a removable grid index");
    red->add_option("--p", *p, "characteristic")->required();
    red->add_option("--k", *k, "extension degree")->required();
    red->add_option("--n", *n, "parameter rows")->required();
    red->add_option("--d", *d, "row width")->required();
    red->add_option("--params", *params_lit, "rows of element indices, e.g. 1,2,3;2,5,7")
        ->required();
    red->add_option("--families", *families_lit, "comma list from product, twist, ambient")
        ->required();
    red->callback([&, p, k, n, d, params_lit, families_lit] {
      auto r = fresh("chaincond redundant");
      run_chaincond_redundant(r, *p, *k, *n, *d, *params_lit, *families_lit);
      report = std::move(r);
    });

    auto trials = std::make_shared<int>(0);
    auto seed = std::make_shared<uint64_t>(0);
    auto max_d = std::make_shared<int>(16);
    auto proof = std::make_shared<bool>(false);
    auto* thr = cc->add_subcommand("threshold", "least width where sampling always finds one");
    thr->add_option("--p", *p, "characteristic")->required();
    thr->add_option("--k", *k, "extension degree")->required();
    thr->add_option("--n", *n, "parameter rows")->required();
    thr->add_option("--families", *families_lit, "comma list from product, twist, ambient")
        ->required();
    thr->add_option("--trials", *trials, "arrays sampled per width")->required();
    thr->add_option("--seed", *seed, "RNG seed")->required();
    thr->add_option("--max-d", *max_d, "width budget (default 16)");
    thr->add_flag("--proof-bound", *proof,
                  "also compute the two-family composition bound when feasible");
    thr->callback([&, p, k, n, families_lit, trials, seed, max_d, proof] {
      auto r = fresh("chaincond threshold");
      r.seed = *seed;
      run_chaincond_threshold(r, *p, *k, *n, *families_lit, *trials, *seed, *max_d, *proof);
      report = std::move(r);
    });
  }

  // suite
  {
    auto* c = app.add_subcommand("suite", "run the full acceptance battery");
    c->callback([&] {
      auto r = fresh("suite");
      run_suite(r, err);
      report = std::move(r);
    });
  }

  // Let --pretty (declared on the root) be given after a subcommand too.
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    for (auto* s : a->get_subcommands([](const CLI::App*) { return true; })) {
      s->fallthrough();
      enable_fallthrough(s);
    }
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << e.message << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = active;
    Json payload;
    payload["kind"] = e.kind();
    payload["message"] = e.what();
    payload["partial"] = ser::parse_json(e.partial);
    j["error"] = std::move(payload);
    out << j.dump(2) << "\n";
    return 1;
  } catch (const Error& e) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = active;
    Json payload;
    payload["kind"] = e.kind();
    payload["message"] = e.what();
    j["error"] = std::move(payload);
    out << j.dump(2) << "\n";
    return 1;
  }

  if (!report.has_value()) {
    err << "no subcommand produced a report\n";
    return 2;
  }
  if (pretty)
    out << report->pretty();
  else
    out << report->to_json().dump(2) << "\n";
  return report->all_pass() ? 0 : 1;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cli
}  // namespace ndep
