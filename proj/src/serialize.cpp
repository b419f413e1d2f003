#include "ndep/serialize.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ndep {
namespace ser {

using algebra::FieldPtr;
using algebra::GFElem;
using algebra::GFPoly;
using algebra::PExp;
using algebra::TruncatedSeries;

namespace {

constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object()) throw ShapeError(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) throw ShapeError(std::string("missing field \"") + key + "\"");
  return *it;
}

long long need_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ShapeError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

const Json& need_array(const Json& j, const char* what) {
  if (!j.is_array()) throw ShapeError(std::string(what) + " must be an array");
  return j;
}

FieldPtr field_of(const Json& j) {
  long long p = need_int(need(j, "p"), "\"p\"");
  long long k = need_int(need(j, "k"), "\"k\"");
  return algebra::GaloisField::make(static_cast<int>(p), static_cast<int>(k));
}

Json pexp_to_json(const PExp& e) { return Json::array({e.num(), e.denom_log()}); }

PExp pexp_from_json(const Json& j, int p, const char* what) {
  need_array(j, what);
  if (j.size() != 2) throw ShapeError(std::string(what) + " must be [numer, denomLog]");
  return PExp(need_int(j[0], what), static_cast<int>(need_int(j[1], what)), p);
}

std::vector<GFElem> gfelem_vec_from_json(const FieldPtr& f, const Json& j, const char* what) {
  need_array(j, what);
  std::vector<GFElem> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(gfelem_from_json(f, e));
  return out;
}

Json gfelem_vec_to_json(const std::vector<GFElem>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(gfelem_to_json(x));
  return a;
}

GFPoly poly_from_json(const FieldPtr& f, const Json& j, const char* what) {
  return GFPoly(f, gfelem_vec_from_json(f, j, what));
}

Json poly_to_json(const GFPoly& p) { return gfelem_vec_to_json(p.coeffs()); }

}  // namespace

std::string base64_encode(const std::vector<uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    uint32_t v = (uint32_t(bytes[i]) << 16) | (uint32_t(bytes[i + 1]) << 8) | bytes[i + 2];
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(kB64[(v >> 6) & 63]);
    out.push_back(kB64[v & 63]);
  }
  size_t rest = bytes.size() - i;
  if (rest == 1) {
    uint32_t v = uint32_t(bytes[i]) << 16;
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    uint32_t v = (uint32_t(bytes[i]) << 16) | (uint32_t(bytes[i + 1]) << 8);
    out.push_back(kB64[(v >> 18) & 63]);
    out.push_back(kB64[(v >> 12) & 63]);
    out.push_back(kB64[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw ShapeError("base64 length must be a multiple of 4");
  std::vector<uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    uint32_t v = 0;
    for (size_t j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2) throw ShapeError("misplaced base64 padding");
        ++pad;
        v <<= 6;
        continue;
      }
      if (pad > 0) throw ShapeError("base64 data after padding");
      int d = b64_value(c);
      if (d < 0) throw ShapeError(std::string("bad base64 character '") + c + "'");
      v = (v << 6) | uint32_t(d);
    }
    out.push_back(uint8_t((v >> 16) & 0xff));
    if (pad < 2) out.push_back(uint8_t((v >> 8) & 0xff));
    if (pad < 1) out.push_back(uint8_t(v & 0xff));
    if ((pad >= 1 && (v & 0xff) != 0) || (pad == 2 && ((v >> 8) & 0xff) != 0))
      throw ShapeError("nonzero bits in base64 padding");
  }
  return out;
}

Json gfelem_to_json(const GFElem& x) {
  Json a = Json::array();
  for (int c : x.coeffs()) a.push_back(c);
  return a;
}

GFElem gfelem_from_json(const FieldPtr& field, const Json& j) {
  need_array(j, "field element");
  std::vector<int> c;
  c.reserve(j.size());
  for (const auto& e : j) c.push_back(static_cast<int>(need_int(e, "coefficient")));
  return field->from_coeffs(std::move(c));
}

Json series_to_json(const TruncatedSeries& s) {
  Json j;
  j["p"] = s.field()->p();
  j["k"] = s.field()->k();
  j["cap"] = s.cap();
  Json terms = Json::array();
  for (const auto& t : s.terms())
    terms.push_back(Json::array({t.exp.num(), t.exp.denom_log(), gfelem_to_json(t.coeff)}));
  j["terms"] = std::move(terms);
  j["precision"] = pexp_to_json(s.precision());
  return j;
}

TruncatedSeries series_from_json(const Json& j) {
  FieldPtr f = field_of(j);
  int p = f->p();
  int cap = static_cast<int>(need_int(need(j, "cap"), "\"cap\""));
  const Json& jt = need_array(need(j, "terms"), "\"terms\"");
  std::vector<algebra::SeriesTerm> terms;
  terms.reserve(jt.size());
  for (const auto& e : jt) {
    need_array(e, "term");
    if (e.size() != 3) throw ShapeError("term must be [numer, denomLog, [coeffs]]");
    PExp exp(need_int(e[0], "term exponent"), static_cast<int>(need_int(e[1], "term exponent")),
             p);
    terms.push_back({exp, gfelem_from_json(f, e[2])});
  }
  PExp prec = pexp_from_json(need(j, "precision"), p, "\"precision\"");
  return TruncatedSeries(f, cap, std::move(terms), prec);
}

Json ratfunc_to_json(const algebra::RationalFunction& f) {
  Json j;
  j["p"] = f.field()->p();
  j["k"] = f.field()->k();
  j["num"] = poly_to_json(f.num());
  j["den"] = poly_to_json(f.den());
  return j;
}

algebra::RationalFunction ratfunc_from_json(const Json& j) {
  FieldPtr f = field_of(j);
  return algebra::RationalFunction(poly_from_json(f, need(j, "num"), "\"num\""),
                                   poly_from_json(f, need(j, "den"), "\"den\""));
}

Json iso_to_json(const moore::IsoData<GFElem>& iso) {
  Json j;
  const FieldPtr& f = iso.a.front().field();
  j["p"] = f->p();
  j["k"] = f->k();
  j["a"] = gfelem_vec_to_json(iso.a);
  j["alpha"] = gfelem_vec_to_json(iso.alpha);
  Json beta = Json::array();
  for (int r = 0; r < iso.beta.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < iso.beta.cols(); ++c) row.push_back(gfelem_to_json(iso.beta.at(r, c)));
    beta.push_back(std::move(row));
  }
  j["beta"] = std::move(beta);
  j["delta"] = gfelem_to_json(iso.det_a);
  return j;
}

moore::IsoData<GFElem> iso_from_json(const Json& j) {
  FieldPtr f = field_of(j);
  auto a = gfelem_vec_from_json(f, need(j, "a"), "\"a\"");
  auto iso = moore::build_iso(a);
  auto alpha = gfelem_vec_from_json(f, need(j, "alpha"), "\"alpha\"");
  if (alpha.size() != iso.alpha.size())
    throw ShapeError("\"alpha\" length disagrees with the tuple");
  for (size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != iso.alpha[i]) throw ShapeError("\"alpha\" disagrees with the tuple");
  const Json& jb = need_array(need(j, "beta"), "\"beta\"");
  if (static_cast<int>(jb.size()) != iso.beta.rows())
    throw ShapeError("\"beta\" disagrees with the tuple");
  for (int r = 0; r < iso.beta.rows(); ++r) {
    const Json& row = need_array(jb[static_cast<size_t>(r)], "\"beta\" row");
    if (static_cast<int>(row.size()) != iso.beta.cols())
      throw ShapeError("\"beta\" disagrees with the tuple");
    for (int c = 0; c < iso.beta.cols(); ++c)
      if (gfelem_from_json(f, row[static_cast<size_t>(c)]) != iso.beta.at(r, c))
        throw ShapeError("\"beta\" disagrees with the tuple");
  }
  if (gfelem_from_json(f, need(j, "delta")) != iso.det_a)
    throw ShapeError("\"delta\" disagrees with the tuple");
  return iso;
}

Json relation_to_json(const shatter::WitnessedRelation& rel) {
  rel.validate();
  Json j;
  Json parts = Json::array();
  for (int d : rel.parts) parts.push_back(d);
  j["parts"] = std::move(parts);
  Json ws = Json::array();
  long long cells = rel.cell_count();
  for (size_t w = 0; w < rel.tensors.size(); ++w) {
    std::vector<uint8_t> bytes(static_cast<size_t>((cells + 7) / 8), 0);
    for (long long i = 0; i < cells; ++i)
      if (rel.tensors[w][static_cast<size_t>(i)])
        bytes[static_cast<size_t>(i / 8)] |= uint8_t(0x80u >> (i % 8));
    Json entry;
    entry["id"] = rel.ids[w];
    entry["bits"] = base64_encode(bytes);
    ws.push_back(std::move(entry));
  }
  j["witnesses"] = std::move(ws);
  return j;
}

shatter::WitnessedRelation relation_from_json(const Json& j) {
  shatter::WitnessedRelation rel;
  for (const auto& e : need_array(need(j, "parts"), "\"parts\""))
    rel.parts.push_back(static_cast<int>(need_int(e, "part size")));
  long long cells = rel.cell_count();
  size_t nbytes = static_cast<size_t>((cells + 7) / 8);
  for (const auto& e : need_array(need(j, "witnesses"), "\"witnesses\"")) {
    rel.ids.push_back(need_int(need(e, "id"), "\"id\""));
    const Json& bits = need(e, "bits");
    if (!bits.is_string()) throw ShapeError("\"bits\" must be a base64 string");
    std::vector<uint8_t> bytes = base64_decode(bits.get<std::string>());
    if (bytes.size() != nbytes)
      throw ShapeError("\"bits\" holds the wrong number of cells for the declared parts");
    std::vector<uint8_t> tensor(static_cast<size_t>(cells), 0);
    for (long long i = 0; i < cells; ++i)
      tensor[static_cast<size_t>(i)] =
          (bytes[static_cast<size_t>(i / 8)] >> (7 - i % 8)) & 1u;
    for (size_t b = static_cast<size_t>(cells); b < nbytes * 8; ++b)
      if ((bytes[b / 8] >> (7 - b % 8)) & 1u)
        throw ShapeError("nonzero bits beyond the last cell");
    rel.tensors.push_back(std::move(tensor));
  }
  rel.validate();
  return rel;
}

std::string relation_to_text(const shatter::WitnessedRelation& rel) {
  rel.validate();
  std::ostringstream out;
  for (size_t i = 0; i < rel.parts.size(); ++i) out << (i ? " " : "") << rel.parts[i];
  out << "\n";
  for (const auto& t : rel.tensors) {
    for (uint8_t b : t) out << (b ? '1' : '0');
    out << "\n";
  }
  return out.str();
}

shatter::WitnessedRelation relation_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  shatter::WitnessedRelation rel;
  bool have_parts = false;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (!have_parts) {
      std::istringstream ls(line);
      int d = 0;
      while (ls >> d) rel.parts.push_back(d);
      if (!rel.parts.empty()) have_parts = true;
      continue;
    }
    std::vector<uint8_t> tensor;
    for (char c : line) {
      if (c == '0' || c == '1')
        tensor.push_back(uint8_t(c - '0'));
      else if (!std::isspace(static_cast<unsigned char>(c)))
        throw ShapeError(std::string("bad character '") + c + "' in a witness row");
    }
    if (tensor.empty()) continue;
    rel.ids.push_back(static_cast<long long>(rel.tensors.size()));
    rel.tensors.push_back(std::move(tensor));
  }
  if (!have_parts) throw ShapeError("no part-size line");
  rel.validate();
  return rel;
}

Json opg_to_json(const opg::OrderedPartiteHypergraph& h) {
  h.validate();
  Json j;
  j["n"] = h.n();
  Json parts = Json::array();
  for (int s : h.parts) parts.push_back(s);
  j["parts"] = std::move(parts);
  Json edges = Json::array();
  for (const auto& e : h.edges) {
    Json t = Json::array();
    for (int v : e) t.push_back(v);
    edges.push_back(std::move(t));
  }
  j["edges"] = std::move(edges);
  return j;
}

opg::OrderedPartiteHypergraph opg_from_json(const Json& j) {
  opg::OrderedPartiteHypergraph h;
  long long n = need_int(need(j, "n"), "\"n\"");
  for (const auto& e : need_array(need(j, "parts"), "\"parts\""))
    h.parts.push_back(static_cast<int>(need_int(e, "part size")));
  if (n != h.n()) throw ShapeError("\"n\" disagrees with the number of parts");
  for (const auto& e : need_array(need(j, "edges"), "\"edges\"")) {
    std::vector<int> t;
    for (const auto& v : need_array(e, "edge")) t.push_back(static_cast<int>(need_int(v, "vertex")));
    h.edges.push_back(std::move(t));
  }
  h.normalize();
  h.validate();
  return h;
}

Json redundancy_to_json(int d, const std::optional<std::vector<int>>& nu, int families) {
  Json j;
  j["d"] = d;
  if (nu.has_value()) {
    Json v = Json::array();
    for (int e : *nu) v.push_back(e);
    j["nu"] = std::move(v);
  } else {
    j["nu"] = nullptr;
  }
  j["verified"] = nu.has_value();
  j["families"] = families;
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ShapeError(std::string("JSON parse error: ") + e.what());
  }
}

Json load_json_file(const std::string& path) { return parse_json(load_text_file(path)); }

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DomainError("write to " + path + " failed");
}

std::string load_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace ser
}  // namespace ndep
