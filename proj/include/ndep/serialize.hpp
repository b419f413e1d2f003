#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ndep/moore.hpp"
#include "ndep/opg.hpp"
#include "ndep/ratfunc.hpp"
#include "ndep/series.hpp"
#include "ndep/shatter.hpp"

namespace ndep {
namespace ser {

/* Insertion-ordered JSON so that identical inputs dump to identical bytes. */
using Json = nlohmann::ordered_json;

/* RFC 4648 with padding; decode is strict (rejects bad characters, bad
   length, and nonzero bits hidden in the padding). */
std::string base64_encode(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> base64_decode(const std::string& text);

/* Field elements travel as their coefficient vectors, constant term first. */
Json gfelem_to_json(const algebra::GFElem& x);
algebra::GFElem gfelem_from_json(const algebra::FieldPtr& field, const Json& j);

/* {"p":..,"k":..,"cap":..,"terms":[[num,denomLog,[coeffs]],...],
    "precision":[num,denomLog]}; terms in stored (ascending-exponent) order. */
Json series_to_json(const algebra::TruncatedSeries& s);
algebra::TruncatedSeries series_from_json(const Json& j);

/* {"p":..,"k":..,"num":[[coeffs],...],"den":[[coeffs],...]}, constant
   coefficient first in each polynomial. */
Json ratfunc_to_json(const algebra::RationalFunction& f);
algebra::RationalFunction ratfunc_from_json(const Json& j);

/* {"p":..,"k":..,"a":[...],"alpha":[...],"beta":[[...],...],"delta":[...]};
   loading rebuilds the iso from "a" and cross-checks the other fields. */
Json iso_to_json(const moore::IsoData<algebra::GFElem>& iso);
moore::IsoData<algebra::GFElem> iso_from_json(const Json& j);

/* {"parts":[d1,...],"witnesses":[{"id":..,"bits":"<base64>"}]}; tensor bits
   pack flat-index order, most significant bit of each byte first. */
Json relation_to_json(const shatter::WitnessedRelation& rel);
shatter::WitnessedRelation relation_from_json(const Json& j);

/* Plain-text form: first non-comment line holds the part sizes, then one
   row of 0/1 characters per witness (embedded whitespace ignored, '#' starts
   a comment); witness ids are the row numbers 0,1,... */
std::string relation_to_text(const shatter::WitnessedRelation& rel);
shatter::WitnessedRelation relation_from_text(const std::string& text);

/* {"n":..,"parts":[s1,...],"edges":[[i,j,k],...]}; n must match parts. */
Json opg_to_json(const opg::OrderedPartiteHypergraph& h);
opg::OrderedPartiteHypergraph opg_from_json(const Json& j);

/* {"d":..,"nu":[...] or null,"verified":..,"families":t} */
Json redundancy_to_json(int d, const std::optional<std::vector<int>>& nu, int families);

/* Throws DomainError when unreadable, ShapeError when unparseable. */
Json load_json_file(const std::string& path);
Json parse_json(const std::string& text);
void save_text_file(const std::string& path, const std::string& text);
std::string load_text_file(const std::string& path);

}  // namespace ser
}  // namespace ndep
