#pragma once

#include <string>

#include <json.hpp>

#include "cwsrep/detrep.hpp"
#include "cwsrep/hyperbolicity.hpp"
#include "cwsrep/intersect.hpp"
#include "cwsrep/numrange.hpp"
#include "cwsrep/polyring.hpp"

namespace cwsrep::io {

using json = nlohmann::ordered_json;

/// {"degree": d, "terms": [{"a","j","k","re","im"}, ...]} over nonzero
/// coefficients in canonical order.
json to_json(const HomPoly& f);
HomPoly poly_from_json(const json& j);

/// {"rows", "cols", "entries": row-major [re, im] pairs}. Also accepts a
/// nested array of rows.
json to_json(const CMat& m);
CMat matrix_from_json(const json& j);

json to_json(const BlockCWS& a);
BlockCWS cws_from_json(const json& j);

json to_json(const ProjPoint& p);
json to_json(const HypVerdict& v);
json to_json(const InterlaceVerdict& v);
json to_json(const InvarianceReport& r);
json to_json(const AssumptionReport& r);
json to_json(const CWSReport& r);
json to_json(const ConstructDiagnostics& d);
json to_json(const SymmetryInfo& s);
json to_json(const SynthResult& s);
json to_json(const HigherRankRange& r);

/// theta, h, lambda_1..lambda_d, re_z, im_z
std::string to_csv(const RangeSample& s);

/// Throws IoError when the file cannot be read and ValidationError when it is
/// not valid JSON.
json read_json_file(const std::string& path);
/// "-" writes to stdout.
void write_text(const std::string& path, const std::string& text);

}  // namespace cwsrep::io
