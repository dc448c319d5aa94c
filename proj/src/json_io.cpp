#include "cwsrep/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cwsrep/errors.hpp"

namespace cwsrep::io {

namespace {

json cplx_pair(cplx c) { return json::array({c.real(), c.imag()}); }

cplx pair_value(const json& e) {
  if (e.is_number()) return e.get<double>();
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ValidationError("matrix entry must be a number or an [re, im] pair");
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

json to_json(const HomPoly& f) {
  json terms = json::array();
  f.for_each([&](int a, int j, int k, cplx c) {
    if (c != 0.0) terms.push_back({{"a", a}, {"j", j}, {"k", k}, {"re", c.real()}, {"im", c.imag()}});
  });
  return {{"degree", f.degree()}, {"basis", "t^a (x+iy)^j (x-iy)^k"}, {"terms", terms}};
}

HomPoly poly_from_json(const json& j) {
  const int d = field<int>(j, "degree");
  if (d < 0) throw ValidationError("polynomial degree must be nonnegative");
  HomPoly f(d);
  if (!j.contains("terms") || !j["terms"].is_array()) throw ValidationError("missing array 'terms'");
  for (const auto& t : j["terms"]) {
    const int a = field<int>(t, "a"), jj = field<int>(t, "j"), k = field<int>(t, "k");
    if (a < 0 || jj < 0 || k < 0 || a + jj + k != d) throw ValidationError("term exponents do not sum to the degree");
    const double re = t.contains("re") ? field<double>(t, "re") : 0.0;
    const double im = t.contains("im") ? field<double>(t, "im") : 0.0;
    f.coeff(a, jj, k) += cplx(re, im);
  }
  return f;
}

json to_json(const CMat& m) {
  json e = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) e.push_back(cplx_pair(m(i, k)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

CMat matrix_from_json(const json& j) {
  if (j.is_array()) {
    const int r = static_cast<int>(j.size());
    CMat m(r, r);
    for (int i = 0; i < r; ++i) {
      if (!j[i].is_array() || static_cast<int>(j[i].size()) != r) throw ValidationError("matrix must be square");
      for (int k = 0; k < r; ++k) m(i, k) = pair_value(j[i][k]);
    }
    return m;
  }
  int rows = 0, cols = 0;
  if (j.contains("rows")) {
    rows = field<int>(j, "rows");
    cols = j.contains("cols") ? field<int>(j, "cols") : rows;
  } else {
    rows = cols = field<int>(j, "d");
  }
  if (!j.contains("entries") || !j["entries"].is_array()) throw ValidationError("missing array 'entries'");
  const json& e = j["entries"];
  if (rows < 0 || cols < 0 || static_cast<int>(e.size()) != rows * cols)
    throw ValidationError("entry count does not match the matrix shape");
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = pair_value(e[i * cols + k]);
  return m;
}

json to_json(const BlockCWS& a) {
  json e = to_json(a.entries)["entries"];
  return {{"n", a.n}, {"d", a.d}, {"real", a.real}, {"entries", e}};
}

BlockCWS cws_from_json(const json& j) {
  BlockCWS a;
  a.n = field<int>(j, "n");
  a.d = field<int>(j, "d");
  a.real = j.contains("real") ? field<bool>(j, "real") : false;
  json m = j;
  m["rows"] = a.d;
  m["cols"] = a.d;
  a.entries = matrix_from_json(m);
  return a;
}

json to_json(const ProjPoint& p) {
  return {{"t", cplx_pair(p.t())},
          {"x", cplx_pair(p.x())},
          {"y", cplx_pair(p.y())},
          {"multiplicity", p.multiplicity},
          {"at_infinity", p.at_infinity}};
}

json to_json(const HypVerdict& v) {
  return {{"status", to_string(v.status)},
          {"witness", v.witness},
          {"min_gap", std::isfinite(v.min_gap) ? json(v.min_gap) : json(nullptr)},
          {"max_imag", v.max_imag},
          {"directions", v.directions},
          {"tol_root", v.tol_root},
          {"tol_gap", v.tol_gap}};
}

json to_json(const InterlaceVerdict& v) {
  return {{"status", v.status},
          {"interlaces", v.interlaces},
          {"strict", v.strict},
          {"witness", v.witness},
          {"min_separation", std::isfinite(v.min_separation) ? json(v.min_separation) : json(nullptr)},
          {"directions", v.directions}};
}

json to_json(const InvarianceReport& r) {
  return {{"n", r.n},
          {"real_valued", r.real_valued},
          {"cyclic", r.cyclic},
          {"dihedral", r.dihedral},
          {"lead", cplx_pair(r.lead)},
          {"tolerance", r.tolerance},
          {"real_violation", r.real_violation},
          {"cyclic_violation", r.cyclic_violation},
          {"dihedral_violation", r.dihedral_violation}};
}

json to_json(const AssumptionReport& r) {
  json pts = json::array();
  for (const auto& p : r.intersection.points) pts.push_back(to_json(p));
  return {{"n", r.n},
          {"d", r.d},
          {"A1", r.a1},
          {"A2", r.a2},
          {"A3", r.a3},
          {"A4", r.a4},
          {"all", r.all()},
          {"hyperbolicity", to_json(r.hyperbolicity)},
          {"smooth", r.smooth},
          {"singular_residual", r.singular_residual},
          {"interlacing", to_json(r.interlacing)},
          {"intersection",
           {{"points", pts},
            {"total_multiplicity", r.intersection.total_multiplicity},
            {"max_residual", r.intersection.max_residual},
            {"min_transversality", r.intersection.min_transversality},
            {"attempts_used", r.intersection.attempts_used},
            {"consistent", r.intersection.consistent}}},
          {"points_at_infinity", r.points_at_infinity},
          {"expected_at_infinity", r.expected_at_infinity},
          {"messages", r.messages}};
}

json to_json(const CWSReport& r) {
  return {{"valid", r.valid},
          {"real", r.real},
          {"off_pattern", r.off_pattern},
          {"omega_defect", r.omega_defect},
          {"max_imag", r.max_imag},
          {"tolerance", r.tolerance}};
}

json to_json(const ConstructDiagnostics& d) {
  return {{"s", d.s},
          {"eps", d.eps},
          {"delta", d.delta},
          {"retries", d.retries},
          {"candidates", d.candidates},
          {"fit_residual", d.fit_residual},
          {"pattern_defect", d.pattern_defect},
          {"ct_identity_error", d.ct_identity_error},
          {"flipped", d.flipped},
          {"err_used", d.err_used},
          {"err_target", d.err_target},
          {"f_used", to_json(d.f_used)},
          {"g_used", to_json(d.g_used)},
          {"notes", d.notes}};
}

json to_json(const SymmetryInfo& s) {
  return {{"rotation_order", s.rotation_order},
          {"conj_invariant", s.conj_invariant},
          {"rotation_error", s.rotation_error},
          {"conj_error", s.conj_error}};
}

json to_json(const SynthResult& s) {
  return {{"n", s.n},
          {"conj_invariant", s.conj_invariant},
          {"direct", s.direct},
          {"fit_degree", s.fit_degree},
          {"fit_sigma_ratio", s.fit_sigma_ratio},
          {"pad", s.pad},
          {"target", to_json(s.target)},
          {"support_deviation", s.support_deviation},
          {"matrix", to_json(s.A)},
          {"construct", to_json(s.construct)}};
}

json to_json(const HigherRankRange& r) {
  json v = json::array();
  for (const auto& z : r.vertices) v.push_back(cplx_pair(z));
  return {{"k", r.k}, {"empty", r.empty}, {"vertices", v}};
}

std::string to_csv(const RangeSample& s) {
  std::ostringstream os;
  os.precision(17);
  os << "theta,h";
  for (int j = 1; j <= s.d; ++j) os << ",lambda_" << j;
  os << ",re_z,im_z\n";
  for (int i = 0; i < s.size(); ++i) {
    os << s.theta[i] << ',' << s.h[i];
    for (int j = 0; j < s.d; ++j) os << ',' << s.lambda(i, j);
    os << ',' << s.z[i].real() << ',' << s.z[i].imag() << '\n';
  }
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace cwsrep::io
