#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cwsrep/detrep.hpp"
#include "cwsrep/errors.hpp"
#include "cwsrep/hyperbolicity.hpp"
#include "cwsrep/intersect.hpp"
#include "cwsrep/json_io.hpp"
#include "cwsrep/numrange.hpp"
#include "cwsrep/polyring.hpp"

using namespace cwsrep;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string out = "-";
  std::uint64_t seed = 1;
  double tol_root = 1e-7;
  double tol_point = 1e-8;
  double tol_rank = 1e-11;
  int grid = 0;
  int n = 1;
  int d = -1;
};

struct Inputs {
  std::string f, g, matrix;
  bool dihedral = false;
  std::string schedule;
  double s = 0.1;
  bool retract = false;
  int k = 2;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "output path, '-' for stdout");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--tol-root", c.tol_root, "imaginary-part tolerance for real roots");
  sub->add_option("--tol-point", c.tol_point, "point matching tolerance");
  sub->add_option("--tol-rank", c.tol_rank, "Sylvester rank tolerance");
  sub->add_option("--grid", c.grid, "theta grid size");
  sub->add_option("--n", c.n, "rotation order");
  sub->add_option("--d", c.d, "expected degree or size");
}

json header(const std::string& cmd, const Common& c) {
  return {{"tool", "cwsrep"},
          {"version", kVersion},
          {"command", cmd},
          {"seed", c.seed},
          {"tolerances", {{"tol_root", c.tol_root}, {"tol_point", c.tol_point}, {"tol_rank", c.tol_rank}}}};
}

std::string csv_header(const std::string& cmd, const Common& c, int grid) {
  std::ostringstream os;
  os << "# cwsrep " << kVersion << " command=" << cmd << " seed=" << c.seed << " grid=" << grid
     << " tol_root=" << c.tol_root << " tol_point=" << c.tol_point << " tol_rank=" << c.tol_rank << "\n";
  return os.str();
}

CheckOptions check_options(const Common& c) {
  CheckOptions o;
  o.hyp.tol_root = c.tol_root;
  o.hyp.seed = c.seed;
  o.inter.tol_point = c.tol_point;
  o.inter.tol_rank = c.tol_rank;
  o.inter.seed = c.seed + 6;
  return o;
}

HomPoly load_poly(const std::string& path, const Common& c) {
  if (path.empty()) throw ValidationError("missing --f");
  HomPoly f = io::poly_from_json(io::read_json_file(path));
  if (c.d >= 0 && f.degree() != c.d) throw ValidationError("polynomial degree differs from --d");
  return f;
}

CMat load_matrix(const std::string& path, const Common& c) {
  if (path.empty()) throw ValidationError("missing --matrix");
  CMat m = io::matrix_from_json(io::read_json_file(path));
  if (m.rows() != m.cols()) throw ValidationError("matrix must be square");
  if (c.d >= 0 && m.rows() != c.d) throw ValidationError("matrix size differs from --d");
  return m;
}

std::vector<double> parse_schedule(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("bad --perturb-schedule entry '" + item + "'");
    }
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_check(const Common& c, const Inputs& in) {
  const HomPoly f = normalize_lead(load_poly(in.f, c));
  json out = header("check", c);
  const CheckOptions opt = check_options(c);
  out["invariance"] = io::to_json(invariance_report(f, c.n));
  const HypVerdict hv = hyperbolicity_verdict(f, opt.hyp);
  out["hyperbolicity"] = io::to_json(hv);
  int code = 0;
  if (hv.status == HypStatus::not_hyperbolic) {
    out["seed_ok"] = false;
    code = 3;
  } else {
    const HomPoly g = in.g.empty() ? default_interlacer(f) : load_poly(in.g, Common{});
    const AssumptionReport rep = check_assumptions(f, g, c.n, opt);
    out["assumptions"] = io::to_json(rep);
    out["seed_ok"] = rep.all();
    if (!rep.all()) code = 3;
  }
  io::write_text(c.out, dump(out));
  return code;
}

int cmd_strictify(const Common& c, const Inputs& in) {
  const HomPoly f = load_poly(in.f, c);
  HypOptions ho;
  ho.tol_root = c.tol_root;
  ho.seed = c.seed;
  HomPoly r = in.retract ? retraction_point(f, in.s) : nuij_strictify(f, in.s, ho);
  json out = header("strictify", c);
  out["s"] = in.s;
  out["mode"] = in.retract ? "retraction" : "nuij";
  out["polynomial"] = io::to_json(r);
  out["hyperbolicity"] = io::to_json(hyperbolicity_verdict(r, ho));
  io::write_text(c.out, dump(out));
  return 0;
}

int cmd_construct(const Common& c, const Inputs& in) {
  const HomPoly f = load_poly(in.f, c);
  std::optional<HomPoly> g;
  if (!in.g.empty()) g = load_poly(in.g, Common{});
  ConstructOptions opt;
  opt.seed = c.seed;
  opt.check = check_options(c);
  if (!in.schedule.empty()) opt.perturb_schedule = parse_schedule(in.schedule);
  const ConstructResult r = construct_cws(f, c.n, in.dihedral, g, opt);
  json out = header("construct", c);
  out["dihedral"] = in.dihedral;
  out["perturb_schedule"] = opt.perturb_schedule;
  out["matrix"] = io::to_json(r.A);
  out["validation"] = io::to_json(validate_cws(r.A.entries, c.n, 1e-12));
  out["diagnostics"] = io::to_json(r.diag);
  io::write_text(c.out, dump(out));
  return 0;
}

int cmd_fa(const Common& c, const Inputs& in) {
  const CMat A = load_matrix(in.matrix, c);
  json out = header("fa", c);
  out["polynomial"] = io::to_json(char_poly(A));
  io::write_text(c.out, dump(out));
  return 0;
}

int cmd_range(const Common& c, const Inputs& in) {
  const CMat A = load_matrix(in.matrix, c);
  const int N = c.grid > 0 ? c.grid : default_grid(static_cast<int>(A.rows()));
  const RangeSample s = support_sweep(A, N);
  io::write_text(c.out, csv_header("range", c, N) + io::to_csv(s));
  return 0;
}

int cmd_wk(const Common& c, const Inputs& in) {
  const CMat A = load_matrix(in.matrix, c);
  const int N = c.grid > 0 ? c.grid : default_grid(static_cast<int>(A.rows()));
  const HigherRankRange r = higher_rank_range(A, in.k, N);
  std::ostringstream os;
  os.precision(17);
  os << csv_header("wk", c, N) << "# k=" << r.k << " empty=" << (r.empty ? "true" : "false")
     << " vertices=" << r.vertices.size() << "\n";
  os << "theta,lambda_k\n";
  for (std::size_t i = 0; i < r.theta.size(); ++i) os << r.theta[i] << ',' << r.support[i] << '\n';
  io::write_text(c.out, os.str());
  return 0;
}

int cmd_synth(const Common& c, const Inputs& in) {
  const CMat B = load_matrix(in.matrix, c);
  SynthOptions opt;
  opt.n = c.n > 1 ? c.n : 0;
  opt.grid = c.grid;
  opt.construct.seed = c.seed;
  opt.construct.check = check_options(c);
  if (!in.schedule.empty()) opt.construct.perturb_schedule = parse_schedule(in.schedule);
  const SynthResult r = synthesize_invariant_cws(B, opt);
  json out = header("synth", c);
  out["symmetry"] = io::to_json(detect_symmetry(support_sweep(B, opt.grid > 0 ? opt.grid : default_grid(B.rows())),
                                                static_cast<int>(B.rows())));
  out["result"] = io::to_json(r);
  io::write_text(c.out, dump(out));
  return 0;
}

int cmd_plotdata(const Common& c, const Inputs& in) {
  std::ostringstream os;
  os.precision(17);
  if (!in.matrix.empty()) {
    const CMat A = load_matrix(in.matrix, c);
    const int N = c.grid > 0 ? c.grid : default_grid(static_cast<int>(A.rows()));
    os << csv_header("plotdata", c, N) << "theta,branch,t,x,y,re_z,im_z\n";
    for (const auto& p : kippenhahn_samples(A, N))
      os << p.theta << ',' << p.branch << ',' << p.p[0] << ',' << p.p[1] << ',' << p.p[2] << ',' << p.z.real() << ','
         << p.z.imag() << '\n';
  } else {
    const HomPoly f = load_poly(in.f, c);
    const int N = c.grid > 0 ? c.grid : default_grid(f.degree());
    os << csv_header("plotdata", c, N) << "theta,branch,t,x,y\n";
    for (int i = 0; i < N; ++i) {
      const double th = 2.0 * std::numbers::pi * i / N;
      const double a = std::cos(th), b = std::sin(th);
      std::vector<double> real;
      for (const auto& r : restriction_roots(f, a, b))
        if (std::abs(r.imag()) <= c.tol_root * (1.0 + std::abs(r))) real.push_back(r.real());
      std::sort(real.rbegin(), real.rend());
      for (std::size_t j = 0; j < real.size(); ++j)
        os << th << ',' << j << ',' << real[j] << ',' << a << ',' << b << '\n';
    }
  }
  io::write_text(c.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block cyclic weighted shift representations of invariant hyperbolic curves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common c;
  Inputs in;
  auto* check = app.add_subcommand("check", "invariance, hyperbolicity and assumption report");
  auto* strictify = app.add_subcommand("strictify", "Nuij strictification or retraction path point");
  auto* construct = app.add_subcommand("construct", "build a block cyclic weighted shift matrix for f");
  auto* fa = app.add_subcommand("fa", "F_A of a matrix");
  auto* range = app.add_subcommand("range", "support function sweep as CSV");
  auto* wk = app.add_subcommand("wk", "higher-rank numerical range support as CSV");
  auto* synth = app.add_subcommand("synth", "invariant block matrix with the same numerical range");
  auto* plot = app.add_subcommand("plotdata", "curve samples for plotting");
  for (auto* s : {check, strictify, construct, fa, range, wk, synth, plot}) add_common(s, c);
  for (auto* s : {check, strictify, construct, plot}) s->add_option("--f", in.f, "polynomial JSON");
  for (auto* s : {check, construct}) s->add_option("--g", in.g, "interlacer JSON");
  for (auto* s : {fa, range, wk, synth, plot}) s->add_option("--matrix", in.matrix, "matrix JSON");
  for (auto* s : {construct, synth}) s->add_option("--perturb-schedule", in.schedule, "comma separated s values");
  construct->add_flag("--dihedral", in.dihedral, "real D_2n construction");
  strictify->add_option("--s", in.s, "smoothing or retraction parameter");
  strictify->add_flag("--retract", in.retract, "use the retraction path");
  wk->add_option("--k", in.k, "rank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*check) return cmd_check(c, in);
    if (*strictify) return cmd_strictify(c, in);
    if (*construct) return cmd_construct(c, in);
    if (*fa) return cmd_fa(c, in);
    if (*range) return cmd_range(c, in);
    if (*wk) return cmd_wk(c, in);
    if (*synth) return cmd_synth(c, in);
    if (*plot) return cmd_plotdata(c, in);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const AssumptionError& e) {
    std::cerr << "assumption failure: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  }
  return 2;
}
