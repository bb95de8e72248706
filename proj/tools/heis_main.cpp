// Command-line frontend: gauge geometry queries, metric projections and
// tangent balls, fundamental solutions and barriers, the grid solver, and
// the boundary-behavior experiment pipelines. Emits plain text, CSV, or
// JSON (one object with "config", "results", "diagnostics").
//
// Exit codes: 0 success, 1 domain/validation error, 2 numerical
// non-convergence. The environment variable HEIS_SEED overrides --seed.

#include "CLI11.hpp"
#include "json.hpp"

#include "heis/core.hpp"
#include "heis/domains.hpp"
#include "heis/grid.hpp"
#include "heis/hyperplanes.hpp"
#include "heis/potentials.hpp"
#include "heis/profiles.hpp"
#include "heis/solver.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using json = nlohmann::json;
using namespace heis;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_point(const Point& g) {
  std::string out;
  for (int i = 0; i < g.z.size(); ++i) out += fmt(g.z[i]) + ",";
  out += fmt(g.t);
  return out;
}

json json_point(const Point& g) {
  json a = json::array();
  for (int i = 0; i < g.z.size(); ++i) a.push_back(g.z[i]);
  a.push_back(g.t);
  return a;
}

Point parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() < 3 || vals.size() % 2 == 0)
    throw std::invalid_argument(
        "points are entered as z_1,...,z_2n,t (odd count >= 3): got '" +
        text + "'");
  Eigen::VectorXd z(vals.size() - 1);
  for (size_t i = 0; i + 1 < vals.size(); ++i) z[i] = vals[i];
  return Point(std::move(z), vals.back());
}

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  Eigen::VectorXd v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

std::uint64_t effective_seed(std::uint64_t cli_seed) {
  if (const char* env = std::getenv("HEIS_SEED"))
    return std::strtoull(env, nullptr, 10);
  return cli_seed;
}

struct Output {
  std::string path;  // empty -> stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output path " + path);
    os << text;
  }
};

// Field grammar shared by residual/decay/compare/solve boundary data:
//   t | gauge | gauge4 | const:c | linear:wx,wy | barrier:rin,rout[,cx,cy,ct]
//   | gamma[:cx,cy,ct,...]
ScalarField make_field(const std::string& spec, const PExponent& pe) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "t") return [](const Point& q) { return q.t; };
  if (head == "gauge") return [](const Point& q) { return gauge_norm(q); };
  if (head == "gauge4")
    return [](const Point& q) {
      const double n = gauge_norm(q);
      return n * n * n * n;
    };
  if (head == "const") {
    const double c = std::stod(args);
    return [c](const Point&) { return c; };
  }
  if (head == "linear") {
    const Eigen::VectorXd w = parse_vector(args);
    if (w.size() != 2 * pe.n)
      throw std::invalid_argument("linear field direction must have 2n parts");
    return [w](const Point& q) { return w.dot(q.z); };
  }
  if (head == "barrier") {
    const Eigen::VectorXd v = parse_vector(args);
    if (v.size() != 2 && v.size() != 5)
      throw std::invalid_argument(
          "barrier field expects rin,rout[,cx,cy,ct]");
    const double rin = v[0], rout = v[1];
    const Point center = v.size() == 5 ? Point::h1(v[2], v[3], v[4])
                                       : Point::identity(pe.n);
    return [=](const Point& q) {
      return ring_barrier(q, center, rin, rout, pe);
    };
  }
  if (head == "gamma") {
    const Point center = args.empty() ? Point::identity(pe.n)
                                      : parse_point(args);
    const SigmaP unit{1.0, static_cast<double>(pe.Q), 0.0};
    return [=](const Point& q) { return gamma_p(q, center, pe, unit); };
  }
  throw std::invalid_argument("unknown field spec '" + spec + "'");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"gauge geometry and p-harmonic boundary behavior on the "
               "Heisenberg group"};
  app.require_subcommand(1);
  app.fallthrough();  // --format / --out may follow the subcommand

  std::string format = "text";
  std::string out_path;
  app.add_option("--format", format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", out_path, "output file (default stdout)");

  // ---- dist ----
  auto* dist = app.add_subcommand("dist", "gauge distance between points");
  dist->set_help_flag("--help", "print help");  // frees -h for the point
  std::string dist_g, dist_h;
  int dist_n = 0;
  dist->add_option("--g", dist_g)->required();
  dist->add_option("--h", dist_h)->required();
  dist->add_option("--n", dist_n, "group index (checked against the points)");

  // ---- project ----
  auto* project = app.add_subcommand("project", "metric projection");
  bool proj_char = false;
  std::string proj_g, proj_omega;
  project->add_flag("--char", proj_char, "project onto {t = 0}");
  project->add_option("--g", proj_g)->required();
  project->add_option("--omega", proj_omega, "vertical plane normal");

  // ---- tangent-ball ----
  auto* tball = app.add_subcommand("tangent-ball", "tangent gauge balls");
  bool tb_vertical = false, tb_char = false, tb_family = false;
  std::string tb_g, tb_gbar, tb_omega;
  double tb_lambda = 1.0;
  tball->add_flag("--vertical", tb_vertical);
  tball->add_flag("--char", tb_char);
  tball->add_flag("--char-family", tb_family);
  tball->add_option("--g", tb_g);
  tball->add_option("--gbar", tb_gbar);
  tball->add_option("--omega", tb_omega);
  tball->add_option("--lambda", tb_lambda);

  // ---- path ----
  auto* path = app.add_subcommand("path", "segment and quasi-segment paths");
  bool path_vertical = false, path_quasi = false, path_gap = false;
  std::string path_g, path_omega;
  double path_lambda = 1.0, path_lambda1 = 0.0, path_lambda_bar = 0.25;
  path->add_flag("--vertical", path_vertical);
  path->add_flag("--quasi", path_quasi);
  path->add_flag("--quasi-gap", path_gap);
  path->add_option("--g", path_g);
  path->add_option("--omega", path_omega);
  path->add_option("--lambda", path_lambda);
  path->add_option("--lambda1", path_lambda1);
  path->add_option("--lambda-bar", path_lambda_bar);

  // ---- gamma ----
  auto* gamma = app.add_subcommand("gamma", "fundamental solution value");
  std::string gm_g, gm_gp;
  double gm_p = 2.0, gm_sigma = 0.0;
  std::int64_t gm_samples = 200000;
  std::uint64_t gm_seed = 2024;
  gamma->add_option("--g", gm_g)->required();
  gamma->add_option("--gprime", gm_gp)->required();
  gamma->add_option("--p", gm_p)->required();
  gamma->add_option("--sigma", gm_sigma, "sigma_p (estimated when omitted)");
  gamma->add_option("--samples", gm_samples);
  gamma->add_option("--seed", gm_seed);

  // ---- barrier ----
  auto* barrier = app.add_subcommand("barrier", "p-harmonic ring barrier");
  std::string br_g, br_center;
  double br_rin = 1.0, br_rout = 3.0, br_p = 2.0;
  barrier->add_option("--g", br_g)->required();
  barrier->add_option("--center", br_center);
  barrier->add_option("--r-in", br_rin)->required();
  barrier->add_option("--r-out", br_rout)->required();
  barrier->add_option("--p", br_p)->required();

  // ---- residual ----
  auto* residual = app.add_subcommand(
      "residual", "finite-difference residual of the p-laplacian");
  std::string rs_field = "t", rs_g;
  double rs_p = 2.0, rs_step = 1e-2;
  residual->add_option("--field", rs_field);
  residual->add_option("--g", rs_g)->required();
  residual->add_option("--p", rs_p)->required();
  residual->add_option("--step", rs_step);

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "variational Dirichlet solve");
  std::string sv_domain, sv_params, sv_bc = "const:0", sv_bbox;
  double sv_p = 2.0, sv_h = 0.1, sv_tol = 1e-6;
  int sv_max = 100000;
  bool sv_cascade = false;
  solve->set_help_flag("--help", "print help");
  solve->add_option("--domain", sv_domain)->required();
  solve->add_option("--params", sv_params);
  solve->add_option("--p", sv_p)->required();
  solve->add_option("--bc", sv_bc, "boundary data field spec");
  solve->add_option("--h", sv_h);
  solve->add_option("--bbox", sv_bbox, "x0,y0,t0,x1,y1,t1");
  solve->add_option("--tol", sv_tol);
  solve->add_option("--max-sweeps", sv_max);
  solve->add_flag("--cascade", sv_cascade,
                  "warm start from a solve at twice the spacing");

  // ---- charset ----
  auto* charset =
      app.add_subcommand("charset", "characteristic points of a boundary");
  std::string cs_domain, cs_params;
  int cs_mesh = 48;
  double cs_tol = 0.02;
  charset->add_option("--domain", cs_domain)->required();
  charset->add_option("--params", cs_params);
  charset->add_option("--mesh", cs_mesh);
  charset->add_option("--tol", cs_tol);

  // ---- decay ----
  auto* decay = app.add_subcommand("decay", "boundary decay profile");
  std::string dc_domain, dc_params, dc_field = "t", dc_g0, dc_dir,
                          dc_mode = "ray", dc_bc = "const:0";
  double dc_r = 0.3, dc_p = 2.0, dc_M = 10.0, dc_kappa = 4.0, dc_h = 0.1;
  int dc_count = 32;
  std::uint64_t dc_seed = 2024;
  decay->set_help_flag("--help", "print help");
  decay->add_option("--domain", dc_domain)->required();
  decay->add_option("--params", dc_params);
  decay->add_option("--field", dc_field,
                    "sampled field ('solve' runs the grid solver)");
  decay->add_option("--bc", dc_bc, "boundary data when --field solve");
  decay->add_option("--h", dc_h, "grid spacing when --field solve");
  decay->add_option("--g0", dc_g0)->required();
  decay->add_option("--r", dc_r)->required();
  decay->add_option("--p", dc_p);
  decay->add_option("--M", dc_M);
  decay->add_option("--kappa", dc_kappa);
  decay->add_option("--count", dc_count);
  decay->add_option("--mode", dc_mode)
      ->check(CLI::IsMember({"ray", "cone"}));
  decay->add_option("--dir", dc_dir, "ray direction x,y,t");
  decay->add_option("--seed", dc_seed);

  // ---- compare ----
  auto* compare =
      app.add_subcommand("compare", "normalized ratio spread of two fields");
  std::string cp_domain, cp_params, cp_u = "t", cp_v = "t", cp_g0,
                          cp_bc = "const:0";
  double cp_r = 0.3, cp_p = 2.0, cp_kappa = 4.0, cp_h = 0.1;
  int cp_count = 40;
  std::uint64_t cp_seed = 2024;
  compare->set_help_flag("--help", "print help");
  compare->add_option("--domain", cp_domain)->required();
  compare->add_option("--params", cp_params);
  compare->add_option("--u", cp_u);
  compare->add_option("--v", cp_v);
  compare->add_option("--bc", cp_bc);
  compare->add_option("--h", cp_h);
  compare->add_option("--g0", cp_g0)->required();
  compare->add_option("--r", cp_r)->required();
  compare->add_option("--p", cp_p);
  compare->add_option("--kappa", cp_kappa);
  compare->add_option("--count", cp_count);
  compare->add_option("--seed", cp_seed);

  // ---- omegap ----
  auto* omegap =
      app.add_subcommand("omegap", "normalization constant estimate");
  double op_p = 2.0;
  int op_n = 1;
  std::int64_t op_samples = 200000;
  std::uint64_t op_seed = 2024;
  omegap->add_option("--p", op_p)->required();
  omegap->add_option("--n", op_n);
  omegap->add_option("--samples", op_samples);
  omegap->add_option("--seed", op_seed);

  CLI11_PARSE(app, argc, argv);
  const Output out{out_path};

  const auto vec_params = [](const std::string& text) {
    std::vector<double> v;
    if (text.empty()) return v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return v;
  };

  // A bare "barrier" picks its radii (and center) from gauge-ring params.
  const auto expand_barrier = [](const std::string& spec,
                                 const std::string& domain,
                                 const std::string& params) {
    if (spec != "barrier") return spec;
    if (domain != "gauge-ring")
      throw std::invalid_argument(
          "bare 'barrier' needs a gauge-ring domain; use barrier:rin,rout");
    return "barrier:" + params;
  };

  // Builds the sampled field for decay/compare, running the solver when the
  // spec is "solve".
  const auto sampled_field = [&](const std::string& spec,
                                 const std::string& domain,
                                 const std::vector<double>& params,
                                 const PExponent& pe, const std::string& bc,
                                 double h) -> ScalarField {
    if (spec != "solve") return make_field(spec, pe);
    auto grid = std::make_shared<GridDomain>(build_domain(domain, params, h));
    const DiscreteField data = boundary_values(*grid, make_field(bc, pe));
    SolveOptions opts;
    opts.tol = 1e-6;
    const SolveResult res = solve_dirichlet(*grid, data, pe, opts);
    if (!res.converged)
      throw std::runtime_error("field solve did not converge");
    auto values = std::make_shared<DiscreteField>(res.u);
    return [grid, values](const Point& q) {
      return interpolate(*grid, *values, q);
    };
  };

  if (*dist) {
    const Point g = parse_point(dist_g), h = parse_point(dist_h);
    if (dist_n > 0 && g.n() != dist_n)
      throw std::invalid_argument("--n does not match the point dimension");
    const double d = gauge_distance(g, h);
    if (format == "json") {
      json j{{"config", {{"g", json_point(g)}, {"h", json_point(h)}}},
             {"results", {{"distance", d}}},
             {"diagnostics", json::object()}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write(fmt(d) + "\n");
    }
    return 0;
  }

  if (*project) {
    const Point g = parse_point(proj_g);
    MetricFoot mf;
    if (proj_char) {
      mf = characteristic_projection(g);
    } else {
      if (proj_omega.empty())
        throw std::invalid_argument("--omega required for vertical planes");
      mf = vertical_projection(g, VerticalHyperplane(parse_vector(proj_omega)));
    }
    if (format == "json") {
      json j{{"config",
              {{"g", json_point(g)},
               {"mode", proj_char ? "characteristic" : "vertical"}}},
             {"results",
              {{"foot", json_point(mf.foot)},
               {"distance", mf.distance},
               {"lambda", mf.lambda}}},
             {"diagnostics", json::object()}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write("foot " + fmt_point(mf.foot) + "\ndistance " +
                fmt(mf.distance) + "\nlambda " + fmt(mf.lambda) + "\n");
    }
    return 0;
  }

  if (*tball) {
    TangentBall ball;
    if (tb_vertical) {
      ball = vertical_tangent_center(parse_point(tb_gbar),
                                     VerticalHyperplane(parse_vector(tb_omega)),
                                     tb_lambda);
    } else if (tb_char) {
      ball = characteristic_tangent_ball(parse_point(tb_g));
    } else if (tb_family) {
      ball = characteristic_tangent_center(parse_point(tb_gbar), tb_lambda);
    } else {
      throw std::invalid_argument(
          "choose one of --vertical, --char, --char-family");
    }
    if (format == "json") {
      json j{{"config", {{"lambda", tb_lambda}}},
             {"results",
              {{"center", json_point(ball.center)},
               {"radius", ball.radius},
               {"touch", json_point(ball.touch)}}},
             {"diagnostics", json::object()}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write("center " + fmt_point(ball.center) + "\nradius " +
                fmt(ball.radius) + "\ntouch " + fmt_point(ball.touch) + "\n");
    }
    return 0;
  }

  if (*path) {
    if (path_gap) {
      const Point g0 = parse_point(path_g);
      const double gap = quasi_segment_gap(g0, path_lambda1);
      const double rho = gauge_distance(g0, quasi_segment_path(g0).foot());
      const double largest = quasi_gap_largest_lambda1(g0, path_lambda_bar);
      if (format == "json") {
        json j{{"config",
                {{"g0", json_point(g0)},
                 {"lambda1", path_lambda1},
                 {"lambda_bar", path_lambda_bar}}},
               {"results",
                {{"gap", gap},
                 {"foot_distance", rho},
                 {"largest_lambda1", largest}}},
               {"diagnostics", json::object()}};
        out.write(j.dump(2) + "\n");
      } else {
        out.write("gap " + fmt(gap) + "\nfoot_distance " + fmt(rho) +
                  "\nlargest_lambda1 " + fmt(largest) + "\n");
      }
      return 0;
    }
    Point at;
    if (path_quasi) {
      at = quasi_segment(parse_point(path_g), path_lambda);
    } else if (path_vertical) {
      at = vertical_segment(parse_point(path_g),
                            VerticalHyperplane(parse_vector(path_omega)),
                            path_lambda);
    } else {
      throw std::invalid_argument(
          "choose one of --vertical, --quasi, --quasi-gap");
    }
    if (format == "json") {
      json j{{"config", {{"lambda", path_lambda}}},
             {"results", {{"point", json_point(at)}}},
             {"diagnostics", json::object()}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write(fmt_point(at) + "\n");
    }
    return 0;
  }

  if (*gamma) {
    const Point g = parse_point(gm_g), gp = parse_point(gm_gp);
    const PExponent pe = PExponent::make(gm_p, g.n());
    SigmaP sp;
    if (gm_sigma > 0.0) {
      sp.sigma_p = gm_sigma;
      sp.omega_p = gm_sigma / pe.Q;
    } else {
      sp = estimate_omega_p(pe, gm_samples, effective_seed(gm_seed));
    }
    const double value = gamma_p(g, gp, pe, sp);
    if (format == "json") {
      json j{{"config",
              {{"p", gm_p},
               {"n", g.n()},
               {"sigma_p", sp.sigma_p},
               {"seed", effective_seed(gm_seed)}}},
             {"results", {{"gamma", value}}},
             {"diagnostics", {{"sigma_std_error", sp.std_error * pe.Q}}}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write(fmt(value) + "\n");
    }
    return 0;
  }

  if (*barrier) {
    const Point g = parse_point(br_g);
    const Point center =
        br_center.empty() ? Point::identity(g.n()) : parse_point(br_center);
    const PExponent pe = PExponent::make(br_p, g.n());
    const double value = ring_barrier(g, center, br_rin, br_rout, pe);
    if (format == "json") {
      json j{{"config", {{"p", br_p}, {"r_in", br_rin}, {"r_out", br_rout}}},
             {"results", {{"barrier", value}}},
             {"diagnostics", json::object()}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write(fmt(value) + "\n");
    }
    return 0;
  }

  if (*residual) {
    const Point g = parse_point(rs_g);
    const PExponent pe = PExponent::make(rs_p, g.n());
    const ScalarField f = make_field(rs_field, pe);
    bool degenerate = false;
    const double r = p_laplacian_residual(f, g, rs_step, pe, &degenerate);
    if (format == "json") {
      json j{{"config", {{"field", rs_field}, {"p", rs_p}, {"step", rs_step}}},
             {"results", {{"residual", r}}},
             {"diagnostics", {{"degenerate_weight", degenerate}}}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write(fmt(r) + "\n");
    }
    return 0;
  }

  if (*solve) {
    const PExponent pe = PExponent::make(sv_p, 1);
    const std::vector<double> params = vec_params(sv_params);
    const DomainSpec D = make_domain(sv_domain, params);
    std::array<double, 3> lo = D.lo, hi = D.hi;
    if (!sv_bbox.empty()) {
      const Eigen::VectorXd b = parse_vector(sv_bbox);
      if (b.size() != 6) throw std::invalid_argument("--bbox needs 6 values");
      lo = {b[0], b[1], b[2]};
      hi = {b[3], b[4], b[5]};
    }
    const GridDomain G = build_domain(D, sv_h, lo, hi);
    const ScalarField data =
        make_field(expand_barrier(sv_bc, sv_domain, sv_params), pe);
    const DiscreteField bc = boundary_values(G, data);
    SolveOptions opts;
    opts.tol = sv_tol;
    opts.max_sweeps = sv_max;
    DiscreteField warm;
    if (sv_cascade) {
      const GridDomain Gc = build_domain(D, 2.0 * sv_h, lo, hi);
      const SolveResult coarse =
          solve_dirichlet(Gc, boundary_values(Gc, data), pe, opts);
      warm.assign(G.value_count(), 0.0);
      for (int idx : G.interior) {
        try {
          warm[idx] = interpolate(Gc, coarse.u, G.point(idx));
        } catch (const std::exception&) {
          warm[idx] = 0.0;
        }
      }
      opts.initial = &warm;
    }
    const SolveResult res = solve_dirichlet(G, bc, pe, opts);
    if (format == "csv") {
      std::ostringstream os;
      export_csv(G, res.u, os);
      out.write(os.str());
    } else if (format == "json") {
      json nodes = json::array();
      for (int idx = 0; idx < G.node_count(); ++idx) {
        if (G.kind[idx] == NodeKind::exterior) continue;
        const Point p = G.point(idx);
        nodes.push_back({{"x", p.z[0]},
                         {"y", p.z[1]},
                         {"t", p.t},
                         {"value", res.u[idx]},
                         {"kind", G.kind[idx] == NodeKind::interior
                                      ? "interior"
                                      : "boundary"}});
      }
      json j{{"config",
              {{"domain", sv_domain},
               {"params", params},
               {"p", sv_p},
               {"h", sv_h},
               {"bc", sv_bc},
               {"tol", sv_tol}}},
             {"results",
              {{"converged", res.converged},
               {"sweeps", res.sweeps},
               {"residual", res.residual},
               {"energy", res.energy},
               {"nodes", nodes}}},
             {"diagnostics", {{"regularization", res.delta}}}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write("converged " + std::string(res.converged ? "1" : "0") +
                "\nsweeps " + std::to_string(res.sweeps) + "\nresidual " +
                fmt(res.residual) + "\nenergy " + fmt(res.energy) + "\n");
    }
    return res.converged ? 0 : 2;
  }

  if (*charset) {
    const DomainSpec D = make_domain(cs_domain, vec_params(cs_params));
    const auto points = characteristic_points(D, cs_mesh, cs_tol);
    if (format == "json") {
      json arr = json::array();
      for (const Point& p : points) arr.push_back(json_point(p));
      json j{{"config",
              {{"domain", cs_domain}, {"mesh", cs_mesh}, {"tol", cs_tol}}},
             {"results", {{"characteristic_points", arr}}},
             {"diagnostics", {{"count", points.size()}}}};
      out.write(j.dump(2) + "\n");
    } else if (format == "csv") {
      std::string text = "x,y,t\n";
      for (const Point& p : points) text += fmt_point(p) + "\n";
      out.write(text);
    } else {
      std::string text;
      for (const Point& p : points) text += fmt_point(p) + "\n";
      if (points.empty()) text = "none\n";
      out.write(text);
    }
    return 0;
  }

  if (*decay) {
    const PExponent pe = PExponent::make(dc_p, 1);
    const std::vector<double> params = vec_params(dc_params);
    const DomainSpec D = make_domain(dc_domain, params);
    const ScalarField u =
        sampled_field(expand_barrier(dc_field, dc_domain, dc_params),
                      dc_domain, params, pe,
                      expand_barrier(dc_bc, dc_domain, dc_params), dc_h);
    DecayOptions opts;
    opts.count = dc_count;
    opts.M = dc_M;
    opts.kappa = dc_kappa;
    opts.seed = effective_seed(dc_seed);
    opts.ray_mode = dc_mode == "ray";
    if (!dc_dir.empty()) {
      const Eigen::VectorXd dir = parse_vector(dc_dir);
      if (dir.size() != 3) throw std::invalid_argument("--dir needs 3 values");
      opts.direction = {dir[0], dir[1], dir[2]};
    }
    const DecayProfile prof =
        decay_profile(u, D, parse_point(dc_g0), dc_r, opts);
    if (format == "csv") {
      std::ostringstream os;
      profile_to_csv(prof, os);
      out.write(os.str());
    } else if (format == "json") {
      json samples = json::array();
      for (const ProfileSample& s : prof.samples)
        samples.push_back({{"d_over_r", s.d_over_r}, {"ratio", s.ratio}});
      json j{{"config",
              {{"domain", dc_domain},
               {"params", params},
               {"p", dc_p},
               {"g0", json_point(prof.g0)},
               {"r", prof.r},
               {"field", dc_field},
               {"M", dc_M},
               {"kappa", dc_kappa},
               {"seed", opts.seed}}},
             {"results",
              {{"exponent", prof.exponent},
               {"constant", prof.constant},
               {"samples", samples}}},
             {"diagnostics",
              {{"anchor", json_point(prof.anchor)},
               {"anchor_value", prof.anchor_value}}}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write("exponent " + fmt(prof.exponent) + "\nconstant " +
                fmt(prof.constant) + "\nsamples " +
                std::to_string(prof.samples.size()) + "\n");
    }
    return 0;
  }

  if (*compare) {
    const PExponent pe = PExponent::make(cp_p, 1);
    const std::vector<double> params = vec_params(cp_params);
    const DomainSpec D = make_domain(cp_domain, params);
    const std::string bc = expand_barrier(cp_bc, cp_domain, cp_params);
    const ScalarField u =
        sampled_field(expand_barrier(cp_u, cp_domain, cp_params), cp_domain,
                      params, pe, bc, cp_h);
    const ScalarField v =
        sampled_field(expand_barrier(cp_v, cp_domain, cp_params), cp_domain,
                      params, pe, bc, cp_h);
    const RatioSpread rs =
        comparison_ratio(u, v, D, parse_point(cp_g0), cp_r, cp_count,
                         effective_seed(cp_seed), cp_kappa);
    if (format == "json") {
      json j{{"config",
              {{"domain", cp_domain},
               {"u", cp_u},
               {"v", cp_v},
               {"r", cp_r},
               {"count", cp_count},
               {"seed", effective_seed(cp_seed)}}},
             {"results",
              {{"min_ratio", rs.min_ratio},
               {"max_ratio", rs.max_ratio},
               {"spread", rs.spread}}},
             {"diagnostics", {{"samples", rs.count}}}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write("min " + fmt(rs.min_ratio) + "\nmax " + fmt(rs.max_ratio) +
                "\nspread " + fmt(rs.spread) + "\n");
    }
    return 0;
  }

  if (*omegap) {
    const PExponent pe = PExponent::make(op_p, op_n);
    const SigmaP sp = estimate_omega_p(pe, op_samples, effective_seed(op_seed));
    if (format == "json") {
      json j{{"config",
              {{"p", op_p},
               {"n", op_n},
               {"samples", op_samples},
               {"seed", effective_seed(op_seed)}}},
             {"results", {{"omega_p", sp.omega_p}, {"sigma_p", sp.sigma_p}}},
             {"diagnostics", {{"std_error", sp.std_error}}}};
      out.write(j.dump(2) + "\n");
    } else {
      out.write("omega_p " + fmt(sp.omega_p) + "\nsigma_p " +
                fmt(sp.sigma_p) + "\nstd_error " + fmt(sp.std_error) + "\n");
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
