#include "homog/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "homog/exterior.hpp"
#include "homog/fixtures.hpp"
#include "homog/graph.hpp"
#include "homog/levelset.hpp"
#include "homog/measure.hpp"
#include "homog/metric.hpp"
#include "homog/spec_io.hpp"

namespace homog::cli
{

namespace
{

using nlohmann::json;

/// Bad arguments or unreadable input.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string group = "heisenberg1";
  std::vector<std::string> couple;
  std::string subspace;
  std::string phi;
  std::string f;
  std::string dist = "dinf";
  std::vector<double> weights;
  double exponent = 2.0;
  std::uint64_t seed = 1;
  long samples = 0; ///< 0 selects the command default
  std::vector<std::string> at;
  std::string point;
  std::string region = "box:-1,-1,-1/1,1,1";
  std::string out;
  std::string csv;
  int threads = 1;

  std::string method = "adaptive";
  int starts = 8;
  int iterations = 80;
  double slice_tol = 1e-7;
  int resolution = 256;

  std::vector<double> schedule;
  int centers = 64;
  int refine = 60;
  double tolerance = 0.10;

  int density_points = 2;
  int tangent_samples = 10;
};

struct Outcome
{
  json result;
  bool pass = true;
};

json to_json(const Eigen::VectorXd & v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd & m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  }
  return rows;
}

json to_json(const MeasureEstimate & e)
{
  return {{"value", e.value}, {"std_error", e.std_error}, {"samples", e.n_samples}, {"method", e.method},
          {"precision_ok", e.precision_ok}};
}

json to_json(const BlowupReport & r)
{
  json rows = json::array();
  for (const BlowupRow & row : r.rows) {
    rows.push_back({{"t", row.t},
                    {"density", row.density},
                    {"std_error", row.std_error},
                    {"best_sampled", row.best_sampled},
                    {"center", to_json(row.center)}});
  }
  return {{"zeta", to_json(r.zeta)},
          {"x", to_json(r.x)},
          {"hausdorff_dim", r.hausdorff_dim},
          {"rows", rows},
          {"extrapolated", r.extrapolated},
          {"extrapolation_error", r.extrapolation_error},
          {"beta", r.beta},
          {"beta_argmax", to_json(r.beta_argmax)},
          {"relative_gap", r.relative_gap},
          {"noisy", r.noisy},
          {"pass", r.pass}};
}

Point parse_point(const std::string & text, int dim, const std::string & what)
{
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception &) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  if (dim >= 0 && static_cast<int>(xs.size()) != dim) {
    throw UsageError(what + " needs " + std::to_string(dim) + " comma-separated coordinates, got '" + text + "'");
  }
  return Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::vector<std::string> split(const std::string & text, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    out.push_back(item);
  }
  return out;
}

/// Loaded group plus the file entries that name subgroups and a distance.
struct Context
{
  GroupFile file;
  GradedAlgebra g;
};

Context load_context(const Options & o)
{
  GroupFile file;
  try {
    file = load_group(o.group);
  } catch (const SpecParseError & e) {
    throw UsageError(o.group + ": " + e.what());
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  const ValidationReport report = validate_spec(file.spec);
  if (!report.ok()) {
    throw std::runtime_error("group '" + o.group + "' is not a graded nilpotent algebra: " + report.summary());
  }
  return {file, GradedAlgebra::from_spec(file.spec)};
}

/// Named subgroup (vertical, horizontal, whole, trivial, or an entry of the
/// group file) or an explicit list "v1;v2;..." of comma-separated vectors.
std::vector<Point> subgroup_vectors(const Context & c, const std::string & name)
{
  const int q = c.g.dim();
  std::vector<Point> out;
  if (name == "vertical") {
    for (int k = 1; k < q; ++k) {
      out.push_back(Point::Unit(q, k));
    }
  } else if (name == "horizontal") {
    out.push_back(Point::Unit(q, 0));
  } else if (name == "whole") {
    for (int k = 0; k < q; ++k) {
      out.push_back(Point::Unit(q, k));
    }
  } else if (name == "trivial") {
  } else if (auto it = c.file.subgroups.find(name); it != c.file.subgroups.end()) {
    out = it->second;
  } else if (name.find_first_of("0123456789") != std::string::npos) {
    for (const std::string & v : split(name, ';')) {
      out.push_back(parse_point(v, q, "subgroup vector"));
    }
  } else {
    throw UsageError("unknown subgroup '" + name + "'");
  }
  return out;
}

HomogeneousSubgroup subgroup(const Context & c, const std::string & name)
{
  return HomogeneousSubgroup::from_basis(c.g, subgroup_vectors(c, name), name);
}

std::pair<std::string, std::string> couple_names(const Options & o)
{
  std::string W = "vertical";
  std::string V = "horizontal";
  for (const std::string & item : o.couple) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || (item.substr(0, eq) != "W" && item.substr(0, eq) != "V")) {
      throw UsageError("--couple expects W=<subgroup> V=<subgroup>, got '" + item + "'");
    }
    (item[0] == 'W' ? W : V) = item.substr(eq + 1);
  }
  return {W, V};
}

DistanceSpec distance_spec(const Context & c, const Options & o, bool dist_given)
{
  std::string kind = o.dist;
  std::vector<double> weights = o.weights;
  double exponent = o.exponent;
  if (!dist_given && c.file.distance) {
    kind = c.file.distance->kind;
    weights = c.file.distance->weights;
    exponent = c.file.distance->exponent;
  }
  try {
    switch (parse_distance_kind(kind)) {
      case DistanceKind::d_inf:
        return DistanceSpec::d_inf(c.g, weights);
      case DistanceKind::cygan_koranyi:
        return DistanceSpec::cygan_koranyi(c.g);
      case DistanceKind::custom_homnorm:
        if (weights.empty()) {
          weights.assign(c.g.step(), 1.0);
        }
        return DistanceSpec::custom(c.g, weights, exponent);
    }
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown distance '" + kind + "'");
}

json group_json(const Context & c)
{
  json brackets = json::array();
  for (const StructureConstant & b : c.file.spec.brackets) {
    brackets.push_back({{"i", b.i}, {"j", b.j}, {"k", b.k}, {"c", b.c}});
  }
  return {{"source", c.file.source}, {"layers", c.file.spec.layers}, {"brackets", brackets}};
}

json distance_json(const DistanceSpec & d)
{
  return {{"kind", d.kind_name()}, {"weights", d.weights}, {"exponent", d.exponent}};
}

IntrinsicMap phi_fixture(const Options & o, bool group_given)
{
  if (group_given && o.group != "heisenberg1") {
    throw UsageError("the phi fixtures live on heisenberg1");
  }
  try {
    return phi_by_name(o.phi);
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
}

BlowupOptions blowup_options(const Options & o, long samples)
{
  BlowupOptions b;
  if (!o.schedule.empty()) {
    b.schedule = o.schedule;
  }
  b.centers = o.centers;
  b.samples = samples;
  b.refine_iterations = o.refine;
  b.tolerance = o.tolerance;
  b.seed = o.seed;
  b.threads = o.threads;
  b.beta.starts = o.starts;
  b.beta.iterations = o.iterations;
  b.beta.seed = o.seed;
  b.beta.slice.tol = o.slice_tol;
  b.beta.slice.resolution = o.resolution;
  b.beta.slice.method = parse_slice_method(o.method);
  b.beta.slice.threads = o.threads;
  return b;
}

json blowup_config(const BlowupOptions & b)
{
  return {{"schedule", b.schedule},
          {"centers", b.centers},
          {"samples", b.samples},
          {"refine_iterations", b.refine_iterations},
          {"tolerance", b.tolerance},
          {"seed", b.seed},
          {"beta_starts", b.beta.starts},
          {"beta_iterations", b.beta.iterations},
          {"slice_method", slice_method_name(b.beta.slice.method)},
          {"slice_tol", b.beta.slice.tol},
          {"slice_resolution", b.beta.slice.resolution}};
}

Outcome cmd_validate(const Options & o, bool dist_given, json & config)
{
  Outcome out;
  GroupFile file;
  try {
    file = load_group(o.group);
  } catch (const SpecParseError & e) {
    throw UsageError(o.group + ": " + e.what());
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  const ValidationReport spec_report = validate_spec(file.spec);
  json violations = json::array();
  for (const Violation & v : spec_report.violations) {
    violations.push_back({{"axiom", v.axiom}, {"indices", v.indices}, {"residual", v.residual}, {"message", v.message}});
  }
  out.result["spec"] = {{"ok", spec_report.ok()}, {"violations", violations}};
  config["group"] = {{"source", file.source}, {"layers", file.spec.layers}};
  if (!spec_report.ok()) {
    out.pass = false;
    return out;
  }
  const Context c{file, GradedAlgebra::from_spec(file.spec)};
  config["group"] = group_json(c);

  if (!o.couple.empty()) {
    const auto [Wn, Vn] = couple_names(o);
    config["couple"] = {{"W", Wn}, {"V", Vn}};
    bool members_ok = true;
    std::optional<HomogeneousSubgroup> W, V;
    for (const auto & [role, name] : {std::pair{"W", Wn}, std::pair{"V", Vn}}) {
      const SubgroupReport r = validate_subgroup(c.g, subgroup_vectors(c, name));
      out.result["subgroups"][role] = {{"name", name},
                                       {"ok", r.ok()},
                                       {"graded", r.graded},
                                       {"bracket_closed", r.bracket_closed},
                                       {"offending_vector", r.offending_vector},
                                       {"messages", r.messages}};
      members_ok = members_ok && r.ok();
      if (r.ok()) {
        (std::string(role) == "W" ? W : V) = subgroup(c, name);
      }
    }
    if (members_ok) {
      try {
        validate_couple(*W, *V);
        out.result["couple"] = {{"ok", true}};
      } catch (const CoupleError & e) {
        out.result["couple"] = {{"ok", false}, {"error", e.what()}};
        members_ok = false;
      }
    }
    out.pass = members_ok;
  }

  const DistanceSpec d = distance_spec(c, o, dist_given);
  const long n = o.samples > 0 ? o.samples : 1000;
  config["distance"] = distance_json(d);
  config["samples"] = n;
  config["seed"] = o.seed;
  const DistanceValidation dv = validate_homogeneous_distance(d, static_cast<int>(n), o.seed);
  out.result["distance"] = {{"ok", dv.ok()},
                            {"samples", dv.samples},
                            {"worst_triangle", dv.worst_triangle},
                            {"left_invariance", dv.left_invariance},
                            {"homogeneity", dv.homogeneity},
                            {"symmetry", dv.symmetry}};
  if (!dv.ok()) {
    out.result["distance"]["worst_triple"] = {to_json(dv.worst_x), to_json(dv.worst_y), to_json(dv.worst_z)};
  }
  out.pass = out.pass && dv.ok();
  return out;
}

Outcome cmd_project(const Options & o, json & config)
{
  const Context c = load_context(o);
  const auto [Wn, Vn] = couple_names(o);
  const ComplementaryCouple couple = validate_couple(subgroup(c, Wn), subgroup(c, Vn));
  const Point g = parse_point(o.point, c.g.dim(), "--point");
  config["group"] = group_json(c);
  config["couple"] = {{"W", Wn}, {"V", Vn}};
  config["point"] = to_json(g);
  const auto [w, v] = couple.project(g);
  const double residual = (c.g.multiply(w, v) - g).norm();
  Outcome out;
  out.result = {{"w", to_json(w)}, {"v", to_json(v)}, {"round_trip_residual", residual}};
  out.pass = residual <= 1e-10 * (1.0 + g.norm());
  return out;
}

Outcome cmd_jacobian(const Options & o, bool group_given, bool dist_given, json & config)
{
  const IntrinsicMap phi = phi_fixture(o, group_given);
  const Context c = load_context(o);
  const DistanceSpec d = distance_spec(c, o, dist_given);
  const long n = o.samples > 0 ? o.samples : 100000;
  const std::vector<std::string> at = o.at.empty() ? std::vector<std::string>{"0,0,0"} : o.at;
  config["phi"] = o.phi;
  config["distance"] = distance_json(d);
  config["at"] = at;
  config["samples"] = n;
  config["seed"] = o.seed;

  Outcome out;
  out.result["points"] = json::array();
  const int m = phi.couple().W().dim();
  for (std::size_t k = 0; k < at.size(); ++k) {
    const Point w = parse_point(at[k], c.g.dim(), "--at");
    if (!phi.couple().W().contains(w)) {
      throw UsageError("--at " + at[k] + " is not a point of W");
    }
    const IntrinsicLinearMap L = tangent_map(phi, w, d);
    const double wedge = jacobian_wedge(L);
    std::optional<double> minors;
    if (phi.has_gradient()) {
      minors = jacobian_minors(phi.gradient()(w));
    } else if (L.matrix()) {
      minors = jacobian_minors(*L.matrix());
    }
    const MeasureEstimate mc = jacobian_measure_mc(L, -Eigen::VectorXd::Ones(m), Eigen::VectorXd::Ones(m), n,
                                                   o.seed + k, o.threads);
    const bool exact_ok = !minors || std::abs(wedge - *minors) <= 1e-6 * wedge;
    const bool mc_ok = std::abs(mc.value - wedge) <= 0.02 * wedge;
    json row = {{"at", to_json(w)}, {"wedge", wedge}, {"monte_carlo", to_json(mc)}, {"agree", exact_ok && mc_ok}};
    row["minors"] = minors ? json(*minors) : json(nullptr);
    out.result["points"].push_back(row);
    out.pass = out.pass && exact_ok && mc_ok;
  }
  return out;
}

Outcome cmd_spherical_factor(const Options & o, bool dist_given, json & config)
{
  const Context c = load_context(o);
  const DistanceSpec d = distance_spec(c, o, dist_given);
  const HomogeneousSubgroup S = subgroup(c, o.subspace);
  SphericalFactorOptions so;
  so.starts = o.starts;
  so.iterations = o.iterations;
  so.seed = o.seed;
  so.slice.method = parse_slice_method(o.method);
  so.slice.tol = o.slice_tol;
  so.slice.resolution = o.resolution;
  so.slice.samples = o.samples > 0 ? o.samples : so.slice.samples;
  so.slice.seed = o.seed;
  so.slice.threads = o.threads;
  config["group"] = group_json(c);
  config["distance"] = distance_json(d);
  config["subspace"] = {{"name", o.subspace}, {"basis", to_json(Eigen::MatrixXd(S.basis().transpose()))}};
  config["seed"] = o.seed;
  config["starts"] = so.starts;
  config["iterations"] = so.iterations;
  config["slice"] = {{"method", slice_method_name(so.slice.method)},
                     {"tol", so.slice.tol},
                     {"resolution", so.slice.resolution},
                     {"samples", so.slice.samples}};

  const SphericalFactor s = spherical_factor(S, d, so);
  Outcome out;
  out.result = {{"beta", s.beta},
                {"argmax", to_json(s.argmax)},
                {"at_zero", s.at_zero},
                {"on_boundary", s.on_boundary},
                {"converged", s.converged},
                {"evaluations", s.evaluations},
                {"hausdorff_dim", S.hausdorff_dim()}};
  return out;
}

void write_csv(const std::string & path, const std::vector<BlowupReport> & reports)
{
  std::ofstream csv(path);
  if (!csv) {
    throw UsageError("cannot write " + path);
  }
  csv.precision(17);
  csv << "point,t,density,std_error,best_sampled\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    for (const BlowupRow & r : reports[k].rows) {
      csv << k << ',' << r.t << ',' << r.density << ',' << r.std_error << ',' << r.best_sampled << '\n';
    }
  }
}

Outcome cmd_blowup(const Options & o, bool group_given, bool dist_given, json & config)
{
  const IntrinsicMap phi = phi_fixture(o, group_given);
  const Context c = load_context(o);
  const DistanceSpec d = distance_spec(c, o, dist_given);
  const Point zeta = parse_point(o.point, c.g.dim(), "--point");
  const BlowupOptions b = blowup_options(o, o.samples > 0 ? o.samples : 40000);
  config["phi"] = o.phi;
  config["distance"] = distance_json(d);
  config["point"] = to_json(zeta);
  config["blowup"] = blowup_config(b);

  BlowupReport r;
  try {
    r = federer_density(phi, zeta, d, b);
  } catch (const std::domain_error & e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  if (!o.csv.empty()) {
    write_csv(o.csv, {r});
  }
  Outcome out;
  out.result = to_json(r);
  out.pass = r.pass;
  return out;
}

Region parse_region(const std::string & text, int dim)
{
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::vector<std::string> parts = colon == std::string::npos ? std::vector<std::string>{}
                                                                     : split(text.substr(colon + 1), '/');
  if (parts.size() != 2 || (kind != "box" && kind != "ball")) {
    throw UsageError("--region expects box:lo/hi or ball:center/radius, got '" + text + "'");
  }
  try {
    if (kind == "box") {
      return Region::box(parse_point(parts[0], dim, "--region"), parse_point(parts[1], dim, "--region"));
    }
    return Region::ball(parse_point(parts[0], dim, "--region"), parse_point(parts[1], 1, "--region")[0]);
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
}

Outcome cmd_area(const Options & o, bool group_given, bool dist_given, json & config)
{
  const IntrinsicMap phi = phi_fixture(o, group_given);
  const Context c = load_context(o);
  const DistanceSpec d = distance_spec(c, o, dist_given);
  const Region region = parse_region(o.region, c.g.dim());
  AreaOptions a;
  a.samples = o.samples > 0 ? o.samples : a.samples;
  a.density_points = o.density_points;
  a.tangent_samples = o.tangent_samples;
  a.blowup = blowup_options(o, BlowupOptions{}.samples);
  a.seed = o.seed;
  a.threads = o.threads;
  config["phi"] = o.phi;
  config["distance"] = distance_json(d);
  config["region"] = o.region;
  config["samples"] = a.samples;
  config["seed"] = a.seed;
  config["density_points"] = a.density_points;
  config["tangent_samples"] = a.tangent_samples;
  config["blowup"] = blowup_config(a.blowup);

  const AreaReport r = area_check(phi, region, d, a);
  if (!o.csv.empty()) {
    write_csv(o.csv, r.densities);
  }
  Outcome out;
  json densities = json::array();
  for (const BlowupReport & b : r.densities) {
    densities.push_back(to_json(b));
  }
  json halves = json::array();
  for (const MeasureEstimate & h : r.halves) {
    halves.push_back(to_json(h));
  }
  out.result = {{"mu", to_json(r.mu)},
                {"densities", densities},
                {"tangent_betas", r.tangent_betas},
                {"beta_spread", r.beta_spread},
                {"rotationally_symmetric", r.rotationally_symmetric},
                {"omega", r.omega},
                {"spherical_measure", r.spherical_measure},
                {"halves", halves},
                {"additivity_gap", r.additivity_gap},
                {"pass", r.pass}};
  out.pass = r.pass;
  return out;
}

GroupMap level_function(const std::string & name)
{
  if (name == "x") {
    return [](const Point & p) { return Eigen::VectorXd::Constant(1, p[0]); };
  }
  if (name == "parabola" || name == "x+y^2") {
    return [](const Point & p) { return Eigen::VectorXd::Constant(1, p[0] + p[1] * p[1]); };
  }
  throw UsageError("unknown level-set function '" + name + "' (expected x or x+y^2)");
}

Outcome cmd_level_set(const Options & o, bool group_given, json & config)
{
  if (group_given && o.group != "heisenberg1") {
    throw UsageError("the level-set functions live on heisenberg1");
  }
  const GroupMap f = level_function(o.f);
  const Context c = load_context(o);
  const auto [Wn, Vn] = couple_names(o);
  const ComplementaryCouple couple = validate_couple(subgroup(c, Wn), subgroup(c, Vn));
  const Point x = parse_point(o.point, c.g.dim(), "--point");
  config["f"] = o.f;
  config["couple"] = {{"W", Wn}, {"V", Vn}};
  config["point"] = to_json(x);

  // Slide x along V onto the level set, then compare the analytic ratio with
  // the minors of the implicitly solved map.
  const HomogeneousSubgroup & W = couple.W();
  const Point w = couple.project_W(x);
  const ImplicitSolution sol = solve_implicit(f, couple, w);
  const Point on = c.g.multiply(w, sol.v);
  const PansuDifferential L = pansu_differential(c.g, euclidean_group(1), f, on);
  const LevelSetJacobians J = jacobians_JH_JV(L.matrix, couple.V());
  const double ratio = level_set_jacobian_ratio(f, couple, on);

  Outcome out;
  out.result = {{"level_set_point", to_json(on)},
                {"implicit_residual", sol.residual},
                {"implicit_iterations", sol.iterations},
                {"pansu", to_json(L.matrix)},
                {"pansu_converged", L.converged},
                {"JH", J.JH},
                {"JV", J.JV},
                {"ratio", ratio}};
  out.pass = sol.residual <= 1e-10 && L.converged;

  if (horizontal_orthogonal(couple)) {
    const Eigen::VectorXd wc = W.coords(w);
    const IntrinsicMap phi = implicit_map(f, couple, wc.array() - 1.0, wc.array() + 1.0);
    const int p = couple.V().dim();
    const int n1 = c.g.layer_size(1);
    Eigen::MatrixXd grad(p, n1 - p);
    for (int j = p + 1; j <= n1; ++j) {
      grad.col(j - p - 1) = intrinsic_partial_derivative(phi, j, wc).value;
    }
    const double minors = jacobian_minors(grad);
    out.result["implicit_gradient"] = to_json(grad);
    out.result["implicit_minors"] = minors;
    out.pass = out.pass && std::abs(minors - ratio) <= 1e-4 * ratio;
  }
  return out;
}

} // namespace

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  Options o;
  CLI::App app{"Measure and Jacobian experiments on homogeneous groups", "homog"};
  app.require_subcommand(1);

  auto add_group = [&](CLI::App * s) { return s->add_option("--group", o.group, "fixture name or group file"); };
  auto add_dist = [&](CLI::App * s) {
    s->add_option("--weights", o.weights, "layer weights of the distance");
    s->add_option("--exponent", o.exponent, "exponent r of custom_homnorm");
    return s->add_option("--dist", o.dist, "dinf, ck or custom");
  };
  auto add_common = [&](CLI::App * s) {
    s->add_option("--out", o.out, "report path (default stdout)");
    s->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--samples", o.samples, "Monte Carlo budget")->check(CLI::PositiveNumber);
  };
  auto add_beta = [&](CLI::App * s) {
    s->add_option("--method", o.method, "slice method: adaptive, grid or mc");
    s->add_option("--starts", o.starts, "optimizer starts")->check(CLI::PositiveNumber);
    s->add_option("--iterations", o.iterations, "iterations per start")->check(CLI::PositiveNumber);
    s->add_option("--slice-tol", o.slice_tol, "adaptive slice tolerance")->check(CLI::PositiveNumber);
    s->add_option("--resolution", o.resolution, "grid slice resolution")->check(CLI::PositiveNumber);
  };
  auto add_blowup = [&](CLI::App * s) {
    add_beta(s);
    s->add_option("--schedule", o.schedule, "decreasing radii t")->delimiter(',');
    s->add_option("--centers", o.centers, "sampled centers per t")->check(CLI::PositiveNumber);
    s->add_option("--refine", o.refine, "center refinement iterations")->check(CLI::NonNegativeNumber);
    s->add_option("--tolerance", o.tolerance, "relative gap gate")->check(CLI::PositiveNumber);
    s->add_option("--csv", o.csv, "per-t table");
  };

  CLI::App * validate = app.add_subcommand("validate", "check a group, couple and distance");
  add_group(validate);
  CLI::Option * validate_dist = add_dist(validate);
  validate->add_option("--couple", o.couple, "W=<subgroup> V=<subgroup>");
  validate->add_option("--seed", o.seed, "seed for the distance check");
  add_common(validate);

  CLI::App * project = app.add_subcommand("project", "split a point as w v");
  add_group(project);
  project->add_option("--couple", o.couple, "W=<subgroup> V=<subgroup>");
  project->add_option("--point", o.point, "comma-separated coordinates")->required();
  project->add_option("--out", o.out, "report path (default stdout)");

  CLI::App * jac = app.add_subcommand("jacobian", "compare the three Jacobian routes");
  CLI::Option * jac_group = add_group(jac);
  CLI::Option * jac_dist = add_dist(jac);
  jac->add_option("--phi", o.phi, "zero, linear:a or parabola")->required();
  jac->add_option("--at", o.at, "points of W")->take_all();
  jac->add_option("--seed", o.seed, "Monte Carlo seed");
  add_common(jac);

  CLI::App * sph = app.add_subcommand("spherical-factor", "maximize slice volume over centers");
  add_group(sph);
  CLI::Option * sph_dist = add_dist(sph);
  sph->add_option("--subspace", o.subspace, "subgroup name or vectors")->required();
  sph->add_option("--seed", o.seed, "optimizer seed");
  add_common(sph);
  add_beta(sph);

  CLI::App * blow = app.add_subcommand("blowup", "Federer density at a graph point");
  CLI::Option * blow_group = add_group(blow);
  CLI::Option * blow_dist = add_dist(blow);
  blow->add_option("--phi", o.phi, "zero, linear:a or parabola")->required();
  blow->add_option("--point", o.point, "point of W")->required();
  blow->add_option("--seed", o.seed, "seed")->required();
  add_common(blow);
  add_blowup(blow);

  CLI::App * area = app.add_subcommand("area", "graph measure against spherical measure");
  CLI::Option * area_group = add_group(area);
  CLI::Option * area_dist = add_dist(area);
  area->add_option("--phi", o.phi, "zero, linear:a or parabola")->required();
  area->add_option("--region", o.region, "box:lo/hi or ball:center/radius");
  area->add_option("--seed", o.seed, "seed")->required();
  area->add_option("--density-points", o.density_points, "blow-up points")->check(CLI::NonNegativeNumber);
  area->add_option("--tangent-samples", o.tangent_samples, "tangent betas")->check(CLI::NonNegativeNumber);
  add_common(area);
  add_blowup(area);

  CLI::App * level = app.add_subcommand("level-set", "level-set Jacobian ratio against the implicit graph");
  CLI::Option * level_group = add_group(level);
  level->add_option("--f", o.f, "x or x+y^2")->required();
  level->add_option("--couple", o.couple, "W=<subgroup> V=<subgroup>");
  level->add_option("--point", o.point, "point near the level set")->required();
  level->add_option("--out", o.out, "report path (default stdout)");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  CLI::App * sub = app.get_subcommands().front();
  json config = {{"command", sub->get_name()}};
  Outcome result;
  try {
    if (sub == validate) {
      result = cmd_validate(o, validate_dist->count() > 0, config);
    } else if (sub == project) {
      result = cmd_project(o, config);
    } else if (sub == jac) {
      result = cmd_jacobian(o, jac_group->count() > 0, jac_dist->count() > 0, config);
    } else if (sub == sph) {
      result = cmd_spherical_factor(o, sph_dist->count() > 0, config);
    } else if (sub == blow) {
      result = cmd_blowup(o, blow_group->count() > 0, blow_dist->count() > 0, config);
    } else if (sub == area) {
      result = cmd_area(o, area_group->count() > 0, area_dist->count() > 0, config);
    } else {
      result = cmd_level_set(o, level_group->count() > 0, config);
    }
  } catch (const UsageError & e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }

  const json report = {{"config", config}, {"result", result.result}, {"pass", result.pass}};
  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) {
      err << "usage error: cannot write " << o.out << '\n';
      return kUsage;
    }
    file << text;
    out << sub->get_name() << ": " << (result.pass ? "pass" : "fail") << " (" << o.out << ")\n";
  }
  if (!result.pass) {
    err << sub->get_name() << ": tolerance or validation gate failed\n";
  }
  return result.pass ? kPass : kFail;
}

} // namespace homog::cli
