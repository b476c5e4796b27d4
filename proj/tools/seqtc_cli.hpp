#pragma once

// Command-line front end. run() parses the arguments (without the program
// name), writes one JSON document to out and returns the exit code:
// 0 success, 2 argument error, 3 validation or certificate failure.

#include "seqtc/bounds.hpp"
#include "seqtc/gcring.hpp"
#include "seqtc/gcring_io.hpp"
#include "seqtc/knowledge.hpp"
#include "seqtc/measures.hpp"
#include "seqtc/navplan.hpp"
#include "seqtc/presentations.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace seqtc::cli {

inline constexpr int kOutputSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitArgument = 2;
inline constexpr int kExitValidation = 3;

namespace detail {

using nlohmann::json;
using navplan::Vec;

inline Vec to_vec(const std::vector<double>& xs) {
  return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

inline std::vector<Vec> parse_points(const std::string& text) {
  std::vector<Vec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::vector<double> xs;
    std::stringstream cs(item);
    std::string num;
    while (std::getline(cs, num, ',')) {
      try {
        xs.push_back(std::stod(num));
      } catch (const std::logic_error&) {
        throw ArgumentError("cannot parse coordinate '" + num + "'");
      }
    }
    out.push_back(to_vec(xs));
  }
  return out;
}

inline json plan_to_json(const navplan::PathPlan& plan, int samples) {
  auto atoms = json::array();
  for (const auto& a : plan.measure.atoms()) {
    auto pts = json::array();
    for (int k = 0; k < samples; ++k) {
      const double t = samples < 2 ? 0.0 : static_cast<double>(k) / (samples - 1);
      pts.push_back({{"t", t}, {"point", navplan::encode(a.point(t))}});
    }
    atoms.push_back({{"weight", a.weight}, {"samples", std::move(pts)}});
  }
  auto checkpoints = json::array();
  for (const auto& c : plan.checkpoints) checkpoints.push_back(navplan::encode(c));
  return {{"atoms", std::move(atoms)},
          {"support", plan.support_size()},
          {"checkpoints", std::move(checkpoints)},
          {"checkpoint_error", navplan::max_checkpoint_error(plan)},
          {"mass_error", navplan::mass_error(plan)}};
}

using PointMeasure = measures::FiniteMeasure<std::vector<double>>;

inline PointMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open measure file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ArgumentError("malformed JSON in " + path + ": " + e.what());
  }
  const std::function<std::vector<double>(const json&)> decode = [](const json& j) {
    return j.get<std::vector<double>>();
  };
  return measures::from_json<std::vector<double>, double>(doc, decode, measures::euclidean);
}

/// Collects the JSON result and provenance tags of one command.
struct Output {
  json body = json::object();
  std::vector<std::string> citations;
  int code = kExitOk;

  void cite(const std::vector<std::string>& tags) {
    for (const auto& t : tags)
      if (std::find(citations.begin(), citations.end(), t) == citations.end()) citations.push_back(t);
  }

  void record(const knowledge::ComplexityRecord& r) {
    body = knowledge::to_json(r);
    cite(r.citations());
  }
};

struct Options {
  // shared
  std::string presentation;
  std::string expr;
  int max_degree = 8;
  int d = 2, m = 2, n = 1, r = 2, q = 3;
  int budget = 12;
  bool no_certify = false;
  std::string base = "cp2";
  std::string euler;
  std::vector<int> partition;
  std::vector<int> dims;
  std::vector<int> p;
  std::string action = "antipodal";
  long long dtc = 1;
  std::vector<double> x, y, angles;
  std::string points;
  int samples = 5;
  int proj_n = 2;
  int bases = 5;
  int pairs = 100;
  int group = 5;
  double scale = 1e-4;
  double ceiling = 1e3;
  double tol = 1e-9;
  std::string near = "perpendicular";
  unsigned seed = 1;
  std::string mu, nu;
  double precision = measures::kDefaultLpPrecision;
};

inline void add_fn_options(CLI::App* c, Options& o) {
  c->add_option("--d", o.d, "ambient dimension")->required();
  c->add_option("--m", o.m, "number of obstacles")->required();
  c->add_option("--n", o.n, "number of robots")->required();
  c->add_option("--r", o.r, "sequence length")->required();
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out) {
  using namespace detail;
  Options o;
  Output res;
  bool cite = false;

  CLI::App app{"Sequential parametrized complexity toolkit", "seqtc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", "emit JSON (always on)");
  app.add_flag("--cite", cite, "list the provenance tags used");

  std::function<void()> action;
  auto on = [&](CLI::App* c, std::function<void()> f) { c->callback([&action, f] { action = f; }); };

  // ring
  auto* ring = app.add_subcommand("ring", "graded ring engine")->require_subcommand(1);
  {
    auto* c = ring->add_subcommand("normal-form", "normal form of an element expression");
    c->add_option("--presentation", o.presentation, "catalog name or JSON file")->required();
    c->add_option("--expr", o.expr, "element expression")->required();
    on(c, [&] {
      const auto entry = presentations::lookup(o.presentation);
      const auto e = gcring::parse_element(o.expr, entry.presentation);
      res.body = {{"presentation", entry.name},
                  {"normal_form", gcring::element_to_json(e, entry.presentation)},
                  {"text", gcring::describe(e, entry.presentation)}};
    });
  }
  {
    auto* c = ring->add_subcommand("poincare", "Poincare series coefficients");
    c->add_option("--presentation", o.presentation, "catalog name or JSON file")->required();
    c->add_option("--max-degree", o.max_degree, "highest degree")->check(CLI::NonNegativeNumber);
    on(c, [&] {
      const auto entry = presentations::lookup(o.presentation);
      res.body = {{"presentation", entry.name},
                  {"coefficients", gcring::poincare_series(entry.presentation, o.max_degree)}};
    });
  }
  {
    auto* c = ring->add_subcommand("confluence", "critical pair check");
    c->add_option("--presentation", o.presentation, "catalog name or JSON file")->required();
    on(c, [&] {
      const auto entry = presentations::lookup(o.presentation);
      const auto& p = entry.presentation;
      const auto rep = gcring::check_confluence(p);
      auto failures = json::array();
      for (const auto& f : rep.failures)
        failures.push_back({{"overlap", gcring::describe(f.overlap, p)},
                            {"first", gcring::describe(f.first_result, p)},
                            {"second", gcring::describe(f.second_result, p)}});
      res.body = {{"presentation", entry.name},
                  {"ok", rep.ok()},
                  {"pairs_checked", rep.pairs_checked},
                  {"failures", std::move(failures)}};
      if (!rep.ok()) res.code = kExitValidation;
    });
  }

  // bound
  auto* bound = app.add_subcommand("bound", "certified lower bounds")->require_subcommand(1);
  {
    auto* c = bound->add_subcommand("fn", "witness product for a Fadell-Neuwirth fiber product");
    add_fn_options(c, o);
    on(c, [&] {
      const presentations::FadellNeuwirthSpec s{o.d, o.m, o.n, o.r};
      s.validate();
      const auto diag = bounds::diagonal_fn(s);
      res.body = bounds::certificate_to_json(bounds::verify_witness_fn(s, diag), diag.source());
      res.body["parameters"] = {{"d", o.d}, {"m", o.m}, {"n", o.n}, {"r", o.r}};
      res.cite({"fn-fibration", "zero-divisor-cup-length"});
    });
  }
  {
    auto* c = bound->add_subcommand("sphere-bundle", "Euler class tower bound");
    c->add_option("--base", o.base, "base name: pt, s<k>, cp<n> or products AxB");
    c->add_option("--q", o.q, "rank of the vector bundle");
    c->add_option("--r", o.r, "sequence length");
    c->add_option("--euler", o.euler, "Euler class expression in base generators");
    c->add_option("--partition", o.partition, "height split b_1,...,b_{r-1}")->delimiter(',');
    on(c, [&] {
      std::string name = "sb:base=" + o.base + ",q=" + std::to_string(o.q) + ",r=" + std::to_string(o.r);
      if (!o.euler.empty()) name += ",euler=" + o.euler;
      const auto entry = presentations::lookup(name);
      const auto& s = *entry.sphere_bundle;
      const int h = bounds::tangent_euler_height(s);
      const auto cert = o.partition.empty() ? bounds::sphere_bundle_lower_bound(s)
                                            : bounds::sphere_bundle_lower_bound(s, o.partition);
      res.body = bounds::certificate_to_json(cert, entry.presentation);
      res.body["height"] = h;
      res.body["presentation"] = name;
      res.cite({"sphere-bundle", "zero-divisor-cup-length"});
    });
  }
  {
    auto* c = bound->add_subcommand("cup-length", "search over products of kernel differences");
    add_fn_options(c, o);
    c->add_option("--budget", o.budget, "longest product tried (at most 12)");
    on(c, [&] {
      const presentations::FadellNeuwirthSpec s{o.d, o.m, o.n, o.r};
      s.validate();
      const auto diag = bounds::diagonal_fn(s);
      const auto result = bounds::cup_length_kernel(diag, bounds::fn_kernel_generators(s, diag.source()), o.budget);
      res.body = {{"length", result.length},
                  {"budget", std::clamp(o.budget, 0, bounds::kMaxCupLengthBudget)},
                  {"parameters", {{"d", o.d}, {"m", o.m}, {"n", o.n}, {"r", o.r}}}};
      if (result.certificate) res.body["certificate"] = bounds::certificate_to_json(*result.certificate, diag.source());
      res.cite({"zero-divisor-cup-length"});
    });
  }

  // value
  auto* value = app.add_subcommand("value", "knowledge base records")->require_subcommand(1);
  {
    auto* c = value->add_subcommand("fn", "Fadell-Neuwirth fibration");
    add_fn_options(c, o);
    c->add_flag("--no-certify", o.no_certify, "skip recomputing the lower bound");
    on(c, [&] { res.record(knowledge::value_fadell_neuwirth(o.d, o.m, o.n, o.r, !o.no_certify)); });
  }
  {
    auto* c = value->add_subcommand("so3", "principal SO(3)-bundles");
    c->add_option("--r", o.r, "sequence length")->required();
    on(c, [&] { res.record(knowledge::value_so3_bundle(o.r)); });
  }
  {
    auto* c = value->add_subcommand("spheres", "equivariant products of spheres");
    c->add_option("--dims", o.dims, "sphere dimensions")->delimiter(',')->required();
    c->add_option("--r", o.r, "sequence length")->required();
    c->add_option("--action", o.action, "antipodal or general")->check(CLI::IsMember({"antipodal", "general"}));
    c->add_option("--p", o.p, "fixed-point parameters for a general involution")->delimiter(',');
    on(c, [&] {
      const auto act = o.action == "general" ? knowledge::SphereAction::general : knowledge::SphereAction::antipodal;
      res.record(knowledge::value_product_spheres(o.dims, o.r, act, o.p));
    });
  }
  {
    auto* c = value->add_subcommand("associate", "upper bound for associated bundles");
    c->add_option("--dtc", o.dtc, "equivariant complexity of the fiber")->required();
    on(c, [&] { res.record(knowledge::associate_record(o.dtc)); });
  }
  {
    auto* c = value->add_subcommand("threshold", "dimension threshold for RP^n-associates");
    c->add_option("--r", o.r, "sequence length")->required();
    on(c, [&] { res.record(knowledge::threshold_record(o.r)); });
  }
  {
    auto* c = value->add_subcommand("hopf", "Hopf bundle");
    c->add_option("--r", o.r, "sequence length")->required();
    on(c, [&] { res.record(knowledge::value_hopf(o.r)); });
  }

  // nav
  auto* nav = app.add_subcommand("nav", "distributed navigation")->require_subcommand(1);
  {
    auto* c = nav->add_subcommand("rpn", "two-rotation planner on RP^n");
    c->add_option("--x", o.x, "first line, unit vector")->delimiter(',')->required();
    c->add_option("--y", o.y, "second line, unit vector")->delimiter(',')->required();
    c->add_option("--samples", o.samples, "sample times per path")->check(CLI::PositiveNumber);
    on(c, [&] {
      const auto plan =
          navplan::rpn_navigate(navplan::ProjectivePoint::from(to_vec(o.x)), navplan::ProjectivePoint::from(to_vec(o.y)));
      res.body = plan_to_json(plan, o.samples);
      res.cite({"son-equivariant-rpn"});
    });
  }
  {
    auto* c = nav->add_subcommand("circle", "arc planner on S^1");
    c->add_option("--angles", o.angles, "checkpoint angles")->delimiter(',')->required();
    c->add_option("--samples", o.samples, "sample times per path")->check(CLI::PositiveNumber);
    on(c, [&] {
      res.body = plan_to_json(navplan::circle_navigate_angles(o.angles), o.samples);
      res.cite({"principal-bundle-hopf"});
    });
  }
  {
    auto* c = nav->add_subcommand("hopf", "fiberwise planner on S^3 -> S^2");
    c->add_option("--points", o.points, "points of S^3 as w,x,y,z;w,x,y,z;...")->required();
    c->add_option("--samples", o.samples, "sample times per path")->check(CLI::PositiveNumber);
    on(c, [&] {
      const auto pts = parse_points(o.points);
      const auto plan = navplan::hopf_parametrized_navigate(static_cast<int>(pts.size()), pts);
      res.body = plan_to_json(plan, o.samples);
      res.body["fiber_deviation"] = navplan::max_fiber_deviation(plan);
      res.cite({"principal-bundle-hopf"});
    });
  }
  {
    auto* c = nav->add_subcommand("continuity", "LP continuity probe of the RP^n planner");
    c->add_option("--n", o.proj_n, "projective dimension")->check(CLI::PositiveNumber);
    c->add_option("--bases", o.bases, "base pairs")->check(CLI::PositiveNumber);
    c->add_option("--samples", o.samples, "perturbations per base pair")->check(CLI::PositiveNumber);
    c->add_option("--scale", o.scale, "perturbation size")->check(CLI::PositiveNumber);
    c->add_option("--ceiling", o.ceiling, "largest allowed distance/perturbation ratio");
    c->add_option("--near", o.near, "perpendicular or generic")->check(CLI::IsMember({"perpendicular", "generic"}));
    c->add_option("--seed", o.seed, "random seed");
    on(c, [&] {
      std::mt19937_64 rng(o.seed);
      std::vector<navplan::ProjectivePair> bases;
      for (int i = 0; i < o.bases; ++i) {
        const Vec a = navplan::random_unit(o.proj_n + 1, rng);
        Vec b = navplan::random_unit(o.proj_n + 1, rng);
        if (o.near == "perpendicular") b = (b - b.dot(a) * a).normalized();
        bases.emplace_back(a, b);
      }
      const auto report = navplan::check_lp_continuity<navplan::ProjectivePair>(
          navplan::rpn_plan_pair, bases, navplan::projective_perturbation(rng), navplan::projective_pair_distance,
          navplan::encode_pair, o.scale, o.samples, o.ceiling);
      res.body = navplan::to_json(report);
      res.cite({"son-equivariant-rpn"});
    });
  }
  {
    auto* c = nav->add_subcommand("equivariance", "SO(n)-equivariance check of the RP^n planner");
    c->add_option("--n", o.proj_n, "projective dimension")->check(CLI::Range(2, 64));
    c->add_option("--pairs", o.pairs, "random pairs")->check(CLI::PositiveNumber);
    c->add_option("--group", o.group, "random group elements")->check(CLI::PositiveNumber);
    c->add_option("--tol", o.tol, "allowed LP discrepancy")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "random seed");
    on(c, [&] {
      std::mt19937_64 rng(o.seed);
      std::vector<navplan::Mat> group;
      for (int i = 0; i < o.group; ++i) group.push_back(navplan::embed_rotation(navplan::random_rotation(o.proj_n, rng)));
      std::vector<std::pair<Vec, Vec>> pairs;
      for (int i = 0; i < o.pairs; ++i)
        pairs.emplace_back(navplan::random_unit(o.proj_n + 1, rng), navplan::random_unit(o.proj_n + 1, rng));
      const auto report = navplan::check_equivariance(navplan::rpn_navigate, group, pairs, o.tol);
      res.body = navplan::to_json(report);
      if (!report.ok()) res.code = kExitValidation;
      res.cite({"son-equivariant-rpn"});
    });
  }

  // measure
  auto* measure = app.add_subcommand("measure", "finitely supported measures")->require_subcommand(1);
  {
    auto* c = measure->add_subcommand("lp", "Levy-Prokhorov distance of two measure files");
    c->add_option("--mu", o.mu, "JSON file [{point, weight}]")->required();
    c->add_option("--nu", o.nu, "JSON file [{point, weight}]")->required();
    c->add_option("--precision", o.precision, "bisection precision")->check(CLI::PositiveNumber);
    on(c, [&] {
      const auto a = load_measure(o.mu), b = load_measure(o.nu);
      const measures::Metric<std::vector<double>> metric = measures::euclidean;
      res.body = {{"distance", measures::lp_distance(a, b, metric, o.precision)}, {"precision", o.precision}};
    });
  }
  {
    auto* c = measure->add_subcommand("product", "product of two measure files");
    c->add_option("--mu", o.mu, "JSON file [{point, weight}]")->required();
    c->add_option("--nu", o.nu, "JSON file [{point, weight}]")->required();
    on(c, [&] {
      using P = std::vector<double>;
      const auto a = load_measure(o.mu), b = load_measure(o.nu);
      const measures::Metric<P> metric = measures::euclidean;
      const auto prod = measures::product_measure(a, b, measures::product_metric(metric, metric));
      const std::function<json(const std::pair<P, P>&)> enc = [](const std::pair<P, P>& pt) {
        return json::array({pt.first, pt.second});
      };
      res.body = {{"measure", measures::to_json(prod, enc)}, {"support", prod.support_size()}};
      res.cite({"measure-multiplication"});
    });
  }

  auto emit = [&](json body, int code) {
    body["schema_version"] = kOutputSchemaVersion;
    if (cite) body["citations"] = res.citations;
    out << body.dump(2) << '\n';
    return code;
  };

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, out);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, out);
  } catch (const CLI::ParseError& e) {
    return emit({{"error", e.what()}, {"kind", "argument"}}, kExitArgument);
  }

  try {
    if (action) action();
  } catch (const ValidationError& e) {
    return emit({{"error", e.what()}, {"kind", "validation"}}, kExitValidation);
  } catch (const ArgumentError& e) {
    return emit({{"error", e.what()}, {"kind", "argument"}}, kExitArgument);
  } catch (const std::invalid_argument& e) {
    return emit({{"error", e.what()}, {"kind", "argument"}}, kExitArgument);
  }
  return emit(std::move(res.body), res.code);
}

}  // namespace seqtc::cli
