// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "seqtc/bounds.hpp"
#include "seqtc/gcring.hpp"
#include "seqtc/knowledge.hpp"
#include "seqtc/measures.hpp"
#include "seqtc/navplan.hpp"
#include "seqtc/presentations.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace {

using namespace seqtc;
using presentations::FadellNeuwirthSpec;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::vector<FadellNeuwirthSpec> fn_cells() {
  std::vector<FadellNeuwirthSpec> out;
  for (int d : {2, 3})
    for (int m : {2, 3})
      for (int n : {1, 2})
        for (int r : {2, 3}) out.push_back({d, m, n, r});
  return out;
}

std::string cell_name(const FadellNeuwirthSpec& s) {
  return "(d=" + std::to_string(s.d) + ",m=" + std::to_string(s.m) + ",n=" + std::to_string(s.n) +
         ",r=" + std::to_string(s.r) + ")";
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// certificate bounds from criterion 1, reused by criterion 9
std::map<std::tuple<int, int, int, int>, int> g_certified;

Outcome criterion_1() {
  Outcome o;
  const auto t0 = Clock::now();
  for (const auto& s : fn_cells()) {
    try {
      const auto diag = bounds::diagonal_fn(s);
      const auto c = bounds::verify_witness_fn(s, diag);
      const int want = s.d % 2 ? s.r * s.n + s.m - 1 : s.r * s.n + s.m - 2;
      if (c.bound != want || c.normal_form.is_zero() || !bounds::recheck(c, diag))
        o.fail(cell_name(s) + " bound " + std::to_string(c.bound) + " != " + std::to_string(want));
      g_certified[{s.d, s.m, s.n, s.r}] = c.bound;
    } catch (const std::exception& e) {
      o.fail(cell_name(s) + ": " + e.what());
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "16 cells certified in " + std::to_string(secs) + " s";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  for (const auto& s : fn_cells()) {
    const auto p = presentations::build_fn_presentation_unchecked(s);
    const int top = s.witness_degree();
    const auto got = gcring::poincare_series(p, top);
    const auto want = presentations::expected_fn_poincare(s, top);
    for (int k = 0; k <= top; ++k)
      if (got[static_cast<std::size_t>(k)] != want[static_cast<std::size_t>(k)]) {
        o.fail(cell_name(s) + " degree " + std::to_string(k));
        break;
      }
    try {
      presentations::build_fn_fiber_product(s);
    } catch (const std::exception& e) {
      o.fail(cell_name(s) + " validation: " + e.what());
    }
  }
  if (o.pass) o.detail = "16 cells match up to the witness degree";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const auto t0 = Clock::now();
  for (int n = 1; n <= 4; ++n)
    for (int r : {2, 3}) {
      const auto base = presentations::complex_projective(n);
      try {
        const auto c = bounds::sphere_bundle_lower_bound({base, base.generator("a"), 3, r});
        if (c.bound < n + r - 1)
          o.fail("CP^" + std::to_string(n) + " r=" + std::to_string(r) + " bound " + std::to_string(c.bound));
      } catch (const std::exception& e) {
        o.fail("CP^" + std::to_string(n) + " r=" + std::to_string(r) + ": " + e.what());
      }
    }
  const double secs = seconds_since(t0);
  if (secs >= 30) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "8 towers certify >= n+r-1 in " + std::to_string(secs) + " s";
  return o;
}

Outcome criterion_4() {
  Outcome o;
  for (int n = 1; n <= 6; ++n) {
    const auto p = presentations::complex_projective(n);
    const int h = bounds::euler_height(p, p.generator("a"), 4 * n);
    if (h != n) o.fail("CP^" + std::to_string(n) + " height " + std::to_string(h));
  }
  if (o.pass) o.detail = "height of a in CP^n is n for n <= 6";
  return o;
}

std::vector<std::pair<std::string, gcring::RingPresentation>> shipped_presentations() {
  std::vector<std::pair<std::string, gcring::RingPresentation>> out;
  for (int d : {2, 3})
    for (int k = 2; k <= 5; ++k) out.emplace_back("conf d=" + std::to_string(d) + " k=" + std::to_string(k),
                                                  presentations::build_config_space(d, k));
  for (const auto& s : fn_cells()) out.emplace_back("fn " + cell_name(s), presentations::build_fn_fiber_product(s));
  out.emplace_back("point", presentations::point());
  for (int k : {1, 2, 3}) out.emplace_back("S^" + std::to_string(k), presentations::sphere(k));
  for (int n = 1; n <= 6; ++n) out.emplace_back("CP^" + std::to_string(n), presentations::complex_projective(n));
  out.emplace_back("CP^2 x S^3", presentations::base_from_name("cp2xs3"));
  for (int n = 1; n <= 4; ++n)
    for (int r : {2, 3}) {
      const auto base = presentations::complex_projective(n);
      out.emplace_back("tower CP^" + std::to_string(n) + " r=" + std::to_string(r),
                       presentations::build_sphere_bundle_tower({base, base.generator("a"), 3, r}));
    }
  out.emplace_back("tower pt q=2 r=3", presentations::build_sphere_bundle_tower({presentations::point(), {}, 2, 3}));
  out.emplace_back("tower pt q=3 r=3", presentations::build_sphere_bundle_tower({presentations::point(), {}, 3, 3}));
  return out;
}

Outcome criterion_5() {
  Outcome o;
  std::size_t count = 0;
  for (const auto& [name, p] : shipped_presentations()) {
    ++count;
    if (!gcring::check_confluence(p).ok()) {
      o.fail(name + " is not confluent");
      continue;
    }
    std::mt19937_64 rng(std::hash<std::string>{}(name));
    for (int t = 0; t < 1000; ++t) {
      const auto a = testing::random_homogeneous(p, rng, 2, 2);
      const auto b = testing::random_homogeneous(p, rng, 2, 2);
      const auto c = testing::random_homogeneous(p, rng, 2, 2);
      const auto na = gcring::normal_form(a, p);
      if (gcring::normal_form(na, p) != na) {
        o.fail(name + ": normal form not idempotent");
        break;
      }
      if (gcring::multiply(gcring::multiply(a, b, p), c, p) != gcring::multiply(a, gcring::multiply(b, c, p), p)) {
        o.fail(name + ": associativity");
        break;
      }
      const int da = testing::degree(a, p), db = testing::degree(b, p);
      const gcring::Rational sign = (da * db) % 2 ? -1 : 1;
      if (gcring::multiply(a, b, p) != gcring::multiply(b, a, p) * sign) {
        o.fail(name + ": graded commutativity");
        break;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(count) + " presentations, 1000 samples each";
  return o;
}

Outcome criterion_6() {
  using namespace navplan;
  Outcome o;
  std::mt19937_64 rng(6);
  double worst_eq = 0, worst_cp = 0, worst_mass = 0;
  for (int n = 2; n <= 5; ++n)
    for (int t = 0; t < 200; ++t) {
      const Vec x = random_unit(n + 1, rng), y = random_unit(n + 1, rng);
      const auto plan = rpn_navigate(ProjectivePoint::from(x), ProjectivePoint::from(y));
      worst_cp = std::max(worst_cp, max_checkpoint_error(plan));
      worst_mass = std::max(worst_mass, mass_error(plan));
      if (plan.support_size() > 2) o.fail("support " + std::to_string(plan.support_size()));
      const Mat g = embed_rotation(random_rotation(n, rng));
      const auto rep = check_equivariance(rpn_navigate, {g}, {{x, y}}, 1e-9);
      worst_eq = std::max(worst_eq, rep.max_discrepancy);
    }
  if (worst_cp > 1e-9) o.fail("checkpoint error " + std::to_string(worst_cp));
  if (worst_mass > 1e-12) o.fail("mass error " + std::to_string(worst_mass));
  if (worst_eq > 1e-9) o.fail("equivariance discrepancy " + std::to_string(worst_eq));
  std::ostringstream ss;
  ss << "800 pairs, checkpoint " << worst_cp << ", mass " << worst_mass << ", equivariance " << worst_eq;
  if (o.pass) o.detail = ss.str();
  return o;
}

Outcome criterion_7() {
  using namespace navplan;
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  double worst_fiber = 0, worst_cp = 0;
  for (int t = 0; t < 100; ++t) {
    const Vec e = random_unit(4, rng);
    const auto plan = hopf_parametrized_navigate(2, {e, fiber_translate(e, angle(rng))});
    worst_fiber = std::max(worst_fiber, max_fiber_deviation(plan));
    worst_cp = std::max(worst_cp, max_checkpoint_error(plan));
    if (plan.support_size() > 2) o.fail("support " + std::to_string(plan.support_size()));
  }
  if (worst_fiber > 1e-9) o.fail("fiber deviation " + std::to_string(worst_fiber));
  if (worst_cp > 1e-9) o.fail("checkpoint error " + std::to_string(worst_cp));
  std::ostringstream ss;
  ss << "100 pairs, fiber deviation " << worst_fiber << ", checkpoint " << worst_cp;
  if (o.pass) o.detail = ss.str();
  return o;
}

Outcome criterion_8() {
  using P = std::vector<double>;
  using M = measures::FiniteMeasure<P>;
  const measures::Metric<P> metric = measures::euclidean;
  Outcome o;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coord(-1.0, 1.0), mass(0.05, 1.0);
  double worst_dirac = 0;
  for (int t = 0; t < 50; ++t) {
    const P x{coord(rng), coord(rng)}, y{coord(rng), coord(rng)};
    const double got = measures::lp_distance(M::dirac(x, metric), M::dirac(y, metric), metric);
    worst_dirac = std::max(worst_dirac, std::abs(got - std::min(measures::euclidean(x, y), 1.0)));
  }
  if (worst_dirac > 1e-6) o.fail("Dirac error " + std::to_string(worst_dirac));
  auto random_measure = [&] {
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<measures::Atom<P>> atoms;
    double total = 0;
    for (int i = 0; i < k; ++i) {
      atoms.push_back({{0.5 * coord(rng), 0.5 * coord(rng)}, mass(rng)});
      total += atoms.back().weight;
    }
    double acc = 0;
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) acc += atoms[i].weight /= total;
    atoms.back().weight = 1.0 - acc;
    return M(atoms, metric);
  };
  double worst_axiom = 0;
  for (int t = 0; t < 100; ++t) {
    const auto a = random_measure(), b = random_measure(), c = random_measure();
    const double ab = measures::lp_distance(a, b, metric), ba = measures::lp_distance(b, a, metric);
    const double bc = measures::lp_distance(b, c, metric), ac = measures::lp_distance(a, c, metric);
    const double aa = measures::lp_distance(a, a, metric);
    worst_axiom = std::max({worst_axiom, -ab, std::abs(ab - ba), ac - ab - bc, aa});
  }
  if (worst_axiom > 3e-6) o.fail("metric axiom violated by " + std::to_string(worst_axiom));
  std::ostringstream ss;
  ss << "Dirac error " << worst_dirac << ", axiom slack " << worst_axiom;
  if (o.pass) o.detail = ss.str();
  return o;
}

Outcome criterion_9() {
  Outcome o;
  for (const auto& s : fn_cells()) {
    const auto rec = knowledge::value_fadell_neuwirth(s.d, s.m, s.n, s.r);
    const auto it = g_certified.find({s.d, s.m, s.n, s.r});
    if (it == g_certified.end()) {
      o.fail(cell_name(s) + " has no certificate from criterion 1");
      continue;
    }
    if (!rec.exact || *rec.exact != it->second || !rec.lower || *rec.lower != it->second || !rec.consistent())
      o.fail(cell_name(s) + " record disagrees with certificate");
  }
  for (int r = 2; r <= 10; ++r) {
    const auto rec = knowledge::value_so3_bundle(r);
    const long long bound = std::min((1LL << (r - 1)) - 1, 2LL * r + 1);
    if (*rec.upper != bound || !(bound < 3LL * (r - 1)) || !rec.consistent())
      o.fail("SO(3) record r=" + std::to_string(r));
  }
  if (o.pass) o.detail = "16 cells agree, SO(3) strict for 2 <= r <= 10";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Fadell-Neuwirth certificates", criterion_1}, {"presentation validation", criterion_2},
      {"sphere-bundle bound", criterion_3},          {"Euler height", criterion_4},
      {"ring engine soundness", criterion_5},        {"RP^n planner", criterion_6},
      {"Hopf parametrized planner", criterion_7},    {"Levy-Prokhorov metric", criterion_8},
      {"knowledge base consistency", criterion_9}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
