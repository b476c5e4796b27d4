#pragma once

// Ring presentations for the fibration families: ordered configuration spaces
// of R^d, fiber products of the Fadell-Neuwirth fibration over its base, and
// towers of fiberwise powers of a sphere bundle with a section.

#include "seqtc/gcring.hpp"
#include "seqtc/gcring_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace seqtc::presentations {

using gcring::GradedElement;
using gcring::PresentationBuilder;
using gcring::Rational;
using gcring::RingPresentation;

/// Id of the class omega_ij (1 <= i < j).
inline std::string omega_id(int i, int j) {
  return "w_" + std::to_string(i) + "_" + std::to_string(j);
}
/// Id of omega^l_ij, the pullback of omega_ij along the l-th projection.
inline std::string omega_id(int i, int j, int l) { return omega_id(i, j) + "^" + std::to_string(l); }

/// H*(F(R^d, k); Q). Generators are ordered by (j, i) so that each Arnold
/// rule lowers the largest second index involved.
inline RingPresentation build_config_space(int d, int k) {
  if (d < 2) throw ArgumentError("configuration space needs d >= 2");
  if (k < 2) throw ArgumentError("configuration space needs k >= 2");
  PresentationBuilder b;
  for (int j = 2; j <= k; ++j)
    for (int i = 1; i < j; ++i) b.add_generator(omega_id(i, j), d - 1);
  auto w = [&](int i, int j) { return b.index_of(omega_id(i, j)); };
  for (int c = 3; c <= k; ++c)
    for (int j = 2; j < c; ++j)
      for (int i = 1; i < j; ++i)
        b.add_rule({w(i, c), w(j, c)},
                   {{Rational(1), {w(i, j), w(j, c)}}, {Rational(-1), {w(i, j), w(i, c)}}});
  if ((d - 1) % 2 == 0) {
    for (int j = 2; j <= k; ++j)
      for (int i = 1; i < j; ++i) b.add_rule({w(i, j), w(i, j)}, {});
  }
  return b.build();
}

struct FadellNeuwirthSpec {
  int d = 2;  // ambient dimension
  int m = 2;  // obstacles
  int n = 1;  // robots
  int r = 2;  // sequence length

  void validate(int min_r = 2) const {
    if (d < 2) throw ArgumentError("Fadell-Neuwirth spec needs d >= 2");
    if (m < 2) throw ArgumentError("Fadell-Neuwirth spec needs m >= 2");
    if (n < 1) throw ArgumentError("Fadell-Neuwirth spec needs n >= 1");
    if (r < min_r) throw ArgumentError("Fadell-Neuwirth spec needs r >= " + std::to_string(min_r));
  }

  int generator_degree() const { return d - 1; }
  int lower_bound() const { return r * n + m - (d % 2 == 1 ? 1 : 2); }
  int witness_degree() const { return lower_bound() * generator_degree(); }
};

/// Coefficients of prod_{i=1}^{m-1}(1 + i t^{d-1}) * (prod_{i=0}^{n-1}(1 + (m+i) t^{d-1}))^r
/// up to max_degree: the graded dimension of the fiber product predicted by a
/// free basis over the base.
inline std::vector<long long> expected_fn_poincare(const FadellNeuwirthSpec& s, int max_degree) {
  std::vector<long long> poly{1};
  auto times = [&](long long c) {
    std::vector<long long> next(poly.size() + 1, 0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k];
      next[k + 1] += c * poly[k];
    }
    poly = std::move(next);
  };
  for (int i = 1; i < s.m; ++i) times(i);
  for (int l = 0; l < s.r; ++l)
    for (int i = 0; i < s.n; ++i) times(s.m + i);
  std::vector<long long> out(static_cast<std::size_t>(max_degree) + 1, 0);
  const int step = s.generator_degree();
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const std::size_t deg = k * static_cast<std::size_t>(step);
    if (deg < out.size()) out[deg] = poly[k];
  }
  return out;
}

/// H*(E^r_B; Q) for E = F(R^d, m+n) over B = F(R^d, m): base classes omega_ij
/// (j <= m) shared by all factors, classes omega^l_ij (j > m) per factor l,
/// and the Arnold relations of each factor. No relations couple different
/// factors beyond graded commutativity.
inline RingPresentation build_fn_presentation_unchecked(const FadellNeuwirthSpec& s) {
  s.validate(1);
  PresentationBuilder b;
  const int total = s.m + s.n;
  for (int j = 2; j <= total; ++j)
    for (int i = 1; i < j; ++i) {
      if (j <= s.m) {
        b.add_generator(omega_id(i, j), s.d - 1);
      } else {
        for (int l = 1; l <= s.r; ++l) b.add_generator(omega_id(i, j, l), s.d - 1);
      }
    }
  // omega_ij as seen from factor l
  auto w = [&](int i, int j, int l) {
    return j <= s.m ? b.index_of(omega_id(i, j)) : b.index_of(omega_id(i, j, l));
  };
  for (int c = 3; c <= total; ++c) {
    const int layers = c <= s.m ? 1 : s.r;
    for (int l = 1; l <= layers; ++l)
      for (int j = 2; j < c; ++j)
        for (int i = 1; i < j; ++i)
          b.add_rule({w(i, c, l), w(j, c, l)},
                     {{Rational(1), {w(i, j, l), w(j, c, l)}},
                      {Rational(-1), {w(i, j, l), w(i, c, l)}}});
  }
  if ((s.d - 1) % 2 == 0) {
    for (int g = 0; g < static_cast<int>(b.size()); ++g)
      b.add_rule({g, g}, {});
  }
  return b.build();
}

/// Builds the fiber-product presentation and validates it: confluence, and
/// the Poincare series up to the witness degree against the free-basis count.
/// Throws ValidationError naming the first failing degree.
inline RingPresentation build_fn_fiber_product(const FadellNeuwirthSpec& s) {
  RingPresentation p = build_fn_presentation_unchecked(s);
  const int top = s.r >= 2 ? s.witness_degree() : (s.m + s.n - 1) * s.generator_degree();
  const auto got = gcring::poincare_series(p, top);
  const auto want = expected_fn_poincare(s, top);
  for (std::size_t k = 0; k < got.size(); ++k) {
    if (got[k] != want[k])
      throw ValidationError("fiber-product presentation fails dimension check in degree " +
                            std::to_string(k) + ": " + std::to_string(got[k]) + " admissible vs " +
                            std::to_string(want[k]) + " expected");
  }
  return p;
}

// ---------------------------------------------------------------------------
// base spaces

inline RingPresentation point() { return PresentationBuilder{}.build(); }

/// H*(S^k): one generator s with s^2 = 0.
inline RingPresentation sphere(int k) {
  if (k < 1) throw ArgumentError("sphere dimension must be >= 1");
  PresentationBuilder b;
  const int s = b.add_generator("s", k);
  if (k % 2 == 0) b.add_rule({s, s}, {});
  return b.build();
}

/// H*(CP^n) = Q[a]/(a^{n+1}), |a| = 2.
inline RingPresentation complex_projective(int n) {
  if (n < 1) throw ArgumentError("CP^n needs n >= 1");
  PresentationBuilder b;
  const int a = b.add_generator("a", 2);
  b.add_rule(std::vector<int>(static_cast<std::size_t>(n) + 1, a), {});
  return b.build();
}

/// Tensor product. With more than one factor, ids get the suffix _<position>.
inline RingPresentation tensor(const std::vector<RingPresentation>& factors) {
  PresentationBuilder b;
  const bool rename = factors.size() > 1;
  std::vector<int> offsets;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    offsets.push_back(0);
    bool first = true;
    for (const auto& g : factors[f].generators()) {
      const int idx = b.add_generator(rename ? g.id + "_" + std::to_string(f + 1) : g.id, g.degree);
      if (first) offsets.back() = idx;
      first = false;
    }
  }
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const int off = offsets[f];
    for (const auto& rule : factors[f].rules()) {
      std::vector<int> lhs;
      for (int g : rule.lhs) lhs.push_back(g + off);
      std::vector<std::pair<Rational, std::vector<int>>> rhs;
      for (const auto& [m, c] : rule.rhs.terms()) {
        std::vector<int> seq;
        for (int g : m) seq.push_back(g + off);
        rhs.emplace_back(c, std::move(seq));
      }
      b.add_rule(std::move(lhs), std::move(rhs));
    }
  }
  return b.build();
}

/// Parses base names: "pt", "s<k>", "cp<n>", and products joined by 'x'
/// (e.g. "cp2xs3").
inline RingPresentation base_from_name(const std::string& name) {
  auto single = [](const std::string& t) -> RingPresentation {
    try {
      if (t == "pt" || t == "point") return point();
      if (t.rfind("cp", 0) == 0 && t.size() > 2) return complex_projective(std::stoi(t.substr(2)));
      if (t.rfind("s", 0) == 0 && t.size() > 1) return sphere(std::stoi(t.substr(1)));
    } catch (const std::logic_error&) {
      // fall through to the error below
    }
    throw ArgumentError("unknown base space '" + t + "'");
  };
  std::vector<RingPresentation> parts;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, 'x')) parts.push_back(single(tok));
  if (parts.empty()) throw ArgumentError("empty base name");
  if (parts.size() == 1) return parts.front();
  return tensor(parts);
}

// ---------------------------------------------------------------------------
// sphere-bundle towers

struct SphereBundleTowerSpec {
  RingPresentation base;
  GradedElement euler;  // Euler class of the complement of the section, in base
  int q = 3;            // rank of the vector bundle
  int r = 2;            // sequence length

  bool odd_rank() const { return q % 2 != 0; }
};

inline std::string tower_u_id(int i) { return i == 0 ? std::string("u") : "u" + std::to_string(i); }

/// Base generators, then u with u^2 = e u, then u_1..u_{r-1} with
/// u_i^2 = e' u_i where e' is the Euler class of the fiberwise tangent bundle
/// of the sphere bundle: e' = 2u - e for odd q, e' = e for even q. For even
/// q the classes are odd and square to zero, so e must vanish rationally.
inline RingPresentation build_sphere_bundle_tower(const SphereBundleTowerSpec& s) {
  if (s.q < 2) throw ArgumentError("sphere bundle rank q must be >= 2");
  if (s.r < 1) throw ArgumentError("tower length r must be >= 1");
  gcring::require_confluent(s.base);
  const GradedElement e = gcring::normal_form(s.euler, s.base);
  if (!e.is_zero()) {
    const auto deg = s.base.degree_of(e);
    if (!deg || *deg != s.q - 1)
      throw ArgumentError("Euler class must be homogeneous of degree q-1 = " +
                          std::to_string(s.q - 1));
    if (!s.odd_rank())
      throw ArgumentError("for even q the Euler class has odd degree and must vanish rationally");
  }

  PresentationBuilder b;
  for (const auto& g : s.base.generators()) b.add_generator(g.id, g.degree);
  for (const auto& rule : s.base.rules()) {
    std::vector<std::pair<Rational, std::vector<int>>> rhs;
    for (const auto& [m, c] : rule.rhs.terms()) rhs.emplace_back(c, m);
    b.add_rule(rule.lhs, std::move(rhs));
  }
  const int u = b.add_generator(tower_u_id(0), s.q - 1);
  std::vector<int> us;
  for (int i = 1; i < s.r; ++i) us.push_back(b.add_generator(tower_u_id(i), s.q - 1));
  if (s.odd_rank()) {
    // u^2 = e u
    std::vector<std::pair<Rational, std::vector<int>>> rhs;
    for (const auto& [m, c] : e.terms()) {
      auto seq = m;
      seq.push_back(u);
      rhs.emplace_back(c, std::move(seq));
    }
    b.add_rule({u, u}, rhs);
    // u_i^2 = (2u - e) u_i
    for (int ui : us) {
      std::vector<std::pair<Rational, std::vector<int>>> rhs_i{{Rational(2), {u, ui}}};
      for (const auto& [m, c] : e.terms()) {
        auto seq = m;
        seq.push_back(ui);
        rhs_i.emplace_back(-c, std::move(seq));
      }
      b.add_rule({ui, ui}, std::move(rhs_i));
    }
  }
  return b.build();
}

/// Euler class of the fiberwise tangent bundle, expressed in a tower built
/// from s (any r >= 1).
inline GradedElement tangent_euler_class(const SphereBundleTowerSpec& s, const RingPresentation& tower) {
  const GradedElement e = gcring::normal_form(s.euler, s.base);
  GradedElement lifted;  // base generator indices coincide in the tower
  for (const auto& [m, c] : e.terms()) lifted.add_term(m, c);
  if (!s.odd_rank()) return lifted;
  return tower.generator(tower_u_id(0)) * Rational(2) - lifted;
}

// ---------------------------------------------------------------------------
// catalog

struct CatalogEntry {
  std::string name;
  RingPresentation presentation;
  std::optional<FadellNeuwirthSpec> fn;
  std::optional<SphereBundleTowerSpec> sphere_bundle;
};

namespace detail {

inline std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ArgumentError("expected key=value in '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

inline int int_param(const std::map<std::string, std::string>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw ArgumentError("missing parameter '" + key + "'");
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw ArgumentError("parameter '" + key + "' must be an integer");
  }
}

inline RingPresentation load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open presentation file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return gcring::presentation_from_json(doc);
}

}  // namespace detail

inline constexpr const char* kCatalogEnvVar = "SEQTC_CATALOG";

/// Resolves a catalog name:
///   conf:d=3,k=4
///   fn:d=2,m=2,n=1,r=2
///   sb:base=cp2,q=3,r=2[,euler=<expression in base ids>]
///   base:cp2xs3
///   <path>.json, or <name> looked up as $SEQTC_CATALOG/<name>.json
inline CatalogEntry lookup(const std::string& name) {
  const auto colon = name.find(':');
  const std::string kind = colon == std::string::npos ? "" : name.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (kind == "conf") {
    const auto params = detail::parse_params(rest);
    return {name, build_config_space(detail::int_param(params, "d"), detail::int_param(params, "k")),
            std::nullopt, std::nullopt};
  }
  if (kind == "fn") {
    const auto params = detail::parse_params(rest);
    FadellNeuwirthSpec s{detail::int_param(params, "d"), detail::int_param(params, "m"),
                         detail::int_param(params, "n"), detail::int_param(params, "r")};
    s.validate(1);
    return {name, build_fn_fiber_product(s), s, std::nullopt};
  }
  if (kind == "sb") {
    const auto params = detail::parse_params(rest);
    auto base_it = params.find("base");
    if (base_it == params.end()) throw ArgumentError("missing parameter 'base'");
    SphereBundleTowerSpec s;
    s.base = base_from_name(base_it->second);
    s.q = detail::int_param(params, "q");
    s.r = detail::int_param(params, "r");
    if (auto e = params.find("euler"); e != params.end()) {
      s.euler = gcring::parse_element(e->second, s.base);
    } else {
      // default: the first base generator of degree q-1, else zero
      for (int g = 0; g < static_cast<int>(s.base.size()); ++g) {
        if (s.base.degree(g) == s.q - 1 && s.odd_rank()) {
          s.euler = s.base.generator(g);
          break;
        }
      }
    }
    RingPresentation tower = build_sphere_bundle_tower(s);
    return {name, std::move(tower), std::nullopt, std::move(s)};
  }
  if (kind == "base") return {name, base_from_name(rest), std::nullopt, std::nullopt};
  if (!kind.empty()) throw ArgumentError("unknown catalog family '" + kind + "'");

  std::filesystem::path path(name);
  if (path.extension() == ".json" && std::filesystem::exists(path))
    return {name, detail::load_json_file(path), std::nullopt, std::nullopt};
  if (const char* dir = std::getenv(kCatalogEnvVar)) {
    const auto candidate = std::filesystem::path(dir) / (name + ".json");
    if (std::filesystem::exists(candidate))
      return {name, detail::load_json_file(candidate), std::nullopt, std::nullopt};
  }
  throw ArgumentError("unknown presentation '" + name + "'");
}

}  // namespace seqtc::presentations
