#pragma once

// Zero-divisor lower bounds: diagonal maps, kernel classes, nonzero product
// certificates, Euler class heights and a bounded cup-length search.

#include "seqtc/gcring.hpp"
#include "seqtc/gcring_io.hpp"
#include "seqtc/presentations.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace seqtc::bounds {

using gcring::GradedElement;
using gcring::Monomial;
using gcring::Rational;
using gcring::RingPresentation;
using presentations::FadellNeuwirthSpec;
using presentations::SphereBundleTowerSpec;

/// A graded ring map given on generators. Construction checks that images
/// have the generator's degree and that every rule maps to zero.
class DiagonalMap {
 public:
  DiagonalMap(RingPresentation source, RingPresentation target, std::vector<GradedElement> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.size())
      throw ArgumentError("diagonal map needs one image per source generator");
    for (std::size_t g = 0; g < images_.size(); ++g) {
      images_[g] = gcring::normal_form(images_[g], target_);
      if (images_[g].is_zero()) continue;
      const auto deg = target_.degree_of(images_[g]);
      if (!deg || *deg != source_.degree(static_cast<int>(g)))
        throw ValidationError("image of " + source_.id(static_cast<int>(g)) + " is not homogeneous of degree " +
                              std::to_string(source_.degree(static_cast<int>(g))));
    }
    for (const auto& rule : source_.rules()) {
      const auto lhs = source_.canonicalize(rule.lhs);
      GradedElement diff = rule.rhs * Rational(-1);
      if (lhs.sign != 0) diff.add_term(lhs.factors, Rational(lhs.sign));
      if (!apply(diff).is_zero())
        throw ValidationError("relation with lhs " + gcring::describe(lhs.factors, source_) +
                              " does not map to zero");
    }
  }

  /// Builds the map from target ids, one per source generator id.
  static DiagonalMap from_ids(RingPresentation source, RingPresentation target,
                              const std::function<GradedElement(const std::string&, const RingPresentation&)>& image) {
    std::vector<GradedElement> images;
    for (const auto& g : source.generators()) images.push_back(image(g.id, target));
    return DiagonalMap(std::move(source), std::move(target), std::move(images));
  }

  const RingPresentation& source() const { return source_; }
  const RingPresentation& target() const { return target_; }
  const GradedElement& image(int g) const { return images_.at(static_cast<std::size_t>(g)); }

  GradedElement apply(const GradedElement& e) const {
    GradedElement out;
    for (const auto& [m, c] : e.terms()) {
      std::vector<GradedElement> factors;
      for (int g : m) {
        source_.check_index(g);
        factors.push_back(images_[static_cast<std::size_t>(g)]);
      }
      out += gcring::product(factors, target_) * c;
    }
    return out;
  }

  bool in_kernel(const GradedElement& e) const { return apply(e).is_zero(); }

 private:
  RingPresentation source_;
  RingPresentation target_;
  std::vector<GradedElement> images_;
};

/// Sends every superscripted class w_i_j^l to w_i_j in F(R^d, m+n).
inline DiagonalMap diagonal_fn(const FadellNeuwirthSpec& s, RingPresentation source) {
  return DiagonalMap::from_ids(std::move(source), presentations::build_config_space(s.d, s.m + s.n),
                               [](const std::string& id, const RingPresentation& target) {
                                 return target.generator(id.substr(0, id.find('^')));
                               });
}

inline DiagonalMap diagonal_fn(const FadellNeuwirthSpec& s) {
  return diagonal_fn(s, presentations::build_fn_fiber_product(s));
}

/// Differences w^l_ij - w^k_ij (k < l) of the superscripted classes, in
/// generator order.
inline std::vector<GradedElement> fn_kernel_generators(const FadellNeuwirthSpec& s, const RingPresentation& p) {
  using presentations::omega_id;
  std::vector<GradedElement> out;
  for (int j = s.m + 1; j <= s.m + s.n; ++j)
    for (int i = 1; i < j; ++i)
      for (int k = 1; k <= s.r; ++k)
        for (int l = k + 1; l <= s.r; ++l)
          out.push_back(p.generator(omega_id(i, j, l)) - p.generator(omega_id(i, j, k)));
  return out;
}

/// The level-one tower with u_i mapped to the tangent Euler class.
inline DiagonalMap diagonal_sphere_bundle(const SphereBundleTowerSpec& s, RingPresentation source) {
  SphereBundleTowerSpec level_one = s;
  level_one.r = 1;
  auto target = presentations::build_sphere_bundle_tower(level_one);
  const GradedElement e = presentations::tangent_euler_class(level_one, target);
  return DiagonalMap::from_ids(std::move(source), std::move(target),
                               [&](const std::string& id, const RingPresentation& t) {
                                 if (t.find(id)) return t.generator(id);
                                 return e;
                               });
}

inline DiagonalMap diagonal_sphere_bundle(const SphereBundleTowerSpec& s) {
  return diagonal_sphere_bundle(s, presentations::build_sphere_bundle_tower(s));
}

struct NonzeroCertificate {
  std::vector<GradedElement> factors;
  GradedElement normal_form;
  Monomial witness_monomial;
  Rational coefficient;
  int bound = 0;
  std::string tag;
};

inline nlohmann::json certificate_to_json(const NonzeroCertificate& c, const RingPresentation& p) {
  auto factors = nlohmann::json::array();
  for (const auto& f : c.factors) factors.push_back(gcring::describe(f, p));
  return {{"factors", std::move(factors)},
          {"witness_monomial", gcring::monomial_to_json(c.witness_monomial, p)},
          {"coefficient", seqtc::to_string(c.coefficient)},
          {"bound", c.bound},
          {"paper_ref_tag", c.tag}};
}

/// Multiplies the factors, checks each lies in the kernel, and fills in the
/// witness term. Throws ValidationError if the product vanishes.
inline NonzeroCertificate certify_product(const DiagonalMap& diag, std::vector<GradedElement> factors,
                                          std::string tag) {
  const auto& p = diag.source();
  for (const auto& f : factors)
    if (!diag.in_kernel(f))
      throw ValidationError("factor " + gcring::describe(f, p) + " is not in the kernel of the diagonal");
  NonzeroCertificate c;
  c.normal_form = gcring::product(factors, p);
  if (c.normal_form.is_zero())
    throw ValidationError("product of " + std::to_string(factors.size()) + " kernel classes vanishes (" + tag + ")");
  const auto& [m, coeff] = *c.normal_form.terms().begin();
  c.witness_monomial = m;
  c.coefficient = coeff;
  c.bound = static_cast<int>(factors.size());
  c.factors = std::move(factors);
  c.tag = std::move(tag);
  return c;
}

/// Re-checks a certificate against a diagonal map from scratch.
inline bool recheck(const NonzeroCertificate& c, const DiagonalMap& diag) {
  for (const auto& f : c.factors)
    if (!diag.in_kernel(f)) return false;
  const auto nf = gcring::product(c.factors, diag.source());
  if (nf.is_zero() || nf != c.normal_form) return false;
  const auto it = nf.terms().find(c.witness_monomial);
  return it != nf.terms().end() && it->second == c.coefficient && c.bound == static_cast<int>(c.factors.size());
}

/// The witness product for the Fadell-Neuwirth fiber product. Squared factors
/// appear twice in the factor list.
inline std::vector<GradedElement> fn_witness_factors(const FadellNeuwirthSpec& s, const RingPresentation& p) {
  using presentations::omega_id;
  auto w = [&](int i, int j, int l) { return p.generator(omega_id(i, j, l)); };
  const int m = s.m, n = s.n, r = s.r;
  std::vector<GradedElement> out;
  for (int i = 2; i <= m; ++i) out.push_back(w(i, m + 1, 1) - w(i, m + 1, 2));
  if (s.d % 2 != 0) {
    for (int j = m + 1; j <= m + n; ++j) {
      const auto f = w(1, j, 2) - w(1, j, 1);
      out.push_back(f);
      out.push_back(f);
    }
    for (int l = 3; l <= r; ++l)
      for (int j = m + 1; j <= m + n; ++j) out.push_back(w(1, j, l) - w(1, j, 1));
  } else {
    for (int j = m + 2; j <= m + n; ++j) out.push_back(w(j - 1, j, 1) - w(j - 1, j, 2));
    for (int l = 2; l <= r; ++l)
      for (int j = m + 1; j <= m + n; ++j) out.push_back(w(1, j, l) - w(1, j, 1));
  }
  return out;
}

inline NonzeroCertificate verify_witness_fn(const FadellNeuwirthSpec& s, const DiagonalMap& diag) {
  auto c = certify_product(diag, fn_witness_factors(s, diag.source()), "fn-fibration");
  if (c.bound != s.lower_bound())
    throw ValidationError("witness has " + std::to_string(c.bound) + " factors, expected " +
                          std::to_string(s.lower_bound()));
  return c;
}

inline NonzeroCertificate verify_witness_fn(const FadellNeuwirthSpec& s) {
  s.validate();
  return verify_witness_fn(s, diagonal_fn(s));
}

/// Largest k <= max_h with e^k != 0.
inline int euler_height(const RingPresentation& p, const GradedElement& e, int max_h) {
  if (!p.is_homogeneous(e)) throw ArgumentError("Euler class must be homogeneous");
  GradedElement acc = GradedElement::one();
  for (int k = 1; k <= max_h; ++k) {
    acc = gcring::multiply(acc, e, p);
    if (acc.is_zero()) return k - 1;
  }
  return max_h;
}

/// Height of the tangent Euler class in the level-one tower. Bounded by the
/// top degree of that ring.
inline int tangent_euler_height(const SphereBundleTowerSpec& s) {
  SphereBundleTowerSpec level_one = s;
  level_one.r = 1;
  const auto tower = presentations::build_sphere_bundle_tower(level_one);
  const auto e = presentations::tangent_euler_class(level_one, tower);
  const int top = gcring::top_degree(tower);
  return euler_height(tower, e, top / (s.q - 1) + 1);
}

/// Puts the whole height on the first factor.
inline std::vector<int> default_partition(int h, int r) {
  std::vector<int> b(static_cast<std::size_t>(std::max(r - 1, 0)), 0);
  if (!b.empty()) b[0] = h;
  return b;
}

inline NonzeroCertificate sphere_bundle_lower_bound(const SphereBundleTowerSpec& s, const std::vector<int>& partition) {
  if (s.r < 2) throw ArgumentError("sphere-bundle bound needs r >= 2");
  if (static_cast<int>(partition.size()) != s.r - 1)
    throw ArgumentError("partition needs r-1 = " + std::to_string(s.r - 1) + " entries");
  int total = 0;
  for (int b : partition) {
    if (b < 0) throw ArgumentError("partition entries must be nonnegative");
    total += b;
  }
  const int h = tangent_euler_height(s);
  if (total != h)
    throw ArgumentError("partition sums to " + std::to_string(total) + " but the Euler height is " +
                        std::to_string(h));
  const auto diag = diagonal_sphere_bundle(s);
  const auto& p = diag.source();
  const GradedElement e = presentations::tangent_euler_class(s, p);
  std::vector<GradedElement> factors;
  for (int i = 1; i < s.r; ++i) {
    const auto ui = p.generator(presentations::tower_u_id(i));
    const auto f = s.odd_rank() ? e - ui : ui - e;
    for (int k = 0; k <= partition[static_cast<std::size_t>(i - 1)]; ++k) factors.push_back(f);
  }
  auto c = certify_product(diag, std::move(factors), "sphere-bundle");
  if (c.bound != h + s.r - 1) throw ValidationError("sphere-bundle certificate has the wrong length");
  return c;
}

inline NonzeroCertificate sphere_bundle_lower_bound(const SphereBundleTowerSpec& s) {
  return sphere_bundle_lower_bound(s, default_partition(tangent_euler_height(s), s.r));
}

struct CupLengthResult {
  int length = 0;
  std::optional<NonzeroCertificate> certificate;
};

inline constexpr int kMaxCupLengthBudget = 12;

/// Longest nonzero product of (not necessarily distinct) supplied kernel
/// elements, up to the budget. Products above the ring's top degree are
/// skipped without multiplying.
inline CupLengthResult cup_length_kernel(const DiagonalMap& diag, const std::vector<GradedElement>& generators,
                                         int budget, const std::string& tag = "zero-divisor-cup-length") {
  const auto& p = diag.source();
  std::vector<int> degrees;
  for (const auto& g : generators) {
    if (!diag.in_kernel(g))
      throw ArgumentError("element " + gcring::describe(g, p) + " is not in the kernel of the diagonal");
    if (!p.is_homogeneous(g) || g.is_zero()) throw ArgumentError("kernel elements must be nonzero and homogeneous");
    degrees.push_back(p.degree_of(g).value_or(0));
  }
  budget = std::clamp(budget, 0, kMaxCupLengthBudget);
  CupLengthResult best;
  if (generators.empty() || budget == 0) return best;
  const int top = gcring::top_degree(p);
  const int min_degree = std::max(1, *std::min_element(degrees.begin(), degrees.end()));

  std::vector<int> chosen;
  std::function<void(std::size_t, const GradedElement&, int)> dfs = [&](std::size_t from, const GradedElement& acc,
                                                                       int deg) {
    const int len = static_cast<int>(chosen.size());
    if (len > best.length) {
      best.length = len;
      NonzeroCertificate c;
      for (int i : chosen) c.factors.push_back(generators[static_cast<std::size_t>(i)]);
      c.normal_form = acc;
      c.witness_monomial = acc.terms().begin()->first;
      c.coefficient = acc.terms().begin()->second;
      c.bound = len;
      c.tag = tag;
      best.certificate = std::move(c);
    }
    if (len == budget || len + (top - deg) / min_degree <= best.length) return;
    for (std::size_t i = from; i < generators.size(); ++i) {
      const int next = deg + degrees[i];
      if (next > top) continue;
      auto prod = gcring::multiply(acc, generators[i], p);
      if (prod.is_zero()) continue;
      chosen.push_back(static_cast<int>(i));
      dfs(i, prod, next);
      chosen.pop_back();
      if (best.length == budget) return;
    }
  };
  dfs(0, GradedElement::one(), 0);
  return best;
}

}  // namespace seqtc::bounds
