#pragma once

// Finitely presented graded-commutative algebras over Q.
//
// A presentation is a list of generators with positive degrees and a set of
// rewrite rules lhs -> rhs, where lhs is a product of generators written in a
// fixed order and rhs is a linear combination of strictly smaller monomials.
// Monomials are stored with their factors sorted by generator index; the
// Koszul sign picked up while sorting is folded into the coefficient.
// Odd-degree generators square to zero implicitly.
//
// Monomial order: lexicographic on exponent vectors with the highest
// generator index most significant. Builders choose generator indices so that
// every shipped rule decreases in this order, which is checked on build.

#include "seqtc/errors.hpp"
#include "seqtc/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace seqtc::gcring {

using seqtc::Rational;

struct Generator {
  std::string id;
  int degree = 1;
};

/// Sorted generator indices. Repeats are only meaningful for even degrees.
using Monomial = std::vector<int>;

/// A monomial together with the sign produced by bringing a factor sequence
/// into sorted order. sign == 0 means the product vanishes (odd square).
struct SignedMonomial {
  Monomial factors;
  int sign = 1;
};

class GradedElement {
 public:
  using TermMap = std::map<Monomial, Rational>;

  GradedElement() = default;

  static GradedElement one() { return monomial({}, Rational(1)); }

  static GradedElement monomial(Monomial m, Rational coeff = Rational(1)) {
    GradedElement e;
    e.add_term(m, coeff);
    return e;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  GradedElement& operator+=(const GradedElement& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  GradedElement& operator-=(const GradedElement& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  GradedElement& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
  friend GradedElement operator-(GradedElement a, const GradedElement& b) { return a -= b; }
  friend GradedElement operator-(GradedElement a) { return a *= Rational(-1); }
  friend GradedElement operator*(GradedElement a, const Rational& s) { return a *= s; }
  friend GradedElement operator*(const Rational& s, GradedElement a) { return a *= s; }
  friend bool operator==(const GradedElement&, const GradedElement&) = default;

 private:
  TermMap terms_;
};

struct RewriteRule {
  /// Factors in the order the relation is written; the rule replaces this
  /// ordered product by rhs.
  std::vector<int> lhs;
  GradedElement rhs;
};

enum class Parity { even, odd, mixed };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "mixed";
}

/// True when a < b in the rewrite order.
inline bool monomial_less(const Monomial& a, const Monomial& b) {
  auto ia = a.rbegin();
  auto ib = b.rbegin();
  for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  return ia == a.rend() && ib != b.rend();
}

class RingPresentation;
GradedElement normal_form(const GradedElement& e, const RingPresentation& p);

class RingPresentation {
 public:
  RingPresentation() : cache_(std::make_shared<Cache>()) {}

  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  std::size_t size() const { return generators_.size(); }

  int degree(int g) const { return generators_.at(static_cast<std::size_t>(g)).degree; }
  bool is_odd(int g) const { return degree(g) % 2 != 0; }
  const std::string& id(int g) const { return generators_.at(static_cast<std::size_t>(g)).id; }

  std::optional<int> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(const std::string& id) const {
    auto g = find(id);
    if (!g) throw PresentationMismatch("unknown generator id '" + id + "'");
    return *g;
  }

  Parity parity() const {
    bool any_odd = false, any_even = false;
    for (const auto& g : generators_) (g.degree % 2 ? any_odd : any_even) = true;
    if (any_odd && any_even) return Parity::mixed;
    return any_odd ? Parity::odd : Parity::even;
  }

  int monomial_degree(const Monomial& m) const {
    int d = 0;
    for (int g : m) d += degree(g);
    return d;
  }

  /// Degree of a homogeneous element; nullopt for zero or mixed elements.
  std::optional<int> degree_of(const GradedElement& e) const {
    std::optional<int> d;
    for (const auto& [m, c] : e.terms()) {
      const int md = monomial_degree(m);
      if (d && *d != md) return std::nullopt;
      d = md;
    }
    return d;
  }

  bool is_homogeneous(const GradedElement& e) const {
    return e.is_zero() || degree_of(e).has_value();
  }

  /// Sorts a factor sequence, tracking the Koszul sign.
  SignedMonomial canonicalize(std::span<const int> seq) const {
    SignedMonomial out{Monomial(seq.begin(), seq.end()), 1};
    for (int g : out.factors) check_index(g);
    // insertion sort; each swap of two odd factors flips the sign
    auto& f = out.factors;
    for (std::size_t i = 1; i < f.size(); ++i) {
      for (std::size_t j = i; j > 0 && f[j - 1] > f[j]; --j) {
        if (is_odd(f[j - 1]) && is_odd(f[j])) out.sign = -out.sign;
        std::swap(f[j - 1], f[j]);
      }
    }
    for (std::size_t i = 1; i < f.size(); ++i) {
      if (f[i] == f[i - 1] && is_odd(f[i])) {
        out.sign = 0;
        break;
      }
    }
    return out;
  }

  GradedElement generator(int g) const {
    check_index(g);
    return GradedElement::monomial({g});
  }
  GradedElement generator(const std::string& id) const { return generator(index_of(id)); }

  /// Product of generators given by id, in the order listed.
  GradedElement product_of_ids(const std::vector<std::string>& ids,
                               const Rational& coeff = Rational(1)) const {
    std::vector<int> seq;
    seq.reserve(ids.size());
    for (const auto& id : ids) seq.push_back(index_of(id));
    auto sm = canonicalize(seq);
    if (sm.sign == 0) return {};
    return GradedElement::monomial(std::move(sm.factors), coeff * sm.sign);
  }

  void check_index(int g) const {
    if (g < 0 || static_cast<std::size_t>(g) >= generators_.size())
      throw PresentationMismatch("generator index " + std::to_string(g) +
                                 " outside presentation with " +
                                 std::to_string(generators_.size()) + " generators");
  }

  /// Rules whose largest lhs generator is g.
  const std::vector<int>& rules_topped_by(int g) const {
    return rules_by_top_.at(static_cast<std::size_t>(g));
  }
  const Monomial& sorted_lhs(int rule) const {
    return sorted_lhs_.at(static_cast<std::size_t>(rule));
  }

 private:
  friend class PresentationBuilder;
  friend GradedElement normal_form(const GradedElement&, const RingPresentation&);

  struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept {
      std::size_t h = 0xcbf29ce484222325ull;
      for (int g : m) h = (h ^ static_cast<std::size_t>(g)) * 0x100000001b3ull;
      return h;
    }
  };
  struct Cache {
    std::mutex mutex;
    std::unordered_map<Monomial, GradedElement, MonomialHash> reduced;
  };

  std::vector<Generator> generators_;
  std::vector<RewriteRule> rules_;
  std::vector<Monomial> sorted_lhs_;
  std::vector<std::vector<int>> rules_by_top_;
  std::map<std::string, int> index_;
  // Memo of monomial normal forms. Shared between copies; a pure function of
  // the immutable presentation.
  std::shared_ptr<Cache> cache_;
};

class PresentationBuilder {
 public:
  int add_generator(std::string id, int degree) {
    if (degree < 1) throw ArgumentError("generator '" + id + "' must have degree >= 1");
    if (index_.count(id)) throw ArgumentError("duplicate generator id '" + id + "'");
    const int g = static_cast<int>(generators_.size());
    index_.emplace(id, g);
    generators_.push_back({std::move(id), degree});
    return g;
  }

  int index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw PresentationMismatch("unknown generator id '" + id + "'");
    return it->second;
  }

  int degree(int g) const { return generators_.at(static_cast<std::size_t>(g)).degree; }
  std::size_t size() const { return generators_.size(); }

  /// rhs terms are given as ordered factor sequences; they are canonicalized
  /// when the presentation is built.
  void add_rule(std::vector<int> lhs,
                std::vector<std::pair<Rational, std::vector<int>>> rhs) {
    if (lhs.size() < 2) throw ArgumentError("rule lhs must have at least two factors");
    rules_.push_back({std::move(lhs), std::move(rhs)});
  }

  RingPresentation build() const {
    RingPresentation p;
    p.generators_ = generators_;
    p.index_ = index_;
    p.rules_by_top_.assign(generators_.size(), {});
    for (const auto& raw : rules_) {
      RewriteRule rule;
      rule.lhs = raw.lhs;
      const SignedMonomial lhs = p.canonicalize(raw.lhs);
      if (lhs.sign == 0)
        throw ValidationError("rule lhs is an odd square; these vanish implicitly");
      const int lhs_degree = p.monomial_degree(lhs.factors);
      for (const auto& [coeff, seq] : raw.rhs) {
        const SignedMonomial t = p.canonicalize(seq);
        if (t.sign == 0) continue;
        if (p.monomial_degree(t.factors) != lhs_degree)
          throw ValidationError("rule rhs degree differs from lhs degree");
        rule.rhs.add_term(t.factors, coeff * t.sign);
      }
      for (const auto& [m, c] : rule.rhs.terms()) {
        if (!monomial_less(m, lhs.factors))
          throw ValidationError("rule rhs monomial is not smaller than lhs in the rewrite order");
      }
      const int idx = static_cast<int>(p.rules_.size());
      p.rules_by_top_[static_cast<std::size_t>(lhs.factors.back())].push_back(idx);
      p.sorted_lhs_.push_back(lhs.factors);
      p.rules_.push_back(std::move(rule));
    }
    return p;
  }

 private:
  struct RawRule {
    std::vector<int> lhs;
    std::vector<std::pair<Rational, std::vector<int>>> rhs;
  };
  std::vector<Generator> generators_;
  std::map<std::string, int> index_;
  std::vector<RawRule> rules_;
};

namespace detail {

/// Sign of the permutation sorting seq, counting only pairs of distinct odd
/// factors. Used where seq is known to be a rearrangement of a monomial.
inline int inversion_sign(std::span<const int> seq, const RingPresentation& p) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!p.is_odd(seq[i])) continue;
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[j] < seq[i] && p.is_odd(seq[j])) sign = -sign;
    }
  }
  return sign;
}

/// m = sign * lhs * rest with lhs in rule order; returns rhs * rest * sign
/// without further reduction.
inline GradedElement apply_rule_once(const Monomial& m, const Monomial& sorted_lhs,
                                     const RewriteRule& rule, const RingPresentation& p) {
  Monomial rest;
  std::set_difference(m.begin(), m.end(), sorted_lhs.begin(), sorted_lhs.end(),
                      std::back_inserter(rest));
  std::vector<int> seq = rule.lhs;
  seq.insert(seq.end(), rest.begin(), rest.end());
  const int eps = inversion_sign(seq, p);
  GradedElement out;
  std::vector<int> buf;
  for (const auto& [mono, c] : rule.rhs.terms()) {
    buf = mono;
    buf.insert(buf.end(), rest.begin(), rest.end());
    SignedMonomial t = p.canonicalize(buf);
    if (t.sign == 0) continue;
    out.add_term(t.factors, c * (eps * t.sign));
  }
  return out;
}

/// First rule whose sorted lhs is contained in m, or -1.
inline int find_applicable_rule(const Monomial& m, const RingPresentation& p) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i > 0 && m[i] == m[i - 1]) continue;
    for (int r : p.rules_topped_by(m[i])) {
      const Monomial& lhs = p.sorted_lhs(r);
      if (std::includes(m.begin(), m.end(), lhs.begin(), lhs.end())) return r;
    }
  }
  return -1;
}

}  // namespace detail

/// Normal form of an element: only admissible monomials remain.
/// Throws PresentationMismatch when e uses generators P does not have.
inline GradedElement normal_form(const GradedElement& e, const RingPresentation& p) {
  // Reduction of a single sorted, odd-square-free monomial. Recursion depth is
  // bounded because each step strictly decreases in the monomial order.
  struct Reducer {
    const RingPresentation& p;
    std::unordered_map<Monomial, GradedElement, RingPresentation::MonomialHash> local;

    GradedElement reduce(const Monomial& m) {
      if (auto it = local.find(m); it != local.end()) return it->second;
      {
        std::lock_guard lock(p.cache_->mutex);
        if (auto it = p.cache_->reduced.find(m); it != p.cache_->reduced.end()) {
          local.emplace(m, it->second);
          return it->second;
        }
      }
      GradedElement out;
      const int r = detail::find_applicable_rule(m, p);
      if (r < 0) {
        out = GradedElement::monomial(m);
      } else {
        const GradedElement step =
            detail::apply_rule_once(m, p.sorted_lhs(r), p.rules()[static_cast<std::size_t>(r)], p);
        for (const auto& [mono, c] : step.terms()) out += reduce(mono) * c;
      }
      local.emplace(m, out);
      std::lock_guard lock(p.cache_->mutex);
      p.cache_->reduced.emplace(m, out);
      return out;
    }
  };

  Reducer red{p, {}};
  GradedElement out;
  for (const auto& [m, c] : e.terms()) {
    SignedMonomial sm = p.canonicalize(m);
    if (sm.sign == 0) continue;
    out += red.reduce(sm.factors) * (c * sm.sign);
  }
  return out;
}

/// Normalized product a*b.
inline GradedElement multiply(const GradedElement& a, const GradedElement& b,
                              const RingPresentation& p) {
  GradedElement raw;
  std::vector<int> buf;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      buf = ma;
      buf.insert(buf.end(), mb.begin(), mb.end());
      SignedMonomial t = p.canonicalize(buf);
      if (t.sign == 0) continue;
      raw.add_term(t.factors, ca * cb * t.sign);
    }
  }
  return normal_form(raw, p);
}

inline GradedElement power(const GradedElement& a, int k, const RingPresentation& p) {
  GradedElement out = GradedElement::one();
  for (int i = 0; i < k; ++i) {
    out = multiply(out, a, p);
    if (out.is_zero()) break;
  }
  return out;
}

inline GradedElement product(std::span<const GradedElement> factors, const RingPresentation& p) {
  GradedElement out = GradedElement::one();
  for (const auto& f : factors) {
    out = multiply(out, f, p);
    if (out.is_zero()) break;
  }
  return out;
}

struct CriticalPairFailure {
  Monomial overlap;
  int first_rule = -1;   // index into rules(); -1 for an implicit odd square
  int second_rule = -1;
  GradedElement first_result;
  GradedElement second_result;
};

struct ConfluenceReport {
  std::vector<CriticalPairFailure> failures;
  std::size_t pairs_checked = 0;
  bool ok() const { return failures.empty(); }
};

/// Resolves every critical pair: for two rules (explicit or implicit odd
/// squares) whose left-hand sides share a generator, the overlap monomial is
/// rewritten once by each rule and both results are fully normalized.
inline ConfluenceReport check_confluence(const RingPresentation& p) {
  struct AnyRule {
    int index;  // -1 marks an implicit odd square
    Monomial sorted;
    RewriteRule rule;
  };
  std::vector<AnyRule> all;
  for (std::size_t i = 0; i < p.rules().size(); ++i)
    all.push_back({static_cast<int>(i), p.sorted_lhs(static_cast<int>(i)), p.rules()[i]});
  std::vector<bool> in_lhs(p.size(), false);
  for (const auto& r : p.rules())
    for (int g : r.lhs) in_lhs[static_cast<std::size_t>(g)] = true;
  for (std::size_t g = 0; g < p.size(); ++g) {
    const int gi = static_cast<int>(g);
    if (p.is_odd(gi) && in_lhs[g]) all.push_back({-1, {gi, gi}, RewriteRule{{gi, gi}, {}}});
  }

  ConfluenceReport report;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const Monomial& a = all[i].sorted;
      const Monomial& b = all[j].sorted;
      Monomial shared;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      Monomial overlap;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(overlap));
      ++report.pairs_checked;
      GradedElement ra = normal_form(detail::apply_rule_once(overlap, a, all[i].rule, p), p);
      GradedElement rb = normal_form(detail::apply_rule_once(overlap, b, all[j].rule, p), p);
      if (ra != rb)
        report.failures.push_back({overlap, all[i].index, all[j].index, std::move(ra), std::move(rb)});
    }
  }
  return report;
}

inline std::string describe(const Monomial& m, const RingPresentation& p) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += "*";
    s += p.id(m[i]);
  }
  return s;
}

inline std::string describe(const GradedElement& e, const RingPresentation& p) {
  if (e.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : e.terms()) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    first = false;
    if (m.empty()) {
      s += seqtc::to_string(mag);
    } else {
      if (mag != 1) s += seqtc::to_string(mag) + "*";
      s += describe(m, p);
    }
  }
  return s;
}

inline void require_confluent(const RingPresentation& p) {
  const auto report = check_confluence(p);
  if (!report.ok()) {
    const auto& f = report.failures.front();
    throw ValidationError("presentation is not confluent: overlap " + describe(f.overlap, p) +
                          " resolves to " + describe(f.first_result, p) + " and " +
                          describe(f.second_result, p));
  }
}

/// Number of admissible monomials in each degree 0..max_degree.
inline std::vector<long long> poincare_series(const RingPresentation& p, int max_degree) {
  if (max_degree < 0) throw ArgumentError("max_degree must be >= 0");
  require_confluent(p);
  std::vector<long long> counts(static_cast<std::size_t>(max_degree) + 1, 0);
  Monomial current;
  const int n = static_cast<int>(p.size());

  auto admissible_after_push = [&](int g) {
    for (int r : p.rules_topped_by(g)) {
      const Monomial& lhs = p.sorted_lhs(r);
      if (std::includes(current.begin(), current.end(), lhs.begin(), lhs.end())) return false;
    }
    return true;
  };
  // Generators are appended in nondecreasing index order, so current stays sorted.
  auto dfs = [&](auto&& self, int start, int degree) -> void {
    ++counts[static_cast<std::size_t>(degree)];
    for (int g = start; g < n; ++g) {
      const int nd = degree + p.degree(g);
      if (nd > max_degree) continue;
      current.push_back(g);
      if (admissible_after_push(g)) self(self, p.is_odd(g) ? g + 1 : g, nd);
      current.pop_back();
    }
  };
  dfs(dfs, 0, 0);
  return counts;
}

/// Largest degree carrying an admissible monomial. Assumes a finite
/// dimensional ring: once a window of max-generator-degree consecutive
/// degrees is empty, every higher degree is empty too, since a monomial can
/// be shortened one factor at a time and submonomials of admissible
/// monomials are admissible.
inline int top_degree(const RingPresentation& p, int limit = 4096) {
  int max_gen = 1;
  for (const auto& g : p.generators()) max_gen = std::max(max_gen, g.degree);
  for (int cap = 16;; cap *= 2) {
    const auto series = poincare_series(p, std::min(cap, limit));
    int top = 0;
    for (std::size_t k = 0; k < series.size(); ++k)
      if (series[k] != 0) top = static_cast<int>(k);
    if (top + max_gen < static_cast<int>(series.size())) return top;
    if (cap >= limit) throw CapacityError("ring has nonzero classes beyond degree " + std::to_string(limit));
  }
}

}  // namespace seqtc::gcring
