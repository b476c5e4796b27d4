#pragma once

// JSON documents for presentations and elements, and a parser for element
// expressions such as "2*w_1_3*w_2_3 - (w_1_2 + w_1_3)**2".

#include "seqtc/gcring.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <string>
#include <string_view>

namespace seqtc::gcring {

inline constexpr int kPresentationFormatVersion = 1;

inline nlohmann::json monomial_to_json(const Monomial& m, const RingPresentation& p) {
  auto out = nlohmann::json::array();
  for (int g : m) out.push_back(p.id(g));
  return out;
}

/// [{coeff:"p/q", monomial:[ids]}], in the element's deterministic term order.
inline nlohmann::json element_to_json(const GradedElement& e, const RingPresentation& p) {
  auto out = nlohmann::json::array();
  for (const auto& [m, c] : e.terms())
    out.push_back({{"coeff", seqtc::to_string(c)}, {"monomial", monomial_to_json(m, p)}});
  return out;
}

inline GradedElement element_from_json(const nlohmann::json& j, const RingPresentation& p) {
  if (!j.is_array()) throw ArgumentError("element must be a JSON array of terms");
  GradedElement out;
  for (const auto& term : j) {
    const Rational c = parse_rational(term.at("coeff").get<std::string>());
    out += p.product_of_ids(term.at("monomial").get<std::vector<std::string>>(), c);
  }
  return out;
}

inline nlohmann::json presentation_to_json(const RingPresentation& p) {
  nlohmann::json doc;
  doc["version"] = kPresentationFormatVersion;
  auto gens = nlohmann::json::array();
  for (const auto& g : p.generators()) gens.push_back({{"id", g.id}, {"degree", g.degree}});
  doc["generators"] = std::move(gens);
  auto rules = nlohmann::json::array();
  for (const auto& r : p.rules()) {
    auto lhs = nlohmann::json::array();
    for (int g : r.lhs) lhs.push_back(p.id(g));
    rules.push_back({{"lhs", std::move(lhs)}, {"rhs", element_to_json(r.rhs, p)}});
  }
  doc["rules"] = std::move(rules);
  doc["parity"] = to_string(p.parity());
  return doc;
}

inline RingPresentation presentation_from_json(const nlohmann::json& doc) {
  try {
    const int version = doc.value("version", kPresentationFormatVersion);
    if (version != kPresentationFormatVersion)
      throw ArgumentError("unsupported presentation version " + std::to_string(version));
    PresentationBuilder b;
    for (const auto& g : doc.at("generators"))
      b.add_generator(g.at("id").get<std::string>(), g.at("degree").get<int>());
    for (const auto& r : doc.at("rules")) {
      std::vector<int> lhs;
      for (const auto& id : r.at("lhs")) lhs.push_back(b.index_of(id.get<std::string>()));
      std::vector<std::pair<Rational, std::vector<int>>> rhs;
      for (const auto& t : r.at("rhs")) {
        std::vector<int> seq;
        for (const auto& id : t.at("monomial")) seq.push_back(b.index_of(id.get<std::string>()));
        rhs.emplace_back(parse_rational(t.at("coeff").get<std::string>()), std::move(seq));
      }
      b.add_rule(std::move(lhs), std::move(rhs));
    }
    return b.build();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed presentation document: ") + e.what());
  }
}

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const RingPresentation& p) : s_(text), p_(p) {}

  GradedElement parse() {
    GradedElement e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  GradedElement expr() {
    skip_ws();
    bool negate = false;
    if (peek('-')) {
      ++pos_;
      negate = true;
    } else if (peek('+')) {
      ++pos_;
    }
    GradedElement acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  GradedElement term() {
    GradedElement acc = powered();
    for (;;) {
      skip_ws();
      if (peek('*') && !(pos_ + 1 < s_.size() && s_[pos_ + 1] == '*')) {
        ++pos_;
        acc = multiply(acc, powered(), p_);
      } else {
        return acc;
      }
    }
  }

  GradedElement powered() {
    GradedElement base = atom();
    skip_ws();
    if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') {
      pos_ += 2;
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent after '**'");
      return power(base, std::stoi(std::string(s_.substr(start, pos_ - start))), p_);
    }
    return base;
  }

  GradedElement atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      GradedElement e = expr();
      skip_ws();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
        ++pos_;
      return GradedElement::one() * parse_rational(s_.substr(start, pos_ - start));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_' || s_[pos_] == '^'))
        ++pos_;
      return p_.generator(std::string(s_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ArgumentError("cannot parse element at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  const RingPresentation& p_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses and normalizes an element expression. Generator ids may contain
/// letters, digits, '_' and '^'; '**' is exponentiation.
inline GradedElement parse_element(std::string_view text, const RingPresentation& p) {
  return detail::ExpressionParser(text, p).parse();
}

}  // namespace seqtc::gcring
