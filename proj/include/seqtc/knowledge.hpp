#pragma once

// Closed-form complexity values with provenance. Lower bounds that can be
// certified at desk scale are recomputed; upper bounds resting on external
// results are quoted.

#include "seqtc/bounds.hpp"
#include "seqtc/errors.hpp"
#include "seqtc/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace seqtc::knowledge {

enum class ProvenanceKind { certificate, paper_constant };

inline std::string to_string(ProvenanceKind k) {
  return k == ProvenanceKind::certificate ? "certificate" : "paper-constant";
}

struct Provenance {
  std::string tag;
  ProvenanceKind kind = ProvenanceKind::paper_constant;
  std::string quantity;  // which field it backs: lower, upper, exact, ...
};

struct ComplexityRecord {
  std::string family;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<long long> lower;
  std::optional<long long> upper;
  std::optional<long long> exact;
  std::vector<Provenance> provenance;
  nlohmann::json extra = nlohmann::json::object();  // comparison constants, certificates

  /// lower <= exact <= upper where present, and every quoted constant tagged.
  bool consistent() const {
    if (lower && exact && *lower > *exact) return false;
    if (exact && upper && *exact > *upper) return false;
    if (lower && upper && *lower > *upper) return false;
    for (const auto& p : provenance)
      if (p.tag.empty()) return false;
    return !provenance.empty();
  }

  std::vector<std::string> citations() const {
    std::vector<std::string> out;
    for (const auto& p : provenance)
      if (std::find(out.begin(), out.end(), p.tag) == out.end()) out.push_back(p.tag);
    return out;
  }
};

inline nlohmann::json to_json(const ComplexityRecord& r) {
  auto opt = [](const std::optional<long long>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  auto prov = nlohmann::json::array();
  for (const auto& p : r.provenance) prov.push_back({{"tag", p.tag}, {"kind", to_string(p.kind)}, {"quantity", p.quantity}});
  nlohmann::json j{{"family", r.family},      {"parameters", r.parameters}, {"lower", opt(r.lower)},
                   {"upper", opt(r.upper)},    {"exact", opt(r.exact)},      {"provenance", std::move(prov)}};
  for (const auto& [k, v] : r.extra.items()) j[k] = v;
  return j;
}

/// Cells whose witness product is certified on demand.
inline bool fn_desk_scale(const presentations::FadellNeuwirthSpec& s) {
  return s.m + s.n <= 6 && s.r <= 4 && s.lower_bound() <= 12;
}

inline ComplexityRecord value_fadell_neuwirth(int d, int m, int n, int r, bool certify = true) {
  const presentations::FadellNeuwirthSpec s{d, m, n, r};
  s.validate();
  ComplexityRecord rec;
  rec.family = "fadell-neuwirth";
  rec.parameters = {{"d", d}, {"m", m}, {"n", n}, {"r", r}};
  const long long value = s.lower_bound();
  rec.exact = value;
  rec.upper = value;
  rec.provenance.push_back({"fn-fibration-upper", ProvenanceKind::paper_constant, "upper"});
  if (certify && fn_desk_scale(s)) {
    const auto diag = bounds::diagonal_fn(s);
    const auto cert = bounds::verify_witness_fn(s, diag);
    rec.lower = cert.bound;
    rec.provenance.push_back({"fn-fibration", ProvenanceKind::certificate, "lower"});
    rec.extra["certificate"] = bounds::certificate_to_json(cert, diag.source());
  } else {
    rec.lower = value;
    rec.provenance.push_back({"fn-fibration", ProvenanceKind::paper_constant, "lower"});
  }
  rec.provenance.push_back({"fn-fibration", ProvenanceKind::paper_constant, "exact"});
  return rec;
}

inline long long so3_upper(int r) {
  const long long linear = 2LL * r + 1;
  if (r - 1 >= 62) return linear;
  return std::min((1LL << (r - 1)) - 1, linear);
}

inline ComplexityRecord value_so3_bundle(int r) {
  if (r < 2) throw ArgumentError("r must be >= 2");
  ComplexityRecord rec;
  rec.family = "so3-principal-bundle";
  rec.parameters = {{"r", r}};
  rec.upper = so3_upper(r);
  rec.lower = r - 1;
  if (*rec.lower == *rec.upper) rec.exact = *rec.upper;
  rec.extra["tc_comparison"] = 3LL * (r - 1);
  rec.provenance.push_back({"so3-bundle-upper", ProvenanceKind::paper_constant, "upper"});
  rec.provenance.push_back({"rationally-acyclic-lower", ProvenanceKind::paper_constant, "lower"});
  rec.provenance.push_back({"so3-bundle-tc", ProvenanceKind::paper_constant, "tc_comparison"});
  return rec;
}

enum class SphereAction { antipodal, general };

inline ComplexityRecord value_product_spheres(const std::vector<int>& dims, int r, SphereAction action,
                                              const std::vector<int>& p = {}) {
  if (dims.empty()) throw ArgumentError("need at least one sphere");
  if (r < 2) throw ArgumentError("r must be >= 2");
  for (int d : dims)
    if (d < 1) throw ArgumentError("sphere dimensions must be >= 1");
  const long long m = static_cast<long long>(dims.size());
  const long long even = std::count_if(dims.begin(), dims.end(), [](int d) { return d % 2 == 0; });
  const long long low = m * (r - 1) + even;
  ComplexityRecord rec;
  rec.parameters = {{"dims", dims}, {"r", r}};
  if (action == SphereAction::antipodal) {
    rec.family = "spheres-antipodal";
    rec.lower = rec.upper = rec.exact = low;
    rec.provenance.push_back({"spheres-antipodal", ProvenanceKind::paper_constant, "exact"});
    return rec;
  }
  if (p.size() != dims.size()) throw ArgumentError("need one fixed-point parameter p_i per sphere");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < 2 || p[i] > dims[i] + 1)
      throw ArgumentError("p_i must lie in [2, n_i + 1] for a general involution");
  rec.family = "spheres-general-involution";
  rec.parameters["p"] = p;
  rec.lower = low;
  rec.upper = m * r;
  if (even == m) rec.exact = m * r;
  rec.provenance.push_back({"spheres-general-involution", ProvenanceKind::paper_constant, "lower"});
  rec.provenance.push_back({"spheres-general-involution", ProvenanceKind::paper_constant, "upper"});
  return rec;
}

/// (c + 1)^2 - 1 for associated bundles of a principal bundle whose fiber has
/// equivariant complexity c.
inline long long value_associate_upper(long long dtc_g_r) {
  if (dtc_g_r < 0) throw ArgumentError("complexity must be >= 0");
  return (dtc_g_r + 1) * (dtc_g_r + 1) - 1;
}

inline ComplexityRecord associate_record(long long dtc_g_r) {
  ComplexityRecord rec;
  rec.family = "associated-bundle";
  rec.parameters = {{"dtc_g_r", dtc_g_r}};
  rec.upper = value_associate_upper(dtc_g_r);
  rec.provenance.push_back({"associated-bundle-upper", ProvenanceKind::paper_constant, "upper"});
  return rec;
}

/// (2^(2r-2) - 1)/(r - 1).
inline Rational value_son_threshold(int r) {
  if (r < 2) throw ArgumentError("r must be >= 2");
  if (r > 32) throw ArgumentError("r must be <= 32");
  const BigInt num = (BigInt(1) << (2 * r - 2)) - 1;
  return Rational(num, BigInt(r - 1));
}

inline ComplexityRecord threshold_record(int r) {
  ComplexityRecord rec;
  rec.family = "son-associate-threshold";
  rec.parameters = {{"r", r}};
  rec.extra["threshold"] = seqtc::to_string(value_son_threshold(r));
  rec.extra["strict_for"] = "n > threshold";
  rec.provenance.push_back({"son-threshold", ProvenanceKind::paper_constant, "threshold"});
  return rec;
}

inline ComplexityRecord value_hopf(int r) {
  if (r < 2) throw ArgumentError("r must be >= 2");
  ComplexityRecord rec;
  rec.family = "hopf-bundle";
  rec.parameters = {{"r", r}};
  rec.lower = rec.upper = rec.exact = r - 1;
  rec.provenance.push_back({"principal-bundle-hopf", ProvenanceKind::paper_constant, "exact"});
  rec.extra["demonstration"] = "nav hopf";
  return rec;
}

}  // namespace seqtc::knowledge
