#pragma once

// Finitely supported probability measures on a metric space and the
// Levy-Prokhorov distance between them.

#include "seqtc/errors.hpp"
#include "seqtc/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace seqtc::measures {

inline constexpr double kMergeTolerance = 1e-12;
inline constexpr double kMassTolerance = 1e-12;
inline constexpr std::size_t kMaxLpSupport = 12;
inline constexpr double kDefaultLpPrecision = 1e-6;

template <class P>
using Metric = std::function<double(const P&, const P&)>;

template <class W>
double to_double(const W& w) {
  return static_cast<double>(w);
}

template <class P, class W = double>
struct Atom {
  P point;
  W weight;
};

/// A probability measure with finitely many atoms. Atoms closer than
/// kMergeTolerance are merged and zero weights dropped on construction.
/// Floating weights must sum to 1 within kMassTolerance; exact weights
/// exactly.
template <class P, class W = double>
class FiniteMeasure {
 public:
  using Point = P;
  using Weight = W;
  static constexpr bool exact = !std::is_floating_point_v<W>;

  FiniteMeasure(std::vector<Atom<P, W>> atoms, const Metric<P>& metric) {
    W total(0);
    for (auto& a : atoms) {
      if (a.weight < W(0)) throw ArgumentError("measure weights must be nonnegative");
      if (a.weight == W(0)) continue;
      total += a.weight;
      bool merged = false;
      for (auto& b : atoms_)
        if (metric(a.point, b.point) <= kMergeTolerance) {
          b.weight += a.weight;
          merged = true;
          break;
        }
      if (!merged) atoms_.push_back(std::move(a));
    }
    if constexpr (exact) {
      if (total != W(1)) throw ArgumentError("measure weights must sum to 1");
    } else {
      if (std::abs(total - 1.0) > kMassTolerance)
        throw ArgumentError("measure weights sum to " + std::to_string(total) + ", not 1");
    }
  }

  static FiniteMeasure dirac(P point, const Metric<P>& metric) { return FiniteMeasure({{std::move(point), W(1)}}, metric); }

  const std::vector<Atom<P, W>>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  W total_mass() const {
    W t(0);
    for (const auto& a : atoms_) t += a.weight;
    return t;
  }

 private:
  std::vector<Atom<P, W>> atoms_;
};

namespace detail {

/// Subset sums of weights indexed by bitmask.
inline std::vector<double> subset_sums(const std::vector<double>& w) {
  std::vector<double> out(std::size_t{1} << w.size(), 0.0);
  for (std::size_t mask = 1; mask < out.size(); ++mask) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
    out[mask] = out[mask & (mask - 1)] + w[low];
  }
  return out;
}

/// mu(A) <= nu(A^eps) + eps for every A within the support of mu.
/// dist[i][j] is the distance from mu atom i to nu atom j. When closed is set,
/// neighbourhoods use <= instead of <.
inline bool one_sided_feasible(const std::vector<std::vector<double>>& dist, const std::vector<double>& mu_sums,
                               const std::vector<double>& nu_sums, double eps, bool closed) {
  const std::size_t n = dist.size();
  const std::size_t k = n == 0 ? 0 : dist[0].size();
  std::vector<std::uint32_t> near(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (closed ? dist[i][j] <= eps : dist[i][j] < eps) near[i] |= std::uint32_t{1} << j;
  std::vector<std::uint32_t> hood(std::size_t{1} << n, 0);
  for (std::size_t mask = 1; mask < hood.size(); ++mask) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
    hood[mask] = hood[mask & (mask - 1)] | near[low];
    if (mu_sums[mask] > nu_sums[hood[mask]] + eps + kMassTolerance) return false;
  }
  return true;
}

}  // namespace detail

/// Levy-Prokhorov distance by bisection on eps in [0, 1], testing all
/// subsets of each support. Returns 0 exactly when the measures agree.
template <class P, class W>
double lp_distance(const FiniteMeasure<P, W>& mu, const FiniteMeasure<P, W>& nu, const Metric<P>& metric,
                   double precision = kDefaultLpPrecision) {
  if (mu.support_size() > kMaxLpSupport || nu.support_size() > kMaxLpSupport)
    throw CapacityError("Levy-Prokhorov distance supports at most " + std::to_string(kMaxLpSupport) +
                        " atoms per measure");
  if (!(precision > 0)) throw ArgumentError("precision must be positive");
  std::vector<double> wm, wn;
  for (const auto& a : mu.atoms()) wm.push_back(to_double(a.weight));
  for (const auto& a : nu.atoms()) wn.push_back(to_double(a.weight));
  std::vector<std::vector<double>> d(wm.size(), std::vector<double>(wn.size()));
  std::vector<std::vector<double>> dt(wn.size(), std::vector<double>(wm.size()));
  for (std::size_t i = 0; i < wm.size(); ++i)
    for (std::size_t j = 0; j < wn.size(); ++j) dt[j][i] = d[i][j] = metric(mu.atoms()[i].point, nu.atoms()[j].point);
  const auto sm = detail::subset_sums(wm), sn = detail::subset_sums(wn);
  auto feasible = [&](double eps, bool closed) {
    return detail::one_sided_feasible(d, sm, sn, eps, closed) && detail::one_sided_feasible(dt, sn, sm, eps, closed);
  };
  if (feasible(0.0, true)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid, false) ? hi : lo) = mid;
  }
  return hi;
}

template <class P, class Q, class W>
FiniteMeasure<Q, W> pushforward(const std::function<Q(const P&)>& f, const FiniteMeasure<P, W>& mu,
                                const Metric<Q>& metric) {
  std::vector<Atom<Q, W>> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({f(a.point), a.weight});
  return FiniteMeasure<Q, W>(std::move(atoms), metric);
}

/// Max of the two coordinate distances.
template <class P, class Q>
Metric<std::pair<P, Q>> product_metric(Metric<P> dp, Metric<Q> dq) {
  return [dp = std::move(dp), dq = std::move(dq)](const std::pair<P, Q>& a, const std::pair<P, Q>& b) {
    return std::max(dp(a.first, b.first), dq(a.second, b.second));
  };
}

template <class P, class Q, class W>
FiniteMeasure<std::pair<P, Q>, W> product_measure(const FiniteMeasure<P, W>& mu, const FiniteMeasure<Q, W>& nu,
                                                  const Metric<std::pair<P, Q>>& metric) {
  std::vector<Atom<std::pair<P, Q>, W>> atoms;
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) atoms.push_back({{a.point, b.point}, a.weight * b.weight});
  return FiniteMeasure<std::pair<P, Q>, W>(std::move(atoms), metric);
}

template <class W>
nlohmann::json weight_to_json(const W& w) {
  if constexpr (std::is_floating_point_v<W>)
    return w;
  else
    return seqtc::to_string(w);
}

template <class W>
W weight_from_json(const nlohmann::json& j) {
  if constexpr (std::is_floating_point_v<W>) {
    if (j.is_string()) return static_cast<W>(parse_rational(j.get<std::string>()));
    return j.get<W>();
  } else {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return W(j.get<long long>());
    throw ArgumentError("exact weights must be integers or \"p/q\" strings");
  }
}

/// [{point, weight}] with the caller's point encoding.
template <class P, class W>
nlohmann::json to_json(const FiniteMeasure<P, W>& mu, const std::function<nlohmann::json(const P&)>& encode) {
  auto out = nlohmann::json::array();
  for (const auto& a : mu.atoms()) out.push_back({{"point", encode(a.point)}, {"weight", weight_to_json(a.weight)}});
  return out;
}

template <class P, class W = double>
FiniteMeasure<P, W> from_json(const nlohmann::json& j, const std::function<P(const nlohmann::json&)>& decode,
                              const Metric<P>& metric) {
  if (!j.is_array()) throw ArgumentError("measure must be a JSON array of {point, weight}");
  std::vector<Atom<P, W>> atoms;
  try {
    for (const auto& a : j) atoms.push_back({decode(a.at("point")), weight_from_json<W>(a.at("weight"))});
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed measure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ArgumentError(std::string("malformed weight: ") + e.what());
  }
  return FiniteMeasure<P, W>(std::move(atoms), metric);
}

/// Euclidean metric on coordinate vectors.
inline double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ArgumentError("points have different dimensions");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace seqtc::measures
