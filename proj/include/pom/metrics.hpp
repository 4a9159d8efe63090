#pragma once

// Fidelity and selection metrics: total variation, Shannon entropy (nats),
// relative entropy error, expected recall and top-k selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "pom/error.hpp"

namespace pom {

namespace detail {

inline void require_normalized(const std::vector<double>& p, const char* who) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !std::isfinite(p[i]))
      throw PomError(PomErrc::not_normalized,
                     std::string(who) + ": entries must be finite and >= 0", i);
    s += p[i];
  }
  // 1e-6 tolerance so Monte Carlo histograms pass
  if (std::abs(s - 1.0) > 1e-6)
    throw PomError(PomErrc::not_normalized,
                   std::string(who) + ": entries sum to " + std::to_string(s));
}

}  // namespace detail

// 1/2 sum |p - q|, in [0, 1]
inline double tv_distance(const std::vector<double>& p,
                          const std::vector<double>& q) {
  if (p.size() != q.size())
    throw PomError(PomErrc::length_mismatch, "tv_distance length mismatch");
  detail::require_normalized(p, "tv_distance");
  detail::require_normalized(q, "tv_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

// sum p ln(1/p) in nats, 0 ln(1/0) := 0
inline double shannon_entropy(const std::vector<double>& p) {
  detail::require_normalized(p, "shannon_entropy");
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return std::max(h, 0.0);
}

// sqrt(mean(((H_est - H_true)/H_true)^2))
inline double entropy_rmsre(const std::vector<double>& estimates,
                            const std::vector<double>& truths) {
  if (estimates.size() != truths.size())
    throw PomError(PomErrc::length_mismatch, "entropy_rmsre length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] == 0.0)
      throw PomError(PomErrc::zero_truth, "true entropy is zero", i);
    const double r = (estimates[i] - truths[i]) / truths[i];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(truths.size()));
}

inline double expected_recall(const std::vector<std::size_t>& selection,
                              const std::vector<double>& ground_truth_pom) {
  std::unordered_set<std::size_t> seen;
  double s = 0.0;
  for (std::size_t idx : selection) {
    if (idx >= ground_truth_pom.size())
      throw PomError(PomErrc::index_out_of_range, "selection index out of range",
                     idx);
    if (!seen.insert(idx).second)
      throw PomError(PomErrc::duplicate_index, "selection repeats an index", idx);
    s += ground_truth_pom[idx];
  }
  return s;
}

// k indices of the largest entries, ties broken by lowest index
inline std::vector<std::size_t> top_k(const std::vector<double>& p,
                                      std::size_t k) {
  if (k > p.size())
    throw PomError(PomErrc::k_out_of_range,
                   "k = " + std::to_string(k) + " exceeds |X| = " +
                       std::to_string(p.size()));
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (p[a] != p[b]) return p[a] > p[b];
    return a < b;
  });
  order.resize(k);
  return order;
}

struct RecallCurve {
  std::string estimator;
  std::vector<std::size_t> k_values;  // ascending
  std::vector<double> recalls;        // nondecreasing, 1 at k = |X|

  double auc() const {
    if (recalls.empty()) return 0.0;
    double s = 0.0;
    for (double r : recalls) s += r;
    return s / static_cast<double>(recalls.size());
  }
};

}  // namespace pom
