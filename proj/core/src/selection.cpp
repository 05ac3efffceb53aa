#include "gensc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gensc/errors.hpp"
#include "gensc/scores.hpp"

namespace gensc {

double LossVector::error_rate() const {
  if (values.empty()) return 0.0;
  std::size_t wrong = 0;
  for (auto v : values) wrong += v;
  return static_cast<double>(wrong) / static_cast<double>(values.size());
}

std::string describe(const SelectionTarget& target) {
  std::ostringstream out;
  if (const auto* c = std::get_if<CoverageAtLeast>(&target)) {
    out << "coverage>=" << c->omega;
  } else {
    out << "risk<=" << std::get<RiskAtMost>(target).lambda;
  }
  return out.str();
}

namespace selection {

namespace {

void require_same_length(std::span<const double> scores, const LossVector& losses) {
  if (scores.size() != losses.size()) {
    throw Error(ErrorCode::kShapeMismatch, "score and loss vectors differ in length (" +
                                               std::to_string(scores.size()) + " vs " +
                                               std::to_string(losses.size()) + ")");
  }
}

// Threshold strictly between `upper` and the next lower score `lower`.
double threshold_between(double upper, double lower) {
  const double mid = lower + (upper - lower) / 2.0;
  return mid < upper ? mid : lower;
}

}  // namespace

LossVector losses(const EvalSet& set) {
  LossVector out;
  out.values.resize(set.rows());
  for (std::size_t i = 0; i < set.rows(); ++i) {
    const int y = set.labels[i];
    const bool correct = y != kShiftedLabel && static_cast<int>(scores::argmax(set.logit_row(i))) == y;
    out.values[i] = correct ? 0 : 1;
  }
  return out;
}

std::vector<bool> select(std::span<const double> scores, double gamma) {
  std::vector<bool> mask(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) mask[i] = scores[i] > gamma;
  return mask;
}

CoverageRisk coverage_risk(std::span<const double> scores, const LossVector& losses, double gamma) {
  require_same_length(scores, losses);
  std::size_t accepted = 0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > gamma) {
      ++accepted;
      wrong += losses.values[i];
    }
  }
  if (scores.empty() || accepted == 0) return {0.0, 0.0};
  return {static_cast<double>(accepted) / static_cast<double>(scores.size()),
          static_cast<double>(wrong) / static_cast<double>(accepted)};
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

RCCurve rc_curve(std::span<const double> scores, const LossVector& losses) {
  require_same_length(scores, losses);
  if (scores.empty()) throw Error(ErrorCode::kInvalidArgument, "RC curve needs at least one sample");
  RCCurve curve;
  curve.order = descending_order(scores);
  const std::size_t n = scores.size();
  curve.coverages.resize(n);
  curve.risks.resize(n);
  std::size_t wrong = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    wrong += losses.values[curve.order[k - 1]];
    curve.coverages[k - 1] = static_cast<double>(k) / static_cast<double>(n);
    curve.risks[k - 1] = static_cast<double>(wrong) / static_cast<double>(k);
  }
  return curve;
}

RCCurve rc_curve_bruteforce(std::span<const double> scores, const LossVector& losses) {
  require_same_length(scores, losses);
  if (scores.empty()) throw Error(ErrorCode::kInvalidArgument, "RC curve needs at least one sample");
  const std::size_t n = scores.size();

  std::vector<double> distinct(scores.begin(), scores.end());
  std::sort(distinct.begin(), distinct.end(), std::greater<>());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  // Thresholds from +inf down to -inf; each admits exactly one more tie group.
  std::vector<double> gammas;
  gammas.push_back(std::numeric_limits<double>::infinity());
  for (std::size_t g = 0; g + 1 < distinct.size(); ++g)
    gammas.push_back(threshold_between(distinct[g], distinct[g + 1]));
  gammas.push_back(-std::numeric_limits<double>::infinity());

  RCCurve curve;
  std::vector<bool> taken(n, false);
  for (double gamma : gammas) {
    const auto mask = select(scores, gamma);
    std::vector<std::size_t> fresh;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i] && !taken[i]) fresh.push_back(i);
    // fresh is already in ascending index order: that is the tie refinement.
    for (auto i : fresh) {
      taken[i] = true;
      curve.order.push_back(i);
    }
  }
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t wrong = 0;
    for (std::size_t j = 0; j < k; ++j) wrong += losses.values[curve.order[j]];
    curve.coverages.push_back(static_cast<double>(k) / static_cast<double>(n));
    curve.risks.push_back(static_cast<double>(wrong) / static_cast<double>(k));
  }
  return curve;
}

double aurc(const RCCurve& curve) {
  if (curve.risks.empty()) throw Error(ErrorCode::kEmptyPrefix, "empty RC curve");
  double sum = 0.0;
  for (double r : curve.risks) sum += r;
  return sum / static_cast<double>(curve.risks.size());
}

double aurc_alpha(const RCCurve& curve, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  if (alpha == 1.0) return aurc(curve);
  const auto n = curve.risks.size();
  // Guard floor() against alpha * n landing a hair below an integer.
  auto m = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) * (1.0 + 1e-12)));
  m = std::min(m, n);
  if (m == 0) throw Error(ErrorCode::kEmptyPrefix, "no prefix has coverage <= alpha");
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) sum += curve.risks[k];
  return sum / static_cast<double>(m);
}

bool is_monotone(const RCCurve& curve) {
  for (std::size_t k = 1; k < curve.risks.size(); ++k)
    if (curve.risks[k] < curve.risks[k - 1]) return false;
  return true;
}

ThresholdReport calibrate_threshold(std::span<const double> scores, const LossVector& losses,
                                    const SelectionTarget& target) {
  require_same_length(scores, losses);
  if (scores.empty()) throw Error(ErrorCode::kInfeasibleTarget, "no calibration samples");
  const std::size_t n = scores.size();
  const auto order = descending_order(scores);

  // A threshold can only cut between tie groups, so the admissible prefix
  // sizes are the group ends.
  std::vector<std::size_t> cut_sizes;
  std::vector<std::size_t> wrong_at;
  std::size_t wrong = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    wrong += losses.values[order[k - 1]];
    if (k == n || scores[order[k]] != scores[order[k - 1]]) {
      cut_sizes.push_back(k);
      wrong_at.push_back(wrong);
    }
  }

  std::size_t chosen = 0;
  bool found = false;
  if (const auto* c = std::get_if<CoverageAtLeast>(&target)) {
    if (!(c->omega > 0.0 && c->omega <= 1.0))
      throw Error(ErrorCode::kInfeasibleTarget, "coverage target must lie in (0, 1]");
    for (std::size_t g = 0; g < cut_sizes.size(); ++g) {
      if (static_cast<double>(cut_sizes[g]) / static_cast<double>(n) >= c->omega) {
        chosen = g;
        found = true;
        break;
      }
    }
  } else {
    const double lambda = std::get<RiskAtMost>(target).lambda;
    for (std::size_t g = cut_sizes.size(); g-- > 0;) {
      if (static_cast<double>(wrong_at[g]) / static_cast<double>(cut_sizes[g]) <= lambda) {
        chosen = g;
        found = true;
        break;
      }
    }
  }
  if (!found) throw Error(ErrorCode::kInfeasibleTarget, "no threshold meets " + describe(target));

  const std::size_t k = cut_sizes[chosen];
  const double upper = scores[order[k - 1]];
  const double gamma = k < n ? threshold_between(upper, scores[order[k]])
                             : std::nextafter(upper, -std::numeric_limits<double>::infinity());
  ThresholdReport report;
  report.gamma = gamma;
  report.achieved_coverage = static_cast<double>(k) / static_cast<double>(n);
  report.achieved_risk = static_cast<double>(wrong_at[chosen]) / static_cast<double>(k);
  report.target = describe(target);
  return report;
}

}  // namespace selection
}  // namespace gensc
