#include "gensc/oodmetrics.hpp"

#include <algorithm>
#include <cmath>

#include "gensc/errors.hpp"

namespace gensc::ood {

namespace {

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts check(const BinaryDetectionSet& d) {
  if (d.scores.size() != d.positive_mask.size())
    throw Error(ErrorCode::kShapeMismatch, "scores and labels differ in length");
  Counts c;
  for (bool p : d.positive_mask) (p ? c.positives : c.negatives)++;
  if (c.positives == 0 || c.negatives == 0)
    throw Error(ErrorCode::kDegenerateClasses, "detection set needs both positives and negatives");
  return c;
}

// Cumulative (tp, fp) after each tie group in descending score order.
struct SweepPoint {
  std::size_t tp;
  std::size_t fp;
};

std::vector<SweepPoint> sweep(const BinaryDetectionSet& d) {
  const auto order = selection::descending_order(d.scores);
  std::vector<SweepPoint> points;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (d.positive_mask[order[k]] ? tp : fp)++;
    if (k + 1 == order.size() || d.scores[order[k + 1]] != d.scores[order[k]]) points.push_back({tp, fp});
  }
  return points;
}

}  // namespace

double auroc(const BinaryDetectionSet& d) {
  const auto c = check(d);
  // Each tie group contributes (positives in group) * (negatives strictly
  // below) plus half of the within-group pairs.
  const auto points = sweep(d);
  double wins = 0.0;
  std::size_t prev_tp = 0;
  std::size_t prev_fp = 0;
  for (const auto& p : points) {
    const double group_pos = static_cast<double>(p.tp - prev_tp);
    const double group_neg = static_cast<double>(p.fp - prev_fp);
    const double neg_below = static_cast<double>(c.negatives - p.fp);
    wins += group_pos * neg_below + 0.5 * group_pos * group_neg;
    prev_tp = p.tp;
    prev_fp = p.fp;
  }
  return wins / (static_cast<double>(c.positives) * static_cast<double>(c.negatives));
}

double aupr(const BinaryDetectionSet& d) {
  const auto c = check(d);
  double area = 0.0;
  std::size_t prev_tp = 0;
  for (const auto& p : sweep(d)) {
    if (p.tp == prev_tp) continue;
    const double recall_step = static_cast<double>(p.tp - prev_tp) / static_cast<double>(c.positives);
    const double precision = static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp);
    area += recall_step * precision;
    prev_tp = p.tp;
  }
  return area;
}

double fpr_at_tpr(const BinaryDetectionSet& d, double tpr_target) {
  const auto c = check(d);
  if (!(tpr_target > 0.0 && tpr_target <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "TPR target must lie in (0, 1]");
  for (const auto& p : sweep(d)) {
    const double tpr = static_cast<double>(p.tp) / static_cast<double>(c.positives);
    if (tpr >= tpr_target) return static_cast<double>(p.fp) / static_cast<double>(c.negatives);
  }
  return 1.0;
}

OodScReport ood_vs_sc_report(const EvalSet& set, const ScoreVector& scores, std::size_t bins) {
  if (scores.values.size() != set.rows())
    throw Error(ErrorCode::kShapeMismatch, "score vector does not match the evaluation set");
  if (set.count(ShiftTag::kShiftLabel) == 0)
    throw Error(ErrorCode::kNoShiftLabelRows, "report needs at least one label-shifted row");
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");

  const auto loss = selection::losses(set);
  OodScReport report;

  BinaryDetectionSet shift_view;
  for (std::size_t i = 0; i < set.rows(); ++i) {
    if (set.tags[i] == ShiftTag::kShiftCov) continue;
    shift_view.scores.push_back(scores.values[i]);
    shift_view.positive_mask.push_back(set.tags[i] == ShiftTag::kInD);
  }
  if (std::none_of(shift_view.positive_mask.begin(), shift_view.positive_mask.end(),
                   [](bool b) { return b; })) {
    throw Error(ErrorCode::kDegenerateClasses, "report needs at least one InD row");
  }
  report.auroc = auroc(shift_view);
  report.aupr = aupr(shift_view);
  report.fpr_at_95 = fpr_at_tpr(shift_view, 0.95);

  BinaryDetectionSet error_view{scores.values, {}};
  for (auto l : loss.values) error_view.positive_mask.push_back(l == 0);
  const bool has_both = std::any_of(loss.values.begin(), loss.values.end(), [](auto l) { return l == 0; });
  // Every label-shifted row is an error, so only the positive side can be empty.
  report.auroc_correct_vs_error = has_both ? auroc(error_view) : 0.0;

  report.curve = selection::rc_curve(scores.values, loss);
  report.aurc = selection::aurc(report.curve);
  report.rc_monotone = selection::is_monotone(report.curve);

  auto& h = report.histogram;
  const auto [lo_it, hi_it] = std::minmax_element(scores.values.begin(), scores.values.end());
  h.lo = *lo_it;
  h.hi = *hi_it;
  h.correct_ind.assign(bins, 0);
  h.wrong_ind.assign(bins, 0);
  h.shift_label.assign(bins, 0);
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < set.rows(); ++i) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>((scores.values[i] - h.lo) / width);
      b = std::min(b, bins - 1);
    }
    if (set.tags[i] == ShiftTag::kShiftLabel) {
      h.shift_label[b]++;
    } else if (loss.values[i] == 0) {
      h.correct_ind[b]++;
    } else {
      h.wrong_ind[b]++;
    }
  }
  return report;
}

}  // namespace gensc::ood
