#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gensc/data.hpp"
#include "gensc/scores.hpp"
#include "gensc/selection.hpp"

namespace gensc {

// Detection view of a score: positives are the samples that should be kept.
struct BinaryDetectionSet {
  std::vector<double> scores;
  std::vector<bool> positive_mask;
};

namespace ood {

// P(score of a random positive > score of a random negative), ties count 1/2.
double auroc(const BinaryDetectionSet& d);

// Average precision: step integral of precision over recall, tie groups
// processed together in descending score order.
double aupr(const BinaryDetectionSet& d);

// FPR at the largest threshold whose TPR reaches tpr_target.
double fpr_at_tpr(const BinaryDetectionSet& d, double tpr_target);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> correct_ind;
  std::vector<std::size_t> wrong_ind;
  std::vector<std::size_t> shift_label;
};

struct OodScReport {
  // InD (positive) vs ShiftLabel (negative); ShiftCov rows are left out.
  double auroc = 0.0;
  double aupr = 0.0;
  double fpr_at_95 = 0.0;
  // Correctly classified (positive) vs misclassified rows over the whole set.
  double auroc_correct_vs_error = 0.0;
  RCCurve curve;
  double aurc = 0.0;
  bool rc_monotone = false;
  Histogram histogram;
};

inline constexpr std::size_t kHistogramBins = 20;

OodScReport ood_vs_sc_report(const EvalSet& set, const ScoreVector& scores,
                             std::size_t bins = kHistogramBins);

}  // namespace ood
}  // namespace gensc
