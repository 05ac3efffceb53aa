#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gensc/data.hpp"

namespace gensc {

// 0/1 loss of the argmax-of-logits prediction; label-shifted rows are always 1.
struct LossVector {
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  double error_rate() const;
};

// Risk-coverage curve over the N prefixes of the descending-score order.
// coverages[k-1] = k/N and risks[k-1] = mean loss of the first k samples.
struct RCCurve {
  std::vector<double> coverages;
  std::vector<double> risks;
  std::vector<std::size_t> order;

  std::size_t size() const { return coverages.size(); }
};

struct CoverageRisk {
  double coverage = 0.0;
  double risk = 0.0;
};

struct CoverageAtLeast {
  double omega;
};
struct RiskAtMost {
  double lambda;
};
using SelectionTarget = std::variant<CoverageAtLeast, RiskAtMost>;

std::string describe(const SelectionTarget& target);

struct ThresholdReport {
  double gamma = 0.0;
  double achieved_coverage = 0.0;
  double achieved_risk = 0.0;
  std::string target;
};

namespace selection {

LossVector losses(const EvalSet& set);

// Selector mask: score strictly greater than gamma.
std::vector<bool> select(std::span<const double> scores, double gamma);

// Coverage and selection risk at threshold gamma. Risk is 0 when nothing is
// accepted.
CoverageRisk coverage_risk(std::span<const double> scores, const LossVector& losses, double gamma);

// Sample order used by every curve: descending score, ascending index on ties.
std::vector<std::size_t> descending_order(std::span<const double> scores);

RCCurve rc_curve(std::span<const double> scores, const LossVector& losses);

// Reference construction by an explicit threshold sweep over midpoints of
// distinct scores. Quadratic; meant for tests and diagnostics.
RCCurve rc_curve_bruteforce(std::span<const double> scores, const LossVector& losses);

// Mean of the prefix risks (step integral over achievable coverages).
double aurc(const RCCurve& curve);

// Mean of the prefix risks over coverages <= alpha, i.e. partial area / alpha.
double aurc_alpha(const RCCurve& curve, double alpha);

// True when risk never decreases as coverage grows.
bool is_monotone(const RCCurve& curve);

ThresholdReport calibrate_threshold(std::span<const double> scores, const LossVector& losses,
                                    const SelectionTarget& target);

}  // namespace selection
}  // namespace gensc
