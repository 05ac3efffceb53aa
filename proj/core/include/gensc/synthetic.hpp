#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gensc/data.hpp"
#include "gensc/scores.hpp"
#include "gensc/selection.hpp"

namespace gensc::synthetic {

// Four-component isotropic Gaussian mixture in the plane with means on the
// diagonals (+-sqrt(2)/2, +-sqrt(2)/2), ordered counter-clockwise from the
// first quadrant.
struct MixtureSpec {
  Matrix means;  // 4 x 2, unit rows
  double variance = 0.15;
  std::vector<double> weights;

  static MixtureSpec standard();
  std::size_t components() const { return static_cast<std::size_t>(means.rows()); }
};

struct PerturbationCase {
  int id = 1;
  double half_width = 0.0;

  // Case 1: none, case 2: U[-0.5, 0.5], case 3: U[-2, 2] per coordinate.
  static PerturbationCase from_id(int id);
};

// f(x) = W^T x with the mixture means as columns, zero bias.
struct LinearClassifier2D {
  Matrix weights;  // 2 x K

  static LinearClassifier2D from_mixture(const MixtureSpec& spec);
  ClassifierHead head() const;
  std::size_t classes() const { return static_cast<std::size_t>(weights.cols()); }
};

struct LabeledPoints {
  Matrix points;  // n x 2
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> point(std::size_t i) const { return {points.data() + 2 * i, 2}; }
};

// n draws; each picks a component by weight, then N(mean, variance * I).
LabeledPoints sample_mixture(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);

// Exactly per_class draws from every component, listed component by component.
LabeledPoints sample_mixture_per_class(const MixtureSpec& spec, std::size_t per_class,
                                       std::uint64_t seed);

Matrix logits_2d(const LinearClassifier2D& classifier, const Matrix& points);

EvalSet make_eval_set(const LinearClassifier2D& classifier, const LabeledPoints& data,
                      ShiftTag tag = ShiftTag::kInD);

std::vector<double> posterior(const MixtureSpec& spec, std::span<const double> point);
double posterior_score(const MixtureSpec& spec, std::span<const double> point);

// l2 distance to the nearest decision boundary of the argmax rule.
double robustness_radius(const LinearClassifier2D& classifier, std::span<const double> point);

LabeledPoints perturb(const LabeledPoints& data, const PerturbationCase& pc, std::uint64_t seed);

struct ScaledCurve {
  std::string series;           // score name, or "s_post"
  std::optional<double> lambda; // empty for the posterior reference
  RCCurve curve;
  double aurc = 0.0;
};

// RC curves of each requested logit score on lambda * Z for every lambda,
// plus the posterior-score reference curve.
std::vector<ScaledCurve> scaled_rc_experiment(const MixtureSpec& spec, std::size_t per_class,
                                              std::uint64_t seed, std::span<const double> lambdas,
                                              std::span<const ScoreId> score_ids);

struct GridSpec {
  double lo = -2.0;
  double hi = 2.0;
  std::size_t n = 201;

  double coordinate(std::size_t i) const;
};

// Row r, column c holds the score at (x1, x2) = (coord(c), coord(r)).
Matrix score_grid(const LinearClassifier2D& classifier, ScoreId id, const GridSpec& grid);
Matrix posterior_grid(const MixtureSpec& spec, const GridSpec& grid);

struct SelectionRadii {
  std::string series;
  std::vector<double> radii;  // radii of the selected samples
  double min_radius = 0.0;
};

struct CaseResult {
  PerturbationCase perturbation;
  LabeledPoints data;  // after perturbation
  EvalSet set;
  std::vector<ScaledCurve> curves;
  std::vector<SelectionRadii> selected;
  double coverage = 0.8;
};

inline constexpr std::size_t kDefaultPerClass = 500;

// Samples the mixture, applies the perturbation case, and scores it with the
// logit scores and the posterior score. `selected` holds robustness radii of
// the samples each score keeps at the given coverage.
CaseResult run_case(const MixtureSpec& spec, const PerturbationCase& pc, std::size_t per_class,
                    std::uint64_t seed, double coverage = 0.8);

// Seed used for the perturbation noise of a case run.
std::uint64_t perturbation_seed(std::uint64_t seed);

}  // namespace gensc::synthetic
