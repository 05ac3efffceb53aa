#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gensc/data.hpp"
#include "gensc/scores.hpp"

namespace gensc::asymptotics {

// Large-scale limits of the softmax scores evaluated at lambda * z, written
// in terms of eps = exp(-lambda * g) with g = z(1) - z(2) > 0:
//   sr_max    ~ exp(-eps)
//   sr_doctor ~ 1 - exp(2 eps)
//   sr_ent    ~ -eps
// The sr_ent form only holds on a log scale, log(-sr_ent) ~ -lambda * g; the
// plain ratio sr_ent / (-eps) grows like 1 + lambda * g.
double asymptote(ScoreId id, std::span<const double> z, double lambda);

// Scores at lambda * z, represented in the log domain so they stay finite
// and distinguishable long after the plain value rounds to 0 or 1.
//   sr_max:    log(score)
//   sr_doctor: log(-score)
//   sr_ent:    log(-score)
double log_score_magnitude(ScoreId id, std::span<const double> z, double lambda);
double log_asymptote_magnitude(ScoreId id, std::span<const double> z, double lambda);

// Deviation of the score from its asymptote:
//   sr_max, sr_doctor: |score / asymptote - 1|
//   sr_ent:            |log(-score) - log(-asymptote)| / max(1, |log(-asymptote)|)
double ratio_error(ScoreId id, std::span<const double> z, double lambda);

// Strictly increasing transform of score(lambda * z), exact for ordering.
double ordering_key(ScoreId id, std::span<const double> z, double lambda);

// Kendall tau-b. Empty when either side is constant.
std::optional<double> kendall_tau(std::span<const double> a, std::span<const double> b);

inline constexpr double kMinTopGap = 1e-9;
inline constexpr double kRatioTolerance = 1e-6;

// Smallest lambda from which every row's ratio_error stays below
// kRatioTolerance, from the dropped remainder terms:
//   sr_max:    exp(-lambda g1) and exp(-lambda (z1 - z3)) terms     -> 40 / g1
//   sr_doctor: relative error ~ sum_i exp(-lambda (z2 - zi))       -> 40 / min(g1, g2)
//   sr_ent:    log-scale error ~ log(2 + lambda g1) / (lambda g1)  -> 2e7 / g1
// where g1 = z(1) - z(2) and g2 = z(2) - z(3) minimised over rows.
double convergence_lambda(ScoreId id, const Matrix& rows);

struct AsymptoticEntry {
  ScoreId score;
  double lambda;
  double max_ratio_err;
  std::optional<double> kendall_tau;  // vs the confidence-margin order
  std::size_t skipped_rows;
};

struct AsymptoticReport {
  std::vector<AsymptoticEntry> entries;
};

AsymptoticReport convergence_sweep(const Matrix& rows, std::span<const double> lambda_grid,
                                   std::span<const ScoreId> score_ids = kSoftmaxScores);

// True when all three asymptotic forms strictly increase along the sorted
// gap grid. Throws on non-positive gaps.
bool monotonicity_check(std::span<const double> gaps, double lambda);

// Rows of K logits whose sorted adjacent gaps are all >= min_gap; positions
// are shuffled so the winner is not always class 0.
Matrix sample_separated_rows(std::size_t rows, std::size_t classes, double min_gap, std::uint64_t seed);

}  // namespace gensc::asymptotics
