#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gensc/data.hpp"

namespace gensc {

// The ten confidence-score functions. Higher score = more confident = kept.
enum class ScoreId {
  kSrMax,
  kSrDoctor,
  kSrEnt,
  kConfMargin,
  kGeoMargin,
  kRlMax,
  kEnergy,
  kKnn,
  kVim,
  kSirc,
};

inline constexpr std::array<ScoreId, 10> kAllScores = {
    ScoreId::kSrMax,  ScoreId::kSrDoctor, ScoreId::kSrEnt, ScoreId::kConfMargin, ScoreId::kGeoMargin,
    ScoreId::kRlMax,  ScoreId::kEnergy,   ScoreId::kKnn,   ScoreId::kVim,        ScoreId::kSirc};

// Scores that are functions of one logit row alone (geo-margin additionally
// needs weight norms).
inline constexpr std::array<ScoreId, 7> kLogitScores = {
    ScoreId::kSrMax,     ScoreId::kSrDoctor, ScoreId::kSrEnt, ScoreId::kConfMargin,
    ScoreId::kGeoMargin, ScoreId::kRlMax,    ScoreId::kEnergy};

inline constexpr std::array<ScoreId, 3> kSoftmaxScores = {ScoreId::kSrMax, ScoreId::kSrDoctor,
                                                          ScoreId::kSrEnt};

std::string_view to_string(ScoreId id);
std::optional<ScoreId> parse_score_id(std::string_view text);

struct ScoreVector {
  std::vector<double> values;
  ScoreId score_id = ScoreId::kSrMax;
};

namespace scores {

// Logits of one row sorted descending; ties keep ascending class order.
struct SortedLogitView {
  std::vector<double> values;
  std::vector<std::size_t> order;
};
SortedLogitView sort_logits(std::span<const double> z);

// Index of the largest logit, lowest index on ties.
std::size_t argmax(std::span<const double> z);

double logsumexp(std::span<const double> z);
std::vector<double> softmax(std::span<const double> z);

double sr_max(std::span<const double> z);
double sr_doctor(std::span<const double> z);
// Negative entropy of the softmax; 0 for a point mass, -log K when uniform.
double sr_ent(std::span<const double> z);

double conf_margin(std::span<const double> z);
std::vector<double> signed_distances(std::span<const double> z, const ClassifierHead& head);
double geo_margin(std::span<const double> z, const ClassifierHead& head);

double rl_max(std::span<const double> z);
double energy(std::span<const double> z);

struct KnnConfig {
  std::size_t k = 2;
  CalibrationSubset reference;
};

// Negated Euclidean logit-space distance to the k-th nearest reference row.
// The query itself is skipped when it belongs to the reference.
double knn_score(const EvalSet& set, const KnnConfig& cfg, std::size_t query_row);

struct VimConfig {
  std::size_t principal_dim = 0;
  Vector center;    // calibration feature mean, length D
  Matrix basis;     // D x principal_dim, orthonormal columns
  double alpha = 0; // residual weight
};

VimConfig fit_vim(const EvalSet& set, const CalibrationSubset& cal, std::size_t principal_dim);
double vim_residual(std::span<const double> feature_row, const VimConfig& cfg);
double vim_score(std::span<const double> feature_row, std::span<const double> z, const VimConfig& cfg);

struct SircConfig {
  double a = 0.0;
  double b = 1.0;
  ScoreId secondary = ScoreId::kEnergy;
};

struct ScoreContext;

SircConfig fit_sirc(const EvalSet& set, const CalibrationSubset& cal, ScoreId secondary,
                    const ScoreContext& ctx);
double sirc_score(std::span<const double> z, double s2, const SircConfig& cfg);

// Everything a scorer may need beyond the logit row. Only the members used by
// the requested score have to be filled in.
struct ScoreContext {
  const ClassifierHead* head = nullptr;
  std::optional<KnnConfig> knn;
  std::optional<VimConfig> vim;
  std::optional<SircConfig> sirc;
};

double score_row(const EvalSet& set, std::size_t row, ScoreId id, const ScoreContext& ctx);

// Applies one scorer to every row. Non-finite outputs are clamped to the
// largest finite double of the same sign.
ScoreVector score_set(const EvalSet& set, ScoreId id, const ScoreContext& ctx);

struct ContextOptions {
  std::size_t knn_k = 2;
  std::size_t vim_dim = 0;  // 0 picks max(1, D / 2), capped below the calibration size
  std::uint64_t seed = 0;
  ScoreId sirc_secondary = ScoreId::kEnergy;
};

// Draws the calibration subset (when the score needs one) and fits the
// corresponding configuration.
ScoreContext prepare_context(const EvalSet& set, const ClassifierHead* head, ScoreId id,
                             const ContextOptions& options);

}  // namespace scores
}  // namespace gensc
