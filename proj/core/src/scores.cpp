#include "gensc/scores.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "gensc/errors.hpp"

namespace gensc {

namespace {

struct ScoreName {
  ScoreId id;
  std::string_view name;
};

constexpr std::array<ScoreName, 10> kScoreNames = {{
    {ScoreId::kSrMax, "sr_max"},
    {ScoreId::kSrDoctor, "sr_doctor"},
    {ScoreId::kSrEnt, "sr_ent"},
    {ScoreId::kConfMargin, "conf_margin"},
    {ScoreId::kGeoMargin, "geo_margin"},
    {ScoreId::kRlMax, "rl_max"},
    {ScoreId::kEnergy, "energy"},
    {ScoreId::kKnn, "knn"},
    {ScoreId::kVim, "vim"},
    {ScoreId::kSirc, "sirc"},
}};

void require_two_classes(std::span<const double> z) {
  if (z.size() < 2) throw Error(ErrorCode::kInvalidArgument, "margins need at least two logits");
}

double clamp_finite(double v) {
  if (std::isnan(v)) throw Error(ErrorCode::kInvalidArgument, "score evaluated to NaN");
  if (v == std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::max();
  if (v == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::lowest();
  return v;
}

}  // namespace

std::string_view to_string(ScoreId id) {
  for (const auto& entry : kScoreNames)
    if (entry.id == id) return entry.name;
  return "?";
}

std::optional<ScoreId> parse_score_id(std::string_view text) {
  for (const auto& entry : kScoreNames)
    if (entry.name == text) return entry.id;
  if (text == "msp") return ScoreId::kSrMax;
  if (text == "geo") return ScoreId::kGeoMargin;
  if (text == "conf") return ScoreId::kConfMargin;
  return std::nullopt;
}

namespace scores {

SortedLogitView sort_logits(std::span<const double> z) {
  SortedLogitView view;
  view.order.resize(z.size());
  std::iota(view.order.begin(), view.order.end(), std::size_t{0});
  std::stable_sort(view.order.begin(), view.order.end(),
                   [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });
  view.values.reserve(z.size());
  for (auto j : view.order) view.values.push_back(z[j]);
  return view;
}

std::size_t argmax(std::span<const double> z) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < z.size(); ++j)
    if (z[j] > z[best]) best = j;
  return best;
}

double logsumexp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  return m + std::log(sum);
}

std::vector<double> softmax(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    p[j] = std::exp(z[j] - m);
    sum += p[j];
  }
  for (double& v : p) v /= sum;
  return p;
}

double sr_max(std::span<const double> z) {
  const auto p = softmax(z);
  return *std::max_element(p.begin(), p.end());
}

double sr_doctor(std::span<const double> z) {
  const auto p = softmax(z);
  double sq = 0.0;
  for (double v : p) sq += v * v;
  return 1.0 - 1.0 / sq;
}

double sr_ent(std::span<const double> z) {
  const double lse = logsumexp(z);
  double acc = 0.0;
  for (double v : z) {
    const double log_p = v - lse;
    acc += std::exp(log_p) * log_p;
  }
  return acc;
}

double conf_margin(std::span<const double> z) {
  require_two_classes(z);
  double first = -std::numeric_limits<double>::infinity();
  double second = first;
  for (double v : z) {
    if (v > first) {
      second = first;
      first = v;
    } else if (v > second) {
      second = v;
    }
  }
  return first - second;
}

std::vector<double> signed_distances(std::span<const double> z, const ClassifierHead& head) {
  if (static_cast<std::size_t>(head.weight_norms.size()) != z.size()) {
    throw Error(ErrorCode::kMissingHead, "weight norms unavailable for " + std::to_string(z.size()) +
                                             " classes");
  }
  std::vector<double> d(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) d[j] = z[j] / head.weight_norms[static_cast<Eigen::Index>(j)];
  return d;
}

double geo_margin(std::span<const double> z, const ClassifierHead& head) {
  require_two_classes(z);
  const auto d = signed_distances(z, head);
  return conf_margin(d);
}

double rl_max(std::span<const double> z) { return *std::max_element(z.begin(), z.end()); }

double energy(std::span<const double> z) { return logsumexp(z); }

double knn_score(const EvalSet& set, const KnnConfig& cfg, std::size_t query_row) {
  if (cfg.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  const auto query = set.logit_row(query_row);
  std::vector<double> dist2;
  dist2.reserve(cfg.reference.indices.size());
  for (auto ref : cfg.reference.indices) {
    if (ref == query_row) continue;
    const auto other = set.logit_row(ref);
    double acc = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double diff = query[j] - other[j];
      acc += diff * diff;
    }
    dist2.push_back(acc);
  }
  if (dist2.size() < cfg.k) {
    throw Error(ErrorCode::kEmptyReference, "reference has " + std::to_string(dist2.size()) +
                                                " usable rows, k = " + std::to_string(cfg.k));
  }
  auto kth = dist2.begin() + static_cast<std::ptrdiff_t>(cfg.k - 1);
  std::nth_element(dist2.begin(), kth, dist2.end());
  return -std::sqrt(*kth);
}

VimConfig fit_vim(const EvalSet& set, const CalibrationSubset& cal, std::size_t principal_dim) {
  if (!set.features) throw Error(ErrorCode::kMissingFeatures, "ViM needs penultimate features");
  const auto dim = static_cast<std::size_t>(set.features->cols());
  if (principal_dim == 0 || principal_dim >= dim) {
    throw Error(ErrorCode::kInvalidArgument, "principal_dim must lie in [1, D)");
  }
  if (cal.indices.size() <= principal_dim) {
    throw Error(ErrorCode::kInsufficientCalibrationData,
                "calibration size must exceed principal_dim");
  }
  Matrix x(static_cast<Eigen::Index>(cal.indices.size()), set.features->cols());
  for (std::size_t r = 0; r < cal.indices.size(); ++r)
    x.row(static_cast<Eigen::Index>(r)) = set.features->row(static_cast<Eigen::Index>(cal.indices[r]));

  VimConfig cfg;
  cfg.principal_dim = principal_dim;
  cfg.center = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - cfg.center.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const auto d = static_cast<Eigen::Index>(principal_dim);
  if (sv.size() < d || sv[d - 1] < 1e-12 * std::max(1.0, sv[0])) {
    throw Error(ErrorCode::kDegenerateSpectrum,
                "calibration features span fewer than " + std::to_string(principal_dim) + " directions");
  }
  cfg.basis = svd.matrixV().leftCols(d);

  double mean_max_logit = 0.0;
  double mean_residual = 0.0;
  for (auto idx : cal.indices) {
    mean_max_logit += rl_max(set.logit_row(idx));
    mean_residual += vim_residual(set.feature_row(idx), cfg);
  }
  mean_max_logit /= static_cast<double>(cal.indices.size());
  mean_residual /= static_cast<double>(cal.indices.size());
  // Residual-free calibration data carries no scale to match against.
  cfg.alpha = mean_residual < 1e-12 ? 0.0 : std::abs(mean_max_logit) / mean_residual;
  return cfg;
}

double vim_residual(std::span<const double> feature_row, const VimConfig& cfg) {
  if (static_cast<Eigen::Index>(feature_row.size()) != cfg.center.size()) {
    throw Error(ErrorCode::kShapeMismatch, "feature row does not match the fitted ViM dimension");
  }
  const Eigen::Map<const Vector> f(feature_row.data(), static_cast<Eigen::Index>(feature_row.size()));
  const Vector centered = f - cfg.center;
  const Vector residual = centered - cfg.basis * (cfg.basis.transpose() * centered);
  return residual.norm();
}

double vim_score(std::span<const double> feature_row, std::span<const double> z, const VimConfig& cfg) {
  return energy(z) - cfg.alpha * vim_residual(feature_row, cfg);
}

SircConfig fit_sirc(const EvalSet& set, const CalibrationSubset& cal, ScoreId secondary,
                    const ScoreContext& ctx) {
  if (secondary == ScoreId::kSirc) throw Error(ErrorCode::kInvalidArgument, "SIRC cannot gate on itself");
  if (cal.indices.empty()) throw Error(ErrorCode::kZeroVariance, "empty calibration subset");
  std::vector<double> s2;
  s2.reserve(cal.indices.size());
  for (auto idx : cal.indices) s2.push_back(score_row(set, idx, secondary, ctx));
  const double n = static_cast<double>(s2.size());
  const double mean = std::accumulate(s2.begin(), s2.end(), 0.0) / n;
  double var = 0.0;
  for (double v : s2) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd >= 1e-12)) throw Error(ErrorCode::kZeroVariance, "secondary score is constant on calibration");
  return {mean - 3.0 * sd, 1.0 / sd, secondary};
}

double sirc_score(std::span<const double> z, double s2, const SircConfig& cfg) {
  // 1 - max softmax, without cancellation near 1.
  const double deficit = -std::expm1(rl_max(z) - logsumexp(z));
  if (deficit <= 0.0) return 0.0;
  const double x = -cfg.b * (s2 - cfg.a);
  const double softplus = x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  return -std::exp(std::log(deficit) + softplus);
}

double score_row(const EvalSet& set, std::size_t row, ScoreId id, const ScoreContext& ctx) {
  const auto z = set.logit_row(row);
  switch (id) {
    case ScoreId::kSrMax: return sr_max(z);
    case ScoreId::kSrDoctor: return sr_doctor(z);
    case ScoreId::kSrEnt: return sr_ent(z);
    case ScoreId::kConfMargin: return conf_margin(z);
    case ScoreId::kGeoMargin:
      if (!ctx.head) throw Error(ErrorCode::kMissingHead, "geo-margin needs classifier weight norms");
      return geo_margin(z, *ctx.head);
    case ScoreId::kRlMax: return rl_max(z);
    case ScoreId::kEnergy: return energy(z);
    case ScoreId::kKnn:
      if (!ctx.knn) throw Error(ErrorCode::kEmptyReference, "KNN score has no reference set");
      return knn_score(set, *ctx.knn, row);
    case ScoreId::kVim:
      if (!set.features) throw Error(ErrorCode::kMissingFeatures, "ViM needs penultimate features");
      if (!ctx.vim) throw Error(ErrorCode::kInvalidArgument, "ViM configuration not fitted");
      return vim_score(set.feature_row(row), z, *ctx.vim);
    case ScoreId::kSirc: {
      if (!ctx.sirc) throw Error(ErrorCode::kInvalidArgument, "SIRC configuration not fitted");
      const double s2 = score_row(set, row, ctx.sirc->secondary, ctx);
      return sirc_score(z, s2, *ctx.sirc);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown score id");
}

ScoreVector score_set(const EvalSet& set, ScoreId id, const ScoreContext& ctx) {
  if (id == ScoreId::kVim && !set.features)
    throw Error(ErrorCode::kMissingFeatures, "ViM needs penultimate features");
  ScoreVector out;
  out.score_id = id;
  out.values.resize(set.rows());
  for (std::size_t i = 0; i < set.rows(); ++i) out.values[i] = clamp_finite(score_row(set, i, id, ctx));
  return out;
}

ScoreContext prepare_context(const EvalSet& set, const ClassifierHead* head, ScoreId id,
                             const ContextOptions& options) {
  ScoreContext ctx;
  ctx.head = head;
  const bool needs_cal = id == ScoreId::kKnn || id == ScoreId::kVim || id == ScoreId::kSirc;
  if (!needs_cal) return ctx;
  if (id == ScoreId::kVim && !set.features)
    throw Error(ErrorCode::kMissingFeatures, "ViM needs penultimate features");
  auto cal = draw_calibration(set, options.seed);

  const auto fit_for = [&](ScoreId which) {
    if (which == ScoreId::kKnn) {
      ctx.knn = KnnConfig{options.knn_k, cal};
    } else if (which == ScoreId::kVim) {
      const auto dim = static_cast<std::size_t>(set.features->cols());
      std::size_t pd = options.vim_dim;
      if (pd == 0) pd = std::min(std::max<std::size_t>(1, dim / 2), cal.indices.size() - 1);
      ctx.vim = fit_vim(set, cal, pd);
    }
  };

  if (id == ScoreId::kSirc) {
    fit_for(options.sirc_secondary);
    ctx.sirc = fit_sirc(set, cal, options.sirc_secondary, ctx);
  } else {
    fit_for(id);
  }
  return ctx;
}

}  // namespace scores
}  // namespace gensc
