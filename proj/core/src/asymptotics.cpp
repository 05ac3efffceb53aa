#include "gensc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gensc/errors.hpp"
#include "gensc/rng.hpp"

namespace gensc::asymptotics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_softmax_score(ScoreId id) {
  if (id != ScoreId::kSrMax && id != ScoreId::kSrDoctor && id != ScoreId::kSrEnt)
    throw Error(ErrorCode::kInvalidArgument, "asymptotics cover sr_max, sr_doctor and sr_ent only");
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// log(log1p(exp(l))) without underflow for very negative l.
double log_log1p_exp(double l) {
  if (l < -700.0) return l;
  return std::log(std::log1p(std::exp(l)));
}

// log(expm1(2 eps)) with eps = exp(-t).
double log_expm1_two_eps(double t) {
  const double log_x = std::log(2.0) - t;
  if (log_x < -30.0) return log_x + std::exp(log_x) / 2.0;  // log(expm1(x)/x) ~ x/2
  const double x = std::exp(log_x);
  return std::log(std::expm1(x));
}

// Non-positive scaled gaps a_i = lambda (z(i) - z(1)) for i >= 2.
struct ScaledGaps {
  std::vector<double> a;
  double top_gap;  // z(1) - z(2), unscaled
};

ScaledGaps scaled_gaps(std::span<const double> z, double lambda) {
  if (z.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two logits");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
  const auto view = scores::sort_logits(z);
  ScaledGaps g;
  g.top_gap = view.values[0] - view.values[1];
  g.a.reserve(z.size() - 1);
  for (std::size_t i = 1; i < view.values.size(); ++i)
    g.a.push_back(lambda * (view.values[i] - view.values[0]));
  return g;
}

}  // namespace

double asymptote(ScoreId id, std::span<const double> z, double lambda) {
  require_softmax_score(id);
  const auto g = scaled_gaps(z, lambda);
  if (!(g.top_gap > 0.0)) throw Error(ErrorCode::kTiedTopLogits, "top two logits are tied");
  const double eps = std::exp(g.a[0]);
  switch (id) {
    case ScoreId::kSrMax: return std::exp(-eps);
    case ScoreId::kSrDoctor: return -std::expm1(2.0 * eps);
    default: return -eps;
  }
}

double log_score_magnitude(ScoreId id, std::span<const double> z, double lambda) {
  require_softmax_score(id);
  const auto g = scaled_gaps(z, lambda);
  const double log_r = log_sum_exp(g.a);  // r = sum_{i>=2} e^{a_i}
  const double r = std::exp(log_r);
  if (id == ScoreId::kSrMax) return -std::log1p(r);

  if (id == ScoreId::kSrDoctor) {
    // sr_doctor = (q - 2r - r^2) / (1 + q), q = sum_{i>=2} e^{2 a_i}.
    std::vector<double> two_a(g.a.size());
    for (std::size_t i = 0; i < g.a.size(); ++i) two_a[i] = 2.0 * g.a[i];
    const double log_q = log_sum_exp(two_a);
    const double q_over_r = std::exp(log_q - log_r);
    return log_r + std::log(2.0 + r - q_over_r) - std::log1p(std::exp(log_q));
  }

  // -sr_ent = sum_{i>=2} e^{a_i} (-a_i) / (1 + r) + log1p(r).
  std::vector<double> weighted(g.a.size());
  for (std::size_t i = 0; i < g.a.size(); ++i)
    weighted[i] = g.a[i] < 0.0 ? g.a[i] + std::log(-g.a[i]) : kNegInf;
  const double log_first = log_sum_exp(weighted) - std::log1p(r);
  return log_add_exp(log_first, log_log1p_exp(log_r));
}

double log_asymptote_magnitude(ScoreId id, std::span<const double> z, double lambda) {
  require_softmax_score(id);
  const auto g = scaled_gaps(z, lambda);
  if (!(g.top_gap > 0.0)) throw Error(ErrorCode::kTiedTopLogits, "top two logits are tied");
  const double t = -g.a[0];
  switch (id) {
    case ScoreId::kSrMax: return -std::exp(-t);
    case ScoreId::kSrDoctor: return log_expm1_two_eps(t);
    default: return -t;
  }
}

double ratio_error(ScoreId id, std::span<const double> z, double lambda) {
  const double ls = log_score_magnitude(id, z, lambda);
  const double la = log_asymptote_magnitude(id, z, lambda);
  if (id == ScoreId::kSrEnt) return std::abs(ls - la) / std::max(1.0, std::abs(la));
  return std::abs(std::expm1(ls - la));
}

double ordering_key(ScoreId id, std::span<const double> z, double lambda) {
  require_softmax_score(id);
  if (id == ScoreId::kSrMax) return -log_sum_exp(scaled_gaps(z, lambda).a);
  // sr_doctor and sr_ent are negative, so -log(-score) increases with score.
  return -log_score_magnitude(id, z, lambda);
}

std::optional<double> kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "Kendall tau needs equal-length inputs");
  long long concordant = 0;
  long long discordant = 0;
  long long ties_a = 0;
  long long ties_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const int sa = (a[i] > a[j]) - (a[i] < a[j]);
      const int sb = (b[i] > b[j]) - (b[i] < b[j]);
      if (sa == 0 && sb == 0) continue;
      if (sa == 0) {
        ++ties_a;
      } else if (sb == 0) {
        ++ties_b;
      } else if (sa == sb) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n_a = static_cast<double>(concordant + discordant + ties_b);
  const double n_b = static_cast<double>(concordant + discordant + ties_a);
  if (n_a == 0.0 || n_b == 0.0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / std::sqrt(n_a * n_b);
}

double convergence_lambda(ScoreId id, const Matrix& rows) {
  require_softmax_score(id);
  double g1 = std::numeric_limits<double>::infinity();
  double g2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const auto view = scores::sort_logits({rows.data() + r * rows.cols(), static_cast<std::size_t>(rows.cols())});
    g1 = std::min(g1, view.values[0] - view.values[1]);
    if (view.values.size() > 2) g2 = std::min(g2, view.values[1] - view.values[2]);
  }
  if (!(g1 > 0.0)) throw Error(ErrorCode::kTiedTopLogits, "rows with tied top logits");
  switch (id) {
    case ScoreId::kSrMax: return 40.0 / g1;
    case ScoreId::kSrDoctor:
      if (!(g2 > 0.0)) throw Error(ErrorCode::kTiedTopLogits, "rows with tied second and third logits");
      return 40.0 / std::min(g1, g2);
    default: return 2e7 / g1;
  }
}

AsymptoticReport convergence_sweep(const Matrix& rows, std::span<const double> lambda_grid,
                                   std::span<const ScoreId> score_ids) {
  const auto k = static_cast<std::size_t>(rows.cols());
  std::vector<std::size_t> kept;
  std::vector<double> margins;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const std::span<const double> z(rows.data() + r * rows.cols(), k);
    const double m = scores::conf_margin(z);
    if (m < kMinTopGap) continue;
    kept.push_back(static_cast<std::size_t>(r));
    margins.push_back(m);
  }
  const std::size_t skipped = static_cast<std::size_t>(rows.rows()) - kept.size();

  AsymptoticReport report;
  for (auto id : score_ids) {
    require_softmax_score(id);
    for (double lambda : lambda_grid) {
      AsymptoticEntry e{id, lambda, 0.0, std::nullopt, skipped};
      std::vector<double> keys;
      keys.reserve(kept.size());
      for (auto r : kept) {
        const std::span<const double> z(rows.data() + r * k, k);
        e.max_ratio_err = std::max(e.max_ratio_err, ratio_error(id, z, lambda));
        keys.push_back(ordering_key(id, z, lambda));
      }
      e.kendall_tau = kendall_tau(keys, margins);
      report.entries.push_back(e);
    }
  }
  return report;
}

bool monotonicity_check(std::span<const double> gaps, double lambda) {
  std::vector<double> g(gaps.begin(), gaps.end());
  for (double v : g)
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gaps must be strictly positive");
  std::sort(g.begin(), g.end());
  for (auto id : kSoftmaxScores) {
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double lo[2] = {0.0, -g[i - 1]};
      const double hi[2] = {0.0, -g[i]};
      if (!(asymptote(id, hi, lambda) > asymptote(id, lo, lambda))) return false;
    }
  }
  return true;
}

Matrix sample_separated_rows(std::size_t rows, std::size_t classes, double min_gap, std::uint64_t seed) {
  if (classes < 2 || rows == 0) throw Error(ErrorCode::kInvalidArgument, "need rows >= 1 and classes >= 2");
  Rng rng(seed);
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(classes));
  std::vector<double> sorted(classes);
  std::vector<std::size_t> slot(classes);
  for (std::size_t r = 0; r < rows; ++r) {
    sorted[0] = 2.0 * rng.normal();
    for (std::size_t j = 1; j < classes; ++j) sorted[j] = sorted[j - 1] - min_gap - rng.uniform(0.0, 1.5);
    for (std::size_t j = 0; j < classes; ++j) slot[j] = j;
    for (std::size_t j = classes - 1; j > 0; --j) std::swap(slot[j], slot[rng.uniform_index(j + 1)]);
    for (std::size_t j = 0; j < classes; ++j)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(slot[j])) = sorted[j];
  }
  return out;
}

}  // namespace gensc::asymptotics
