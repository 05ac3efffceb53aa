#include "gensc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gensc/errors.hpp"
#include "gensc/rng.hpp"

namespace gensc::synthetic {

MixtureSpec MixtureSpec::standard() {
  const double h = std::sqrt(2.0) / 2.0;
  MixtureSpec spec;
  spec.means.resize(4, 2);
  spec.means << h, h,  //
      -h, h,           //
      -h, -h,          //
      h, -h;
  spec.variance = 0.15;
  spec.weights.assign(4, 0.25);
  return spec;
}

PerturbationCase PerturbationCase::from_id(int id) {
  switch (id) {
    case 1: return {1, 0.0};
    case 2: return {2, 0.5};
    case 3: return {3, 2.0};
    default: throw Error(ErrorCode::kInvalidArgument, "perturbation case must be 1, 2 or 3");
  }
}

LinearClassifier2D LinearClassifier2D::from_mixture(const MixtureSpec& spec) {
  return {spec.means.transpose()};
}

ClassifierHead LinearClassifier2D::head() const {
  return ClassifierHead::from_weights(weights, Vector::Zero(weights.cols()));
}

namespace {

std::size_t pick_component(const std::vector<double>& weights, double u) {
  double acc = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    acc += weights[j];
    if (u < acc) return j;
  }
  return weights.size() - 1;
}

void draw_point(const MixtureSpec& spec, std::size_t component, Rng& rng, double* out) {
  const double sd = std::sqrt(spec.variance);
  const auto c = static_cast<Eigen::Index>(component);
  out[0] = spec.means(c, 0) + sd * rng.normal();
  out[1] = spec.means(c, 1) + sd * rng.normal();
}

}  // namespace

LabeledPoints sample_mixture(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "sample size must be positive");
  Rng rng(seed);
  LabeledPoints out;
  out.points.resize(static_cast<Eigen::Index>(n), 2);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = pick_component(spec.weights, rng.uniform01());
    out.labels[i] = static_cast<int>(c);
    draw_point(spec, c, rng, out.points.data() + 2 * i);
  }
  return out;
}

LabeledPoints sample_mixture_per_class(const MixtureSpec& spec, std::size_t per_class,
                                       std::uint64_t seed) {
  if (per_class == 0) throw Error(ErrorCode::kInvalidArgument, "sample size must be positive");
  Rng rng(seed);
  const std::size_t n = per_class * spec.components();
  LabeledPoints out;
  out.points.resize(static_cast<Eigen::Index>(n), 2);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = i / per_class;
    out.labels[i] = static_cast<int>(c);
    draw_point(spec, c, rng, out.points.data() + 2 * i);
  }
  return out;
}

Matrix logits_2d(const LinearClassifier2D& classifier, const Matrix& points) {
  if (points.cols() != 2) throw Error(ErrorCode::kShapeMismatch, "points must be n x 2");
  return points * classifier.weights;
}

EvalSet make_eval_set(const LinearClassifier2D& classifier, const LabeledPoints& data, ShiftTag tag) {
  EvalSet set;
  set.logits = logits_2d(classifier, data.points);
  set.features = data.points;
  set.labels = data.labels;
  if (tag == ShiftTag::kShiftLabel) std::fill(set.labels.begin(), set.labels.end(), kShiftedLabel);
  set.tags.assign(data.size(), tag);
  return set;
}

std::vector<double> posterior(const MixtureSpec& spec, std::span<const double> point) {
  std::vector<double> log_p(spec.components());
  for (std::size_t j = 0; j < spec.components(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    const double dx = point[0] - spec.means(c, 0);
    const double dy = point[1] - spec.means(c, 1);
    log_p[j] = std::log(spec.weights[j]) - (dx * dx + dy * dy) / (2.0 * spec.variance);
  }
  return scores::softmax(log_p);
}

double posterior_score(const MixtureSpec& spec, std::span<const double> point) {
  const auto p = posterior(spec, point);
  return *std::max_element(p.begin(), p.end());
}

double robustness_radius(const LinearClassifier2D& classifier, std::span<const double> point) {
  const Eigen::Map<const Eigen::Vector2d> x(point.data());
  const Vector z = classifier.weights.transpose() * x;
  const auto winner = static_cast<Eigen::Index>(scores::argmax({z.data(), static_cast<std::size_t>(z.size())}));
  double radius = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < classifier.weights.cols(); ++j) {
    if (j == winner) continue;
    const Eigen::Vector2d normal = classifier.weights.col(winner) - classifier.weights.col(j);
    const double len = normal.norm();
    if (len == 0.0) continue;
    radius = std::min(radius, normal.dot(x) / len);
  }
  return std::max(radius, 0.0);
}

LabeledPoints perturb(const LabeledPoints& data, const PerturbationCase& pc, std::uint64_t seed) {
  if (pc.half_width < 0.0) throw Error(ErrorCode::kInvalidArgument, "half-width must be >= 0");
  LabeledPoints out = data;
  if (pc.half_width == 0.0) return out;
  Rng rng(seed);
  for (Eigen::Index i = 0; i < out.points.rows(); ++i) {
    out.points(i, 0) += rng.uniform(-pc.half_width, pc.half_width);
    out.points(i, 1) += rng.uniform(-pc.half_width, pc.half_width);
  }
  return out;
}

namespace {

ScaledCurve make_curve(std::string series, std::optional<double> lambda, std::span<const double> s,
                       const LossVector& loss) {
  ScaledCurve c{std::move(series), lambda, selection::rc_curve(s, loss), 0.0};
  c.aurc = selection::aurc(c.curve);
  return c;
}

std::vector<double> posterior_scores(const MixtureSpec& spec, const LabeledPoints& data) {
  std::vector<double> s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = posterior_score(spec, data.point(i));
  return s;
}

void require_logit_score(ScoreId id) {
  if (std::find(kLogitScores.begin(), kLogitScores.end(), id) == kLogitScores.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("score ") + std::string(to_string(id)) + " is not a logit score");
  }
}

}  // namespace

std::vector<ScaledCurve> scaled_rc_experiment(const MixtureSpec& spec, std::size_t per_class,
                                              std::uint64_t seed, std::span<const double> lambdas,
                                              std::span<const ScoreId> score_ids) {
  const auto classifier = LinearClassifier2D::from_mixture(spec);
  const auto head = classifier.head();
  const auto data = sample_mixture_per_class(spec, per_class, seed);
  const auto base = make_eval_set(classifier, data);
  const auto loss = selection::losses(base);

  std::vector<ScaledCurve> out;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "scale factors must be positive");
    EvalSet scaled = base;
    scaled.logits *= lambda;
    scores::ScoreContext ctx;
    ctx.head = &head;
    for (auto id : score_ids) {
      require_logit_score(id);
      const auto s = scores::score_set(scaled, id, ctx);
      out.push_back(make_curve(std::string(to_string(id)), lambda, s.values, loss));
    }
  }
  out.push_back(make_curve("s_post", std::nullopt, posterior_scores(spec, data), loss));
  return out;
}

double GridSpec::coordinate(std::size_t i) const {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

Matrix score_grid(const LinearClassifier2D& classifier, ScoreId id, const GridSpec& grid) {
  require_logit_score(id);
  if (grid.n == 0) throw Error(ErrorCode::kInvalidArgument, "grid needs at least one point");
  const auto head = classifier.head();
  scores::ScoreContext ctx;
  ctx.head = &head;
  const auto n = static_cast<Eigen::Index>(grid.n);
  Matrix out(n, n);
  EvalSet row;
  row.labels = {0};
  row.tags = {ShiftTag::kInD};
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Matrix point(1, 2);
      point << grid.coordinate(static_cast<std::size_t>(c)), grid.coordinate(static_cast<std::size_t>(r));
      row.logits = logits_2d(classifier, point);
      out(r, c) = scores::score_row(row, 0, id, ctx);
    }
  }
  return out;
}

Matrix posterior_grid(const MixtureSpec& spec, const GridSpec& grid) {
  if (grid.n == 0) throw Error(ErrorCode::kInvalidArgument, "grid needs at least one point");
  const auto n = static_cast<Eigen::Index>(grid.n);
  Matrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double p[2] = {grid.coordinate(static_cast<std::size_t>(c)),
                           grid.coordinate(static_cast<std::size_t>(r))};
      out(r, c) = posterior_score(spec, p);
    }
  }
  return out;
}

std::uint64_t perturbation_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

CaseResult run_case(const MixtureSpec& spec, const PerturbationCase& pc, std::size_t per_class,
                    std::uint64_t seed, double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "coverage must lie in (0, 1]");
  const auto classifier = LinearClassifier2D::from_mixture(spec);
  const auto head = classifier.head();

  CaseResult result;
  result.perturbation = pc;
  result.coverage = coverage;
  result.data = perturb(sample_mixture_per_class(spec, per_class, seed), pc, perturbation_seed(seed));
  result.set = make_eval_set(classifier, result.data, pc.id == 1 ? ShiftTag::kInD : ShiftTag::kShiftCov);
  const auto loss = selection::losses(result.set);

  std::vector<double> radius(result.data.size());
  for (std::size_t i = 0; i < radius.size(); ++i) radius[i] = robustness_radius(classifier, result.data.point(i));

  scores::ScoreContext ctx;
  ctx.head = &head;
  for (auto id : kLogitScores) {
    const auto s = scores::score_set(result.set, id, ctx);
    result.curves.push_back(make_curve(std::string(to_string(id)), 1.0, s.values, loss));
  }
  result.curves.push_back(make_curve("s_post", std::nullopt, posterior_scores(spec, result.data), loss));

  const auto n = result.data.size();
  const auto keep = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n)));
  for (const auto& c : result.curves) {
    SelectionRadii sel{c.series, {}, std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < keep; ++k) {
      const double r = radius[c.curve.order[k]];
      sel.radii.push_back(r);
      sel.min_radius = std::min(sel.min_radius, r);
    }
    result.selected.push_back(std::move(sel));
  }
  return result;
}

}  // namespace gensc::synthetic
