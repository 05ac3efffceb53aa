#include "gensc/data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gensc/errors.hpp"
#include "gensc/rng.hpp"

namespace gensc {

std::string_view to_string(ShiftTag tag) {
  switch (tag) {
    case ShiftTag::kInD: return "InD";
    case ShiftTag::kShiftCov: return "ShiftCov";
    case ShiftTag::kShiftLabel: return "ShiftLabel";
  }
  return "?";
}

std::optional<ShiftTag> parse_shift_tag(std::string_view text) {
  if (text == "InD" || text == "ind" || text == "in") return ShiftTag::kInD;
  if (text == "ShiftCov" || text == "cov") return ShiftTag::kShiftCov;
  if (text == "ShiftLabel" || text == "label") return ShiftTag::kShiftLabel;
  return std::nullopt;
}

std::span<const double> EvalSet::feature_row(std::size_t i) const {
  if (!features) throw Error(ErrorCode::kMissingFeatures, "evaluation set has no features");
  const auto cols = static_cast<std::size_t>(features->cols());
  return {features->data() + i * cols, cols};
}

std::size_t EvalSet::count(ShiftTag tag) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

std::vector<std::size_t> EvalSet::rows_with(ShiftTag tag) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == tag) out.push_back(i);
  return out;
}

EvalSet EvalSet::subset(std::span<const std::size_t> indices) const {
  EvalSet out;
  const auto n = static_cast<Eigen::Index>(indices.size());
  out.logits.resize(n, logits.cols());
  if (features) out.features = Matrix(n, features->cols());
  out.labels.reserve(indices.size());
  out.tags.reserve(indices.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(r)]);
    if (src >= logits.rows()) throw Error(ErrorCode::kInvalidArgument, "subset index out of range");
    out.logits.row(r) = logits.row(src);
    if (features) out.features->row(r) = features->row(src);
    out.labels.push_back(labels[static_cast<std::size_t>(src)]);
    out.tags.push_back(tags[static_cast<std::size_t>(src)]);
  }
  return out;
}

EvalSet concat(std::span<const EvalSet> parts) {
  if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to concatenate");
  Eigen::Index total = 0;
  const Eigen::Index k = parts.front().logits.cols();
  const bool with_features = std::all_of(parts.begin(), parts.end(),
                                         [](const EvalSet& p) { return p.features.has_value(); });
  const Eigen::Index d = with_features ? parts.front().features->cols() : 0;
  for (const auto& p : parts) {
    if (p.logits.cols() != k)
      throw Error(ErrorCode::kShapeMismatch, "splits disagree on the number of classes");
    if (with_features && p.features->cols() != d)
      throw Error(ErrorCode::kShapeMismatch, "splits disagree on the feature dimension");
    total += p.logits.rows();
  }
  EvalSet out;
  out.logits.resize(total, k);
  if (with_features) out.features = Matrix(total, d);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.logits.middleRows(at, p.logits.rows()) = p.logits;
    if (with_features) out.features->middleRows(at, p.logits.rows()) = *p.features;
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
    out.tags.insert(out.tags.end(), p.tags.begin(), p.tags.end());
    at += p.logits.rows();
  }
  return out;
}

ClassifierHead ClassifierHead::from_weights(Matrix weights, std::optional<Vector> bias) {
  ClassifierHead head;
  head.weight_norms = weights.colwise().norm().transpose();
  head.weights = std::move(weights);
  head.bias = std::move(bias);
  return head;
}

std::vector<Violation> validate(const EvalSet& set, const ClassifierHead* head) {
  std::vector<Violation> out;
  const std::size_t n = set.rows();
  const std::size_t k = set.num_classes();
  if (n < 1) out.push_back({"logits", std::nullopt, "no samples (N must be >= 1)"});
  if (k < 2) out.push_back({"logits", std::nullopt, "fewer than two classes (K must be >= 2)"});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(set.logits(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
        std::ostringstream msg;
        msg << "non-finite logit (" << i << "," << j << ")";
        out.push_back({"logits", i, msg.str()});
      }
    }
  }
  if (set.labels.size() != n) {
    out.push_back({"labels", std::nullopt,
                   "label count " + std::to_string(set.labels.size()) + " != " + std::to_string(n)});
  }
  if (set.tags.size() != n) {
    out.push_back({"shift_tags", std::nullopt,
                   "tag count " + std::to_string(set.tags.size()) + " != " + std::to_string(n)});
  }
  const std::size_t rows = std::min({n, set.labels.size(), set.tags.size()});
  for (std::size_t i = 0; i < rows; ++i) {
    const int y = set.labels[i];
    const bool shifted = set.tags[i] == ShiftTag::kShiftLabel;
    if (y == kShiftedLabel && !shifted) {
      out.push_back({"labels", i, "label -1 on row " + std::to_string(i) + " not tagged ShiftLabel"});
    } else if (y != kShiftedLabel && shifted) {
      out.push_back({"labels", i, "ShiftLabel row " + std::to_string(i) + " must carry label -1"});
    } else if (y != kShiftedLabel && (y < 0 || static_cast<std::size_t>(y) >= k)) {
      out.push_back({"labels", i, "label " + std::to_string(y) + " on row " + std::to_string(i) +
                                      " outside [0, K)"});
    }
  }
  if (set.features) {
    if (static_cast<std::size_t>(set.features->rows()) != n) {
      out.push_back({"features", std::nullopt, "feature rows " + std::to_string(set.features->rows()) +
                                                   " != " + std::to_string(n)});
    }
    if (!set.features->allFinite()) out.push_back({"features", std::nullopt, "non-finite feature"});
  }
  if (head) {
    if (static_cast<std::size_t>(head->weight_norms.size()) != k) {
      out.push_back({"weight_norms", std::nullopt, "expected " + std::to_string(k) + " weight norms"});
    }
    for (Eigen::Index j = 0; j < head->weight_norms.size(); ++j) {
      const double w = head->weight_norms[j];
      if (!(w > 0.0) || !std::isfinite(w)) {
        out.push_back({"weight_norms", static_cast<std::size_t>(j),
                       "weight norm " + std::to_string(j) + " not strictly positive"});
      }
    }
    if (head->weights) {
      if (head->weights->cols() != head->weight_norms.size()) {
        out.push_back({"weights", std::nullopt, "weight columns do not match weight norms"});
      } else {
        for (Eigen::Index j = 0; j < head->weights->cols(); ++j) {
          const double norm = head->weights->col(j).norm();
          const double stored = head->weight_norms[j];
          if (std::abs(norm - stored) > 1e-9 * std::max(std::abs(stored), 1e-300)) {
            out.push_back({"weights", static_cast<std::size_t>(j),
                           "column " + std::to_string(j) + " norm disagrees with weight_norms"});
          }
        }
      }
      if (set.features && head->weights->rows() != set.features->cols()) {
        out.push_back({"weights", std::nullopt, "weight rows do not match feature dimension"});
      }
    }
    if (head->bias && head->bias->size() != head->weight_norms.size()) {
      out.push_back({"bias", std::nullopt, "bias length does not match K"});
    }
  }
  return out;
}

void require_valid(const EvalSet& set, const ClassifierHead* head) {
  const auto violations = validate(set, head);
  if (violations.empty()) return;
  std::string msg;
  const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) msg += "; ";
    msg += violations[i].field + ": " + violations[i].message;
  }
  if (violations.size() > shown) msg += "; ... (" + std::to_string(violations.size()) + " total)";
  throw Error(ErrorCode::kValidation, msg);
}

CalibrationSubset draw_calibration(const EvalSet& set, std::uint64_t seed) {
  auto pool = set.rows_with(ShiftTag::kInD);
  const std::size_t want = kCalibrationPerClass * set.num_classes();
  if (pool.size() < want) {
    throw Error(ErrorCode::kInsufficientCalibrationData,
                "need " + std::to_string(want) + " InD rows, have " + std::to_string(pool.size()));
  }
  // Partial Fisher-Yates: the first `want` slots end up a uniform sample.
  Rng rng(seed);
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(want);
  return {std::move(pool), seed};
}

}  // namespace gensc
