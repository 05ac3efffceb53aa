#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace gensc {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Label carried by samples whose groundtruth lies outside the classifier's
// label space. Any prediction on such a row counts as an error.
inline constexpr int kShiftedLabel = -1;

enum class ShiftTag { kInD, kShiftCov, kShiftLabel };

std::string_view to_string(ShiftTag tag);
std::optional<ShiftTag> parse_shift_tag(std::string_view text);

// Logits, labels and shift tags of an evaluation population, plus the
// optional penultimate-layer features. Treated as immutable once built.
struct EvalSet {
  Matrix logits;                   // N x K
  std::optional<Matrix> features;  // N x D
  std::vector<int> labels;         // N, kShiftedLabel for label-shifted rows
  std::vector<ShiftTag> tags;      // N

  std::size_t rows() const { return static_cast<std::size_t>(logits.rows()); }
  std::size_t num_classes() const { return static_cast<std::size_t>(logits.cols()); }

  std::span<const double> logit_row(std::size_t i) const {
    return {logits.data() + i * num_classes(), num_classes()};
  }
  std::span<const double> feature_row(std::size_t i) const;

  std::size_t count(ShiftTag tag) const;
  std::vector<std::size_t> rows_with(ShiftTag tag) const;

  // Copies the listed rows, in order.
  EvalSet subset(std::span<const std::size_t> indices) const;
};

// Concatenates sets with identical K (and identical D when features exist).
EvalSet concat(std::span<const EvalSet> parts);

struct ClassifierHead {
  Vector weight_norms;            // K, all > 0
  std::optional<Matrix> weights;  // D x K, columns w_j
  std::optional<Vector> bias;     // K

  // Builds a head whose norms are the column norms of `weights`.
  static ClassifierHead from_weights(Matrix weights, std::optional<Vector> bias = std::nullopt);
};

struct Violation {
  std::string field;
  std::optional<std::size_t> row;
  std::string message;
};

// Returns every broken invariant of the set (and head, when given). Empty
// result means the inputs are usable by every scorer and metric.
std::vector<Violation> validate(const EvalSet& set, const ClassifierHead* head = nullptr);

// Throws Error(kValidation) carrying the first few violations.
void require_valid(const EvalSet& set, const ClassifierHead* head = nullptr);

struct CalibrationSubset {
  std::vector<std::size_t> indices;  // distinct, all InD rows
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kCalibrationPerClass = 5;

// Draws 5K distinct InD rows uniformly without replacement. Class balance is
// not enforced.
CalibrationSubset draw_calibration(const EvalSet& set, std::uint64_t seed);

}  // namespace gensc
