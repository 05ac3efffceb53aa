#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "gensc/data.hpp"
#include "gensc/errors.hpp"
#include "gensc/rng.hpp"

// Runs `stmt` and checks that it throws gensc::Error with the given code.
#define EXPECT_GENSC_ERROR(stmt, expected_code)                                   \
  do {                                                                            \
    bool gensc_thrown = false;                                                    \
    try {                                                                         \
      stmt;                                                                       \
    } catch (const ::gensc::Error& gensc_e) {                                     \
      gensc_thrown = true;                                                        \
      EXPECT_EQ(gensc_e.code(), expected_code) << gensc_e.what();                 \
    }                                                                             \
    EXPECT_TRUE(gensc_thrown) << "expected a gensc::Error from " #stmt;           \
  } while (0)

namespace gensc::testing {

inline Matrix matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  auto it = values.begin();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = *it++;
  return m;
}

// Gaussian logits with labels drawn so roughly a third of InD rows are wrong.
// A fraction of rows is tagged ShiftLabel when `shift_label` is set.
inline EvalSet random_set(Rng& rng, std::size_t n, std::size_t k, std::size_t d = 0, bool shift_label = false,
                          double scale = 2.0) {
  EvalSet s;
  s.logits.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  if (d > 0) s.features = Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < k; ++j) s.logits(r, static_cast<Eigen::Index>(j)) = scale * rng.normal();
    if (d > 0)
      for (std::size_t j = 0; j < d; ++j) (*s.features)(r, static_cast<Eigen::Index>(j)) = rng.normal();
    if (shift_label && rng.uniform01() < 0.2) {
      s.labels.push_back(kShiftedLabel);
      s.tags.push_back(ShiftTag::kShiftLabel);
      continue;
    }
    int label = 0;
    double best = s.logits(r, 0);
    for (std::size_t j = 1; j < k; ++j) {
      if (s.logits(r, static_cast<Eigen::Index>(j)) > best) {
        best = s.logits(r, static_cast<Eigen::Index>(j));
        label = static_cast<int>(j);
      }
    }
    if (rng.uniform01() < 0.3) label = static_cast<int>(rng.uniform_index(k));
    s.labels.push_back(label);
    s.tags.push_back(ShiftTag::kInD);
  }
  return s;
}

inline std::vector<double> row_vec(const Matrix& m, Eigen::Index r) {
  return std::vector<double>(m.row(r).data(), m.row(r).data() + m.cols());
}

}  // namespace gensc::testing
