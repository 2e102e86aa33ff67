#pragma once

#include <span>
#include <vector>

#include "vrd/geometry.hpp"
#include "vrd/linalg.hpp"

namespace vrd {

// One detector output box with its category, objectiveness score and the
// row of the per-image feature matrix that holds its visual feature.
struct Detection {
  Box box;
  int category = -1;
  double objectness = 0.0;
  int feature_row = -1;
};

struct DetectionSet {
  std::vector<Detection> items;
  Mat features;  // one row per feature_row referenced above

  std::span<const double> feature(int row) const { return features.row(row); }
};

}  // namespace vrd
