#pragma once

#include <span>
#include <string>
#include <vector>

#include "vrd/geometry.hpp"

namespace vrd {

// Averaged subject/object occupancy masks for one predicate, rasterized
// over each training pair's union region.
struct LocationAnchor {
  int resolution = 0;
  std::vector<double> sub_mask;  // resolution*resolution, row-major, [0,1]
  std::vector<double> ob_mask;
  long count = 0;
};

struct RelAnnotation {
  Box sub;
  Box ob;
  int predicate = -1;
};

// Predicate adjacency; rows are L1-normalized or all-zero, diagonal zero.
struct PredicateGraph {
  int size = 0;
  std::vector<double> adjacency;  // size*size row-major
  std::vector<std::string> labels;

  double at(int u, int v) const { return adjacency[static_cast<size_t>(u) * size + v]; }
  double& at(int u, int v) { return adjacency[static_cast<size_t>(u) * size + v]; }
};

// One anchor per predicate id in [0, num_predicates). A grid cell is set
// when its center falls inside the box; the grid spans exactly the union
// region of the pair. Predicates without instances keep zero masks.
std::vector<LocationAnchor> build_anchor_bank(std::span<const RelAnnotation> annotations,
                                              int num_predicates, int resolution);

// Half the summed squared difference over both mask channels.
double anchor_mse(const LocationAnchor& a, const LocationAnchor& b);

// Whether the whitespace tokens of one label appear contiguously in the
// other ("walk next to" contains both "walk" and "next to").
bool label_contains(const std::string& a, const std::string& b);

// Connects predicates whose anchors lie below mse_thresh (both sides must
// have instances) or whose labels contain one another, then row-normalizes.
PredicateGraph build_predicate_graph(std::span<const LocationAnchor> anchors,
                                     const std::vector<std::string>& labels, double mse_thresh);

}  // namespace vrd
