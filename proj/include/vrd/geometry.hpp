#pragma once

#include <array>
#include <span>
#include <utility>

namespace vrd {

// Axis-aligned box; (x, y) is the upper-left corner, y grows downward.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double area() const { return w * h; }

  bool operator==(const Box&) const = default;
};

struct BoxPair {
  Box sub;
  Box ob;
};

// 14-dim relative-location encoding, L2-normalized as a whole.
struct RelLocEncoding {
  std::array<double, 14> v{};
};

bool box_valid(const Box& b);
void require_valid(const Box& b);

// Intersection over union; 0 for disjoint boxes, symmetric.
double iou(const Box& a, const Box& b);

// Smallest axis-aligned box containing both inputs.
Box union_box(const Box& a, const Box& b);

bool box_contains(const Box& outer, const Box& inner);

// Max over ground-truth pairs of iou(sub, gt.sub) * iou(ob, gt.ob);
// 0 when the list is empty.
double tri_iou(const Box& sub, const Box& ob, std::span<const BoxPair> gt_pairs);

// Layout: per-box position against the union region (5 entries each for
// subject then object: left, top, right, bottom as fractions plus area
// fraction), then the 4-entry mutual block (offset of subject relative to
// object scaled by the object size and log size ratios). The concatenated
// 14-vector is L2-normalized once.
RelLocEncoding encode_relative_location(const Box& sub, const Box& ob);

}  // namespace vrd
