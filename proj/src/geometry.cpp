#include "vrd/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vrd/errors.hpp"
#include "vrd/linalg.hpp"

namespace vrd {

bool box_valid(const Box& b) {
  return std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) && std::isfinite(b.h) &&
         b.w > 0.0 && b.h > 0.0;
}

void require_valid(const Box& b) {
  if (!box_valid(b)) throw InputError("invalid box: width and height must be positive and finite");
}

double iou(const Box& a, const Box& b) {
  require_valid(a);
  require_valid(b);
  const double ix = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
  const double iy = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

Box union_box(const Box& a, const Box& b) {
  require_valid(a);
  require_valid(b);
  const double x1 = std::min(a.x, b.x);
  const double y1 = std::min(a.y, b.y);
  const double x2 = std::max(a.x2(), b.x2());
  const double y2 = std::max(a.y2(), b.y2());
  return {x1, y1, x2 - x1, y2 - y1};
}

bool box_contains(const Box& outer, const Box& inner) {
  return inner.x >= outer.x && inner.y >= outer.y && inner.x2() <= outer.x2() &&
         inner.y2() <= outer.y2();
}

double tri_iou(const Box& sub, const Box& ob, std::span<const BoxPair> gt_pairs) {
  require_valid(sub);
  require_valid(ob);
  double best = 0.0;
  for (const BoxPair& gt : gt_pairs) {
    const double score = iou(sub, gt.sub) * iou(ob, gt.ob);
    best = std::max(best, score);
  }
  return best;
}

namespace {

// Position of one box inside the union region of the pair.
void union_relative_block(const Box& b, const Box& u, double* out) {
  out[0] = (b.x - u.x) / u.w;
  out[1] = (b.y - u.y) / u.h;
  out[2] = (b.x2() - u.x) / u.w;
  out[3] = (b.y2() - u.y) / u.h;
  out[4] = b.area() / u.area();
}

}  // namespace

RelLocEncoding encode_relative_location(const Box& sub, const Box& ob) {
  require_valid(sub);
  require_valid(ob);
  const Box u = union_box(sub, ob);

  RelLocEncoding enc;
  union_relative_block(sub, u, enc.v.data());
  union_relative_block(ob, u, enc.v.data() + 5);
  enc.v[10] = (sub.x - ob.x) / ob.w;
  enc.v[11] = (sub.y - ob.y) / ob.h;
  enc.v[12] = std::log(sub.w / ob.w);
  enc.v[13] = std::log(sub.h / ob.h);

  const double norm = l2_norm(enc.v);
  for (double& e : enc.v) e /= norm;
  return enc;
}

}  // namespace vrd
