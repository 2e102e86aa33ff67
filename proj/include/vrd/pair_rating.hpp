#pragma once

#include <span>
#include <vector>

#include "vrd/geometry.hpp"
#include "vrd/linalg.hpp"

namespace vrd {

// Two affine layers with a rectifier between them; the sigmoid of the
// scalar output is the probability that an ordered pair is interconnected.
struct OrmHead {
  Affine fc1;
  Affine fc2;  // out dim 1

  int input_dim() const { return fc1.in_dim(); }
  int hidden_dim() const { return fc1.out_dim(); }

  static OrmHead init(int input_dim, int hidden_dim, Rng& rng);
};

std::vector<ParamRef> collect_params(OrmHead& head);

// [feat(sub) | feat(ob) | relative-location], length 2n + 14.
Vec assemble_pair_input(std::span<const double> sub_feat, std::span<const double> ob_feat,
                        const RelLocEncoding& loc);

// Rating score in (0, 1).
double orm_score(std::span<const double> input, const OrmHead& head);

// Intermediates kept for the backward pass.
struct OrmForward {
  Vec input;
  Vec hidden_pre;
  Vec hidden;
  double logit = 0.0;
  double score = 0.0;
};

OrmForward orm_forward(std::span<const double> input, const OrmHead& head);

// Accumulates parameter gradients given d(loss)/d(logit).
void orm_backward(const OrmHead& head, const OrmForward& fwd, double dlogit, OrmHead& grad);

enum class PairLabel { Positive, Negative, Ignore };

// Positive iff the best product-IoU against a ground-truth pair reaches
// thresh_high, Negative iff it is at or below thresh_low, Ignore between.
PairLabel assign_pair_label(const Box& sub, const Box& ob, std::span<const BoxPair> gt_pairs,
                            double thresh_high, double thresh_low);

// Mean binary cross-entropy; scores strictly inside (0, 1), labels 0/1.
double orm_loss(std::span<const double> scores, std::span<const int> labels);

}  // namespace vrd
