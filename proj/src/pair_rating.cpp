#include "vrd/pair_rating.hpp"

#include <cmath>

#include "vrd/errors.hpp"

namespace vrd {

OrmHead OrmHead::init(int input_dim, int hidden_dim, Rng& rng) {
  OrmHead head;
  head.fc1 = Affine::init(hidden_dim, input_dim, rng);
  head.fc2 = Affine::init(1, hidden_dim, rng);
  return head;
}

std::vector<ParamRef> collect_params(OrmHead& head) {
  std::vector<ParamRef> refs;
  collect_affine(refs, "fc1", head.fc1);
  collect_affine(refs, "fc2", head.fc2);
  return refs;
}

Vec assemble_pair_input(std::span<const double> sub_feat, std::span<const double> ob_feat,
                        const RelLocEncoding& loc) {
  if (sub_feat.size() != ob_feat.size())
    throw InputError("subject/object feature dimensions differ");
  Vec out;
  out.reserve(sub_feat.size() * 2 + loc.v.size());
  out.insert(out.end(), sub_feat.begin(), sub_feat.end());
  out.insert(out.end(), ob_feat.begin(), ob_feat.end());
  out.insert(out.end(), loc.v.begin(), loc.v.end());
  return out;
}

OrmForward orm_forward(std::span<const double> input, const OrmHead& head) {
  if (static_cast<int>(input.size()) != head.input_dim())
    throw InputError("rating head input dimension mismatch");
  OrmForward fwd;
  fwd.input.assign(input.begin(), input.end());
  fwd.hidden_pre = head.fc1.forward(input);
  fwd.hidden = fwd.hidden_pre;
  for (double& v : fwd.hidden) v = v > 0.0 ? v : 0.0;
  fwd.logit = head.fc2.forward(fwd.hidden)[0];
  if (!std::isfinite(fwd.logit)) throw NumericError("non-finite rating activation");
  fwd.score = sigmoid(fwd.logit);
  return fwd;
}

double orm_score(std::span<const double> input, const OrmHead& head) {
  return orm_forward(input, head).score;
}

void orm_backward(const OrmHead& head, const OrmForward& fwd, double dlogit, OrmHead& grad) {
  const double dl[1] = {dlogit};
  Vec dhidden(head.hidden_dim(), 0.0);
  head.fc2.backward(fwd.hidden, dl, grad.fc2, dhidden);
  for (int i = 0; i < head.hidden_dim(); ++i)
    if (fwd.hidden_pre[i] <= 0.0) dhidden[i] = 0.0;
  head.fc1.backward(fwd.input, dhidden, grad.fc1);
}

PairLabel assign_pair_label(const Box& sub, const Box& ob, std::span<const BoxPair> gt_pairs,
                            double thresh_high, double thresh_low) {
  if (thresh_low > thresh_high) throw ConfigError("thresh_low exceeds thresh_high");
  const double score = tri_iou(sub, ob, gt_pairs);
  if (score >= thresh_high) return PairLabel::Positive;
  if (score <= thresh_low) return PairLabel::Negative;
  return PairLabel::Ignore;
}

double orm_loss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw ConfigError("empty rating batch");
  if (scores.size() != labels.size()) throw InputError("scores/labels length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!(s > 0.0 && s < 1.0)) throw NumericError("rating score outside (0,1)");
    sum += labels[i] != 0 ? std::log(s) : std::log(1.0 - s);
  }
  return -sum / static_cast<double>(scores.size());
}

}  // namespace vrd
