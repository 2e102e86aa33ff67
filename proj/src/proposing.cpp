#include "vrd/proposing.hpp"

#include <algorithm>
#include <cmath>

#include "vrd/errors.hpp"

namespace vrd {

double proposal_score(double s_orm, double p_sub, double p_ob) {
  if (!(s_orm > 0.0 && s_orm <= 1.0) || !(p_sub > 0.0 && p_sub <= 1.0) ||
      !(p_ob > 0.0 && p_ob <= 1.0))
    throw InputError("proposal score factors must lie in (0,1]");
  return s_orm * p_sub * p_ob;
}

namespace {

bool ranks_before(const PairProposal& a, const PairProposal& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.sub_idx != b.sub_idx) return a.sub_idx < b.sub_idx;
  return a.ob_idx < b.ob_idx;
}

}  // namespace

std::vector<PairProposal> propose_pairs(const DetectionSet& detections, const OrmHead& rating,
                                        const ProposingConfig& cfg) {
  std::vector<int> kept;
  for (int i = 0; i < static_cast<int>(detections.items.size()); ++i)
    if (detections.items[i].objectness >= cfg.objectness_floor) kept.push_back(i);

  const int k = static_cast<int>(kept.size());
  if (k < 2) return {};

  std::vector<PairProposal> candidates(static_cast<size_t>(k) * (k - 1));

#pragma omp parallel for schedule(static)
  for (int c = 0; c < static_cast<int>(candidates.size()); ++c) {
    const int si = c / (k - 1);
    int oi = c % (k - 1);
    if (oi >= si) ++oi;  // skip the diagonal
    const Detection& sub = detections.items[kept[si]];
    const Detection& ob = detections.items[kept[oi]];
    const Vec input = assemble_pair_input(detections.feature(sub.feature_row),
                                          detections.feature(ob.feature_row),
                                          encode_relative_location(sub.box, ob.box));
    const double s_orm = orm_score(input, rating);
    PairProposal& p = candidates[c];
    p.sub_idx = kept[si];
    p.ob_idx = kept[oi];
    p.sub_box = sub.box;
    p.ob_box = ob.box;
    p.sub_cat = sub.category;
    p.ob_cat = ob.category;
    p.score = proposal_score(s_orm, sub.objectness, ob.objectness);
  }

  std::sort(candidates.begin(), candidates.end(), ranks_before);

  std::vector<PairProposal> out;
  std::vector<char> suppressed(candidates.size(), 0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (suppressed[i]) continue;
    const PairProposal& best = candidates[i];
    out.push_back(best);
    if (static_cast<int>(out.size()) >= cfg.max_proposals) break;
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (suppressed[j]) continue;
      const PairProposal& other = candidates[j];
      if (other.sub_cat == best.sub_cat && other.ob_cat == best.ob_cat &&
          iou(best.sub_box, other.sub_box) * iou(best.ob_box, other.ob_box) >= cfg.nms_thresh)
        suppressed[j] = 1;
    }
  }
  return out;
}

}  // namespace vrd
