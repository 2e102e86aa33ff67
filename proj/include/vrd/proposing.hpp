#pragma once

#include <vector>

#include "vrd/detections.hpp"
#include "vrd/pair_rating.hpp"

namespace vrd {

// Ordered (subject, object) pair candidate with its combined proposal score.
struct PairProposal {
  int sub_idx = -1;
  int ob_idx = -1;
  Box sub_box;
  Box ob_box;
  int sub_cat = -1;
  int ob_cat = -1;
  double score = 0.0;
};

struct ProposingConfig {
  int max_proposals = 110;      // pairs kept
  double nms_thresh = 0.25;     // product-IoU suppression threshold
  double objectness_floor = 0.05;  // detections below are not paired
};

// Product of rating score and both objectiveness scores; inputs in (0, 1].
double proposal_score(double s_orm, double p_sub, double p_ob);

// Scores every ordered pair of kept detections, then greedily emits the
// best-scoring pair and suppresses remaining pairs whose product IoU with
// it reaches nms_thresh and whose category pair matches. Candidate scoring
// is parallel; the greedy pass is sequential. Ties break on
// (sub_idx, ob_idx). Fewer than two detections yield an empty list.
std::vector<PairProposal> propose_pairs(const DetectionSet& detections, const OrmHead& rating,
                                        const ProposingConfig& cfg);

}  // namespace vrd
