#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vrd/ggnn.hpp"
#include "vrd/geometry.hpp"
#include "vrd/linalg.hpp"

namespace vrd {

struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<std::string, Vec> vectors;
};

// [normalized(sub) | normalized(ob)], 2*dim entries. Multi-word labels are
// averaged over their word vectors before normalization.
Vec encode_language(const std::string& sub_label, const std::string& ob_label,
                    const EmbeddingTable& table);

enum class FusionMode { Product, Concat, Average };

FusionMode fusion_mode_from_string(const std::string& s);
std::string to_string(FusionMode mode);

// Maps the three modalities into a shared m-dim space and combines them
// (elementwise product by default), then projects to per-predicate scores.
struct FusionParams {
  Affine map_vis;
  Affine map_lang;
  Affine map_loc;
  Affine concat_proj;  // 3m -> m, allocated only for FusionMode::Concat
  Affine to_pred;      // m -> |V|
  FusionMode mode = FusionMode::Product;

  int m() const { return map_vis.out_dim(); }
  int num_predicates() const { return to_pred.out_dim(); }

  static FusionParams init(int vis_dim, int lang_dim, int m, int num_predicates, FusionMode mode,
                           Rng& rng);
};

std::vector<ParamRef> collect_params(FusionParams& params);

// Combined m-dim relationship representation.
Vec fuse(std::span<const double> vis, std::span<const double> lang, const RelLocEncoding& loc,
         const FusionParams& params);

struct PredicateDistribution {
  Vec probs;
};

struct PrmModel {
  FusionParams fusion;
  GgnnParams ggnn;
  bool use_ggnn = true;
};

std::vector<ParamRef> collect_params(PrmModel& model);

// Softmax over to_pred(fused) plus, when enabled, the graph-propagated
// per-node outputs.
PredicateDistribution predict(std::span<const double> fused, const PredicateGraph& graph,
                              const FusionParams& fusion, const GgnnParams& ggnn, bool use_ggnn);

// Mean negative log probability of the labeled predicate.
double prm_loss(std::span<const PredicateDistribution> probs_batch, std::span<const int> labels);

// Scales every predicate probability by p_sub * p_ob * s_tilde; ranking
// within the pair is unchanged.
Vec infer_scores(double p_sub, double p_ob, const PredicateDistribution& probs, double s_tilde);

// --- training-path forward/backward -------------------------------------

struct PrmForward {
  Vec vis, lang;
  RelLocEncoding loc;
  Vec mapped_vis, mapped_lang, mapped_loc;
  Vec concat_input;  // Concat mode only
  Vec fused;
  Vec r_pred;
  NodeStates initial_states;
  GgnnTrace trace;
  NodeStates final_states;
  Vec r_ggnn;
  Vec logits;
  Vec log_probs;
  Vec probs;
};

PrmForward prm_forward(std::span<const double> vis, std::span<const double> lang,
                       const RelLocEncoding& loc, const PrmModel& model,
                       const PredicateGraph& graph);

// Accumulates gradients for d(loss)/d(logits).
void prm_backward(const PrmModel& model, const PredicateGraph& graph, const PrmForward& fwd,
                  const Vec& dlogits, PrmModel& grad);

}  // namespace vrd
