#pragma once

#include <span>
#include <vector>

#include "vrd/anchor_graph.hpp"
#include "vrd/linalg.hpp"

namespace vrd {

// Gated recurrent unit over the concatenation [hidden | message]; logistic
// gates, tanh candidate, new state (1-z)*h + z*c.
struct Gru {
  Affine update;
  Affine reset;
  Affine cand;

  int dim() const { return update.out_dim(); }
};

struct GgnnParams {
  Gru gru;
  Vec msg_bias;       // shared message bias, length hidden_dim
  Affine output_net;  // (hidden_dim + 1) -> 1
  int steps = 1;
  int hidden_dim = 1;

  static GgnnParams init(int hidden_dim, int steps, Rng& rng);
};

std::vector<ParamRef> collect_params(GgnnParams& params);

struct NodeStates {
  int nodes = 0;
  int dim = 0;
  Vec h;  // nodes x dim, row-major

  std::span<double> row(int v) { return {h.data() + static_cast<size_t>(v) * dim, static_cast<size_t>(dim)}; }
  std::span<const double> row(int v) const {
    return {h.data() + static_cast<size_t>(v) * dim, static_cast<size_t>(dim)};
  }
};

// Row v starts as [r_pred[v], 0, ..., 0].
NodeStates init_nodes(std::span<const double> r_pred, int dim);

// Per-step intermediates kept when a backward pass will follow.
struct GgnnTrace {
  std::vector<NodeStates> states;  // steps + 1 entries, index 0 = input
  std::vector<Vec> messages;       // per step, nodes x dim
  std::vector<Vec> z, r, c;        // gate activations per step
};

// Runs exactly params.steps rounds of message passing + GRU update over the
// row-normalized adjacency.
NodeStates propagate(const NodeStates& init, const PredicateGraph& graph, const GgnnParams& params);
NodeStates propagate_traced(const NodeStates& init, const PredicateGraph& graph,
                            const GgnnParams& params, GgnnTrace& trace);

// Accumulates parameter gradients for d(loss)/d(final states) and returns
// d(loss)/d(initial states).
Vec propagate_backward(const GgnnTrace& trace, const PredicateGraph& graph,
                       const GgnnParams& params, const Vec& dh_final, GgnnParams& grad);

// Per-node scalar: output_net([h_v | r_pred[v]]).
Vec graph_output(const NodeStates& states, std::span<const double> r_pred,
                 const GgnnParams& params);

// Accumulates output-net gradients; adds state gradients into dh (nodes x
// dim) and node-feature gradients into dr_pred.
void graph_output_backward(const NodeStates& states, std::span<const double> r_pred,
                           const GgnnParams& params, std::span<const double> dout,
                           GgnnParams& grad, Vec& dh, Vec& dr_pred);

}  // namespace vrd
