#include "vrd/ggnn.hpp"

#include <cmath>

#include "vrd/errors.hpp"

namespace vrd {

GgnnParams GgnnParams::init(int hidden_dim, int steps, Rng& rng) {
  if (hidden_dim < 1) throw ConfigError("ggnn hidden dimension must be at least 1");
  if (steps < 1) throw ConfigError("ggnn step count must be at least 1");
  GgnnParams p;
  p.hidden_dim = hidden_dim;
  p.steps = steps;
  p.gru.update = Affine::init(hidden_dim, 2 * hidden_dim, rng);
  p.gru.reset = Affine::init(hidden_dim, 2 * hidden_dim, rng);
  p.gru.cand = Affine::init(hidden_dim, 2 * hidden_dim, rng);
  p.msg_bias.assign(hidden_dim, 0.0);
  const double s = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& v : p.msg_bias) v = rng.uniform(-s, s);
  p.output_net = Affine::init(1, hidden_dim + 1, rng);
  return p;
}

std::vector<ParamRef> collect_params(GgnnParams& params) {
  std::vector<ParamRef> refs;
  collect_affine(refs, "gru.update", params.gru.update);
  collect_affine(refs, "gru.reset", params.gru.reset);
  collect_affine(refs, "gru.cand", params.gru.cand);
  refs.push_back({"msg_bias", params.msg_bias.data(), params.msg_bias.size()});
  collect_affine(refs, "output_net", params.output_net);
  return refs;
}

NodeStates init_nodes(std::span<const double> r_pred, int dim) {
  if (dim < 1) throw ConfigError("node state dimension must be at least 1");
  NodeStates s;
  s.nodes = static_cast<int>(r_pred.size());
  s.dim = dim;
  s.h.assign(static_cast<size_t>(s.nodes) * dim, 0.0);
  for (int v = 0; v < s.nodes; ++v) s.h[static_cast<size_t>(v) * dim] = r_pred[v];
  return s;
}

namespace {

// messages[v] = sum_u A[v,u] * h[u] + bias
Vec gather_messages(const NodeStates& states, const PredicateGraph& graph, const Vec& bias) {
  const int n = states.nodes;
  const int d = states.dim;
  Vec msg(static_cast<size_t>(n) * d, 0.0);
  for (int v = 0; v < n; ++v) {
    double* out = msg.data() + static_cast<size_t>(v) * d;
    for (int u = 0; u < n; ++u) {
      const double w = graph.at(v, u);
      if (w == 0.0) continue;
      const double* hu = states.h.data() + static_cast<size_t>(u) * d;
      for (int i = 0; i < d; ++i) out[i] += w * hu[i];
    }
    for (int i = 0; i < d; ++i) out[i] += bias[i];
  }
  return msg;
}

void check_finite(const Vec& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace

static void gru_step(const NodeStates& prev, const Vec& messages, const GgnnParams& params,
                     NodeStates& next, Vec* z_out, Vec* r_out, Vec* c_out) {
  const int n = prev.nodes;
  const int d = prev.dim;
  next = prev;
  Vec cat(2 * d), cat_c(2 * d);
  for (int v = 0; v < n; ++v) {
    const double* hp = prev.h.data() + static_cast<size_t>(v) * d;
    const double* a = messages.data() + static_cast<size_t>(v) * d;
    for (int i = 0; i < d; ++i) cat[i] = hp[i];
    for (int i = 0; i < d; ++i) cat[d + i] = a[i];

    Vec z = params.gru.update.forward(cat);
    Vec r = params.gru.reset.forward(cat);
    for (int i = 0; i < d; ++i) z[i] = sigmoid(z[i]);
    for (int i = 0; i < d; ++i) r[i] = sigmoid(r[i]);

    for (int i = 0; i < d; ++i) cat_c[i] = r[i] * hp[i];
    for (int i = 0; i < d; ++i) cat_c[d + i] = a[i];
    Vec c = params.gru.cand.forward(cat_c);
    for (int i = 0; i < d; ++i) c[i] = std::tanh(c[i]);

    double* hn = next.h.data() + static_cast<size_t>(v) * d;
    for (int i = 0; i < d; ++i) hn[i] = (1.0 - z[i]) * hp[i] + z[i] * c[i];

    if (z_out)
      for (int i = 0; i < d; ++i) {
        (*z_out)[static_cast<size_t>(v) * d + i] = z[i];
        (*r_out)[static_cast<size_t>(v) * d + i] = r[i];
        (*c_out)[static_cast<size_t>(v) * d + i] = c[i];
      }
  }
}

NodeStates propagate_traced(const NodeStates& init, const PredicateGraph& graph,
                            const GgnnParams& params, GgnnTrace& trace) {
  if (graph.size != init.nodes) throw InputError("graph size does not match node states");
  if (init.dim != params.hidden_dim) throw InputError("state dimension does not match parameters");

  const size_t cells = init.h.size();
  trace.states.clear();
  trace.messages.clear();
  trace.z.clear();
  trace.r.clear();
  trace.c.clear();
  trace.states.push_back(init);

  NodeStates current = init;
  for (int t = 0; t < params.steps; ++t) {
    Vec messages = gather_messages(current, graph, params.msg_bias);
    Vec z(cells), r(cells), c(cells);
    NodeStates next;
    gru_step(current, messages, params, next, &z, &r, &c);
    check_finite(next.h, "node state");
    trace.messages.push_back(std::move(messages));
    trace.z.push_back(std::move(z));
    trace.r.push_back(std::move(r));
    trace.c.push_back(std::move(c));
    current = std::move(next);
    trace.states.push_back(current);
  }
  return current;
}

NodeStates propagate(const NodeStates& init, const PredicateGraph& graph, const GgnnParams& params) {
  GgnnTrace trace;
  return propagate_traced(init, graph, params, trace);
}

Vec propagate_backward(const GgnnTrace& trace, const PredicateGraph& graph,
                       const GgnnParams& params, const Vec& dh_final, GgnnParams& grad) {
  const int steps = static_cast<int>(trace.messages.size());
  const NodeStates& shape = trace.states.front();
  const int n = shape.nodes;
  const int d = shape.dim;

  Vec dh = dh_final;  // gradient w.r.t. states after the current step
  Vec cat(2 * d), cat_c(2 * d), dcat(2 * d), dz(d), dr(d), dc(d);

  for (int t = steps - 1; t >= 0; --t) {
    const NodeStates& prev = trace.states[t];
    const Vec& msg = trace.messages[t];
    const Vec& z = trace.z[t];
    const Vec& r = trace.r[t];
    const Vec& c = trace.c[t];

    Vec dh_prev(static_cast<size_t>(n) * d, 0.0);
    Vec dmsg(static_cast<size_t>(n) * d, 0.0);

    for (int v = 0; v < n; ++v) {
      const size_t off = static_cast<size_t>(v) * d;
      const double* hp = prev.h.data() + off;
      const double* av = msg.data() + off;
      const double* zv = z.data() + off;
      const double* rv = r.data() + off;
      const double* cv = c.data() + off;
      const double* dhv = dh.data() + off;
      double* dhp = dh_prev.data() + off;
      double* dav = dmsg.data() + off;

      for (int i = 0; i < d; ++i) {
        dz[i] = dhv[i] * (cv[i] - hp[i]) * zv[i] * (1.0 - zv[i]);
        dc[i] = dhv[i] * zv[i] * (1.0 - cv[i] * cv[i]);
        dhp[i] += dhv[i] * (1.0 - zv[i]);
      }

      // candidate layer over [r*h | a]
      for (int i = 0; i < d; ++i) cat_c[i] = rv[i] * hp[i];
      for (int i = 0; i < d; ++i) cat_c[d + i] = av[i];
      std::fill(dcat.begin(), dcat.end(), 0.0);
      params.gru.cand.backward(cat_c, dc, grad.gru.cand, dcat);
      for (int i = 0; i < d; ++i) {
        const double drh = dcat[i];
        dr[i] = drh * hp[i] * rv[i] * (1.0 - rv[i]);
        dhp[i] += drh * rv[i];
        dav[i] += dcat[d + i];
      }

      // gate layers over [h | a]
      for (int i = 0; i < d; ++i) cat[i] = hp[i];
      for (int i = 0; i < d; ++i) cat[d + i] = av[i];
      std::fill(dcat.begin(), dcat.end(), 0.0);
      params.gru.update.backward(cat, dz, grad.gru.update, dcat);
      params.gru.reset.backward(cat, dr, grad.gru.reset, dcat);
      for (int i = 0; i < d; ++i) {
        dhp[i] += dcat[i];
        dav[i] += dcat[d + i];
      }
    }

    // message backward: a_v = sum_u A[v,u] h_u + bias
    for (int v = 0; v < n; ++v) {
      const double* dav = dmsg.data() + static_cast<size_t>(v) * d;
      for (int u = 0; u < n; ++u) {
        const double w = graph.at(v, u);
        if (w == 0.0) continue;
        double* dhu = dh_prev.data() + static_cast<size_t>(u) * d;
        for (int i = 0; i < d; ++i) dhu[i] += w * dav[i];
      }
      for (int i = 0; i < d; ++i) grad.msg_bias[i] += dav[i];
    }

    dh = std::move(dh_prev);
  }
  return dh;
}

Vec graph_output(const NodeStates& states, std::span<const double> r_pred,
                 const GgnnParams& params) {
  if (static_cast<int>(r_pred.size()) != states.nodes)
    throw InputError("node feature length does not match state count");
  if (params.output_net.in_dim() != states.dim + 1)
    throw InputError("output network input dimension mismatch");
  Vec out(states.nodes, 0.0);
  Vec input(states.dim + 1);
  for (int v = 0; v < states.nodes; ++v) {
    const auto hv = states.row(v);
    for (int i = 0; i < states.dim; ++i) input[i] = hv[i];
    input[states.dim] = r_pred[v];
    out[v] = params.output_net.forward(input)[0];
  }
  return out;
}

void graph_output_backward(const NodeStates& states, std::span<const double> r_pred,
                           const GgnnParams& params, std::span<const double> dout,
                           GgnnParams& grad, Vec& dh, Vec& dr_pred) {
  const int d = states.dim;
  Vec input(d + 1), dinput(d + 1);
  for (int v = 0; v < states.nodes; ++v) {
    const auto hv = states.row(v);
    for (int i = 0; i < d; ++i) input[i] = hv[i];
    input[d] = r_pred[v];
    std::fill(dinput.begin(), dinput.end(), 0.0);
    const double dov[1] = {dout[v]};
    params.output_net.backward(input, dov, grad.output_net, dinput);
    for (int i = 0; i < d; ++i) dh[static_cast<size_t>(v) * d + i] += dinput[i];
    dr_pred[v] += dinput[d];
  }
}

}  // namespace vrd
