#include "vrd/predicate_recognition.hpp"

#include <cmath>
#include <sstream>

#include "vrd/errors.hpp"

namespace vrd {

namespace {

Vec lookup_label(const std::string& label, const EmbeddingTable& table) {
  std::istringstream in(label);
  std::string word;
  Vec sum(table.dim, 0.0);
  int words = 0;
  while (in >> word) {
    const auto it = table.vectors.find(word);
    if (it == table.vectors.end())
      throw LookupError("no embedding for label \"" + label + "\" (word \"" + word + "\")");
    acc(sum, it->second);
    ++words;
  }
  if (words == 0) throw LookupError("empty label");
  for (double& v : sum) v /= words;
  const double norm = l2_norm(sum);
  if (norm == 0.0) throw NumericError("zero embedding vector for label \"" + label + "\"");
  for (double& v : sum) v /= norm;
  return sum;
}

void softmax_from_logits(const Vec& logits, Vec& log_probs, Vec& probs) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  const double log_sum = mx + std::log(sum);
  log_probs.resize(logits.size());
  probs.resize(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    log_probs[i] = logits[i] - log_sum;
    probs[i] = std::exp(log_probs[i]);
  }
}

}  // namespace

Vec encode_language(const std::string& sub_label, const std::string& ob_label,
                    const EmbeddingTable& table) {
  const Vec sub = lookup_label(sub_label, table);
  const Vec ob = lookup_label(ob_label, table);
  Vec out;
  out.reserve(sub.size() + ob.size());
  out.insert(out.end(), sub.begin(), sub.end());
  out.insert(out.end(), ob.begin(), ob.end());
  return out;
}

FusionMode fusion_mode_from_string(const std::string& s) {
  if (s == "product") return FusionMode::Product;
  if (s == "concat") return FusionMode::Concat;
  if (s == "average") return FusionMode::Average;
  throw ConfigError("unknown fusion mode \"" + s + "\"");
}

std::string to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::Product: return "product";
    case FusionMode::Concat: return "concat";
    case FusionMode::Average: return "average";
  }
  return "product";
}

FusionParams FusionParams::init(int vis_dim, int lang_dim, int m, int num_predicates,
                                FusionMode mode, Rng& rng) {
  FusionParams p;
  p.mode = mode;
  p.map_vis = Affine::init(m, vis_dim, rng);
  p.map_lang = Affine::init(m, lang_dim, rng);
  p.map_loc = Affine::init(m, 14, rng);
  if (mode == FusionMode::Concat) p.concat_proj = Affine::init(m, 3 * m, rng);
  p.to_pred = Affine::init(num_predicates, m, rng);
  return p;
}

std::vector<ParamRef> collect_params(FusionParams& params) {
  std::vector<ParamRef> refs;
  collect_affine(refs, "map_vis", params.map_vis);
  collect_affine(refs, "map_lang", params.map_lang);
  collect_affine(refs, "map_loc", params.map_loc);
  if (params.mode == FusionMode::Concat) collect_affine(refs, "concat_proj", params.concat_proj);
  collect_affine(refs, "to_pred", params.to_pred);
  return refs;
}

std::vector<ParamRef> collect_params(PrmModel& model) {
  std::vector<ParamRef> refs = collect_params(model.fusion);
  if (model.use_ggnn) {
    for (ParamRef& r : collect_params(model.ggnn)) {
      r.name = "ggnn." + r.name;
      refs.push_back(r);
    }
  }
  return refs;
}

namespace {

Vec combine_factors(const Vec& mv, const Vec& ml, const Vec& mc, const FusionParams& params,
                    Vec* concat_input) {
  const int m = params.m();
  Vec fused(m, 0.0);
  switch (params.mode) {
    case FusionMode::Product:
      for (int i = 0; i < m; ++i) fused[i] = mv[i] * ml[i] * mc[i];
      break;
    case FusionMode::Average:
      for (int i = 0; i < m; ++i) fused[i] = (mv[i] + ml[i] + mc[i]) / 3.0;
      break;
    case FusionMode::Concat: {
      Vec cat;
      cat.reserve(3 * m);
      cat.insert(cat.end(), mv.begin(), mv.end());
      cat.insert(cat.end(), ml.begin(), ml.end());
      cat.insert(cat.end(), mc.begin(), mc.end());
      fused = params.concat_proj.forward(cat);
      if (concat_input) *concat_input = std::move(cat);
      break;
    }
  }
  return fused;
}

}  // namespace

Vec fuse(std::span<const double> vis, std::span<const double> lang, const RelLocEncoding& loc,
         const FusionParams& params) {
  if (static_cast<int>(vis.size()) != params.map_vis.in_dim())
    throw InputError("visual feature dimension mismatch");
  if (static_cast<int>(lang.size()) != params.map_lang.in_dim())
    throw InputError("language encoding dimension mismatch");
  const Vec mv = params.map_vis.forward(vis);
  const Vec ml = params.map_lang.forward(lang);
  const Vec mc = params.map_loc.forward(loc.v);
  return combine_factors(mv, ml, mc, params, nullptr);
}

PredicateDistribution predict(std::span<const double> fused, const PredicateGraph& graph,
                              const FusionParams& fusion, const GgnnParams& ggnn, bool use_ggnn) {
  Vec r_pred = fusion.to_pred.forward(fused);
  Vec logits = r_pred;
  if (use_ggnn) {
    const NodeStates initial = init_nodes(r_pred, ggnn.hidden_dim);
    const NodeStates final_states = propagate(initial, graph, ggnn);
    const Vec r_ggnn = graph_output(final_states, r_pred, ggnn);
    for (size_t i = 0; i < logits.size(); ++i) logits[i] += r_ggnn[i];
  }
  for (double v : logits)
    if (!std::isfinite(v)) throw NumericError("non-finite predicate logits");
  PredicateDistribution dist;
  Vec log_probs;
  softmax_from_logits(logits, log_probs, dist.probs);
  return dist;
}

double prm_loss(std::span<const PredicateDistribution> probs_batch, std::span<const int> labels) {
  if (probs_batch.empty()) throw ConfigError("empty predicate batch");
  if (probs_batch.size() != labels.size()) throw InputError("batch/label length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < probs_batch.size(); ++i) {
    const Vec& p = probs_batch[i].probs;
    const int label = labels[i];
    if (label < 0 || label >= static_cast<int>(p.size()))
      throw InputError("predicate label out of range");
    if (!(p[label] > 0.0)) throw NumericError("zero probability at labeled predicate");
    sum += -std::log(p[label]);
  }
  return sum / static_cast<double>(probs_batch.size());
}

Vec infer_scores(double p_sub, double p_ob, const PredicateDistribution& probs, double s_tilde) {
  if (!(p_sub > 0.0 && p_sub <= 1.0) || !(p_ob > 0.0 && p_ob <= 1.0) ||
      !(s_tilde > 0.0 && s_tilde <= 1.0))
    throw InputError("inference score factors must lie in (0,1]");
  const double scale = p_sub * p_ob * s_tilde;
  Vec out = probs.probs;
  for (double& v : out) v *= scale;
  return out;
}

PrmForward prm_forward(std::span<const double> vis, std::span<const double> lang,
                       const RelLocEncoding& loc, const PrmModel& model,
                       const PredicateGraph& graph) {
  PrmForward fwd;
  fwd.vis.assign(vis.begin(), vis.end());
  fwd.lang.assign(lang.begin(), lang.end());
  fwd.loc = loc;
  fwd.mapped_vis = model.fusion.map_vis.forward(vis);
  fwd.mapped_lang = model.fusion.map_lang.forward(lang);
  fwd.mapped_loc = model.fusion.map_loc.forward(loc.v);
  fwd.fused =
      combine_factors(fwd.mapped_vis, fwd.mapped_lang, fwd.mapped_loc, model.fusion, &fwd.concat_input);
  fwd.r_pred = model.fusion.to_pred.forward(fwd.fused);
  fwd.logits = fwd.r_pred;
  if (model.use_ggnn) {
    fwd.initial_states = init_nodes(fwd.r_pred, model.ggnn.hidden_dim);
    fwd.final_states = propagate_traced(fwd.initial_states, graph, model.ggnn, fwd.trace);
    fwd.r_ggnn = graph_output(fwd.final_states, fwd.r_pred, model.ggnn);
    for (size_t i = 0; i < fwd.logits.size(); ++i) fwd.logits[i] += fwd.r_ggnn[i];
  }
  softmax_from_logits(fwd.logits, fwd.log_probs, fwd.probs);
  return fwd;
}

void prm_backward(const PrmModel& model, const PredicateGraph& graph, const PrmForward& fwd,
                  const Vec& dlogits, PrmModel& grad) {
  const int num_pred = model.fusion.num_predicates();
  Vec dr_pred = dlogits;  // direct path into the logits

  if (model.use_ggnn) {
    const int d = model.ggnn.hidden_dim;
    Vec dh(static_cast<size_t>(num_pred) * d, 0.0);
    graph_output_backward(fwd.final_states, fwd.r_pred, model.ggnn, dlogits, grad.ggnn, dh,
                          dr_pred);
    const Vec dh0 = propagate_backward(fwd.trace, graph, model.ggnn, dh, grad.ggnn);
    for (int v = 0; v < num_pred; ++v) dr_pred[v] += dh0[static_cast<size_t>(v) * d];
  }

  Vec dfused(model.fusion.m(), 0.0);
  model.fusion.to_pred.backward(fwd.fused, dr_pred, grad.fusion.to_pred, dfused);

  const int m = model.fusion.m();
  Vec dmv(m, 0.0), dml(m, 0.0), dmc(m, 0.0);
  switch (model.fusion.mode) {
    case FusionMode::Product:
      for (int i = 0; i < m; ++i) {
        dmv[i] = dfused[i] * fwd.mapped_lang[i] * fwd.mapped_loc[i];
        dml[i] = dfused[i] * fwd.mapped_vis[i] * fwd.mapped_loc[i];
        dmc[i] = dfused[i] * fwd.mapped_vis[i] * fwd.mapped_lang[i];
      }
      break;
    case FusionMode::Average:
      for (int i = 0; i < m; ++i) {
        dmv[i] = dfused[i] / 3.0;
        dml[i] = dfused[i] / 3.0;
        dmc[i] = dfused[i] / 3.0;
      }
      break;
    case FusionMode::Concat: {
      Vec dcat(3 * m, 0.0);
      model.fusion.concat_proj.backward(fwd.concat_input, dfused, grad.fusion.concat_proj, dcat);
      for (int i = 0; i < m; ++i) {
        dmv[i] = dcat[i];
        dml[i] = dcat[m + i];
        dmc[i] = dcat[2 * m + i];
      }
      break;
    }
  }

  model.fusion.map_vis.backward(fwd.vis, dmv, grad.fusion.map_vis);
  model.fusion.map_lang.backward(fwd.lang, dml, grad.fusion.map_lang);
  model.fusion.map_loc.backward(fwd.loc.v, dmc, grad.fusion.map_loc);
}

}  // namespace vrd
