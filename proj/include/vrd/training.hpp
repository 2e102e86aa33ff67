#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vrd/pair_rating.hpp"
#include "vrd/predicate_recognition.hpp"

namespace vrd {

struct TrainConfig {
  double lambda = 1.0;  // rating-loss weight
  double learning_rate = 0.01;
  double momentum = 0.9;
  int epochs = 1;
  int batch_size = 128;
  uint64_t seed = 0;
};

struct OrmSample {
  Vec input;  // assembled pair representation
  int label = 0;
};

struct PrmSample {
  Vec vis;
  Vec lang;
  RelLocEncoding loc;
  int label = 0;
};

struct LossCurve {
  std::vector<double> per_epoch;
};

template <class Model>
Model zeros_like(Model model) {
  for (ParamRef& ref : collect_params(model)) std::fill(ref.data, ref.data + ref.size, 0.0);
  return model;
}

// Momentum SGD update; `velocity` mirrors the parameter layout.
void sgd_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
              const std::vector<ParamRef>& velocity, double learning_rate, double momentum);

// Mini-batch descent on the weighted rating loss. The dataset must contain
// both classes. Deterministic for a fixed config seed; per-sample gradients
// are accumulated in fixed block order so thread count does not change the
// result.
LossCurve train_stage1(std::span<const OrmSample> samples, OrmHead& head, const TrainConfig& cfg);

// Mini-batch descent on the predicate cross-entropy; optimizes fusion and
// graph parameters only.
LossCurve train_stage2(std::span<const PrmSample> samples, const PredicateGraph& graph,
                       PrmModel& model, const TrainConfig& cfg);

struct GradCheckReport {
  double max_rel_err = 0.0;
  bool pass = false;
  std::string worst_param;
};

// Central finite differences against analytic gradients, element by
// element. `grad_fn` must refresh the gradient buffers for the current
// parameter values; `loss_fn` must evaluate the objective.
GradCheckReport grad_check(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
                           const std::function<double()>& loss_fn,
                           const std::function<void()>& grad_fn, double step, double tol);

// Self-contained randomized instances used by the verification command.
GradCheckReport grad_check_orm(uint64_t seed, double step, double tol);
GradCheckReport grad_check_ggnn(uint64_t seed, double step, double tol);
GradCheckReport grad_check_prm(uint64_t seed, double step, double tol);

}  // namespace vrd
