#pragma once

#include <cstddef>
#include <vector>

#include "tog/autodiff.hpp"

namespace tog::nn {

// Step-decay schedule: lr = max(clip, base * decay^floor(step / decay_step)).
struct LrSchedule {
  double base_lr = 1e-4;
  double decay = 0.7;
  std::size_t decay_step = 20000;
  double clip = 1e-5;
};

double lr_at(const LrSchedule& schedule, std::size_t step);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

// Adam with per-parameter first/second moments and decoupled weight decay
// (lr * weight_decay * param subtracted alongside the moment update).
class Adam {
 public:
  Adam(std::vector<Value> params, AdamConfig config);

  // Applies one update using the gradients currently stored on the
  // parameters, then increments the step count.
  void step(double lr);
  void zero_grad();

  std::size_t step_count() const { return step_; }
  void set_step_count(std::size_t step) { step_ = step; }
  const std::vector<Value>& params() const { return params_; }

 private:
  std::vector<Value> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamConfig config_;
  std::size_t step_ = 0;
};

}  // namespace tog::nn
