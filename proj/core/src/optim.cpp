#include "tog/optim.hpp"

#include <cmath>

#include "tog/errors.hpp"

namespace tog::nn {

double lr_at(const LrSchedule& schedule, std::size_t step) {
  const double k = static_cast<double>(step / schedule.decay_step);
  const double lr = schedule.base_lr * std::pow(schedule.decay, k);
  return std::max(schedule.clip, lr);
}

Adam::Adam(std::vector<Value> params, AdamConfig config) : params_(std::move(params)), config_(config) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    if (!p.requires_grad()) throw InvalidInput("Adam: parameter without gradient tracking");
    m_.push_back(Tensor::zeros(p.shape()));
    v_.push_back(Tensor::zeros(p.shape()));
  }
}

void Adam::step(double lr) {
  ++step_;
  const double t = static_cast<double>(step_);
  const double bc1 = 1.0 - std::pow(config_.beta1, t);
  const double bc2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto node = params_[i].node();
    if (!node->grad_ready) throw InvalidInput("Adam: missing gradient; run backward first");
    Tensor& p = node->data;
    const Tensor& g = node->grad;
    Tensor& m = m_[i];
    Tensor& v = v_[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g[j];
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g[j] * g[j];
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      const double decay = config_.weight_decay * p[j];
      p[j] -= lr * (mhat / (std::sqrt(vhat) + config_.eps) + decay);
    }
    if (!p.all_finite()) throw NumericError("Adam: non-finite parameter after update");
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

}  // namespace tog::nn
