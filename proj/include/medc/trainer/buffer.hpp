#pragma once

#include <cstdint>
#include <vector>

#include "medc/nn/tensor.hpp"

namespace medc::trainer {

// One horizon of on-policy experience: `horizon` timesteps of `agents`
// parallel streams sharing rewards and termination flags.
class TrajectoryBuffer {
 public:
  TrajectoryBuffer(int horizon, int agents, int obs_dim);

  void clear();
  bool empty() const { return len_ == 0; }
  bool full() const { return len_ == horizon_; }
  int len() const { return len_; }
  int horizon() const { return horizon_; }
  int agents() const { return agents_; }
  int obs_dim() const { return obs_dim_; }

  void push(const std::vector<nn::Tensor>& obs, const std::vector<int>& actions,
            const std::vector<double>& logp, const std::vector<double>& values,
            double reward, bool flag);
  void set_bootstrap(const std::vector<double>& values);

  const double* obs_at(int t, int k) const {
    return obs_.data() + (size_t(t) * agents_ + k) * obs_dim_;
  }
  int action_at(int t, int k) const { return actions_[size_t(t) * agents_ + k]; }
  double logp_at(int t, int k) const { return logp_[size_t(t) * agents_ + k]; }
  double value_at(int t, int k) const { return values_[size_t(t) * agents_ + k]; }
  double reward_at(int t) const { return rewards_[t]; }
  bool flag_at(int t) const { return flags_[t] != 0; }
  double bootstrap_at(int k) const { return bootstrap_[k]; }

 private:
  int horizon_, agents_, obs_dim_;
  int len_ = 0;
  std::vector<double> obs_;
  std::vector<int> actions_;
  std::vector<double> logp_;
  std::vector<double> values_;
  std::vector<double> rewards_;
  std::vector<uint8_t> flags_;
  std::vector<double> bootstrap_;
};

}  // namespace medc::trainer
