#include "medc/trainer/buffer.hpp"

#include <cstring>
#include <stdexcept>

namespace medc::trainer {

TrajectoryBuffer::TrajectoryBuffer(int horizon, int agents, int obs_dim)
    : horizon_(horizon), agents_(agents), obs_dim_(obs_dim) {
  if (horizon < 1 || agents < 1 || obs_dim < 1)
    throw std::invalid_argument("TrajectoryBuffer: extents must be positive");
  obs_.resize(size_t(horizon) * agents * obs_dim);
  actions_.resize(size_t(horizon) * agents);
  logp_.resize(size_t(horizon) * agents);
  values_.resize(size_t(horizon) * agents);
  rewards_.resize(horizon);
  flags_.resize(horizon);
  bootstrap_.assign(agents, 0.0);
}

void TrajectoryBuffer::clear() {
  len_ = 0;
  bootstrap_.assign(agents_, 0.0);
}

void TrajectoryBuffer::push(const std::vector<nn::Tensor>& obs,
                            const std::vector<int>& actions,
                            const std::vector<double>& logp,
                            const std::vector<double>& values, double reward,
                            bool flag) {
  if (full()) throw std::runtime_error("TrajectoryBuffer: push past horizon");
  if (int(obs.size()) != agents_ || int(actions.size()) != agents_ ||
      int(logp.size()) != agents_ || int(values.size()) != agents_)
    throw std::invalid_argument("TrajectoryBuffer: per-agent arity mismatch");
  for (int k = 0; k < agents_; ++k) {
    if (obs[k].size() != obs_dim_)
      throw std::invalid_argument("TrajectoryBuffer: observation size mismatch");
    std::memcpy(obs_.data() + (size_t(len_) * agents_ + k) * obs_dim_,
                obs[k].ptr(), sizeof(double) * obs_dim_);
    actions_[size_t(len_) * agents_ + k] = actions[k];
    logp_[size_t(len_) * agents_ + k] = logp[k];
    values_[size_t(len_) * agents_ + k] = values[k];
  }
  rewards_[len_] = reward;
  flags_[len_] = flag ? 1 : 0;
  ++len_;
}

void TrajectoryBuffer::set_bootstrap(const std::vector<double>& values) {
  if (int(values.size()) != agents_)
    throw std::invalid_argument("TrajectoryBuffer: bootstrap arity mismatch");
  bootstrap_ = values;
}

}  // namespace medc::trainer
