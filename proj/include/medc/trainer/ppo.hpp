#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "medc/common.hpp"
#include "medc/envs/env.hpp"
#include "medc/nn/loss.hpp"
#include "medc/nn/network.hpp"
#include "medc/nn/optimizer.hpp"
#include "medc/trainer/buffer.hpp"
#include "medc/trainer/gae.hpp"

namespace medc::trainer {

struct PpoConfig {
  double learning_rate = 3e-4;
  double clip_eps = 0.2;
  double entropy_coef = 0.01;
  double gamma = 0.99;
  double lambda = 0.95;
  int horizon = 4000;
  int epochs = 20;
  int minibatch = 500;
  double value_coef = 0.5;
  int64_t total_steps = 500000;
  int64_t eval_every = 40000;
  int eval_steps = 4000;
  int checkpoint_every = 0;  // updates between checkpoints; 0 = final only
  uint64_t seed = 0;

  void validate() const;
};

struct EvalReport {
  int64_t step = 0;
  double mean_episode_length = 0.0;
  double mean_return = 0.0;
  int episodes = 0;
};

struct UpdateStats {
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
  double entropy = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  std::vector<double> clip_fraction_per_epoch;
};

// Per-horizon collection audit; expert-gating counters are filled by the
// MEDC hook and stay zero for plain rollouts.
struct CollectStats {
  int64_t episodes = 0;
  int64_t medc_episodes = 0;
  int64_t medc_steps = 0;           // agent-steps inside expert-guided episodes
  int64_t top_pass_steps = 0;       // of those, the top-ranked action passed Q
  int64_t executed_expert_steps = 0;
  int64_t q_violations = 0;         // executed expert actions below Q (must stay 0)
  double min_executed_prob = 1.0;   // lowest own prob among executed expert actions

  void merge(const CollectStats& o);
};

// Action-selection extension point for expert-guided collection. The default
// path samples from the agent's own distribution.
class ActionHook {
 public:
  virtual ~ActionHook() = default;
  virtual void episode_start() {}
  virtual int choose_action(int agent, const nn::ActionDistribution& own,
                            const nn::Tensor& obs, Rng& action_rng) = 0;
  virtual void drain(CollectStats& stats) {}
};

// Rollout driver; keeps episode state alive across horizon boundaries.
class Collector {
 public:
  Collector(envs::Environment& env, const nn::NetworkSpec& spec,
            uint64_t action_seed);

  CollectStats collect(const nn::ParamSet& params, TrajectoryBuffer& buffer,
                       ActionHook* hook);

 private:
  envs::Environment& env_;
  const nn::NetworkSpec& spec_;
  Rng rng_;
  std::vector<nn::Tensor> obs_;
  bool need_reset_ = true;
};

UpdateStats ppo_update(const nn::NetworkSpec& spec, nn::ParamSet& params,
                       nn::OptimizerState& opt, const TrajectoryBuffer& buffer,
                       const PpoConfig& cfg, Rng& shuffle_rng);

EvalReport evaluate_greedy(envs::Environment& env, const nn::NetworkSpec& spec,
                           const nn::ParamSet& params, int steps);

struct TrainSinks {
  std::function<void(const EvalReport&)> on_eval;
  std::function<void(int64_t step, const CollectStats&, const UpdateStats&)> on_update;
  std::function<void(int64_t step, const nn::ParamSet&)> on_checkpoint;
};

struct TrainResult {
  nn::ParamSet params;
  std::vector<EvalReport> reports;
};

// Full training loop: alternate horizon collection and clipped-surrogate
// updates, with periodic greedy evaluation on fresh env seeds.
TrainResult train(const envs::EnvConfig& env_cfg, const PpoConfig& cfg,
                  ActionHook* hook, const TrainSinks& sinks);

}  // namespace medc::trainer
