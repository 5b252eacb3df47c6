#include "medc/trainer/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace medc::trainer {

void PpoConfig::validate() const {
  if (!(clip_eps > 0.0 && clip_eps < 1.0))
    throw std::invalid_argument("PpoConfig: clip_eps must lie in (0,1)");
  if (gamma < 0.0 || gamma > 1.0 || lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("PpoConfig: gamma and lambda must lie in [0,1]");
  if (horizon < 1) throw std::invalid_argument("PpoConfig: horizon must be >= 1");
  if (epochs < 0) throw std::invalid_argument("PpoConfig: epochs must be >= 0");
  if (minibatch < 1) throw std::invalid_argument("PpoConfig: minibatch must be >= 1");
  if (total_steps < 1) throw std::invalid_argument("PpoConfig: total_steps must be >= 1");
  if (eval_every < 1 || eval_steps < 1)
    throw std::invalid_argument("PpoConfig: evaluation cadence must be positive");
}

void CollectStats::merge(const CollectStats& o) {
  episodes += o.episodes;
  medc_episodes += o.medc_episodes;
  medc_steps += o.medc_steps;
  top_pass_steps += o.top_pass_steps;
  executed_expert_steps += o.executed_expert_steps;
  q_violations += o.q_violations;
  min_executed_prob = std::min(min_executed_prob, o.min_executed_prob);
}

Collector::Collector(envs::Environment& env, const nn::NetworkSpec& spec,
                     uint64_t action_seed)
    : env_(env), spec_(spec), rng_(action_seed) {}

CollectStats Collector::collect(const nn::ParamSet& params,
                                TrajectoryBuffer& buffer, ActionHook* hook) {
  if (!buffer.empty())
    throw std::invalid_argument("collect: buffer must be cleared first");
  const int y = env_.num_agents();
  CollectStats stats;
  std::vector<int> actions(y);
  std::vector<double> logps(y), values(y);

  while (!buffer.full()) {
    if (need_reset_) {
      obs_ = env_.reset();
      need_reset_ = false;
      ++stats.episodes;
      if (hook) hook->episode_start();
    }
    for (int k = 0; k < y; ++k) {
      nn::ActionDistribution dist;
      nn::policy_value_forward(spec_, params, obs_[k], &dist, &values[k]);
      const int a = hook ? hook->choose_action(k, dist, obs_[k], rng_)
                         : rng_.categorical(dist.probs);
      actions[k] = a;
      logps[k] = std::log(dist.probs[a]);
    }
    envs::StepResult sr = env_.step(actions);
    buffer.push(obs_, actions, logps, values, sr.reward, sr.done);
    obs_ = std::move(sr.obs);
    if (sr.done) need_reset_ = true;
  }
  if (!buffer.flag_at(buffer.len() - 1)) {
    std::vector<double> boot(y);
    for (int k = 0; k < y; ++k)
      boot[k] = nn::value_forward(spec_, params, obs_[k]);
    buffer.set_bootstrap(boot);
  }
  if (hook) hook->drain(stats);
  return stats;
}

UpdateStats ppo_update(const nn::NetworkSpec& spec, nn::ParamSet& params,
                       nn::OptimizerState& opt, const TrajectoryBuffer& buffer,
                       const PpoConfig& cfg, Rng& shuffle_rng) {
  if (!buffer.full())
    throw std::invalid_argument("ppo_update: buffer not finalized");
  const int T = buffer.len(), y = buffer.agents();
  const int64_t n = int64_t(T) * y;

  // GAE per agent stream; shared rewards/flags, per-agent values.
  std::vector<double> adv(n), ret(n);
  {
    std::vector<double> rewards(T), values(T);
    std::vector<uint8_t> flags(T);
    for (int t = 0; t < T; ++t) {
      rewards[t] = buffer.reward_at(t);
      flags[t] = buffer.flag_at(t) ? 1 : 0;
    }
    for (int k = 0; k < y; ++k) {
      for (int t = 0; t < T; ++t) values[t] = buffer.value_at(t, k);
      GaeResult g = compute_gae(rewards, values, flags, buffer.bootstrap_at(k),
                                cfg.gamma, cfg.lambda);
      for (int t = 0; t < T; ++t) {
        adv[size_t(t) * y + k] = g.advantages[t];
        ret[size_t(t) * y + k] = g.returns[t];
      }
    }
  }

  // Normalize advantages over the whole update batch.
  {
    double mean = 0.0;
    for (double a : adv) mean += a;
    mean /= double(n);
    double var = 0.0;
    for (double a : adv) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / double(n));
    if (sd >= 1e-8)
      for (double& a : adv) a = (a - mean) / sd;
  }

  const int obs_dim = buffer.obs_dim();
  std::vector<int64_t> perm(n);
  std::vector<double> mb_obs;
  std::vector<int> mb_act;
  std::vector<double> mb_logp, mb_adv, mb_ret;

  UpdateStats stats;
  int n_minibatches = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int64_t i = 0; i < n; ++i) perm[i] = i;
    for (int64_t i = n; i > 1; --i)
      std::swap(perm[i - 1], perm[shuffle_rng.uniform_int(int(i))]);

    double epoch_clip = 0.0;
    int epoch_mbs = 0;
    for (int64_t start = 0; start < n; start += cfg.minibatch) {
      const int bn = int(std::min<int64_t>(cfg.minibatch, n - start));
      mb_obs.resize(size_t(bn) * obs_dim);
      mb_act.resize(bn);
      mb_logp.resize(bn);
      mb_adv.resize(bn);
      mb_ret.resize(bn);
      for (int i = 0; i < bn; ++i) {
        const int64_t s = perm[start + i];
        const int t = int(s / y), k = int(s % y);
        std::memcpy(mb_obs.data() + size_t(i) * obs_dim, buffer.obs_at(t, k),
                    sizeof(double) * obs_dim);
        mb_act[i] = buffer.action_at(t, k);
        mb_logp[i] = buffer.logp_at(t, k);
        mb_adv[i] = adv[s];
        mb_ret[i] = ret[s];
      }
      nn::LossNode node = nn::ppo_loss(spec, params, mb_obs.data(), bn,
                                       mb_act.data(), mb_logp.data(),
                                       mb_adv.data(), mb_ret.data(), cfg.clip_eps,
                                       cfg.value_coef, cfg.entropy_coef);
      nn::ParamSet grads = nn::backward(node, params);
      nn::optimizer_step(params, grads, opt);

      const nn::LossComponents& c = node.components;
      stats.mean_ratio += c.mean_ratio;
      stats.clip_fraction += c.clip_fraction;
      stats.entropy += c.entropy;
      stats.policy_loss += c.policy;
      stats.value_loss += c.value;
      epoch_clip += c.clip_fraction;
      ++n_minibatches;
      ++epoch_mbs;
    }
    stats.clip_fraction_per_epoch.push_back(epoch_mbs ? epoch_clip / epoch_mbs : 0.0);
  }
  if (n_minibatches > 0) {
    stats.mean_ratio /= n_minibatches;
    stats.clip_fraction /= n_minibatches;
    stats.entropy /= n_minibatches;
    stats.policy_loss /= n_minibatches;
    stats.value_loss /= n_minibatches;
  }
  return stats;
}

EvalReport evaluate_greedy(envs::Environment& env, const nn::NetworkSpec& spec,
                           const nn::ParamSet& params, int steps) {
  if (steps < 1) throw std::invalid_argument("evaluate_greedy: steps must be >= 1");
  const int y = env.num_agents();
  EvalReport rep;
  std::vector<nn::Tensor> obs = env.reset();
  std::vector<int> actions(y);
  double ep_return = 0.0;
  double sum_len = 0.0, sum_ret = 0.0;
  for (int s = 0; s < steps; ++s) {
    for (int k = 0; k < y; ++k)
      actions[k] = nn::policy_forward(spec, params, obs[k]).argmax();
    envs::StepResult sr = env.step(actions);
    ep_return += sr.reward;
    obs = std::move(sr.obs);
    if (sr.done) {
      ++rep.episodes;
      sum_len += env.episode_step();
      sum_ret += ep_return;
      ep_return = 0.0;
      obs = env.reset();
    }
  }
  if (rep.episodes > 0) {
    rep.mean_episode_length = sum_len / rep.episodes;
    rep.mean_return = sum_ret / rep.episodes;
  } else {
    rep.mean_episode_length = env.config().max_episode_len;
    rep.mean_return = 0.0;
  }
  return rep;
}

TrainResult train(const envs::EnvConfig& env_cfg, const PpoConfig& cfg,
                  ActionHook* hook, const TrainSinks& sinks) {
  cfg.validate();
  envs::EnvConfig train_cfg = env_cfg;
  train_cfg.seed = Rng::mix(cfg.seed, 0x656e76u);  // training env stream
  std::unique_ptr<envs::Environment> env = envs::make_env(train_cfg);

  const nn::NetworkSpec spec = nn::default_spec(
      envs::kObsChannels, env_cfg.grid_h, env_cfg.grid_w, envs::kNumActions);
  nn::ParamSet params = nn::build_network(spec, cfg.seed);
  nn::OptimizerState opt = nn::OptimizerState::init(params, cfg.learning_rate);

  Collector collector(*env, spec, Rng::mix(cfg.seed, 0x616374u));
  Rng shuffle_rng(Rng::mix(cfg.seed, 0x736866u));
  TrajectoryBuffer buffer(cfg.horizon, env_cfg.agents,
                          envs::kObsChannels * env_cfg.grid_h * env_cfg.grid_w);

  TrainResult result;
  int64_t steps_done = 0;
  int64_t next_eval = cfg.eval_every;
  int update_idx = 0;
  while (steps_done < cfg.total_steps) {
    buffer.clear();
    CollectStats cs = collector.collect(params, buffer, hook);
    steps_done += cfg.horizon;
    UpdateStats us = ppo_update(spec, params, opt, buffer, cfg, shuffle_rng);
    ++update_idx;
    if (sinks.on_update) sinks.on_update(steps_done, cs, us);
    if (cfg.checkpoint_every > 0 && update_idx % cfg.checkpoint_every == 0 &&
        sinks.on_checkpoint)
      sinks.on_checkpoint(steps_done, params);

    while (next_eval <= steps_done && next_eval <= cfg.total_steps) {
      envs::EnvConfig eval_cfg = env_cfg;
      eval_cfg.seed = Rng::mix(cfg.seed, Rng::mix(0x65766cu, uint64_t(next_eval)));
      std::unique_ptr<envs::Environment> eval_env = envs::make_env(eval_cfg);
      EvalReport rep = evaluate_greedy(*eval_env, spec, params, cfg.eval_steps);
      rep.step = next_eval;
      result.reports.push_back(rep);
      if (sinks.on_eval) sinks.on_eval(rep);
      next_eval += cfg.eval_every;
    }
  }
  result.params = std::move(params);
  return result;
}

}  // namespace medc::trainer
