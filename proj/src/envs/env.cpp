#include "medc/envs/env.hpp"

#include <cmath>
#include <stdexcept>

namespace medc::envs {

std::string kind_name(EnvKind kind) {
  switch (kind) {
    case EnvKind::target_localization: return "target_localization";
    case EnvKind::fleet: return "fleet";
    case EnvKind::maze: return "maze";
  }
  return "?";
}

EnvKind kind_from_name(const std::string& name) {
  if (name == "target_localization") return EnvKind::target_localization;
  if (name == "fleet") return EnvKind::fleet;
  if (name == "maze") return EnvKind::maze;
  throw std::invalid_argument("unknown environment kind '" + name + "'");
}

std::vector<nn::Tensor> Environment::reset() {
  episode_step_ = 0;
  active_ = true;
  do_reset();
  return build_obs();
}

StepResult Environment::step(const std::vector<int>& actions) {
  if (!active_)
    throw std::runtime_error("step: episode is finished; call reset() first");
  if (static_cast<int>(actions.size()) != cfg_.agents)
    throw std::invalid_argument("step: expected " + std::to_string(cfg_.agents) +
                                " actions, got " + std::to_string(actions.size()));
  for (int a : actions)
    if (a < 0 || a >= kNumActions)
      throw std::invalid_argument("step: action index " + std::to_string(a) +
                                  " out of range [0, " +
                                  std::to_string(kNumActions) + ")");
  StepResult out;
  ++episode_step_;
  do_step(actions, out);
  if (!out.done && episode_step_ >= cfg_.max_episode_len) out.done = true;
  if (out.done) active_ = false;
  out.obs = build_obs();
  out.info["episode_length"] = episode_step_;
  return out;
}

void Environment::move_agent(int idx, int action) {
  const int nr = agents_[idx].r + kDr[action];
  const int nc = agents_[idx].c + kDc[action];
  if (walls_.in_bounds(nr, nc) && !walls_.at(nr, nc)) agents_[idx] = {nr, nc};
}

Cell Environment::random_free_cell() {
  const int total = cfg_.grid_h * cfg_.grid_w;
  for (int tries = 0; tries < 64 * total; ++tries) {
    const int i = rng_.uniform_int(total);
    const int r = i / cfg_.grid_w, c = i % cfg_.grid_w;
    if (!walls_.at(r, c)) return {r, c};
  }
  throw std::runtime_error("random_free_cell: no free cell found");
}

double sensor_field(const WallMap& walls, Cell target, Cell query,
                    const SensorModel& model) {
  const double dr = target.r - query.r, dc = target.c - query.c;
  const double d2 = dr * dr + dc * dc;
  const int crossed = walls_crossed(walls, target, query);
  return model.source_strength / (1.0 + d2) *
         std::pow(model.wall_attenuation, crossed);
}

double shaped_reward(const std::vector<Cell>& prev_positions,
                     const std::vector<Cell>& new_positions, Cell target,
                     const WallMap& walls, double beta) {
  if (prev_positions.size() != new_positions.size())
    throw std::invalid_argument("shaped_reward: position count mismatch");
  double bonus = 0.0;
  for (size_t i = 0; i < prev_positions.size(); ++i) {
    const int before = bfs_distance(walls, prev_positions[i], target);
    const int after = bfs_distance(walls, new_positions[i], target);
    if (before != kUnreachable && after != kUnreachable && after < before)
      bonus += beta;
  }
  return bonus;
}

}  // namespace medc::envs
