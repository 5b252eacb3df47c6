#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "medc/common.hpp"
#include "medc/envs/grid.hpp"
#include "medc/nn/tensor.hpp"

namespace medc::envs {

enum class EnvKind { target_localization, fleet, maze };

std::string kind_name(EnvKind kind);
EnvKind kind_from_name(const std::string& name);

struct RewardConstants {
  double terminal = 1.0;     // task completed
  double pickup = 0.1;       // fleet: customer boarded
  double clean_cell = 0.01;  // maze: per newly cleaned cell
  double step_cost = -0.005; // fleet/maze: per step time cost
  double shaping = 0.01;     // per agent moving BFS-closer (shaped mode)
};

struct SensorModel {
  double source_strength = 100.0;  // reading at the target cell
  double wall_attenuation = 0.5;   // multiplicative factor per crossed wall
};

struct EnvConfig {
  EnvKind kind = EnvKind::target_localization;
  int grid_h = 10;
  int grid_w = 10;
  int agents = 1;    // y in AyWz
  int walls = 0;     // z in AyWz (target localization)
  int customers = 8; // fleet
  int capacity = 2;  // fleet, per vehicle
  int max_episode_len = 100;
  bool shaped_reward = false;  // BFS distance shaping (target localization)
  RewardConstants rewards;
  SensorModel sensor;
  uint64_t seed = 0;
};

// Every environment exposes C=5 equal-sized 2D observation maps per agent.
inline constexpr int kObsChannels = 5;

struct StepResult {
  std::vector<nn::Tensor> obs;  // per agent, [5, H, W]
  double reward = 0.0;          // shared team reward
  bool done = false;
  std::map<std::string, double> info;
};

class Environment {
 public:
  virtual ~Environment() = default;

  const EnvConfig& config() const { return cfg_; }
  int num_agents() const { return cfg_.agents; }
  int num_actions() const { return kNumActions; }

  std::vector<nn::Tensor> reset();
  StepResult step(const std::vector<int>& actions);

  bool episode_active() const { return active_; }
  int episode_step() const { return episode_step_; }
  const WallMap& walls() const { return walls_; }
  const std::vector<Cell>& agent_positions() const { return agents_; }

 protected:
  explicit Environment(const EnvConfig& cfg)
      : cfg_(cfg), rng_(cfg.seed), walls_(cfg.grid_h, cfg.grid_w),
        agents_(cfg.agents) {}

  virtual void do_reset() = 0;
  virtual void do_step(const std::vector<int>& actions, StepResult& out) = 0;
  virtual std::vector<nn::Tensor> build_obs() const = 0;

  // Moves one agent, staying in place on wall or off-grid moves.
  void move_agent(int idx, int action);
  Cell random_free_cell();

  EnvConfig cfg_;
  Rng rng_;
  WallMap walls_;
  std::vector<Cell> agents_;
  int episode_step_ = 0;
  bool active_ = false;
};

std::unique_ptr<Environment> make_env(const EnvConfig& cfg);

// Parametric reading model: strength / (1 + d^2) * attenuation^crossed_walls,
// d the Euclidean distance between cell centers.
double sensor_field(const WallMap& walls, Cell target, Cell query,
                    const SensorModel& model);

// Shaping bonus: +beta per agent whose BFS distance to the target strictly
// decreased this step.
double shaped_reward(const std::vector<Cell>& prev_positions,
                     const std::vector<Cell>& new_positions, Cell target,
                     const WallMap& walls, double beta);

// Randomized-DFS maze; all free cells mutually reachable.
WallMap maze_generate(uint64_t seed, int h, int w);

}  // namespace medc::envs
