#include <algorithm>
#include <stdexcept>

#include "medc/envs/env.hpp"

namespace medc::envs {

namespace {

class TargetLocalizationEnv final : public Environment {
 public:
  explicit TargetLocalizationEnv(const EnvConfig& cfg) : Environment(cfg) {
    if (cfg.walls < 0) throw std::invalid_argument("walls must be non-negative");
    const int total = cfg.grid_h * cfg.grid_w;
    // one free cell for the target plus at least one distinct cell for agents
    if (cfg.walls > total - 2)
      throw std::invalid_argument(
          "infeasible config: " + std::to_string(cfg.walls) + " walls leave no room "
          "for target and agents on a " + std::to_string(cfg.grid_h) + "x" +
          std::to_string(cfg.grid_w) + " grid");
  }

 private:
  void do_reset() override {
    walls_ = WallMap(cfg_.grid_h, cfg_.grid_w);
    const int total = cfg_.grid_h * cfg_.grid_w;
    // walls on distinct cells (partial Fisher-Yates over cell indices)
    std::vector<int> cells(total);
    for (int i = 0; i < total; ++i) cells[i] = i;
    for (int i = 0; i < cfg_.walls; ++i) {
      const int j = i + rng_.uniform_int(total - i);
      std::swap(cells[i], cells[j]);
      walls_.set(cells[i] / cfg_.grid_w, cells[i] % cfg_.grid_w, true);
    }
    for (int k = 0; k < cfg_.agents; ++k) agents_[k] = random_free_cell();
    do {
      target_ = random_free_cell();
    } while (std::find(agents_.begin(), agents_.end(), target_) != agents_.end());

    readings_.assign(size_t(total), 0.0);
    visits_.assign(size_t(total), 0);
    for (const Cell& a : agents_) sense_and_visit(a);
  }

  void do_step(const std::vector<int>& actions, StepResult& out) override {
    const std::vector<Cell> prev = agents_;
    for (int k = 0; k < cfg_.agents; ++k) move_agent(k, actions[k]);
    for (const Cell& a : agents_) sense_and_visit(a);

    const bool localized =
        std::find(agents_.begin(), agents_.end(), target_) != agents_.end();
    if (cfg_.shaped_reward)
      out.reward += shaped_reward(prev, agents_, target_, walls_, cfg_.rewards.shaping);
    if (localized) {
      out.reward += cfg_.rewards.terminal;
      out.done = true;
    }
    out.info["localized"] = localized ? 1.0 : 0.0;
  }

  std::vector<nn::Tensor> build_obs() const override {
    const int h = cfg_.grid_h, w = cfg_.grid_w, plane = h * w;
    int max_visit = 1;
    for (int v : visits_) max_visit = std::max(max_visit, v);

    std::vector<nn::Tensor> obs;
    obs.reserve(cfg_.agents);
    const double team_norm = std::max(1, cfg_.agents - 1);
    for (int k = 0; k < cfg_.agents; ++k) {
      nn::Tensor t({kObsChannels, h, w});
      double* own = t.ptr();
      double* team = own + plane;
      double* read = team + plane;
      double* visit = read + plane;
      double* wall = visit + plane;
      own[agents_[k].r * w + agents_[k].c] = 1.0;
      for (int j = 0; j < cfg_.agents; ++j)
        if (j != k) team[agents_[j].r * w + agents_[j].c] += 1.0 / team_norm;
      for (int i = 0; i < plane; ++i) {
        read[i] = readings_[i];
        visit[i] = double(visits_[i]) / max_visit;
        wall[i] = walls_.cells[i] ? 1.0 : 0.0;
      }
      obs.push_back(std::move(t));
    }
    return obs;
  }

  void sense_and_visit(Cell c) {
    const int i = c.r * cfg_.grid_w + c.c;
    visits_[i] += 1;
    readings_[i] = sensor_field(walls_, target_, c, cfg_.sensor) /
                   cfg_.sensor.source_strength;
  }

  Cell target_;
  std::vector<double> readings_;  // latest reading per visited cell, in [0,1]
  std::vector<int> visits_;
};

}  // namespace

std::unique_ptr<Environment> make_target_localization_env(const EnvConfig& cfg) {
  return std::make_unique<TargetLocalizationEnv>(cfg);
}

}  // namespace medc::envs
