#include <algorithm>
#include <stdexcept>

#include "medc/envs/env.hpp"

namespace medc::envs {

WallMap maze_generate(uint64_t seed, int h, int w) {
  if (h < 4 || w < 4) throw std::invalid_argument("maze_generate: grid must be at least 4x4");
  Rng rng(Rng::mix(seed, 0x6d617a65u));
  WallMap walls(h, w);
  for (auto& v : walls.cells) v = 1;

  // Recursive backtracker over the odd-coordinate lattice; carving the wall
  // between visited lattice cells keeps the free region a single tree.
  const int lh = (h - 1) / 2, lw = (w - 1) / 2;  // lattice extents
  auto cell = [&](int lr, int lc) { return Cell{2 * lr + 1, 2 * lc + 1}; };
  std::vector<uint8_t> seen(size_t(lh) * lw, 0);
  std::vector<std::pair<int, int>> stack;
  const int sr = rng.uniform_int(lh), sc = rng.uniform_int(lw);
  stack.emplace_back(sr, sc);
  seen[size_t(sr) * lw + sc] = 1;
  walls.set(cell(sr, sc).r, cell(sr, sc).c, false);
  const int ldr[4] = {-1, 1, 0, 0}, ldc[4] = {0, 0, -1, 1};
  while (!stack.empty()) {
    auto [lr, lc] = stack.back();
    int order[4] = {0, 1, 2, 3};
    for (int i = 4; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_int(i)]);
    bool advanced = false;
    for (int i = 0; i < 4 && !advanced; ++i) {
      const int nr = lr + ldr[order[i]], nc = lc + ldc[order[i]];
      if (nr < 0 || nr >= lh || nc < 0 || nc >= lw) continue;
      if (seen[size_t(nr) * lw + nc]) continue;
      seen[size_t(nr) * lw + nc] = 1;
      const Cell a = cell(lr, lc), b = cell(nr, nc);
      walls.set((a.r + b.r) / 2, (a.c + b.c) / 2, false);
      walls.set(b.r, b.c, false);
      stack.emplace_back(nr, nc);
      advanced = true;
    }
    if (!advanced) stack.pop_back();
  }
  return walls;
}

namespace {

class MazeEnv final : public Environment {
 public:
  explicit MazeEnv(const EnvConfig& cfg) : Environment(cfg) {
    if (cfg.grid_h < 4 || cfg.grid_w < 4)
      throw std::invalid_argument("maze: grid must be at least 4x4");
  }

 private:
  void do_reset() override {
    walls_ = maze_generate(rng_.next(), cfg_.grid_h, cfg_.grid_w);
    const int plane = cfg_.grid_h * cfg_.grid_w;
    dirty_.assign(size_t(plane), 0);
    free_cells_ = 0;
    for (int i = 0; i < plane; ++i)
      if (!walls_.cells[i]) {
        dirty_[i] = 1;
        ++free_cells_;
      }
    visits_.assign(size_t(plane), 0);
    cleaned_ = 0;
    for (int k = 0; k < cfg_.agents; ++k) agents_[k] = random_free_cell();
    for (const Cell& a : agents_) occupy(a);
  }

  void do_step(const std::vector<int>& actions, StepResult& out) override {
    const int before = cleaned_;
    for (int k = 0; k < cfg_.agents; ++k) {
      move_agent(k, actions[k]);
      occupy(agents_[k]);
    }
    const int newly = cleaned_ - before;
    out.reward = cfg_.rewards.step_cost + newly * cfg_.rewards.clean_cell;
    if (cleaned_ == free_cells_) out.done = true;
    out.info["cleaned"] = newly;
    out.info["dirty_left"] = free_cells_ - cleaned_;
  }

  std::vector<nn::Tensor> build_obs() const override {
    const int h = cfg_.grid_h, w = cfg_.grid_w, plane = h * w;
    int max_visit = 1;
    for (int v : visits_) max_visit = std::max(max_visit, v);
    const double team_norm = std::max(1, cfg_.agents - 1);
    std::vector<nn::Tensor> obs;
    obs.reserve(cfg_.agents);
    for (int k = 0; k < cfg_.agents; ++k) {
      nn::Tensor t({kObsChannels, h, w});
      double* own = t.ptr();
      double* team = own + plane;
      double* dirty = team + plane;
      double* wall = dirty + plane;
      double* visit = wall + plane;
      own[agents_[k].r * w + agents_[k].c] = 1.0;
      for (int j = 0; j < cfg_.agents; ++j)
        if (j != k) team[agents_[j].r * w + agents_[j].c] += 1.0 / team_norm;
      for (int i = 0; i < plane; ++i) {
        dirty[i] = dirty_[i] ? 1.0 : 0.0;
        wall[i] = walls_.cells[i] ? 1.0 : 0.0;
        visit[i] = double(visits_[i]) / max_visit;
      }
      obs.push_back(std::move(t));
    }
    return obs;
  }

  void occupy(Cell c) {
    const int i = c.r * cfg_.grid_w + c.c;
    visits_[i] += 1;
    if (dirty_[i]) {
      dirty_[i] = 0;
      ++cleaned_;
    }
  }

  std::vector<uint8_t> dirty_;
  std::vector<int> visits_;
  int free_cells_ = 0;
  int cleaned_ = 0;
};

}  // namespace

std::unique_ptr<Environment> make_maze_env(const EnvConfig& cfg) {
  return std::make_unique<MazeEnv>(cfg);
}

std::unique_ptr<Environment> make_target_localization_env(const EnvConfig& cfg);
std::unique_ptr<Environment> make_fleet_env(const EnvConfig& cfg);

std::unique_ptr<Environment> make_env(const EnvConfig& cfg) {
  if (cfg.grid_h < 4 || cfg.grid_w < 4)
    throw std::invalid_argument("make_env: grid must be at least 4x4");
  if (cfg.agents < 1) throw std::invalid_argument("make_env: need at least one agent");
  if (cfg.max_episode_len < 1)
    throw std::invalid_argument("make_env: max episode length must be at least 1");
  switch (cfg.kind) {
    case EnvKind::target_localization: return make_target_localization_env(cfg);
    case EnvKind::fleet: return make_fleet_env(cfg);
    case EnvKind::maze: return make_maze_env(cfg);
  }
  throw std::invalid_argument("make_env: unknown kind");
}

}  // namespace medc::envs
