#include <algorithm>
#include <stdexcept>

#include "medc/envs/env.hpp"

namespace medc::envs {

namespace {

class FleetEnv final : public Environment {
 public:
  explicit FleetEnv(const EnvConfig& cfg) : Environment(cfg) {
    if (cfg.customers < 1) throw std::invalid_argument("fleet: need at least one customer");
    if (cfg.capacity < 1) throw std::invalid_argument("fleet: capacity must be positive");
    if (cfg.grid_h * cfg.grid_w < 2)
      throw std::invalid_argument("fleet: grid too small");
  }

 private:
  enum class Status { waiting, onboard, delivered };
  struct Customer {
    Cell pos;   // waiting location
    Cell dest;
    Status status = Status::waiting;
    int carrier = -1;
  };

  void do_reset() override {
    walls_ = WallMap(cfg_.grid_h, cfg_.grid_w);  // open grid
    for (int k = 0; k < cfg_.agents; ++k) agents_[k] = random_free_cell();
    customers_.assign(cfg_.customers, {});
    for (Customer& c : customers_) {
      c.pos = random_free_cell();
      do {
        c.dest = random_free_cell();
      } while (c.dest == c.pos);
      c.status = Status::waiting;
      c.carrier = -1;
    }
    delivered_ = 0;
  }

  void do_step(const std::vector<int>& actions, StepResult& out) override {
    for (int k = 0; k < cfg_.agents; ++k) move_agent(k, actions[k]);

    int pickups = 0;
    for (int k = 0; k < cfg_.agents; ++k) {
      // drop first, freeing capacity for same-step pickups
      for (Customer& c : customers_)
        if (c.status == Status::onboard && c.carrier == k && c.dest == agents_[k]) {
          c.status = Status::delivered;
          c.carrier = -1;
          ++delivered_;
        }
      int load = 0;
      for (const Customer& c : customers_)
        if (c.status == Status::onboard && c.carrier == k) ++load;
      for (Customer& c : customers_) {
        if (load >= cfg_.capacity) break;
        if (c.status == Status::waiting && c.pos == agents_[k]) {
          c.status = Status::onboard;
          c.carrier = k;
          ++load;
          ++pickups;
        }
      }
    }

    out.reward = cfg_.rewards.step_cost + pickups * cfg_.rewards.pickup;
    if (delivered_ == cfg_.customers) {
      out.reward += cfg_.rewards.terminal;
      out.done = true;
    }
    out.info["pickups"] = pickups;
    out.info["delivered"] = delivered_;
  }

  std::vector<nn::Tensor> build_obs() const override {
    const int h = cfg_.grid_h, w = cfg_.grid_w, plane = h * w;
    const double team_norm = std::max(1, cfg_.agents - 1);
    const double cust_norm = std::max(1, cfg_.customers);
    std::vector<nn::Tensor> obs;
    obs.reserve(cfg_.agents);
    for (int k = 0; k < cfg_.agents; ++k) {
      nn::Tensor t({kObsChannels, h, w});
      double* own = t.ptr();
      double* team = own + plane;
      double* waiting = team + plane;
      double* own_dest = waiting + plane;
      double* other_dest = own_dest + plane;
      own[agents_[k].r * w + agents_[k].c] = 1.0;
      for (int j = 0; j < cfg_.agents; ++j)
        if (j != k) team[agents_[j].r * w + agents_[j].c] += 1.0 / team_norm;
      for (const Customer& c : customers_) {
        if (c.status == Status::waiting) {
          waiting[c.pos.r * w + c.pos.c] += 1.0 / cust_norm;
          other_dest[c.dest.r * w + c.dest.c] += 1.0 / cust_norm;
        } else if (c.status == Status::onboard) {
          if (c.carrier == k)
            own_dest[c.dest.r * w + c.dest.c] += 1.0 / cfg_.capacity;
          else
            other_dest[c.dest.r * w + c.dest.c] += 1.0 / cust_norm;
        }
      }
      obs.push_back(std::move(t));
    }
    return obs;
  }

  std::vector<Customer> customers_;
  int delivered_ = 0;
};

}  // namespace

std::unique_ptr<Environment> make_fleet_env(const EnvConfig& cfg) {
  return std::make_unique<FleetEnv>(cfg);
}

}  // namespace medc::envs
