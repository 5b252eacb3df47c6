#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medc/common.hpp"
#include "medc/nn/network.hpp"

namespace medc::experts {

// A callable action-ranker with a similarity weight. Trained and malicious
// kinds wrap a policy network; random and biased kinds are synthetic.
struct ExpertHandle {
  enum class Kind { trained, random, biased, malicious };

  Kind kind = Kind::random;
  double rs = 1.0;  // roulette similarity weight, >= 0
  nn::NetworkSpec spec;   // trained | malicious
  nn::ParamSet params;    // trained | malicious
  int fixed_action = 0;   // biased
  std::string application;
  std::vector<int64_t> env_details;

  static ExpertHandle trained(nn::NetworkSpec spec, nn::ParamSet params, double rs = 1.0);
  static ExpertHandle random_kind(double rs = 1.0);
  static ExpertHandle biased(int action, double rs = 1.0);
  static ExpertHandle malicious(nn::NetworkSpec spec, nn::ParamSet params, double rs = 1.0);
};

std::string expert_kind_name(ExpertHandle::Kind kind);
ExpertHandle::Kind expert_kind_from_name(const std::string& name);

// Actions ordered best-first with per-position scores.
struct ActionRanking {
  std::vector<int> order;
  std::vector<double> scores;
};

// trained: by policy probability, ties broken by lowest action index;
// random: uniformly shuffled; biased: fixed action first, rest by index;
// malicious: trained ranking with the top action's direction reversed and
// ranked first. Only the random kind consumes the rng.
ActionRanking expert_rank_actions(const ExpertHandle& expert,
                                  const nn::Tensor& obs, Rng& rng);

}  // namespace medc::experts
