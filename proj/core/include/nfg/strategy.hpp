#pragma once

#include "nfg/sampling.hpp"

namespace nfg {

// Raised when a sampling loop exhausts its attempt budget; carries how far it
// got so callers can report acceptance rates.
struct SamplingError : NetError {
  SamplingError(const std::string& msg, long long attempts_, int achieved_)
      : NetError(msg), attempts(attempts_), achieved(achieved_) {}
  long long attempts = 0;
  int achieved = 0;
};

// Importance-sampling override for a chance node: `sample` draws a value and
// `density` evaluates the proposal at a value. The node's own conditional
// supplies the target density for the weight correction.
struct NodeProposal {
  std::function<Value(RngStream&)> sample;
  std::function<double(const Value&)> density;
};

struct ProposalOverride {
  std::map<NodeId, NodeProposal> nodes;
};

class GameNet;

// Builds a proposal for a recursively modeled decision maker from the values
// already drawn in the enclosing environment sample.
using ProposalFactory =
    std::function<ProposalOverride(const GameNet&, const NodeId& decision_node,
                                   const Instantiation& context)>;

// How one player behaves when their decision node is reached.
//   level           depth of reasoning when this node is the one deciding
//   num_candidates  candidate moves drawn from the satisficing distribution
//   num_env_samples environment samples per candidate evaluation
//   satisficing     candidate-generating conditional given pa(v)
//   level0          non-strategic behavior that terminates the recursion
//   active/passive  optional trigger: when `active` returns false the node is
//                   sampled from `passive` instead of reasoning at any level
struct PlayerPolicy {
  int level = 1;
  int num_candidates = 1;
  int num_env_samples = 1;
  Cpd satisficing;
  Cpd level0;
  std::function<bool(const Instantiation& parents)> active;
  Cpd passive;
};

struct StrategyConfig {
  std::map<NodeId, PlayerPolicy> players;
  long long rejection_cap = 1'000'000;   // attempts for conditional rejection sampling
  bool redraw_zero_weights = false;      // redraw environments until weights are positive
  int redraw_cap_factor = 100;           // attempt budget = factor * num_env_samples
  ProposalFactory proposal_factory;      // proposals for recursively modeled deciders
};

// Read-only instrumentation. strategy_evaluations counts every run of a
// level >= 1 reasoning process, including those triggered recursively while
// sampling environments.
struct StrategyStats {
  long long strategy_evaluations = 0;
  long long level0_draws = 0;
  long long rejection_draws = 0;
  long long env_redraws = 0;
};

struct CandidateSet {
  std::vector<Value> moves;  // duplicates removed, first occurrence kept
};

struct UtilityEstimate {
  Value move;
  double estimate = 0;      // likelihood-weighted variant: unnormalized
  int sample_count = 0;
  double weights_sum = 0;   // importance weights only; plain variants report sample_count
  int nonzero_weights = 0;
};

// Extra visibility into likelihood-weighted environment sampling, for tests
// and failure diagnostics.
struct LwDebug {
  std::vector<Instantiation> environments;
  std::vector<double> weights;
  long long attempts = 0;
};

CandidateSet draw_candidate_set(const GameNet& net, const NodeId& v,
                                const Instantiation& observed_pa, const StrategyConfig& cfg,
                                RngStream& rng);

// Candidate-utility estimators. `level` is the depth of the running process;
// decision nodes encountered in the environment are modeled at level - 1.
UtilityEstimate relaxed_estimate(const GameNet& net, const NodeId& v, const Value& move,
                                 const Instantiation& observed_pa, const StrategyConfig& cfg,
                                 int level, RngStream& rng, StrategyStats* stats = nullptr);

std::vector<UtilityEstimate> d_relaxed_estimates(const GameNet& net, const NodeId& v,
                                                 const CandidateSet& candidates,
                                                 const Instantiation& observed_pa,
                                                 const StrategyConfig& cfg, int level,
                                                 RngStream& rng, StrategyStats* stats = nullptr);

std::vector<UtilityEstimate> lw_d_relaxed_estimates(
    const GameNet& net, const NodeId& v, const CandidateSet& candidates,
    const Instantiation& observed_pa, const StrategyConfig& cfg, int level, RngStream& rng,
    const ProposalOverride* proposal = nullptr, StrategyStats* stats = nullptr,
    LwDebug* debug = nullptr);

// Move samplers: draw candidates, score them, return the argmax (ties break
// toward the earliest-drawn candidate).
Value level_k_relaxed_sample(const GameNet& net, const NodeId& v,
                             const Instantiation& observed_pa, const StrategyConfig& cfg,
                             RngStream& rng, StrategyStats* stats = nullptr);

Value level_k_d_relaxed_sample(const GameNet& net, const NodeId& v,
                               const Instantiation& observed_pa, const StrategyConfig& cfg,
                               RngStream& rng, StrategyStats* stats = nullptr);

Value level_k_lw_d_relaxed_sample(const GameNet& net, const NodeId& v,
                                  const Instantiation& observed_pa, const StrategyConfig& cfg,
                                  RngStream& rng, const ProposalOverride* proposal = nullptr,
                                  StrategyStats* stats = nullptr);

// Exact conditional expected utility per move of v, by full enumeration of a
// discrete net. Other decision nodes take the closed-form conditionals given
// in `decision_cpds`.
std::vector<std::pair<Value, double>> brute_force_best_response(
    const GameNet& net, const NodeId& v, const Instantiation& observed_pa,
    const std::map<NodeId, Cpd>& decision_cpds);

// Closed-form count of reasoning-process runs when all N players decide once
// at level K, each process spawning the N-1 others one level down.
long long count_strategy_evaluations(int num_players, int level);

}  // namespace nfg
