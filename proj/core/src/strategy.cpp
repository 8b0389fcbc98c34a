#include "nfg/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace nfg {
namespace {

enum class Kind { relaxed, d_relaxed, lw };

struct Ctx {
  const GameNet& net;
  const StrategyConfig& cfg;
  Kind kind;
  StrategyStats* stats;
};

const PlayerPolicy& policy_for(const Ctx& ctx, const NodeId& v) {
  auto it = ctx.cfg.players.find(v);
  if (it == ctx.cfg.players.end())
    throw NetError("no player policy configured for decision node " + v);
  return it->second;
}

Instantiation parent_values(const GameNet& net, const NodeId& id, const Instantiation& inst) {
  Instantiation pa;
  for (const auto& p : net.parents(id)) {
    auto it = inst.find(p);
    if (it == inst.end()) throw NetError("missing parent value " + p + " for " + id);
    pa[p] = it->second;
  }
  return pa;
}

Value run_process(const Ctx& ctx, const NodeId& v, const Instantiation& observed_pa, int level,
                  RngStream& rng, const ProposalOverride* proposal);

// Draws a value for `id` while building an environment sample. Decision nodes
// are passive when their trigger says so, behave non-strategically at level 0,
// and otherwise run their own reasoning process one level down. For the
// likelihood-weighted variant, chance nodes listed in `proposal` are drawn
// from the proposal and the weight picks up the target/proposal ratio.
void sample_node_into(const Ctx& ctx, const NodeId& id, Instantiation& inst, int modeled_level,
                      RngStream& rng, const ProposalOverride* proposal, double* weight) {
  Instantiation pa = parent_values(ctx.net, id, inst);
  Value val;
  if (proposal && proposal->nodes.count(id)) {
    if (ctx.net.kind(id) != NodeKind::chance)
      throw NetError("proposal override on decision node " + id);
    const NodeProposal& np = proposal->nodes.at(id);
    val = np.sample(rng);
    const Cpd& c = ctx.net.cpd(id);
    if (!c.density)
      throw NetError("proposal override needs a target density on node " + id);
    double p = c.density(val, pa);
    double q = np.density(val);
    if (q <= 0.0) {
      if (p > 0.0)
        throw NetError("proposal has zero density where the target is positive at node " + id);
      if (weight) *weight = 0.0;
    } else if (weight) {
      *weight *= p / q;
    }
  } else if (ctx.net.kind(id) == NodeKind::chance) {
    val = ctx.net.cpd(id).sample(pa, rng);
  } else {
    const PlayerPolicy& pol = policy_for(ctx, id);
    if (pol.active && !pol.active(pa)) {
      if (!pol.passive.sample)
        throw NetError("inactive decision node " + id + " has no passive behavior");
      val = pol.passive.sample(pa, rng);
    } else if (modeled_level <= 0) {
      if (!pol.level0.sample) throw NetError("no level-0 behavior for decision node " + id);
      if (ctx.stats) ctx.stats->level0_draws++;
      val = pol.level0.sample(pa, rng);
    } else {
      const ProposalOverride* sub = nullptr;
      ProposalOverride holder;
      if (ctx.kind == Kind::lw && ctx.cfg.proposal_factory) {
        holder = ctx.cfg.proposal_factory(ctx.net, id, inst);
        sub = &holder;
      }
      val = run_process(ctx, id, pa, modeled_level, rng, sub);
    }
  }
  if (!ctx.net.space(id).contains(val))
    throw NetError("sampled value outside space of " + id + ": " + value_to_string(val));
  inst[id] = std::move(val);
}

// Effective conditional density of a decision node when it appears among the
// parents whose likelihood weights we need. Only closed-form cases qualify:
// a passive node or one modeled at level 0.
double decision_density(const Ctx& ctx, const NodeId& id, const Value& val,
                        const Instantiation& pa, int modeled_level) {
  const PlayerPolicy& pol = policy_for(ctx, id);
  if (pol.active && !pol.active(pa)) {
    if (!pol.passive.density)
      throw NetError("passive behavior of " + id + " has no density");
    return pol.passive.density(val, pa);
  }
  if (modeled_level <= 0) {
    if (!pol.level0.density)
      throw NetError("level-0 behavior of " + id + " has no density");
    return pol.level0.density(val, pa);
  }
  throw NetError("no closed-form density for decision node " + id + " above level 0");
}

Instantiation clamp_parents(const Ctx& ctx, const NodeId& v, const Instantiation& observed_pa) {
  Instantiation base;
  for (const auto& p : ctx.net.parents(v)) {
    auto it = observed_pa.find(p);
    if (it == observed_pa.end())
      throw NetError("observed parent value missing for " + p + " (deciding " + v + ")");
    if (!ctx.net.space(p).contains(it->second))
      throw NetError("observed value outside space of " + p);
    base[p] = it->second;
  }
  return base;
}

CandidateSet draw_candidates_impl(const Ctx& ctx, const NodeId& v,
                                  const Instantiation& observed_pa, RngStream& rng) {
  const PlayerPolicy& pol = policy_for(ctx, v);
  if (pol.num_candidates < 1) throw NetError("num_candidates must be >= 1");
  if (!pol.satisficing.sample)
    throw NetError("no satisficing distribution for decision node " + v);
  Instantiation pa = clamp_parents(ctx, v, observed_pa);
  CandidateSet out;
  for (int j = 0; j < pol.num_candidates; ++j) {
    Value cand = pol.satisficing.sample(pa, rng);
    if (!ctx.net.space(v).contains(cand))
      throw NetError("satisficing draw outside space of " + v);
    if (std::find(out.moves.begin(), out.moves.end(), cand) == out.moves.end())
      out.moves.push_back(std::move(cand));
  }
  return out;
}

UtilityEstimate relaxed_estimate_impl(const Ctx& ctx, const NodeId& v, const Value& move,
                                      const Instantiation& observed_pa, int level,
                                      RngStream& rng) {
  const PlayerPolicy& pol = policy_for(ctx, v);
  if (pol.num_env_samples < 1) throw NetError("num_env_samples must be >= 1");
  int player = ctx.net.player_of(v);
  const auto& u = ctx.net.utility(player);
  if (!u) throw NetError("player has no utility function");

  Instantiation base = clamp_parents(ctx, v, observed_pa);
  base[v] = move;
  double sum = 0;
  for (int k = 0; k < pol.num_env_samples; ++k) {
    Instantiation inst = base;
    for (const auto& id : ctx.net.topological_order()) {
      if (inst.count(id)) continue;
      sample_node_into(ctx, id, inst, level - 1, rng, nullptr, nullptr);
    }
    sum += u(inst);
  }
  UtilityEstimate est;
  est.move = move;
  est.sample_count = pol.num_env_samples;
  est.estimate = sum / pol.num_env_samples;
  est.nonzero_weights = pol.num_env_samples;
  return est;
}

std::vector<UtilityEstimate> d_relaxed_estimates_impl(const Ctx& ctx, const NodeId& v,
                                                      const CandidateSet& candidates,
                                                      const Instantiation& observed_pa,
                                                      int level, RngStream& rng) {
  const PlayerPolicy& pol = policy_for(ctx, v);
  if (pol.num_env_samples < 1) throw NetError("num_env_samples must be >= 1");
  int player = ctx.net.player_of(v);
  const auto& u = ctx.net.utility(player);
  if (!u) throw NetError("player has no utility function");

  Instantiation target_pa = clamp_parents(ctx, v, observed_pa);
  for (const auto& p : ctx.net.parents(v)) {
    if (!ctx.net.space(p).is_discrete())
      throw NetError("rejection sampling cannot condition on continuous parent " + p +
                     "; use the likelihood-weighted variant");
  }
  NodePartition parts = partition_sets(ctx.net, v);
  std::set<NodeId> desc(parts.descendants.begin(), parts.descendants.end());

  // Draw the environment once, conditioned on the observed parent values by
  // rejection; candidates then share these samples.
  std::vector<Instantiation> envs;
  envs.reserve(pol.num_env_samples);
  long long attempts = 0;
  while (static_cast<int>(envs.size()) < pol.num_env_samples) {
    if (attempts >= ctx.cfg.rejection_cap) {
      std::ostringstream os;
      os << "rejection sampling for " << v << " accepted " << envs.size() << " of "
         << pol.num_env_samples << " environments in " << attempts
         << " attempts; consider the likelihood-weighted variant";
      throw SamplingError(os.str(), attempts, static_cast<int>(envs.size()));
    }
    ++attempts;
    if (ctx.stats) ctx.stats->rejection_draws++;
    Instantiation inst;
    for (const auto& id : ctx.net.topological_order()) {
      if (id == v || desc.count(id)) continue;
      sample_node_into(ctx, id, inst, level - 1, rng, nullptr, nullptr);
    }
    bool match = true;
    for (const auto& kv : target_pa) {
      if (!(inst.at(kv.first) == kv.second)) {
        match = false;
        break;
      }
    }
    if (match) envs.push_back(std::move(inst));
  }

  std::vector<UtilityEstimate> out;
  out.reserve(candidates.moves.size());
  for (const auto& move : candidates.moves) {
    double sum = 0;
    for (const auto& env : envs) {
      Instantiation inst = env;
      inst[v] = move;
      for (const auto& id : ctx.net.topological_order()) {
        if (!desc.count(id)) continue;
        sample_node_into(ctx, id, inst, level - 1, rng, nullptr, nullptr);
      }
      sum += u(inst);
    }
    UtilityEstimate est;
    est.move = move;
    est.sample_count = pol.num_env_samples;
    est.estimate = sum / pol.num_env_samples;
    est.nonzero_weights = pol.num_env_samples;
    out.push_back(std::move(est));
  }
  return out;
}

std::vector<UtilityEstimate> lw_estimates_impl(const Ctx& ctx, const NodeId& v,
                                               const CandidateSet& candidates,
                                               const Instantiation& observed_pa, int level,
                                               RngStream& rng, const ProposalOverride* proposal,
                                               LwDebug* debug) {
  const PlayerPolicy& pol = policy_for(ctx, v);
  if (pol.num_env_samples < 1) throw NetError("num_env_samples must be >= 1");
  int player = ctx.net.player_of(v);
  const auto& u = ctx.net.utility(player);
  if (!u) throw NetError("player has no utility function");

  Instantiation base = clamp_parents(ctx, v, observed_pa);
  NodePartition parts = partition_sets(ctx.net, v);
  std::set<NodeId> desc(parts.descendants.begin(), parts.descendants.end());

  // One environment set shared by all candidates: clamp pa(v), draw the
  // remaining non-descendants, and weight by the conditional density of each
  // observed parent value given its own sampled parents (plus any proposal
  // corrections accumulated along the way).
  std::vector<Instantiation> envs;
  std::vector<double> weights;
  long long attempts = 0;
  long long budget =
      ctx.cfg.redraw_zero_weights
          ? static_cast<long long>(ctx.cfg.redraw_cap_factor) * pol.num_env_samples
          : static_cast<long long>(pol.num_env_samples);
  while (static_cast<int>(envs.size()) < pol.num_env_samples) {
    if (attempts >= budget) {
      std::ostringstream os;
      os << "likelihood-weighted sampling for " << v << " found " << envs.size() << " of "
         << pol.num_env_samples << " nonzero-weight environments in " << attempts
         << " attempts";
      throw SamplingError(os.str(), attempts, static_cast<int>(envs.size()));
    }
    ++attempts;
    Instantiation inst = base;
    double w = 1.0;
    for (const auto& id : ctx.net.topological_order()) {
      if (id == v || desc.count(id) || inst.count(id)) continue;
      sample_node_into(ctx, id, inst, level - 1, rng, proposal, &w);
    }
    for (const auto& p : ctx.net.parents(v)) {
      Instantiation ppa = parent_values(ctx.net, p, inst);
      if (ctx.net.kind(p) == NodeKind::chance) {
        const Cpd& c = ctx.net.cpd(p);
        if (!c.density)
          throw NetError("likelihood weighting needs a density on parent node " + p);
        w *= c.density(inst.at(p), ppa);
      } else {
        w *= decision_density(ctx, p, inst.at(p), ppa, level - 1);
      }
      if (w == 0.0) break;
    }
    if (ctx.cfg.redraw_zero_weights && w <= 0.0) {
      if (ctx.stats) ctx.stats->env_redraws++;
      continue;
    }
    envs.push_back(std::move(inst));
    weights.push_back(w);
  }
  if (debug) {
    debug->environments = envs;
    debug->weights = weights;
    debug->attempts = attempts;
  }

  std::vector<UtilityEstimate> out;
  out.reserve(candidates.moves.size());
  for (const auto& move : candidates.moves) {
    double sum = 0;
    double wsum = 0;
    int nonzero = 0;
    for (size_t k = 0; k < envs.size(); ++k) {
      wsum += weights[k];
      if (weights[k] > 0) ++nonzero;
      Instantiation inst = envs[k];
      inst[v] = move;
      for (const auto& id : ctx.net.topological_order()) {
        if (!desc.count(id)) continue;
        sample_node_into(ctx, id, inst, level - 1, rng, proposal, nullptr);
      }
      sum += weights[k] * u(inst);
    }
    UtilityEstimate est;
    est.move = move;
    est.sample_count = pol.num_env_samples;
    est.estimate = sum / pol.num_env_samples;  // unnormalized: scale cancels in the argmax
    est.weights_sum = wsum;
    est.nonzero_weights = nonzero;
    out.push_back(std::move(est));
  }
  return out;
}

Value run_process(const Ctx& ctx, const NodeId& v, const Instantiation& observed_pa, int level,
                  RngStream& rng, const ProposalOverride* proposal) {
  if (level < 1) throw NetError("reasoning process started below level 1 at " + v);
  if (ctx.stats) ctx.stats->strategy_evaluations++;
  CandidateSet cands = draw_candidates_impl(ctx, v, observed_pa, rng);

  std::vector<UtilityEstimate> ests;
  switch (ctx.kind) {
    case Kind::relaxed:
      ests.reserve(cands.moves.size());
      for (const auto& move : cands.moves)
        ests.push_back(relaxed_estimate_impl(ctx, v, move, observed_pa, level, rng));
      break;
    case Kind::d_relaxed:
      ests = d_relaxed_estimates_impl(ctx, v, cands, observed_pa, level, rng);
      break;
    case Kind::lw:
      ests = lw_estimates_impl(ctx, v, cands, observed_pa, level, rng, proposal, nullptr);
      break;
  }
  size_t best = 0;
  for (size_t j = 1; j < ests.size(); ++j)
    if (ests[j].estimate > ests[best].estimate) best = j;
  return ests[best].move;
}

int top_level(const Ctx& ctx, const NodeId& v) {
  int level = policy_for(ctx, v).level;
  if (level < 1) throw NetError("sampler requires level >= 1 at " + v);
  return level;
}

}  // namespace

CandidateSet draw_candidate_set(const GameNet& net, const NodeId& v,
                                const Instantiation& observed_pa, const StrategyConfig& cfg,
                                RngStream& rng) {
  Ctx ctx{net, cfg, Kind::relaxed, nullptr};
  return draw_candidates_impl(ctx, v, observed_pa, rng);
}

UtilityEstimate relaxed_estimate(const GameNet& net, const NodeId& v, const Value& move,
                                 const Instantiation& observed_pa, const StrategyConfig& cfg,
                                 int level, RngStream& rng, StrategyStats* stats) {
  Ctx ctx{net, cfg, Kind::relaxed, stats};
  return relaxed_estimate_impl(ctx, v, move, observed_pa, level, rng);
}

std::vector<UtilityEstimate> d_relaxed_estimates(const GameNet& net, const NodeId& v,
                                                 const CandidateSet& candidates,
                                                 const Instantiation& observed_pa,
                                                 const StrategyConfig& cfg, int level,
                                                 RngStream& rng, StrategyStats* stats) {
  Ctx ctx{net, cfg, Kind::d_relaxed, stats};
  return d_relaxed_estimates_impl(ctx, v, candidates, observed_pa, level, rng);
}

std::vector<UtilityEstimate> lw_d_relaxed_estimates(
    const GameNet& net, const NodeId& v, const CandidateSet& candidates,
    const Instantiation& observed_pa, const StrategyConfig& cfg, int level, RngStream& rng,
    const ProposalOverride* proposal, StrategyStats* stats, LwDebug* debug) {
  Ctx ctx{net, cfg, Kind::lw, stats};
  return lw_estimates_impl(ctx, v, candidates, observed_pa, level, rng, proposal, debug);
}

Value level_k_relaxed_sample(const GameNet& net, const NodeId& v,
                             const Instantiation& observed_pa, const StrategyConfig& cfg,
                             RngStream& rng, StrategyStats* stats) {
  Ctx ctx{net, cfg, Kind::relaxed, stats};
  return run_process(ctx, v, observed_pa, top_level(ctx, v), rng, nullptr);
}

Value level_k_d_relaxed_sample(const GameNet& net, const NodeId& v,
                               const Instantiation& observed_pa, const StrategyConfig& cfg,
                               RngStream& rng, StrategyStats* stats) {
  Ctx ctx{net, cfg, Kind::d_relaxed, stats};
  return run_process(ctx, v, observed_pa, top_level(ctx, v), rng, nullptr);
}

Value level_k_lw_d_relaxed_sample(const GameNet& net, const NodeId& v,
                                  const Instantiation& observed_pa, const StrategyConfig& cfg,
                                  RngStream& rng, const ProposalOverride* proposal,
                                  StrategyStats* stats) {
  Ctx ctx{net, cfg, Kind::lw, stats};
  ProposalOverride holder;
  if (!proposal && cfg.proposal_factory) {
    holder = cfg.proposal_factory(net, v, observed_pa);
    proposal = &holder;
  }
  return run_process(ctx, v, observed_pa, top_level(ctx, v), rng, proposal);
}

std::vector<std::pair<Value, double>> brute_force_best_response(
    const GameNet& net, const NodeId& v, const Instantiation& observed_pa,
    const std::map<NodeId, Cpd>& decision_cpds) {
  if (net.kind(v) != NodeKind::decision)
    throw NetError("brute_force_best_response: " + v + " is not a decision node");
  for (const auto& id : net.node_ids()) {
    if (!net.space(id).is_discrete())
      throw NetError("brute_force_best_response needs a fully discrete net; " + id +
                     " is continuous");
  }
  int player = net.player_of(v);
  const auto& u = net.utility(player);
  if (!u) throw NetError("player has no utility function");

  std::set<NodeId> pa(net.parents(v).begin(), net.parents(v).end());
  Instantiation base;
  for (const auto& p : net.parents(v)) {
    auto it = observed_pa.find(p);
    if (it == observed_pa.end()) throw NetError("observed parent value missing for " + p);
    base[p] = it->second;
  }
  std::vector<NodeId> free_nodes;
  for (const auto& id : net.node_ids())
    if (id != v && !pa.count(id)) free_nodes.push_back(id);

  // Factors: every node except v itself contributes its conditional density,
  // so the normalized result is the expectation conditioned on both the move
  // and the observed parents.
  auto factor = [&](const NodeId& id, const Instantiation& inst) {
    Instantiation ppa = parent_values(net, id, inst);
    const Value& val = inst.at(id);
    if (net.kind(id) == NodeKind::chance) {
      const Cpd& c = net.cpd(id);
      if (!c.density) throw NetError("node " + id + " has no density for enumeration");
      return c.density(val, ppa);
    }
    auto it = decision_cpds.find(id);
    if (it == decision_cpds.end() || !it->second.density)
      throw NetError("enumeration needs a closed-form conditional for decision node " + id);
    return it->second.density(val, ppa);
  };

  std::vector<std::pair<Value, double>> out;
  int moves = net.space(v).cardinality();
  for (int m = 0; m < moves; ++m) {
    Instantiation inst = base;
    inst[v] = m;
    double num = 0, den = 0;
    std::vector<int> combo(free_nodes.size(), 0);
    while (true) {
      for (size_t i = 0; i < free_nodes.size(); ++i) inst[free_nodes[i]] = combo[i];
      double w = 1.0;
      for (const auto& id : net.node_ids()) {
        if (id == v) continue;
        w *= factor(id, inst);
        if (w == 0.0) break;
      }
      if (w > 0) {
        num += w * u(inst);
        den += w;
      }
      size_t i = 0;
      for (; i < free_nodes.size(); ++i) {
        if (++combo[i] < net.space(free_nodes[i]).cardinality()) break;
        combo[i] = 0;
      }
      if (i == free_nodes.size()) break;
    }
    if (den <= 0)
      throw NetError("observed parent values have probability zero under the net");
    out.emplace_back(Value(m), num / den);
  }
  return out;
}

long long count_strategy_evaluations(int num_players, int level) {
  if (num_players < 1) throw NetError("count_strategy_evaluations: need at least one player");
  if (level < 0) throw NetError("count_strategy_evaluations: negative level");
  long long total = 0;
  long long branch = 1;
  for (int j = 0; j < level; ++j) {
    total += branch * num_players;
    branch *= (num_players - 1);
  }
  return total;
}

}  // namespace nfg
