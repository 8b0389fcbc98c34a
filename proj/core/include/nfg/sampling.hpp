#pragma once

#include "nfg/game_net.hpp"

namespace nfg {

// Topological order with lexicographic tie-break (thin wrapper over the
// net's cached order; throws NetError naming a cycle when there is one).
std::vector<NodeId> topological_order(const GameNet& net);

// Node partition around a decision node v:
//   descendants      all nodes reachable from v,
//   non_descendants  everything except v and its descendants,
//   independent      non-descendants minus pa(v); each member is d-separated
//                    from v given pa(v).
// All three vectors are sorted by node id.
struct NodePartition {
  std::vector<NodeId> descendants;
  std::vector<NodeId> non_descendants;
  std::vector<NodeId> independent;
};

NodePartition partition_sets(const GameNet& net, const NodeId& v);

// Ancestral sampling with Kronecker-delta clamping: nodes present in `fixed`
// keep their values; every other node is drawn in topological order, chance
// nodes from their conditional and decision nodes from the sampler supplied
// in `strategies`. Sampled values are checked against node spaces.
Instantiation forward_sample(const GameNet& net, const Instantiation& fixed,
                             const std::map<NodeId, Cpd>& strategies, RngStream& rng);

// Conditional density/mass of `value` at `node` given parent values. Chance
// nodes use their attached conditional; decision nodes require an entry in
// `decision_cpds` (available when the plugged-in strategy has a closed form,
// e.g. at level 0).
double eval_density(const GameNet& net, const NodeId& node, const Value& value,
                    const Instantiation& parents,
                    const std::map<NodeId, Cpd>* decision_cpds = nullptr);

// Throws NetError if any assigned value lies outside its node's space.
void check_instantiation(const GameNet& net, const Instantiation& inst);

}  // namespace nfg
