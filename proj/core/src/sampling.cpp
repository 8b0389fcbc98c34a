#include "nfg/sampling.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace nfg {

std::vector<NodeId> topological_order(const GameNet& net) { return net.topological_order(); }

NodePartition partition_sets(const GameNet& net, const NodeId& v) {
  if (net.kind(v) != NodeKind::decision)
    throw NetError("partition_sets: " + v + " is not a decision node");

  std::set<NodeId> desc;
  std::deque<NodeId> frontier{v};
  while (!frontier.empty()) {
    NodeId cur = frontier.front();
    frontier.pop_front();
    for (const auto& c : net.children(cur)) {
      if (c != v && desc.insert(c).second) frontier.push_back(c);
    }
  }

  std::set<NodeId> pa(net.parents(v).begin(), net.parents(v).end());
  NodePartition out;
  for (const auto& id : net.node_ids()) {
    if (id == v) continue;
    if (desc.count(id)) {
      out.descendants.push_back(id);
    } else {
      out.non_descendants.push_back(id);
      if (!pa.count(id)) out.independent.push_back(id);
    }
  }
  return out;  // node_ids() is sorted, so all three lists are too
}

Instantiation forward_sample(const GameNet& net, const Instantiation& fixed,
                             const std::map<NodeId, Cpd>& strategies, RngStream& rng) {
  for (const auto& kv : fixed) {
    if (!net.has_node(kv.first)) throw NetError("forward_sample: unknown node " + kv.first);
    if (!net.space(kv.first).contains(kv.second))
      throw NetError("forward_sample: clamped value outside space of " + kv.first);
  }
  Instantiation inst = fixed;
  for (const auto& id : net.topological_order()) {
    if (inst.count(id)) continue;
    Instantiation pa_vals;
    for (const auto& p : net.parents(id)) pa_vals[p] = inst.at(p);
    Value val;
    if (net.kind(id) == NodeKind::chance) {
      val = net.cpd(id).sample(pa_vals, rng);
    } else {
      auto it = strategies.find(id);
      if (it == strategies.end() || !it->second.sample)
        throw NetError("forward_sample: no strategy supplied for decision node " + id);
      val = it->second.sample(pa_vals, rng);
    }
    if (!net.space(id).contains(val))
      throw NetError("forward_sample: sampled value outside space of " + id);
    inst[id] = std::move(val);
  }
  return inst;
}

double eval_density(const GameNet& net, const NodeId& node, const Value& value,
                    const Instantiation& parents, const std::map<NodeId, Cpd>* decision_cpds) {
  Instantiation pa_vals;
  for (const auto& p : net.parents(node)) {
    auto it = parents.find(p);
    if (it == parents.end())
      throw NetError("eval_density: missing parent value " + p + " for " + node);
    pa_vals[p] = it->second;
  }
  if (net.kind(node) == NodeKind::chance) {
    const Cpd& c = net.cpd(node);
    if (!c.density) throw NetError("eval_density: node " + node + " has no density");
    return c.density(value, pa_vals);
  }
  if (decision_cpds) {
    auto it = decision_cpds->find(node);
    if (it != decision_cpds->end() && it->second.density)
      return it->second.density(value, pa_vals);
  }
  throw NetError("eval_density: no closed-form density for decision node " + node);
}

void check_instantiation(const GameNet& net, const Instantiation& inst) {
  for (const auto& kv : inst) {
    if (!net.has_node(kv.first)) throw NetError("instantiation names unknown node " + kv.first);
    if (!net.space(kv.first).contains(kv.second))
      throw NetError("value outside space of " + kv.first + ": " + value_to_string(kv.second));
  }
}

}  // namespace nfg
