#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nfg/rng.hpp"
#include "nfg/value.hpp"

namespace nfg {

// Conditional distribution of a node given its parents. `sample` draws a
// value; `density` evaluates the conditional density/mass at a value and may
// be left empty when only sampling is needed. Deterministic nodes use an
// indicator density (1 when the value matches the function output, else 0).
struct Cpd {
  std::function<Value(const Instantiation& parents, RngStream&)> sample;
  std::function<double(const Value& value, const Instantiation& parents)> density;
};

Cpd deterministic_cpd(std::function<Value(const Instantiation&)> fn);

// Tabular conditional for a discrete node with discrete parents. Parent
// combinations are indexed in `parent_ids` order, first parent most
// significant. Each row must sum to 1 (1e-9 tolerance).
Cpd table_cpd(std::vector<NodeId> parent_ids, std::vector<int> parent_cards,
              std::vector<std::vector<double>> rows);

struct Diagnostic {
  NodeId node;          // empty when the finding is net-wide
  std::string rule;     // stable identifier, e.g. "acyclic", "player-partition"
  std::string message;
};

enum class NodeKind { chance, decision };

class GameNetBuilder;

// Immutable directed game net: chance nodes carry conditional distributions,
// and each player owns exactly one decision node whose behavior is supplied
// externally (a strategy). Utilities are per-player functions of a full
// instantiation.
class GameNet {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int num_players() const { return static_cast<int>(utilities_.size()); }

  bool has_node(const NodeId& id) const;
  int index_of(const NodeId& id) const;
  const NodeId& id_of(int index) const { return nodes_[index].id; }

  NodeKind kind(const NodeId& id) const;
  int player_of(const NodeId& id) const;  // -1 for chance nodes
  const VariableSpace& space(const NodeId& id) const;
  const Cpd& cpd(const NodeId& id) const;
  bool has_cpd(const NodeId& id) const;

  std::vector<NodeId> node_ids() const;                 // sorted
  const std::vector<NodeId>& parents(const NodeId& id) const;
  std::vector<NodeId> children(const NodeId& id) const;  // sorted
  std::vector<NodeId> decision_nodes() const;            // sorted
  NodeId decision_node_of_player(int player) const;

  const std::function<double(const Instantiation&)>& utility(int player) const;

  // Cached topological order (lexicographic tie-break); throws on a cycle.
  const std::vector<NodeId>& topological_order() const;

  // Plain-text description used by fixtures and debugging.
  std::string dump() const;

 private:
  friend class GameNetBuilder;
  struct Node {
    NodeId id;
    NodeKind kind = NodeKind::chance;
    int player = -1;
    VariableSpace space = VariableSpace::discrete(1);
    std::vector<NodeId> parent_ids;
    std::vector<int> parent_idx;
    std::vector<int> child_idx;
    Cpd cpd;
  };
  std::vector<Node> nodes_;
  std::map<NodeId, int> index_;
  std::vector<std::function<double(const Instantiation&)>> utilities_;
  std::optional<std::vector<NodeId>> topo_;
  std::string cycle_note_;

  const Node& node(const NodeId& id) const;
};

class GameNetBuilder {
 public:
  GameNetBuilder& chance(const NodeId& id, std::vector<NodeId> parents, VariableSpace space,
                         Cpd cpd);
  GameNetBuilder& decision(const NodeId& id, int player, std::vector<NodeId> parents,
                           VariableSpace space);
  // Attach or replace a conditional after the fact (mainly for building
  // deliberately malformed fixtures).
  GameNetBuilder& attach_cpd(const NodeId& id, Cpd cpd);
  GameNetBuilder& utility(int player, std::function<double(const Instantiation&)> u);

  // Resolves parent references and computes the topological order. Throws on
  // unknown parent ids or duplicate node ids; structural policy violations
  // are left for validate().
  GameNet build() const;

 private:
  struct PendingNode {
    NodeId id;
    NodeKind kind;
    int player;
    VariableSpace space;
    std::vector<NodeId> parents;
    Cpd cpd;
  };
  std::vector<PendingNode> pending_;
  std::map<int, std::function<double(const Instantiation&)>> utilities_;
};

// Structural policy checks; returns an empty vector for a well-formed net.
std::vector<Diagnostic> validate(const GameNet& net);

}  // namespace nfg
