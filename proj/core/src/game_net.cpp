#include "nfg/game_net.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace nfg {

Cpd deterministic_cpd(std::function<Value(const Instantiation&)> fn) {
  Cpd c;
  c.sample = [fn](const Instantiation& pa, RngStream&) { return fn(pa); };
  c.density = [fn](const Value& v, const Instantiation& pa) {
    return v == fn(pa) ? 1.0 : 0.0;
  };
  return c;
}

Cpd table_cpd(std::vector<NodeId> parent_ids, std::vector<int> parent_cards,
              std::vector<std::vector<double>> rows) {
  if (parent_ids.size() != parent_cards.size())
    throw NetError("table_cpd: parent ids and cardinalities differ in length");
  size_t combos = 1;
  for (int c : parent_cards) {
    if (c < 1) throw NetError("table_cpd: parent cardinality < 1");
    combos *= static_cast<size_t>(c);
  }
  if (rows.size() != combos) throw NetError("table_cpd: wrong number of rows");
  size_t card = rows.empty() ? 0 : rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != card || row.empty()) throw NetError("table_cpd: ragged rows");
    double s = 0;
    for (double p : row) {
      if (p < 0) throw NetError("table_cpd: negative probability");
      s += p;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw NetError("table_cpd: row does not sum to 1");
  }

  auto row_index = [parent_ids, parent_cards](const Instantiation& pa) {
    size_t idx = 0;
    for (size_t i = 0; i < parent_ids.size(); ++i) {
      auto it = pa.find(parent_ids[i]);
      if (it == pa.end()) throw NetError("table_cpd: missing parent " + parent_ids[i]);
      int v = as_index(it->second);
      if (v < 0 || v >= parent_cards[i])
        throw NetError("table_cpd: parent value out of range for " + parent_ids[i]);
      idx = idx * static_cast<size_t>(parent_cards[i]) + static_cast<size_t>(v);
    }
    return idx;
  };

  Cpd c;
  c.sample = [rows, row_index](const Instantiation& pa, RngStream& rng) {
    const auto& row = rows[row_index(pa)];
    double u = rng.uniform();
    double acc = 0;
    for (size_t k = 0; k < row.size(); ++k) {
      acc += row[k];
      if (u < acc) return Value(static_cast<int>(k));
    }
    return Value(static_cast<int>(row.size() - 1));
  };
  c.density = [rows, row_index](const Value& v, const Instantiation& pa) {
    int k = as_index(v);
    const auto& row = rows[row_index(pa)];
    if (k < 0 || static_cast<size_t>(k) >= row.size()) return 0.0;
    return row[static_cast<size_t>(k)];
  };
  return c;
}

const GameNet::Node& GameNet::node(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw NetError("unknown node: " + id);
  return nodes_[it->second];
}

bool GameNet::has_node(const NodeId& id) const { return index_.count(id) > 0; }

int GameNet::index_of(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw NetError("unknown node: " + id);
  return it->second;
}

NodeKind GameNet::kind(const NodeId& id) const { return node(id).kind; }

int GameNet::player_of(const NodeId& id) const { return node(id).player; }

const VariableSpace& GameNet::space(const NodeId& id) const { return node(id).space; }

const Cpd& GameNet::cpd(const NodeId& id) const {
  const Node& n = node(id);
  if (!n.cpd.sample) throw NetError("node has no conditional attached: " + id);
  return n.cpd;
}

bool GameNet::has_cpd(const NodeId& id) const { return static_cast<bool>(node(id).cpd.sample); }

std::vector<NodeId> GameNet::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& kv : index_) out.push_back(kv.first);
  return out;
}

const std::vector<NodeId>& GameNet::parents(const NodeId& id) const {
  return node(id).parent_ids;
}

std::vector<NodeId> GameNet::children(const NodeId& id) const {
  std::vector<NodeId> out;
  for (int c : node(id).child_idx) out.push_back(nodes_[c].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> GameNet::decision_nodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.kind == NodeKind::decision) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

NodeId GameNet::decision_node_of_player(int player) const {
  for (const auto& n : nodes_)
    if (n.kind == NodeKind::decision && n.player == player) return n.id;
  throw NetError("no decision node for player " + std::to_string(player));
}

const std::function<double(const Instantiation&)>& GameNet::utility(int player) const {
  if (player < 0 || player >= num_players())
    throw NetError("no utility for player " + std::to_string(player));
  return utilities_[player];
}

const std::vector<NodeId>& GameNet::topological_order() const {
  if (!topo_) throw NetError("net has no topological order: " + cycle_note_);
  return *topo_;
}

std::string GameNet::dump() const {
  std::ostringstream os;
  os << "net nodes=" << node_count() << " players=" << num_players() << "\n";
  for (const auto& kv : index_) {
    const Node& n = nodes_[kv.second];
    os << "node " << n.id << " "
       << (n.kind == NodeKind::decision ? "decision" : "chance");
    if (n.kind == NodeKind::decision) os << " player=" << n.player;
    os << " parents=";
    for (size_t i = 0; i < n.parent_ids.size(); ++i) {
      if (i) os << ",";
      os << n.parent_ids[i];
    }
    os << " space=" << n.space.describe() << "\n";
  }
  return os.str();
}

GameNetBuilder& GameNetBuilder::chance(const NodeId& id, std::vector<NodeId> parents,
                                       VariableSpace space, Cpd cpd) {
  pending_.push_back({id, NodeKind::chance, -1, std::move(space), std::move(parents),
                      std::move(cpd)});
  return *this;
}

GameNetBuilder& GameNetBuilder::decision(const NodeId& id, int player,
                                         std::vector<NodeId> parents, VariableSpace space) {
  pending_.push_back({id, NodeKind::decision, player, std::move(space), std::move(parents),
                      Cpd{}});
  return *this;
}

GameNetBuilder& GameNetBuilder::attach_cpd(const NodeId& id, Cpd cpd) {
  for (auto& p : pending_) {
    if (p.id == id) {
      p.cpd = std::move(cpd);
      return *this;
    }
  }
  throw NetError("attach_cpd: unknown node " + id);
}

GameNetBuilder& GameNetBuilder::utility(int player,
                                        std::function<double(const Instantiation&)> u) {
  if (player < 0) throw NetError("utility: negative player index");
  utilities_[player] = std::move(u);
  return *this;
}

namespace {

// Kahn's algorithm with a lexicographic frontier so the order is stable for a
// given net. On a cycle, returns a description of one offending loop.
std::optional<std::vector<int>> kahn_order(const std::vector<std::vector<int>>& parents,
                                           const std::vector<NodeId>& ids,
                                           std::string* cycle_note) {
  int n = static_cast<int>(ids.size());
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i) {
    indegree[i] = static_cast<int>(parents[i].size());
    for (int p : parents[i]) children[p].push_back(i);
  }
  auto cmp = [&ids](int a, int b) { return ids[a] > ids[b]; };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> frontier(cmp);
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) frontier.push(i);
  std::vector<int> order;
  order.reserve(n);
  while (!frontier.empty()) {
    int u = frontier.top();
    frontier.pop();
    order.push_back(u);
    for (int c : children[u])
      if (--indegree[c] == 0) frontier.push(c);
  }
  if (static_cast<int>(order.size()) == n) return order;

  if (cycle_note) {
    // Walk parent links among unresolved nodes until one repeats.
    std::vector<bool> stuck(n, false);
    for (int i = 0; i < n; ++i) stuck[i] = indegree[i] > 0;
    int start = 0;
    while (!stuck[start]) ++start;
    std::vector<int> path;
    std::vector<int> seen_at(n, -1);
    int cur = start;
    while (seen_at[cur] < 0) {
      seen_at[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      for (int p : parents[cur]) {
        if (stuck[p]) {
          cur = p;
          break;
        }
      }
    }
    std::ostringstream os;
    os << "cycle:";
    for (size_t i = seen_at[cur]; i < path.size(); ++i) os << " " << ids[path[i]];
    os << " " << ids[cur];
    *cycle_note = os.str();
  }
  return std::nullopt;
}

}  // namespace

GameNet GameNetBuilder::build() const {
  GameNet net;
  for (const auto& p : pending_) {
    if (net.index_.count(p.id)) throw NetError("duplicate node id: " + p.id);
    net.index_[p.id] = static_cast<int>(net.nodes_.size());
    GameNet::Node n;
    n.id = p.id;
    n.kind = p.kind;
    n.player = p.kind == NodeKind::decision ? p.player : -1;
    n.space = p.space;
    n.parent_ids = p.parents;
    n.cpd = p.cpd;
    net.nodes_.push_back(std::move(n));
  }
  for (auto& n : net.nodes_) {
    std::set<NodeId> seen;
    for (const auto& pid : n.parent_ids) {
      auto it = net.index_.find(pid);
      if (it == net.index_.end())
        throw NetError("node " + n.id + " references unknown parent " + pid);
      if (!seen.insert(pid).second)
        throw NetError("node " + n.id + " lists parent " + pid + " twice");
      if (pid == n.id) throw NetError("node " + n.id + " is its own parent");
      n.parent_idx.push_back(it->second);
    }
  }
  for (int i = 0; i < net.node_count(); ++i)
    for (int p : net.nodes_[i].parent_idx) net.nodes_[p].child_idx.push_back(i);

  int max_player = -1;
  for (const auto& kv : utilities_) max_player = std::max(max_player, kv.first);
  net.utilities_.resize(max_player + 1);
  for (const auto& kv : utilities_) net.utilities_[kv.first] = kv.second;

  std::vector<std::vector<int>> parent_lists;
  std::vector<NodeId> ids;
  for (const auto& n : net.nodes_) {
    parent_lists.push_back(n.parent_idx);
    ids.push_back(n.id);
  }
  auto order = kahn_order(parent_lists, ids, &net.cycle_note_);
  if (order) {
    std::vector<NodeId> topo;
    topo.reserve(order->size());
    for (int i : *order) topo.push_back(net.nodes_[i].id);
    net.topo_ = std::move(topo);
  }
  return net;
}

std::vector<Diagnostic> validate(const GameNet& net) {
  std::vector<Diagnostic> out;

  try {
    net.topological_order();
  } catch (const NetError& e) {
    out.push_back({"", "acyclic", e.what()});
  }

  for (const auto& id : net.node_ids()) {
    const VariableSpace& s = net.space(id);
    if (s.is_discrete() && s.cardinality() < 2)
      out.push_back({id, "space-size", "discrete space has fewer than two elements"});
    if (!s.is_discrete()) {
      for (int d = 0; d < s.dimension(); ++d) {
        if (!(s.lower()[d] < s.upper()[d])) {
          out.push_back({id, "space-size", "box has an empty coordinate range"});
          break;
        }
      }
    }
    if (net.kind(id) == NodeKind::chance && !net.has_cpd(id))
      out.push_back({id, "chance-cpd", "chance node has no conditional distribution"});
    if (net.kind(id) == NodeKind::decision && net.has_cpd(id))
      out.push_back({id, "decision-cpd",
                     "decision node carries a conditional; strategies are supplied externally"});
  }

  // Exactly one decision node per player, covering players 0..N-1.
  int players = net.num_players();
  std::map<int, std::vector<NodeId>> owners;
  for (const auto& id : net.decision_nodes()) owners[net.player_of(id)].push_back(id);
  for (const auto& kv : owners) {
    if (kv.first < 0 || kv.first >= players)
      out.push_back({kv.second.front(), "player-partition",
                     "decision node assigned to player without a utility"});
    if (kv.second.size() > 1)
      out.push_back({kv.second.front(), "player-partition",
                     "player " + std::to_string(kv.first) + " owns multiple decision nodes"});
  }
  for (int p = 0; p < players; ++p) {
    if (!owners.count(p))
      out.push_back({"", "player-partition",
                     "player " + std::to_string(p) + " has no decision node"});
    if (!net.utility(p))
      out.push_back({"", "player-partition",
                     "player " + std::to_string(p) + " has no utility function"});
  }

  // Spot-check normalization of discrete conditionals when the parent space
  // is small enough to enumerate.
  for (const auto& id : net.node_ids()) {
    if (net.kind(id) != NodeKind::chance || !net.has_cpd(id)) continue;
    if (!net.space(id).is_discrete() || !net.cpd(id).density) continue;
    const auto& pa = net.parents(id);
    long combos = 1;
    bool enumerable = true;
    for (const auto& pid : pa) {
      if (!net.space(pid).is_discrete()) {
        enumerable = false;
        break;
      }
      combos *= net.space(pid).cardinality();
      if (combos > 1024) {
        enumerable = false;
        break;
      }
    }
    if (!enumerable) continue;
    std::vector<int> combo(pa.size(), 0);
    for (long c = 0; c < combos; ++c) {
      Instantiation inst;
      long rem = c;
      for (size_t i = pa.size(); i-- > 0;) {
        int card = net.space(pa[i]).cardinality();
        inst[pa[i]] = static_cast<int>(rem % card);
        rem /= card;
      }
      double total = 0;
      for (int k = 0; k < net.space(id).cardinality(); ++k)
        total += net.cpd(id).density(Value(k), inst);
      if (std::fabs(total - 1.0) > 1e-9) {
        out.push_back({id, "cpd-normalization", "conditional does not sum to 1"});
        break;
      }
    }
  }

  return out;
}

}  // namespace nfg
