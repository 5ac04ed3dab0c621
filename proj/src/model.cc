#include "vne/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "vne/rng.h"

namespace vne {
namespace {

void Require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

bool PositiveFinite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

PhysicalNetwork::PhysicalNetwork(std::vector<PhysicalNode> nodes,
                                 std::vector<PhysicalLink> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  const int n = node_count();
  id_index_.reserve(n);
  for (int i = 0; i < n; ++i) {
    Require(PositiveFinite(nodes_[i].cpu_capacity),
            "node " + std::to_string(nodes_[i].id) +
                ": capacity must be positive");
    id_index_.emplace_back(nodes_[i].id, i);
  }
  std::sort(id_index_.begin(), id_index_.end());
  for (int i = 1; i < n; ++i) {
    Require(id_index_[i].first != id_index_[i - 1].first,
            "duplicate node id " + std::to_string(id_index_[i].first));
  }

  adjacency_.assign(n, {});
  link_index_.assign(n, std::vector<int>(n, -1));
  for (int l = 0; l < link_count(); ++l) {
    const PhysicalLink& link = links_[l];
    Require(PositiveFinite(link.bandwidth),
            "link " + std::to_string(l) + ": bandwidth must be positive");
    Require(link.from != link.to,
            "link " + std::to_string(l) + ": self-loop on node " +
                std::to_string(link.from));
    const int a = IndexOf(link.from);
    const int b = IndexOf(link.to);
    Require(link_index_[a][b] < 0, "link " + std::to_string(l) +
                                       ": parallel link between " +
                                       std::to_string(link.from) + " and " +
                                       std::to_string(link.to));
    link_index_[a][b] = l;
    link_index_[b][a] = l;
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& neighbours : adjacency_) {
    std::sort(neighbours.begin(), neighbours.end(), [this](int x, int y) {
      return nodes_[x].id < nodes_[y].id;
    });
  }
}

int PhysicalNetwork::IndexOf(NodeId id) const {
  auto it = std::lower_bound(
      id_index_.begin(), id_index_.end(), id,
      [](const std::pair<NodeId, int>& e, NodeId key) { return e.first < key; });
  if (it == id_index_.end() || it->first != id) {
    throw std::invalid_argument("unknown node id " + std::to_string(id));
  }
  return it->second;
}

std::optional<int> PhysicalNetwork::LinkBetween(int a, int b) const {
  const int l = link_index_[a][b];
  if (l < 0) return std::nullopt;
  return l;
}

std::vector<double> PhysicalNetwork::NodeCapacities() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& node : nodes_) out.push_back(node.cpu_capacity);
  return out;
}

std::vector<double> PhysicalNetwork::LinkBandwidths() const {
  std::vector<double> out;
  out.reserve(links_.size());
  for (const auto& link : links_) out.push_back(link.bandwidth);
  return out;
}

VnRequest::VnRequest(int id, std::vector<VirtualNode> vnodes,
                     std::vector<VirtualLink> vlinks, double value)
    : id_(id),
      vnodes_(std::move(vnodes)),
      vlinks_(std::move(vlinks)),
      value_(value) {
  const std::string where = "request " + std::to_string(id_) + ": ";
  Require(!vnodes_.empty(), where + "needs at least one vnode");
  for (const auto& vnode : vnodes_) {
    Require(PositiveFinite(vnode.demand), where + "vnode demand must be > 0");
  }
  for (const auto& vlink : vlinks_) {
    Require(vlink.from >= 0 && vlink.from < vnode_count() && vlink.to >= 0 &&
                vlink.to < vnode_count(),
            where + "vlink endpoint out of range");
    Require(vlink.from != vlink.to, where + "vlink endpoints must differ");
    Require(PositiveFinite(vlink.demand), where + "vlink demand must be > 0");
  }
  Require(std::isfinite(value_) && value_ >= 0.0,
          where + "value must be finite and nonnegative");
}

double VnRequest::TotalNodeDemand() const {
  double sum = 0.0;
  for (const auto& vnode : vnodes_) sum += vnode.demand;
  return sum;
}

double VnRequest::TotalLinkDemand() const {
  double sum = 0.0;
  for (const auto& vlink : vlinks_) sum += vlink.demand;
  return sum;
}

PathSet::PathSet(int node_count, int k_max, std::vector<Path> paths)
    : node_count_(node_count), k_max_(k_max), paths_(std::move(paths)) {
  by_pair_.assign(static_cast<std::size_t>(node_count_) * node_count_, {});
  for (int k = 0; k < size(); ++k) {
    const Path& p = paths_[k];
    by_pair_[p.source() * node_count_ + p.target()].push_back(k);
  }
}

std::span<const int> PathSet::Between(int source, int target) const {
  return by_pair_[source * node_count_ + target];
}

DiscoveryMask DiscoveryMask::Full(int requests, int nodes, int paths) {
  DiscoveryMask mask;
  mask.node_available.assign(requests, std::vector<std::uint8_t>(nodes, 1));
  mask.path_available.assign(requests, std::vector<std::uint8_t>(paths, 1));
  return mask;
}

void DiscoveryMask::Validate(int requests, int nodes, int paths) const {
  Require(static_cast<int>(node_available.size()) == requests &&
              static_cast<int>(path_available.size()) == requests,
          "discovery mask: request dimension mismatch");
  for (int j = 0; j < requests; ++j) {
    Require(static_cast<int>(node_available[j].size()) == nodes,
            "discovery mask: node dimension mismatch");
    Require(static_cast<int>(path_available[j].size()) == paths,
            "discovery mask: path dimension mismatch");
    for (auto v : node_available[j]) Require(v <= 1, "mask entries are 0/1");
    for (auto v : path_available[j]) Require(v <= 1, "mask entries are 0/1");
  }
}

DiscoveryMask DiscoverResources(const PhysicalNetwork& net,
                                const PathSet& paths,
                                std::span<const double> node_residual,
                                std::span<const double> path_residual,
                                int requests, double min_residual,
                                std::optional<int> max_hops, int anchor) {
  const int n = net.node_count();
  std::vector<int> hops(n, -1);
  if (max_hops) {
    std::queue<int> frontier;
    hops[anchor] = 0;
    frontier.push(anchor);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int w : net.Neighbours(u)) {
        if (hops[w] < 0) {
          hops[w] = hops[u] + 1;
          frontier.push(w);
        }
      }
    }
  }
  std::vector<std::uint8_t> nodes(n, 0);
  for (int i = 0; i < n; ++i) {
    const bool in_range = !max_hops || (hops[i] >= 0 && hops[i] <= *max_hops);
    nodes[i] = in_range && node_residual[i] > min_residual ? 1 : 0;
  }
  std::vector<std::uint8_t> visible_paths(paths.size(), 0);
  for (int k = 0; k < paths.size(); ++k) {
    const Path& p = paths.path(k);
    visible_paths[k] = path_residual[k] > 0.0 && nodes[p.source()] &&
                               nodes[p.target()]
                           ? 1
                           : 0;
  }
  DiscoveryMask mask;
  mask.node_available.assign(requests, nodes);
  mask.path_available.assign(requests, visible_paths);
  return mask;
}

void CheckEmbeddingConsistency(const PhysicalNetwork& net, const PathSet& paths,
                               const VnRequest& request,
                               const Embedding& embedding) {
  if (!embedding.accepted) return;
  const std::string where = "embedding of request " +
                            std::to_string(request.id()) + ": ";
  Require(static_cast<int>(embedding.node_map.size()) == request.vnode_count(),
          where + "node map size mismatch");
  Require(static_cast<int>(embedding.link_map.size()) == request.vlink_count(),
          where + "link map size mismatch");
  for (int host : embedding.node_map) {
    Require(host >= 0 && host < net.node_count(), where + "unmapped vnode");
  }
  for (int e = 0; e < request.vlink_count(); ++e) {
    const VirtualLink& vlink = request.vlinks()[e];
    const int s = embedding.node_map[vlink.from];
    const int t = embedding.node_map[vlink.to];
    const int k = embedding.link_map[e];
    if (s == t) {
      Require(k == kNoPath, where + "colocated vlink carries a path");
      continue;
    }
    Require(k >= 0 && k < paths.size(), where + "unmapped vlink");
    const Path& p = paths.path(k);
    Require(p.source() == s && p.target() == t,
            where + "vlink path endpoints disagree with vnode hosts");
  }
}

CapacityViolation::CapacityViolation(Resource resource, int id,
                                     double residual)
    : std::runtime_error(
          std::string(resource == Resource::kNode ? "node " : "link ") +
          std::to_string(id) + " oversubscribed (residual " +
          std::to_string(residual) + ")"),
      resource_(resource),
      id_(id),
      residual_(residual) {}

std::vector<double> PathResiduals(const PathSet& paths,
                                  std::span<const double> link_residual) {
  std::vector<double> out(paths.size());
  for (int k = 0; k < paths.size(); ++k) {
    double bottleneck = std::numeric_limits<double>::infinity();
    for (int l : paths.path(k).links) {
      bottleneck = std::min(bottleneck, link_residual[l]);
    }
    out[k] = bottleneck;
  }
  return out;
}

Residuals ResidualCapacity(const PhysicalNetwork& net, const PathSet& paths,
                           std::span<const Embedding> embeddings,
                           std::span<const VnRequest> requests,
                           double tolerance) {
  Require(embeddings.size() == requests.size(),
          "residual capacity: one embedding per request expected");
  Residuals out;
  out.node = net.NodeCapacities();
  out.link = net.LinkBandwidths();
  for (std::size_t j = 0; j < embeddings.size(); ++j) {
    const Embedding& embedding = embeddings[j];
    if (!embedding.accepted) continue;
    const VnRequest& request = requests[j];
    CheckEmbeddingConsistency(net, paths, request, embedding);
    for (int v = 0; v < request.vnode_count(); ++v) {
      out.node[embedding.node_map[v]] -= request.vnodes()[v].demand;
    }
    for (int e = 0; e < request.vlink_count(); ++e) {
      const int k = embedding.link_map[e];
      if (k == kNoPath) continue;
      for (int l : paths.path(k).links) {
        out.link[l] -= request.vlinks()[e].demand;
      }
    }
  }
  for (int i = 0; i < net.node_count(); ++i) {
    if (out.node[i] < -tolerance) {
      throw CapacityViolation(CapacityViolation::Resource::kNode,
                              net.nodes()[i].id, out.node[i]);
    }
  }
  for (int l = 0; l < net.link_count(); ++l) {
    if (out.link[l] < -tolerance) {
      throw CapacityViolation(CapacityViolation::Resource::kLink, l,
                              out.link[l]);
    }
  }
  out.path = PathResiduals(paths, out.link);
  return out;
}

PhysicalNetwork GenerateFullMesh(int n, double node_capacity,
                                 double link_capacity) {
  Require(n >= 2, "full mesh needs at least two nodes");
  Require(PositiveFinite(node_capacity) && PositiveFinite(link_capacity),
          "full mesh capacities must be positive");
  std::vector<PhysicalNode> nodes;
  std::vector<PhysicalLink> links;
  for (int i = 0; i < n; ++i) nodes.push_back({i, node_capacity});
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) links.push_back({a, b, link_capacity});
  }
  return PhysicalNetwork(std::move(nodes), std::move(links));
}

ValueRule ParseValueRule(const std::string& name) {
  if (name == "node_demand_sum") return ValueRule::kNodeDemandSum;
  if (name == "total_demand_sum") return ValueRule::kTotalDemandSum;
  if (name == "unit") return ValueRule::kUnit;
  throw std::invalid_argument("unknown value rule '" + name + "'");
}

std::string ToString(ValueRule rule) {
  switch (rule) {
    case ValueRule::kNodeDemandSum:
      return "node_demand_sum";
    case ValueRule::kTotalDemandSum:
      return "total_demand_sum";
    case ValueRule::kUnit:
      return "unit";
  }
  return "unknown";
}

VnRequest GenerateRandomVn(int id, int n_vnodes, double link_prob,
                           Interval node_demand, Interval link_demand,
                           ValueRule value_rule, std::uint64_t seed) {
  Require(n_vnodes >= 1, "random VN needs at least one vnode");
  Require(link_prob >= 0.0 && link_prob <= 1.0,
          "link probability must lie in [0, 1]");
  Require(node_demand.lo > 0.0 && node_demand.lo <= node_demand.hi,
          "empty or nonpositive node demand interval");
  Require(link_demand.lo > 0.0 && link_demand.lo <= link_demand.hi,
          "empty or nonpositive link demand interval");
  Rng rng(seed);
  std::vector<VirtualNode> vnodes(n_vnodes);
  for (auto& vnode : vnodes) {
    vnode.demand = rng.Uniform(node_demand.lo, node_demand.hi);
  }
  std::vector<VirtualLink> vlinks;
  for (int a = 0; a < n_vnodes; ++a) {
    for (int b = a + 1; b < n_vnodes; ++b) {
      // Both draws happen for every pair so the topology of a given seed does
      // not depend on the demand interval.
      const bool present = rng.Bernoulli(link_prob);
      const double demand = rng.Uniform(link_demand.lo, link_demand.hi);
      if (present) vlinks.push_back({a, b, demand});
    }
  }
  double value = 0.0;
  switch (value_rule) {
    case ValueRule::kNodeDemandSum:
      for (const auto& vnode : vnodes) value += vnode.demand;
      break;
    case ValueRule::kTotalDemandSum:
      for (const auto& vnode : vnodes) value += vnode.demand;
      for (const auto& vlink : vlinks) value += vlink.demand;
      break;
    case ValueRule::kUnit:
      value = 1.0;
      break;
  }
  return VnRequest(id, std::move(vnodes), std::move(vlinks), value);
}

}  // namespace vne
