#ifndef VNE_MODEL_H_
#define VNE_MODEL_H_

// Domain types for the embedding problem: the physical substrate, virtual
// network requests, resource-discovery masks and decoded embeddings.
//
// All types are value objects. Constructors validate their invariants and
// throw std::invalid_argument on violation; nothing mutates after that.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vne {

using NodeId = int;

struct PhysicalNode {
  NodeId id = 0;
  double cpu_capacity = 0.0;
};

// Undirected link between two hosting nodes.
struct PhysicalLink {
  NodeId from = 0;
  NodeId to = 0;
  double bandwidth = 0.0;
};

class PhysicalNetwork {
 public:
  PhysicalNetwork() = default;
  PhysicalNetwork(std::vector<PhysicalNode> nodes,
                  std::vector<PhysicalLink> links);

  const std::vector<PhysicalNode>& nodes() const { return nodes_; }
  const std::vector<PhysicalLink>& links() const { return links_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }

  // Dense index in [0, node_count) of a node id; throws if unknown.
  int IndexOf(NodeId id) const;
  // Index of the link joining two node indices, if any.
  std::optional<int> LinkBetween(int a, int b) const;
  // Neighbour node indices of `index`, ascending by node id.
  const std::vector<int>& Neighbours(int index) const {
    return adjacency_[index];
  }

  std::vector<double> NodeCapacities() const;
  std::vector<double> LinkBandwidths() const;

 private:
  std::vector<PhysicalNode> nodes_;
  std::vector<PhysicalLink> links_;
  std::vector<std::pair<NodeId, int>> id_index_;  // sorted by id
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> link_index_;  // node_count x node_count, -1
};

struct VirtualNode {
  double demand = 0.0;
};

// Endpoints are vnode indices within the owning request.
struct VirtualLink {
  int from = 0;
  int to = 0;
  double demand = 0.0;
};

class VnRequest {
 public:
  VnRequest() = default;
  VnRequest(int id, std::vector<VirtualNode> vnodes,
            std::vector<VirtualLink> vlinks, double value);

  int id() const { return id_; }
  const std::vector<VirtualNode>& vnodes() const { return vnodes_; }
  const std::vector<VirtualLink>& vlinks() const { return vlinks_; }
  double value() const { return value_; }
  int vnode_count() const { return static_cast<int>(vnodes_.size()); }
  int vlink_count() const { return static_cast<int>(vlinks_.size()); }
  double TotalNodeDemand() const;
  double TotalLinkDemand() const;

 private:
  int id_ = 0;
  std::vector<VirtualNode> vnodes_;
  std::vector<VirtualLink> vlinks_;
  double value_ = 0.0;
};

// One loop-free path between two hosting nodes. `nodes` are node indices,
// `links` the link indices traversed in order.
struct Path {
  std::vector<int> nodes;
  std::vector<int> links;
  double capacity = 0.0;

  int source() const { return nodes.front(); }
  int target() const { return nodes.back(); }
  int hops() const { return static_cast<int>(links.size()); }
};

// Loop-free paths per ordered node pair, with one global index per path.
class PathSet {
 public:
  PathSet() = default;
  PathSet(int node_count, int k_max, std::vector<Path> paths);

  const std::vector<Path>& paths() const { return paths_; }
  const Path& path(int k) const { return paths_[k]; }
  int size() const { return static_cast<int>(paths_.size()); }
  int k_max() const { return k_max_; }
  int node_count() const { return node_count_; }
  // Global indices of the paths from `source` to `target` (node indices),
  // in enumeration order.
  std::span<const int> Between(int source, int target) const;

 private:
  int node_count_ = 0;
  int k_max_ = 0;
  std::vector<Path> paths_;
  std::vector<std::vector<int>> by_pair_;  // source * n + target
};

// Up to k_max simple paths per ordered pair, sorted by hop count and then by
// node sequence. Disconnected pairs get no paths.
PathSet EnumerateLoopFreePaths(const PhysicalNetwork& net, int k_max);

// The result of resource discovery for a batch of requests: entry [j][i] is 1
// when physical node i is visible to request j, entry [j][k] likewise for
// path k.
struct DiscoveryMask {
  std::vector<std::vector<std::uint8_t>> node_available;
  std::vector<std::vector<std::uint8_t>> path_available;

  static DiscoveryMask Full(int requests, int nodes, int paths);
  void Validate(int requests, int nodes, int paths) const;
};

// Marks nodes with at least `min_residual` capacity left, optionally only
// those within `max_hops` of `anchor`, and paths with positive residual.
DiscoveryMask DiscoverResources(const PhysicalNetwork& net,
                                const PathSet& paths,
                                std::span<const double> node_residual,
                                std::span<const double> path_residual,
                                int requests, double min_residual = 0.0,
                                std::optional<int> max_hops = std::nullopt,
                                int anchor = 0);

inline constexpr int kNoPath = -1;
inline constexpr int kUnmapped = -1;

// Decoded embedding of one request. node_map[v] is the hosting node index of
// vnode v; link_map[e] is the global path index carrying vlink e, or kNoPath
// when both endpoints share a host.
struct Embedding {
  int request_id = 0;
  bool accepted = false;
  std::vector<int> node_map;
  std::vector<int> link_map;
  bool fractional = false;
};

// Throws std::invalid_argument when an accepted embedding maps a vnode or
// vlink outside the network, or a vlink path disagrees with its endpoint
// hosts.
void CheckEmbeddingConsistency(const PhysicalNetwork& net, const PathSet& paths,
                               const VnRequest& request,
                               const Embedding& embedding);

class CapacityViolation : public std::runtime_error {
 public:
  enum class Resource { kNode, kLink };
  CapacityViolation(Resource resource, int id, double residual);
  Resource resource() const { return resource_; }
  // Node id for node violations, link index for link violations.
  int id() const { return id_; }
  double residual() const { return residual_; }

 private:
  Resource resource_;
  int id_;
  double residual_;
};

struct Residuals {
  std::vector<double> node;  // by node index
  std::vector<double> link;  // by link index
  std::vector<double> path;  // by global path index, bottleneck of `link`
};

// Capacity left after committing every accepted embedding. Throws
// CapacityViolation naming the first resource driven below zero.
Residuals ResidualCapacity(const PhysicalNetwork& net, const PathSet& paths,
                           std::span<const Embedding> embeddings,
                           std::span<const VnRequest> requests,
                           double tolerance = 1e-9);

// Path residuals from per-link residuals.
std::vector<double> PathResiduals(const PathSet& paths,
                                  std::span<const double> link_residual);

PhysicalNetwork GenerateFullMesh(int n, double node_capacity,
                                 double link_capacity);

enum class ValueRule {
  kNodeDemandSum,   // sum of vnode demands
  kTotalDemandSum,  // vnode plus vlink demands
  kUnit,            // every request is worth 1
};

ValueRule ParseValueRule(const std::string& name);
std::string ToString(ValueRule rule);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Random request over `n_vnodes` vnodes; every unordered pair gets a vlink
// with probability `link_prob`. Node and link demands are uniform in their
// intervals. Pure function of its arguments.
VnRequest GenerateRandomVn(int id, int n_vnodes, double link_prob,
                           Interval node_demand, Interval link_demand,
                           ValueRule value_rule, std::uint64_t seed);

inline VnRequest GenerateRandomVn(int n_vnodes, double link_prob,
                                  Interval demand, ValueRule value_rule,
                                  std::uint64_t seed) {
  return GenerateRandomVn(0, n_vnodes, link_prob, demand, demand, value_rule,
                          seed);
}

}  // namespace vne

#endif  // VNE_MODEL_H_
