#ifndef VNE_MONOLITH_H_
#define VNE_MONOLITH_H_

// Centralised embedding programs.
//
// BuildEmbeddingProgram assembles the full discovery / mapping / allocation
// program over a batch of requests. Each request gets a contiguous block of
// columns laid out as
//
//   n_p[i]      node i discovered for this request
//   p[k]        path k discovered
//   n_v[v][i]   vnode v mapped onto node i
//   l[e][k]     vlink e carried by path k
//   c[e][i]     vlink e collapsed onto node i (both ends on one host);
//               absent when hosts must be distinct
//   y           request accepted
//   w[v][i]     y * n_v[v][i]
//   m[e][k]     y * l[e][k]
//
// The products w and m linearise the capacity rows. BuildNodeEmbeddingProgram
// is the smaller vnode-placement program used by the decompositions.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vne/lp.h"
#include "vne/model.h"

namespace vne {

enum class UtilityMode {
  kRevenue,       // sum_j value_j * y_j
  kWeightedNode,  // sum over placed vnodes of demand * weight(j, v, i)
};

UtilityMode ParseUtilityMode(const std::string& name);
std::string ToString(UtilityMode mode);

struct UtilitySpec {
  UtilityMode mode = UtilityMode::kRevenue;
  // Per physical node; empty means all ones.
  std::vector<double> node_weights;
  // affinity[j][v][i] multiplies the node weight for vnode v of request j.
  // Empty (or missing entries) means one.
  std::vector<std::vector<std::vector<double>>> affinity;

  double Weight(int request, int vnode, int node) const;
  // Throws std::invalid_argument on negative or non-finite weights.
  void Validate(int node_count) const;
};

enum class LinkCapacityMode {
  kPhysicalLink,  // sum over paths crossing a link <= its bandwidth
  kPerPath,       // one row per path against the path bottleneck
};

struct ProgramOptions {
  bool relax = false;
  LinkCapacityMode link_capacity = LinkCapacityMode::kPhysicalLink;
  // One vnode per host within a request.
  bool distinct_hosts = false;
};

// Capacities the allocation rows are checked against. Defaults to the
// network's own capacities; the harness passes residuals here.
struct CapacityBudget {
  std::vector<double> node;  // by node index
  std::vector<double> link;  // by link index
  std::vector<double> path;  // by path index, used in kPerPath mode

  static CapacityBudget FromNetwork(const PhysicalNetwork& net,
                                    const PathSet& paths);
};

struct RequestColumns {
  int first = 0;  // first column of the block
  int end = 0;    // one past the last column
  std::vector<int> node_present;              // [i]
  std::vector<int> path_present;              // [k]
  std::vector<std::vector<int>> node_map;     // [v][i]
  std::vector<std::vector<int>> link_map;     // [e][k]
  std::vector<std::vector<int>> colocation;   // [e][i], empty if distinct
  int accept = 0;
  std::vector<std::vector<int>> node_usage;   // w[v][i]
  std::vector<std::vector<int>> link_usage;   // m[e][k]
};

struct EmbeddingProgram {
  lp::LpProblem lp;
  std::vector<RequestColumns> columns;  // one per request
  std::vector<VnRequest> requests;
  PathSet paths;
  CapacityBudget budget;
  UtilitySpec utility;
  ProgramOptions options;
  int node_count = 0;
};

// Throws std::invalid_argument when the mask or budget dimensions disagree
// with the network, or the utility is malformed.
EmbeddingProgram BuildEmbeddingProgram(const PhysicalNetwork& net,
                                       const PathSet& paths,
                                       std::vector<VnRequest> requests,
                                       const DiscoveryMask& mask,
                                       const UtilitySpec& utility,
                                       const ProgramOptions& options = {},
                                       const CapacityBudget* budget = nullptr);

// Column names and per-request column blocks as JSON.
void WriteIndexMap(const EmbeddingProgram& program, std::ostream& out);

// Reads an integral solution. Rejected requests get kUnmapped / kNoPath.
std::vector<Embedding> DecodeEmbeddings(const EmbeddingProgram& program,
                                        const std::vector<double>& x);

// Value of the utility for a set of decoded embeddings.
double EmbeddingUtility(const EmbeddingProgram& program,
                        std::span<const Embedding> embeddings);

struct MonolithResult {
  lp::LpStatus status = lp::LpStatus::kInfeasible;
  std::vector<Embedding> embeddings;
  double objective = 0.0;
  std::int64_t nodes = 0;
  std::string diagnostic;
};

// Solves the integral program with a full discovery mask (unless one is
// given) and decodes it. An infeasible program rejects every request.
MonolithResult EmbedMonolithic(const PhysicalNetwork& net, const PathSet& paths,
                               const std::vector<VnRequest>& requests,
                               const UtilitySpec& utility,
                               const ProgramOptions& options = {},
                               const DiscoveryMask* mask = nullptr,
                               const CapacityBudget* budget = nullptr,
                               const lp::SolverOptions& solver = {});

// Rounds a fractional solution of `program` to capacity-feasible integral
// embeddings. Requests with y >= 0.5 start accepted. Each vnode goes to its
// largest n_v entry, each vlink to its largest available path between the
// chosen hosts (lowest index on ties). While some capacity is exceeded, or a
// request cannot be routed, the accepted request of lowest value is dropped
// (the later one on ties) and rounding is repeated.
std::vector<Embedding> RepairToInteger(const EmbeddingProgram& program,
                                       const std::vector<double>& x);

// Vnode placement for one request: column v * node_count + i is the share of
// vnode v placed on node i.
enum class AssignmentMode {
  kAtMostOnce,   // sum_i x[v][i] <= 1: a zero budget leaves x = 0 feasible
  kExactlyOnce,  // sum_i x[v][i] == 1, as two opposite rows
};

struct NodeEmbeddingProgram {
  lp::LpProblem lp;
  int vnode_count = 0;
  int node_count = 0;
  AssignmentMode assignment = AssignmentMode::kAtMostOnce;
  std::vector<double> demand;  // per vnode
  int first_capacity_row = 0;  // rows before this one are assignment rows

  int Column(int vnode, int node) const { return vnode * node_count + node; }
};

// `available` may be empty (every node usable). Revenue utility spreads the
// request value over vnodes in proportion to demand; the weighted-node mode
// uses demand * weight(request_slot, v, i).
NodeEmbeddingProgram BuildNodeEmbeddingProgram(
    const VnRequest& request, std::span<const double> node_capacity,
    std::span<const std::uint8_t> available, const UtilitySpec& utility,
    AssignmentMode assignment = AssignmentMode::kAtMostOnce,
    int request_slot = 0);

struct NodeAssignment {
  std::vector<int> host;  // per vnode, kUnmapped if not placed
  double objective = 0.0;
  bool complete = false;  // every vnode placed
};

// Vnodes with total mass >= 0.5 go to their largest entry (lowest node on
// ties). While a node is over capacity the placed vnode on it with the
// smallest objective contribution is unplaced (higher index on ties).
NodeAssignment RepairNodeAssignment(const NodeEmbeddingProgram& program,
                                    std::span<const double> x,
                                    std::span<const double> node_capacity);

}  // namespace vne

#endif  // VNE_MONOLITH_H_
