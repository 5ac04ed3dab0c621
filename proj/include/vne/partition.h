#ifndef VNE_PARTITION_H_
#define VNE_PARTITION_H_

// Splitting a request into vnode partitions, and the block form of the node
// placement program over those partitions:
//
//   maximize    sum_s c_s^T x_s
//   subject to  A_s x_s <= b_s          (local assignment rows, per part)
//               sum_s F_s x_s <= h      (shared node capacity)
//               0 <= x_s <= 1

#include <span>
#include <string>
#include <vector>

#include "vne/lp.h"
#include "vne/model.h"
#include "vne/monolith.h"

namespace vne {

enum class PartitionKind { kNone, kHalves, kKWay, kCapacityOrdered };

struct PartitionPolicy {
  PartitionKind kind = PartitionKind::kNone;
  int k = 1;  // used by kKWay and kCapacityOrdered

  // "none", "halves", "k_way:<k>" or "capacity_ordered:<k>".
  static PartitionPolicy Parse(const std::string& text);
  std::string ToString() const;
};

struct VnPartition {
  std::vector<int> vnodes;  // ascending
  std::vector<int> vlinks;  // vlinks with both ends in this part
};

struct VnSplit {
  std::vector<VnPartition> parts;
  std::vector<int> cross_vlinks;  // vlinks whose ends lie in different parts
};

// kHalves gives parts of ceil(n/2) and floor(n/2) vnodes by ascending index
// (a single vnode stays whole). kKWay cuts the index order into k contiguous
// runs whose sizes differ by at most one, larger runs first.
// kCapacityOrdered ranks vnodes by demand plus incident vlink demand
// (descending, lower index on ties), cuts that ranking into k runs and orders
// the parts by descending total vnode demand. Throws std::invalid_argument
// when k < 1 or k exceeds the vnode count.
VnSplit Split(const VnRequest& request, const PartitionPolicy& policy);

struct PartitionBlock {
  std::vector<int> vnodes;   // original vnode indices, in column order
  lp::LpProblem local;       // costs, bounds and A_s x_s <= b_s
  // F_s: row i holds the demands of this part's columns on physical node i.
  std::vector<lp::SparseRow> coupling;
  // Column c of `local` places original vnode column_map[c].first on node
  // column_map[c].second.
  std::vector<std::pair<int, int>> column_map;
};

struct PartitionedLp {
  std::vector<PartitionBlock> blocks;
  std::vector<double> h;  // shared node capacity
  int node_count = 0;
  int vnode_count = 0;
  AssignmentMode assignment = AssignmentMode::kAtMostOnce;
  // The unsplit placement program; used for rounding and as the reference.
  NodeEmbeddingProgram whole;

  int num_partitions() const { return static_cast<int>(blocks.size()); }
  int num_columns() const;
};

// Throws std::invalid_argument on an empty split, an empty part, a vnode
// missing or repeated across parts, or capacity / mask size mismatches.
PartitionedLp BuildPartitionedLp(const VnRequest& request, const VnSplit& split,
                                 std::span<const double> node_capacity,
                                 std::span<const std::uint8_t> available,
                                 const UtilitySpec& utility,
                                 AssignmentMode assignment =
                                     AssignmentMode::kAtMostOnce,
                                 int request_slot = 0);

// All blocks side by side with the shared rows enforced: local rows of block
// 0, block 1, ..., then one capacity row per node. With a single part built
// from an unsplit request this is the node embedding program itself.
lp::LpProblem CoupledProgram(const PartitionedLp& plp);

// F_s x_s for one block.
std::vector<double> CouplingUsage(const PartitionBlock& block,
                                  std::span<const double> x);

// Scatters per-block solutions into node embedding column order
// (vnode * node_count + node).
std::vector<double> AssembleSolution(const PartitionedLp& plp,
                                     const std::vector<std::vector<double>>& xs);

}  // namespace vne

#endif  // VNE_PARTITION_H_
