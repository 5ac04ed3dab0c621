#include "vne/partition.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vne {
namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Sizes of k contiguous runs over n items, larger first.
std::vector<int> RunSizes(int n, int k) {
  std::vector<int> sizes(k, n / k);
  for (int r = 0; r < n % k; ++r) ++sizes[r];
  return sizes;
}

int ParseCount(const std::string& text, const std::string& policy) {
  std::size_t used = 0;
  int k = 0;
  try {
    k = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == text.size() && used > 0,
          "partition policy '" + policy + "' needs an integer count");
  Require(k >= 1, "partition policy '" + policy + "' needs a count of at least 1");
  return k;
}

}  // namespace

PartitionPolicy PartitionPolicy::Parse(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (name == "none" && arg.empty()) return {PartitionKind::kNone, 1};
  if (name == "halves" && arg.empty()) return {PartitionKind::kHalves, 2};
  if (name == "k_way") return {PartitionKind::kKWay, ParseCount(arg, name)};
  if (name == "capacity_ordered") {
    return {PartitionKind::kCapacityOrdered, ParseCount(arg, name)};
  }
  throw std::invalid_argument("unknown partition policy '" + text + "'");
}

std::string PartitionPolicy::ToString() const {
  switch (kind) {
    case PartitionKind::kNone:
      return "none";
    case PartitionKind::kHalves:
      return "halves";
    case PartitionKind::kKWay:
      return "k_way:" + std::to_string(k);
    case PartitionKind::kCapacityOrdered:
      return "capacity_ordered:" + std::to_string(k);
  }
  return "none";
}

VnSplit Split(const VnRequest& request, const PartitionPolicy& policy) {
  const int n = request.vnode_count();
  std::vector<std::vector<int>> groups;

  auto contiguous = [&](const std::vector<int>& order, int k) {
    Require(k >= 1, "partition count must be at least 1");
    Require(k <= n, "partition count " + std::to_string(k) +
                        " exceeds the vnode count " + std::to_string(n));
    int next = 0;
    for (int size : RunSizes(n, k)) {
      groups.emplace_back(order.begin() + next, order.begin() + next + size);
      next += size;
    }
  };

  std::vector<int> ascending(n);
  std::iota(ascending.begin(), ascending.end(), 0);
  switch (policy.kind) {
    case PartitionKind::kNone:
      groups.push_back(ascending);
      break;
    case PartitionKind::kHalves:
      contiguous(ascending, std::min(2, n));
      break;
    case PartitionKind::kKWay:
      contiguous(ascending, policy.k);
      break;
    case PartitionKind::kCapacityOrdered: {
      std::vector<double> weight(n);
      for (int v = 0; v < n; ++v) weight[v] = request.vnodes()[v].demand;
      for (const VirtualLink& l : request.vlinks()) {
        weight[l.from] += l.demand;
        weight[l.to] += l.demand;
      }
      std::vector<int> ranked = ascending;
      std::stable_sort(ranked.begin(), ranked.end(),
                       [&](int a, int b) { return weight[a] > weight[b]; });
      contiguous(ranked, policy.k);
      auto total = [&](const std::vector<int>& g) {
        double sum = 0.0;
        for (int v : g) sum += request.vnodes()[v].demand;
        return sum;
      };
      for (auto& g : groups) std::sort(g.begin(), g.end());
      std::stable_sort(groups.begin(), groups.end(),
                       [&](const auto& a, const auto& b) {
                         const double ta = total(a);
                         const double tb = total(b);
                         if (ta != tb) return ta > tb;
                         return a.front() < b.front();
                       });
      break;
    }
  }

  std::vector<int> part_of(n, -1);
  VnSplit split;
  for (std::size_t s = 0; s < groups.size(); ++s) {
    for (int v : groups[s]) part_of[v] = static_cast<int>(s);
    split.parts.push_back({groups[s], {}});
  }
  for (int e = 0; e < request.vlink_count(); ++e) {
    const VirtualLink& l = request.vlinks()[e];
    if (part_of[l.from] == part_of[l.to]) {
      split.parts[part_of[l.from]].vlinks.push_back(e);
    } else {
      split.cross_vlinks.push_back(e);
    }
  }
  return split;
}

int PartitionedLp::num_columns() const {
  int total = 0;
  for (const PartitionBlock& b : blocks) total += b.local.num_variables();
  return total;
}

PartitionedLp BuildPartitionedLp(const VnRequest& request, const VnSplit& split,
                                 std::span<const double> node_capacity,
                                 std::span<const std::uint8_t> available,
                                 const UtilitySpec& utility,
                                 AssignmentMode assignment, int request_slot) {
  Require(!split.parts.empty(), "a split needs at least one partition");
  const int n = static_cast<int>(node_capacity.size());
  std::vector<int> seen(request.vnode_count(), 0);
  for (const VnPartition& part : split.parts) {
    Require(!part.vnodes.empty(), "partitions must not be empty");
    for (int v : part.vnodes) {
      Require(v >= 0 && v < request.vnode_count(),
              "partition references vnode " + std::to_string(v));
      ++seen[v];
    }
  }
  for (int v = 0; v < request.vnode_count(); ++v) {
    Require(seen[v] == 1, "vnode " + std::to_string(v) +
                              " must appear in exactly one partition");
  }

  // The whole-request program supplies costs and bounds column by column.
  const NodeEmbeddingProgram whole = BuildNodeEmbeddingProgram(
      request, node_capacity, available, utility, assignment, request_slot);

  PartitionedLp plp;
  plp.h.assign(node_capacity.begin(), node_capacity.end());
  plp.node_count = n;
  plp.vnode_count = request.vnode_count();
  plp.assignment = assignment;
  for (const VnPartition& part : split.parts) {
    PartitionBlock block;
    block.vnodes = part.vnodes;
    block.coupling.resize(n);
    for (std::size_t p = 0; p < part.vnodes.size(); ++p) {
      const int v = part.vnodes[p];
      for (int i = 0; i < n; ++i) {
        const int src = whole.Column(v, i);
        const int col = block.local.AddVariable(
            whole.lp.cost()[src], whole.lp.lower()[src], whole.lp.upper()[src],
            false, whole.lp.names()[src]);
        block.column_map.emplace_back(v, i);
        block.coupling[i].columns.push_back(col);
        block.coupling[i].values.push_back(whole.demand[v]);
      }
    }
    for (std::size_t p = 0; p < part.vnodes.size(); ++p) {
      const int v = part.vnodes[p];
      std::vector<std::pair<int, double>> terms;
      for (int i = 0; i < n; ++i) {
        terms.emplace_back(static_cast<int>(p) * n + i, 1.0);
      }
      const std::string label = "assign[" + std::to_string(v) + "]";
      if (assignment == AssignmentMode::kAtMostOnce) {
        block.local.AddRow(terms, 1.0, label);
      } else {
        block.local.AddEqualityRows(terms, 1.0, label);
      }
    }
    plp.blocks.push_back(std::move(block));
  }
  plp.whole = whole;
  return plp;
}

lp::LpProblem CoupledProgram(const PartitionedLp& plp) {
  lp::LpProblem out;
  std::vector<int> offset;
  for (const PartitionBlock& b : plp.blocks) {
    offset.push_back(out.num_variables());
    for (int c = 0; c < b.local.num_variables(); ++c) {
      out.AddVariable(b.local.cost()[c], b.local.lower()[c], b.local.upper()[c],
                      false, b.local.names()[c]);
    }
  }
  for (std::size_t s = 0; s < plp.blocks.size(); ++s) {
    const lp::LpProblem& local = plp.blocks[s].local;
    for (int r = 0; r < local.num_rows(); ++r) {
      std::vector<std::pair<int, double>> terms;
      const lp::SparseRow& row = local.row(r);
      for (std::size_t t = 0; t < row.columns.size(); ++t) {
        terms.emplace_back(row.columns[t] + offset[s], row.values[t]);
      }
      out.AddRow(terms, local.rhs()[r], local.row_labels()[r]);
    }
  }
  for (int i = 0; i < plp.node_count; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (std::size_t s = 0; s < plp.blocks.size(); ++s) {
      const lp::SparseRow& f = plp.blocks[s].coupling[i];
      for (std::size_t t = 0; t < f.columns.size(); ++t) {
        terms.emplace_back(f.columns[t] + offset[s], f.values[t]);
      }
    }
    out.AddRow(terms, plp.h[i], "capacity[" + std::to_string(i) + "]");
  }
  return out;
}

std::vector<double> CouplingUsage(const PartitionBlock& block,
                                  std::span<const double> x) {
  std::vector<double> usage(block.coupling.size(), 0.0);
  for (std::size_t i = 0; i < block.coupling.size(); ++i) {
    const lp::SparseRow& f = block.coupling[i];
    for (std::size_t t = 0; t < f.columns.size(); ++t) {
      usage[i] += f.values[t] * x[f.columns[t]];
    }
  }
  return usage;
}

std::vector<double> AssembleSolution(const PartitionedLp& plp,
                                     const std::vector<std::vector<double>>& xs) {
  Require(xs.size() == plp.blocks.size(), "one solution per partition expected");
  std::vector<double> out(
      static_cast<std::size_t>(plp.vnode_count) * plp.node_count, 0.0);
  for (std::size_t s = 0; s < plp.blocks.size(); ++s) {
    const PartitionBlock& b = plp.blocks[s];
    Require(static_cast<int>(xs[s].size()) == b.local.num_variables(),
            "partition solution has the wrong length");
    for (std::size_t c = 0; c < b.column_map.size(); ++c) {
      const auto [v, i] = b.column_map[c];
      out[static_cast<std::size_t>(v) * plp.node_count + i] = xs[s][c];
    }
  }
  return out;
}

}  // namespace vne
