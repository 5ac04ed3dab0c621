#include "vne/monolith.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace vne {
namespace {

using Terms = std::vector<std::pair<int, double>>;

void Require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string Idx(const std::string& base, std::initializer_list<int> indices) {
  std::string out = base;
  for (int i : indices) out += "[" + std::to_string(i) + "]";
  return out;
}

// Lowest index wins ties.
int ArgMax(std::span<const double> values, std::span<const int> candidates) {
  int best = -1;
  double best_value = -lp::kInfinity;
  for (int c : candidates) {
    if (values[c] > best_value) {
      best_value = values[c];
      best = c;
    }
  }
  return best;
}

bool WithinCapacity(double load, double capacity) {
  return load <= capacity + 1e-9 * std::max(1.0, std::abs(capacity));
}

}  // namespace

UtilityMode ParseUtilityMode(const std::string& name) {
  if (name == "revenue") return UtilityMode::kRevenue;
  if (name == "weighted_node") return UtilityMode::kWeightedNode;
  throw std::invalid_argument("unknown utility mode '" + name + "'");
}

std::string ToString(UtilityMode mode) {
  return mode == UtilityMode::kRevenue ? "revenue" : "weighted_node";
}

double UtilitySpec::Weight(int request, int vnode, int node) const {
  double w = node_weights.empty() ? 1.0 : node_weights[node];
  if (request < static_cast<int>(affinity.size())) {
    const auto& per_request = affinity[request];
    if (vnode < static_cast<int>(per_request.size()) &&
        node < static_cast<int>(per_request[vnode].size())) {
      w *= per_request[vnode][node];
    }
  }
  return w;
}

void UtilitySpec::Validate(int node_count) const {
  Require(node_weights.empty() ||
              static_cast<int>(node_weights.size()) == node_count,
          "utility: node_weights must have one entry per physical node");
  auto check = [](double w) {
    Require(std::isfinite(w) && w >= 0.0,
            "utility: weights must be finite and nonnegative");
  };
  for (double w : node_weights) check(w);
  for (const auto& request : affinity) {
    for (const auto& row : request) {
      for (double w : row) check(w);
    }
  }
}

CapacityBudget CapacityBudget::FromNetwork(const PhysicalNetwork& net,
                                           const PathSet& paths) {
  CapacityBudget budget;
  budget.node = net.NodeCapacities();
  budget.link = net.LinkBandwidths();
  for (const Path& p : paths.paths()) budget.path.push_back(p.capacity);
  return budget;
}

EmbeddingProgram BuildEmbeddingProgram(const PhysicalNetwork& net,
                                       const PathSet& paths,
                                       std::vector<VnRequest> requests,
                                       const DiscoveryMask& mask,
                                       const UtilitySpec& utility,
                                       const ProgramOptions& options,
                                       const CapacityBudget* budget) {
  const int n = net.node_count();
  const int paths_count = paths.size();
  const int request_count = static_cast<int>(requests.size());
  Require(paths.node_count() == n, "path set does not match the network");
  mask.Validate(request_count, n, paths_count);
  utility.Validate(n);

  EmbeddingProgram program;
  program.paths = paths;
  program.budget = budget ? *budget : CapacityBudget::FromNetwork(net, paths);
  Require(static_cast<int>(program.budget.node.size()) == n &&
              static_cast<int>(program.budget.link.size()) == net.link_count() &&
              static_cast<int>(program.budget.path.size()) == paths_count,
          "capacity budget dimensions do not match the network");
  program.utility = utility;
  program.options = options;
  program.node_count = n;

  lp::LpProblem& lp = program.lp;
  const bool integer = !options.relax;
  auto binary = [&](double cost, double upper, const std::string& name) {
    return lp.AddVariable(cost, 0.0, upper, integer, name);
  };
  auto product = [&](double cost, const std::string& name) {
    return lp.AddVariable(cost, 0.0, 1.0, false, name);
  };

  for (int j = 0; j < request_count; ++j) {
    const VnRequest& r = requests[j];
    const int vn = r.vnode_count();
    const int ve = r.vlink_count();
    RequestColumns cols;
    cols.first = lp.num_variables();
    const std::string tag = "r" + std::to_string(j) + ".";

    for (int i = 0; i < n; ++i) {
      cols.node_present.push_back(
          binary(0.0, mask.node_available[j][i], Idx(tag + "n_p", {i})));
    }
    for (int k = 0; k < paths_count; ++k) {
      cols.path_present.push_back(
          binary(0.0, mask.path_available[j][k], Idx(tag + "p", {k})));
    }
    cols.node_map.assign(vn, std::vector<int>(n));
    for (int v = 0; v < vn; ++v) {
      for (int i = 0; i < n; ++i) {
        cols.node_map[v][i] = binary(0.0, 1.0, Idx(tag + "n_v", {v, i}));
      }
    }
    cols.link_map.assign(ve, std::vector<int>(paths_count));
    for (int e = 0; e < ve; ++e) {
      for (int k = 0; k < paths_count; ++k) {
        cols.link_map[e][k] = binary(0.0, 1.0, Idx(tag + "l", {e, k}));
      }
    }
    if (!options.distinct_hosts) {
      cols.colocation.assign(ve, std::vector<int>(n));
      for (int e = 0; e < ve; ++e) {
        for (int i = 0; i < n; ++i) {
          cols.colocation[e][i] = binary(0.0, 1.0, Idx(tag + "c", {e, i}));
        }
      }
    }
    const double revenue =
        utility.mode == UtilityMode::kRevenue ? r.value() : 0.0;
    cols.accept = binary(revenue, 1.0, tag + "y");
    cols.node_usage.assign(vn, std::vector<int>(n));
    for (int v = 0; v < vn; ++v) {
      for (int i = 0; i < n; ++i) {
        const double cost = utility.mode == UtilityMode::kWeightedNode
                                ? r.vnodes()[v].demand * utility.Weight(j, v, i)
                                : 0.0;
        cols.node_usage[v][i] = product(cost, Idx(tag + "w", {v, i}));
      }
    }
    cols.link_usage.assign(ve, std::vector<int>(paths_count));
    for (int e = 0; e < ve; ++e) {
      for (int k = 0; k < paths_count; ++k) {
        cols.link_usage[e][k] = product(0.0, Idx(tag + "m", {e, k}));
      }
    }
    cols.end = lp.num_variables();

    // Discovery must surface at least as many candidates as requested.
    Terms terms;
    for (int i = 0; i < n; ++i) terms.emplace_back(cols.node_present[i], -1.0);
    lp.AddRow(terms, -vn, Idx("discover_nodes", {j}));
    if (ve > 0) {
      terms.clear();
      for (int k = 0; k < paths_count; ++k) {
        terms.emplace_back(cols.path_present[k], -1.0);
      }
      lp.AddRow(terms, -ve, Idx("discover_paths", {j}));
    }

    for (int v = 0; v < vn; ++v) {
      terms.clear();
      for (int i = 0; i < n; ++i) terms.emplace_back(cols.node_map[v][i], 1.0);
      lp.AddEqualityRows(terms, 1.0, Idx("map_vnode", {j, v}));
    }
    for (int e = 0; e < ve; ++e) {
      terms.clear();
      for (int k = 0; k < paths_count; ++k) {
        terms.emplace_back(cols.link_map[e][k], 1.0);
      }
      if (!options.distinct_hosts) {
        for (int i = 0; i < n; ++i) terms.emplace_back(cols.colocation[e][i], 1.0);
      }
      lp.AddEqualityRows(terms, 1.0, Idx("map_vlink", {j, e}));
    }

    for (int v = 0; v < vn; ++v) {
      for (int i = 0; i < n; ++i) {
        lp.AddRow({{cols.node_map[v][i], 1.0}, {cols.node_present[i], -1.0}},
                  0.0, Idx("node_visible", {j, v, i}));
      }
    }
    for (int e = 0; e < ve; ++e) {
      for (int k = 0; k < paths_count; ++k) {
        lp.AddRow({{cols.link_map[e][k], 1.0}, {cols.path_present[k], -1.0}},
                  0.0, Idx("path_visible", {j, e, k}));
      }
    }
    if (options.distinct_hosts) {
      for (int i = 0; i < n; ++i) {
        terms.clear();
        for (int v = 0; v < vn; ++v) terms.emplace_back(cols.node_map[v][i], 1.0);
        lp.AddRow(terms, 1.0, Idx("host_once", {j, i}));
      }
    }

    // A vlink leaving host s needs its source vnode on s, and likewise for
    // the target end. Collapsed vlinks need both ends on the same node.
    for (int e = 0; e < ve; ++e) {
      const VirtualLink& link = r.vlinks()[e];
      for (int s = 0; s < n; ++s) {
        Terms from;
        Terms to;
        for (int k = 0; k < paths_count; ++k) {
          if (paths.path(k).source() == s) from.emplace_back(cols.link_map[e][k], 1.0);
          if (paths.path(k).target() == s) to.emplace_back(cols.link_map[e][k], 1.0);
        }
        if (!options.distinct_hosts) {
          from.emplace_back(cols.colocation[e][s], 1.0);
          to.emplace_back(cols.colocation[e][s], 1.0);
        }
        from.emplace_back(cols.node_map[link.from][s], -1.0);
        to.emplace_back(cols.node_map[link.to][s], -1.0);
        lp.AddRow(from, 0.0, Idx("endpoint_source", {j, e, s}));
        lp.AddRow(to, 0.0, Idx("endpoint_target", {j, e, s}));
      }
    }

    // Acceptance requires each vnode and vlink to be mapped somewhere.
    for (int v = 0; v < vn; ++v) {
      terms = {{cols.accept, 1.0}};
      for (int i = 0; i < n; ++i) terms.emplace_back(cols.node_map[v][i], -1.0);
      lp.AddRow(terms, 0.0, Idx("accept_vnode", {j, v}));
    }
    for (int e = 0; e < ve; ++e) {
      terms = {{cols.accept, 1.0}};
      for (int k = 0; k < paths_count; ++k) {
        terms.emplace_back(cols.link_map[e][k], -1.0);
      }
      if (!options.distinct_hosts) {
        for (int i = 0; i < n; ++i) terms.emplace_back(cols.colocation[e][i], -1.0);
      }
      lp.AddRow(terms, 0.0, Idx("accept_vlink", {j, e}));
    }

    auto linearise = [&](int prod, int factor, const std::string& label) {
      lp.AddRow({{prod, 1.0}, {cols.accept, -1.0}}, 0.0, label + ".le_y");
      lp.AddRow({{prod, 1.0}, {factor, -1.0}}, 0.0, label + ".le_x");
      lp.AddRow({{cols.accept, 1.0}, {factor, 1.0}, {prod, -1.0}}, 1.0,
                label + ".ge_sum");
    };
    for (int v = 0; v < vn; ++v) {
      for (int i = 0; i < n; ++i) {
        linearise(cols.node_usage[v][i], cols.node_map[v][i],
                  Idx("product_w", {j, v, i}));
      }
    }
    for (int e = 0; e < ve; ++e) {
      for (int k = 0; k < paths_count; ++k) {
        linearise(cols.link_usage[e][k], cols.link_map[e][k],
                  Idx("product_m", {j, e, k}));
      }
    }
    program.columns.push_back(std::move(cols));
  }

  for (int i = 0; i < n; ++i) {
    Terms terms;
    for (int j = 0; j < request_count; ++j) {
      for (int v = 0; v < requests[j].vnode_count(); ++v) {
        terms.emplace_back(program.columns[j].node_usage[v][i],
                           requests[j].vnodes()[v].demand);
      }
    }
    if (!terms.empty()) {
      lp.AddRow(terms, program.budget.node[i], Idx("node_capacity", {i}));
    }
  }
  if (options.link_capacity == LinkCapacityMode::kPhysicalLink) {
    std::vector<Terms> per_link(net.link_count());
    for (int j = 0; j < request_count; ++j) {
      for (int e = 0; e < requests[j].vlink_count(); ++e) {
        const double demand = requests[j].vlinks()[e].demand;
        for (int k = 0; k < paths_count; ++k) {
          for (int link : paths.path(k).links) {
            per_link[link].emplace_back(program.columns[j].link_usage[e][k],
                                        demand);
          }
        }
      }
    }
    for (int link = 0; link < net.link_count(); ++link) {
      if (per_link[link].empty()) continue;
      lp.AddRow(per_link[link], program.budget.link[link],
                Idx("link_capacity", {link}));
    }
  } else {
    for (int k = 0; k < paths_count; ++k) {
      Terms terms;
      for (int j = 0; j < request_count; ++j) {
        for (int e = 0; e < requests[j].vlink_count(); ++e) {
          terms.emplace_back(program.columns[j].link_usage[e][k],
                             requests[j].vlinks()[e].demand);
        }
      }
      if (!terms.empty()) {
        lp.AddRow(terms, program.budget.path[k], Idx("path_capacity", {k}));
      }
    }
  }

  program.requests = std::move(requests);
  return program;
}

void WriteIndexMap(const EmbeddingProgram& program, std::ostream& out) {
  nlohmann::json doc;
  doc["columns"] = nlohmann::json::array();
  for (int c = 0; c < program.lp.num_variables(); ++c) {
    doc["columns"].push_back({{"index", c}, {"name", program.lp.names()[c]}});
  }
  doc["rows"] = program.lp.row_labels();
  doc["requests"] = nlohmann::json::array();
  for (std::size_t j = 0; j < program.columns.size(); ++j) {
    const RequestColumns& cols = program.columns[j];
    doc["requests"].push_back({{"request_id", program.requests[j].id()},
                               {"first", cols.first},
                               {"end", cols.end},
                               {"n_p", cols.node_present},
                               {"p", cols.path_present},
                               {"n_v", cols.node_map},
                               {"l", cols.link_map},
                               {"c", cols.colocation},
                               {"y", cols.accept},
                               {"w", cols.node_usage},
                               {"m", cols.link_usage}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<Embedding> DecodeEmbeddings(const EmbeddingProgram& program,
                                        const std::vector<double>& x) {
  std::vector<Embedding> out;
  for (std::size_t j = 0; j < program.columns.size(); ++j) {
    const RequestColumns& cols = program.columns[j];
    const VnRequest& r = program.requests[j];
    Embedding e;
    e.request_id = r.id();
    e.accepted = x[cols.accept] > 0.5;
    for (int c = cols.first; c < cols.end; ++c) {
      if (std::abs(x[c] - std::round(x[c])) > 1e-6) e.fractional = true;
    }
    e.node_map.assign(r.vnode_count(), kUnmapped);
    e.link_map.assign(r.vlink_count(), kNoPath);
    if (e.accepted) {
      for (int v = 0; v < r.vnode_count(); ++v) {
        e.node_map[v] = static_cast<int>(
            std::max_element(cols.node_map[v].begin(), cols.node_map[v].end(),
                             [&](int a, int b) { return x[a] < x[b]; }) -
            cols.node_map[v].begin());
      }
      for (int l = 0; l < r.vlink_count(); ++l) {
        double collapsed = 0.0;
        for (int c : cols.colocation.empty() ? std::vector<int>{} : cols.colocation[l]) {
          collapsed += x[c];
        }
        if (collapsed > 0.5) continue;
        const auto& row = cols.link_map[l];
        e.link_map[l] = static_cast<int>(
            std::max_element(row.begin(), row.end(),
                             [&](int a, int b) { return x[a] < x[b]; }) -
            row.begin());
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

double EmbeddingUtility(const EmbeddingProgram& program,
                        std::span<const Embedding> embeddings) {
  double total = 0.0;
  for (std::size_t j = 0; j < embeddings.size(); ++j) {
    if (!embeddings[j].accepted) continue;
    const VnRequest& r = program.requests[j];
    if (program.utility.mode == UtilityMode::kRevenue) {
      total += r.value();
      continue;
    }
    for (int v = 0; v < r.vnode_count(); ++v) {
      total += r.vnodes()[v].demand *
               program.utility.Weight(static_cast<int>(j), v,
                                      embeddings[j].node_map[v]);
    }
  }
  return total;
}

MonolithResult EmbedMonolithic(const PhysicalNetwork& net, const PathSet& paths,
                               const std::vector<VnRequest>& requests,
                               const UtilitySpec& utility,
                               const ProgramOptions& options,
                               const DiscoveryMask* mask,
                               const CapacityBudget* budget,
                               const lp::SolverOptions& solver) {
  const DiscoveryMask full = DiscoveryMask::Full(
      static_cast<int>(requests.size()), net.node_count(), paths.size());
  const EmbeddingProgram program = BuildEmbeddingProgram(
      net, paths, requests, mask ? *mask : full, utility, options, budget);

  MonolithResult result;
  const lp::LpSolution solution =
      options.relax ? lp::SolveLp(program.lp, solver) : lp::SolveIlp(program.lp, solver);
  result.status = solution.status;
  result.nodes = solution.nodes;
  const bool have_point =
      solution.optimal() || (solution.status == lp::LpStatus::kNodeLimit &&
                             !solution.x.empty());
  if (!have_point) {
    for (const VnRequest& r : requests) {
      result.embeddings.push_back(
          {r.id(), false, std::vector<int>(r.vnode_count(), kUnmapped),
           std::vector<int>(r.vlink_count(), kNoPath), false});
    }
    result.diagnostic = "embedding program " + lp::ToString(solution.status) +
                        "; every request rejected";
    return result;
  }
  result.embeddings = options.relax ? RepairToInteger(program, solution.x)
                                    : DecodeEmbeddings(program, solution.x);
  result.objective = EmbeddingUtility(program, result.embeddings);
  if (solution.status == lp::LpStatus::kNodeLimit) {
    result.diagnostic = "node limit reached; incumbent returned";
  }
  return result;
}

std::vector<Embedding> RepairToInteger(const EmbeddingProgram& program,
                                       const std::vector<double>& x) {
  const int request_count = static_cast<int>(program.requests.size());
  const int n = program.node_count;
  const lp::LpProblem& lp = program.lp;
  std::vector<bool> accepted(request_count);
  for (int j = 0; j < request_count; ++j) {
    accepted[j] = x[program.columns[j].accept] >= 0.5;
  }

  std::vector<Embedding> out(request_count);
  while (true) {
    std::vector<double> node_load(n, 0.0);
    std::vector<double> link_load(program.budget.link.size(), 0.0);
    std::vector<double> path_load(program.paths.size(), 0.0);
    bool unroutable = false;

    for (int j = 0; j < request_count; ++j) {
      const VnRequest& r = program.requests[j];
      const RequestColumns& cols = program.columns[j];
      Embedding& e = out[j];
      e = {r.id(), false, std::vector<int>(r.vnode_count(), kUnmapped),
           std::vector<int>(r.vlink_count(), kNoPath), false};
      if (!accepted[j]) continue;

      std::vector<bool> used(n, false);
      bool ok = true;
      for (int v = 0; v < r.vnode_count() && ok; ++v) {
        std::vector<int> candidates;
        for (int i = 0; i < n; ++i) {
          const bool visible = lp.upper()[cols.node_present[i]] > 0.0;
          if (visible && !(program.options.distinct_hosts && used[i])) {
            candidates.push_back(i);
          }
        }
        std::vector<double> weight(n);
        for (int i = 0; i < n; ++i) weight[i] = x[cols.node_map[v][i]];
        const int host = ArgMax(weight, candidates);
        if (host < 0) {
          ok = false;
          break;
        }
        e.node_map[v] = host;
        used[host] = true;
      }
      for (int l = 0; l < r.vlink_count() && ok; ++l) {
        const int s = e.node_map[r.vlinks()[l].from];
        const int t = e.node_map[r.vlinks()[l].to];
        if (s == t) continue;
        std::vector<int> candidates;
        for (int k : program.paths.Between(s, t)) {
          if (lp.upper()[cols.path_present[k]] > 0.0) candidates.push_back(k);
        }
        std::vector<double> weight(program.paths.size());
        for (int k : candidates) weight[k] = x[cols.link_map[l][k]];
        const int path = ArgMax(weight, candidates);
        if (path < 0) {
          ok = false;
          break;
        }
        e.link_map[l] = path;
      }
      if (!ok) {
        accepted[j] = false;
        unroutable = true;
        break;
      }
      e.accepted = true;
      for (int v = 0; v < r.vnode_count(); ++v) {
        node_load[e.node_map[v]] += r.vnodes()[v].demand;
      }
      for (int l = 0; l < r.vlink_count(); ++l) {
        if (e.link_map[l] == kNoPath) continue;
        path_load[e.link_map[l]] += r.vlinks()[l].demand;
        for (int link : program.paths.path(e.link_map[l]).links) {
          link_load[link] += r.vlinks()[l].demand;
        }
      }
    }
    if (unroutable) continue;

    bool feasible = true;
    for (int i = 0; i < n && feasible; ++i) {
      feasible = WithinCapacity(node_load[i], program.budget.node[i]);
    }
    if (program.options.link_capacity == LinkCapacityMode::kPhysicalLink) {
      for (std::size_t l = 0; l < link_load.size() && feasible; ++l) {
        feasible = WithinCapacity(link_load[l], program.budget.link[l]);
      }
    } else {
      for (std::size_t k = 0; k < path_load.size() && feasible; ++k) {
        feasible = WithinCapacity(path_load[k], program.budget.path[k]);
      }
    }
    if (feasible) return out;

    int drop = -1;
    for (int j = 0; j < request_count; ++j) {
      if (!accepted[j]) continue;
      if (drop < 0 || program.requests[j].value() <= program.requests[drop].value()) {
        drop = j;
      }
    }
    accepted[drop] = false;
  }
}

NodeEmbeddingProgram BuildNodeEmbeddingProgram(
    const VnRequest& request, std::span<const double> node_capacity,
    std::span<const std::uint8_t> available, const UtilitySpec& utility,
    AssignmentMode assignment, int request_slot) {
  const int n = static_cast<int>(node_capacity.size());
  Require(n >= 1, "node embedding needs at least one physical node");
  Require(available.empty() || static_cast<int>(available.size()) == n,
          "availability mask does not match the node count");
  utility.Validate(n);

  NodeEmbeddingProgram program;
  program.vnode_count = request.vnode_count();
  program.node_count = n;
  program.assignment = assignment;
  const double total_demand = request.TotalNodeDemand();
  for (int v = 0; v < request.vnode_count(); ++v) {
    const double d = request.vnodes()[v].demand;
    program.demand.push_back(d);
    for (int i = 0; i < n; ++i) {
      const double cost = utility.mode == UtilityMode::kRevenue
                              ? request.value() * d / total_demand
                              : d * utility.Weight(request_slot, v, i);
      const double upper = available.empty() || available[i] ? 1.0 : 0.0;
      program.lp.AddVariable(cost, 0.0, upper, false, Idx("x", {v, i}));
    }
  }
  for (int v = 0; v < request.vnode_count(); ++v) {
    Terms terms;
    for (int i = 0; i < n; ++i) terms.emplace_back(program.Column(v, i), 1.0);
    if (assignment == AssignmentMode::kAtMostOnce) {
      program.lp.AddRow(terms, 1.0, Idx("assign", {v}));
    } else {
      program.lp.AddEqualityRows(terms, 1.0, Idx("assign", {v}));
    }
  }
  program.first_capacity_row = program.lp.num_rows();
  for (int i = 0; i < n; ++i) {
    Terms terms;
    for (int v = 0; v < request.vnode_count(); ++v) {
      terms.emplace_back(program.Column(v, i), program.demand[v]);
    }
    program.lp.AddRow(terms, node_capacity[i], Idx("capacity", {i}));
  }
  return program;
}

NodeAssignment RepairNodeAssignment(const NodeEmbeddingProgram& program,
                                    std::span<const double> x,
                                    std::span<const double> node_capacity) {
  const int n = program.node_count;
  const int vn = program.vnode_count;
  Require(static_cast<int>(x.size()) == program.lp.num_variables(),
          "assignment vector has the wrong length");
  Require(static_cast<int>(node_capacity.size()) == n,
          "capacity vector has the wrong length");
  NodeAssignment out;
  out.host.assign(vn, kUnmapped);
  for (int v = 0; v < vn; ++v) {
    double mass = 0.0;
    int best = kUnmapped;
    for (int i = 0; i < n; ++i) {
      const int col = program.Column(v, i);
      mass += x[col];
      if (program.lp.upper()[col] <= 0.0) continue;
      if (best == kUnmapped || x[col] > x[program.Column(v, best)]) best = i;
    }
    if (mass >= 0.5) out.host[v] = best;
  }

  auto contribution = [&](int v) {
    return program.lp.cost()[program.Column(v, out.host[v])];
  };
  while (true) {
    std::vector<double> load(n, 0.0);
    for (int v = 0; v < vn; ++v) {
      if (out.host[v] != kUnmapped) load[out.host[v]] += program.demand[v];
    }
    int overflow = -1;
    for (int i = 0; i < n && overflow < 0; ++i) {
      if (!WithinCapacity(load[i], node_capacity[i])) overflow = i;
    }
    if (overflow < 0) break;
    int drop = -1;
    for (int v = 0; v < vn; ++v) {
      if (out.host[v] != overflow) continue;
      if (drop < 0 || contribution(v) <= contribution(drop)) drop = v;
    }
    out.host[drop] = kUnmapped;
  }

  out.complete = true;
  for (int v = 0; v < vn; ++v) {
    if (out.host[v] == kUnmapped) {
      out.complete = false;
    } else {
      out.objective += contribution(v);
    }
  }
  return out;
}

}  // namespace vne
