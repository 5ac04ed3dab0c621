#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "vne/model.h"
#include "vne/rng.h"

namespace vne {
namespace {

// Every simple path from s to t, found by plain backtracking with no pruning,
// sorted by hop count then node sequence.
std::vector<std::vector<int>> AllSimplePaths(const PhysicalNetwork& net, int s,
                                             int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> stack{s};
  std::vector<bool> seen(net.node_count(), false);
  seen[s] = true;
  std::function<void(int)> visit = [&](int u) {
    if (u == t) {
      out.push_back(stack);
      return;
    }
    for (int v = 0; v < net.node_count(); ++v) {
      if (seen[v] || !net.LinkBetween(u, v)) continue;
      seen[v] = true;
      stack.push_back(v);
      visit(v);
      stack.pop_back();
      seen[v] = false;
    }
  };
  visit(s);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

PhysicalNetwork Triangle() {
  return PhysicalNetwork({{0, 10}, {1, 10}, {2, 10}},
                         {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}});
}

TEST(PhysicalNetwork, RejectsBadTopologies) {
  EXPECT_THROW(PhysicalNetwork({{0, 0.0}}, {}), std::invalid_argument);
  EXPECT_THROW(PhysicalNetwork({{0, 1}, {0, 1}}, {}), std::invalid_argument);
  EXPECT_THROW(PhysicalNetwork({{0, 1}, {1, 1}}, {{0, 0, 1}}),
               std::invalid_argument);
  EXPECT_THROW(PhysicalNetwork({{0, 1}, {1, 1}}, {{0, 7, 1}}),
               std::invalid_argument);
  EXPECT_THROW(PhysicalNetwork({{0, 1}, {1, 1}}, {{0, 1, -1}}),
               std::invalid_argument);
}

TEST(VnRequest, RejectsBadRequests) {
  EXPECT_THROW(VnRequest(0, {}, {}, 1.0), std::invalid_argument);
  EXPECT_THROW(VnRequest(0, {{0.0}}, {}, 1.0), std::invalid_argument);
  EXPECT_THROW(VnRequest(0, {{1.0}, {1.0}}, {{0, 0, 1.0}}, 1.0),
               std::invalid_argument);
  EXPECT_THROW(VnRequest(0, {{1.0}, {1.0}}, {{0, 2, 1.0}}, 1.0),
               std::invalid_argument);
  const VnRequest ok(3, {{1.0}, {2.0}}, {{0, 1, 4.0}}, 3.0);
  EXPECT_EQ(ok.vnode_count(), 2);
  EXPECT_EQ(ok.vlink_count(), 1);
  EXPECT_DOUBLE_EQ(ok.TotalNodeDemand(), 3.0);
  EXPECT_DOUBLE_EQ(ok.TotalLinkDemand(), 4.0);
}

TEST(EnumerateLoopFreePaths, SingleEdgeGivesOnePathEachWay) {
  const PhysicalNetwork net({{0, 5}, {1, 5}}, {{0, 1, 7}});
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  ASSERT_EQ(paths.size(), 2);
  ASSERT_EQ(paths.Between(0, 1).size(), 1u);
  ASSERT_EQ(paths.Between(1, 0).size(), 1u);
  EXPECT_DOUBLE_EQ(paths.path(paths.Between(0, 1)[0]).capacity, 7.0);
  EXPECT_TRUE(paths.Between(0, 0).empty());
}

TEST(EnumerateLoopFreePaths, TriangleDirectThenDetour) {
  const PhysicalNetwork net = Triangle();
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const auto ab = paths.Between(0, 1);
  ASSERT_EQ(ab.size(), 2u);
  EXPECT_EQ(paths.path(ab[0]).nodes, (std::vector<int>{0, 1}));
  EXPECT_EQ(paths.path(ab[1]).nodes, (std::vector<int>{0, 2, 1}));
  EXPECT_DOUBLE_EQ(paths.path(ab[0]).capacity, 10.0);
  EXPECT_DOUBLE_EQ(paths.path(ab[1]).capacity, 10.0);
}

TEST(EnumerateLoopFreePaths, FullMeshCapOfTwo) {
  const PhysicalNetwork net = GenerateFullMesh(5, 10, 10);
  const PathSet paths = EnumerateLoopFreePaths(net, 2);
  for (int s = 0; s < 5; ++s) {
    for (int t = 0; t < 5; ++t) {
      if (s == t) continue;
      const auto between = paths.Between(s, t);
      ASSERT_EQ(between.size(), 2u);
      EXPECT_EQ(paths.path(between[0]).nodes, (std::vector<int>{s, t}));
      const int first_middle = (s != 0 && t != 0) ? 0 : (s != 1 && t != 1) ? 1 : 2;
      EXPECT_EQ(paths.path(between[1]).nodes,
                (std::vector<int>{s, first_middle, t}));
    }
  }
}

TEST(EnumerateLoopFreePaths, BottleneckCapacity) {
  const PhysicalNetwork net({{0, 1}, {1, 1}, {2, 1}}, {{0, 1, 3}, {1, 2, 8}});
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const auto between = paths.Between(0, 2);
  ASSERT_EQ(between.size(), 1u);
  EXPECT_DOUBLE_EQ(paths.path(between[0]).capacity, 3.0);
  EXPECT_EQ(paths.path(between[0]).links.size(), 2u);
}

TEST(EnumerateLoopFreePaths, RejectsZeroCap) {
  EXPECT_THROW(EnumerateLoopFreePaths(Triangle(), 0), std::invalid_argument);
}

TEST(EnumerateLoopFreePathsProperty, MatchesExhaustiveSearch) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.UniformInt(1, 7);
    std::vector<PhysicalNode> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({i, 1.0});
    std::vector<PhysicalLink> links;
    const double density = rng.Uniform(0.2, 1.0);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng.Bernoulli(density)) links.push_back({a, b, rng.Uniform(1, 9)});
      }
    }
    const PhysicalNetwork net(nodes, links);
    const int k_max = rng.UniformInt(1, 8);
    const PathSet paths = EnumerateLoopFreePaths(net, k_max);
    int total = 0;
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        if (s == t) continue;
        auto expected = AllSimplePaths(net, s, t);
        if (static_cast<int>(expected.size()) > k_max) expected.resize(k_max);
        const auto got = paths.Between(s, t);
        ASSERT_EQ(got.size(), expected.size()) << "trial " << trial;
        total += static_cast<int>(got.size());
        for (std::size_t r = 0; r < got.size(); ++r) {
          const Path& path = paths.path(got[r]);
          EXPECT_EQ(path.nodes, expected[r]);
          double bottleneck = 1e300;
          for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
            const auto link = net.LinkBetween(path.nodes[h], path.nodes[h + 1]);
            ASSERT_TRUE(link.has_value());
            EXPECT_EQ(path.links[h], *link);
            bottleneck = std::min(bottleneck, net.links()[*link].bandwidth);
          }
          EXPECT_DOUBLE_EQ(path.capacity, bottleneck);
        }
      }
    }
    EXPECT_EQ(total, paths.size());
  }
}

TEST(GenerateFullMesh, LinkCounts) {
  EXPECT_EQ(GenerateFullMesh(5, 1, 1).link_count(), 10);
  EXPECT_EQ(GenerateFullMesh(2, 1, 1).link_count(), 1);
  EXPECT_THROW(GenerateFullMesh(1, 1, 1), std::invalid_argument);
  EXPECT_THROW(GenerateFullMesh(3, 0, 1), std::invalid_argument);
}

TEST(GenerateRandomVn, LinkProbabilityExtremes) {
  const Interval d{1, 10};
  EXPECT_EQ(GenerateRandomVn(6, 0.0, d, ValueRule::kNodeDemandSum, 1).vlink_count(), 0);
  EXPECT_EQ(GenerateRandomVn(4, 1.0, d, ValueRule::kNodeDemandSum, 1).vlink_count(), 6);
}

TEST(GenerateRandomVn, SameSeedSameRequest) {
  const Interval d{1, 10};
  const VnRequest a = GenerateRandomVn(50, 0.5, d, ValueRule::kNodeDemandSum, 17);
  const VnRequest b = GenerateRandomVn(50, 0.5, d, ValueRule::kNodeDemandSum, 17);
  const VnRequest c = GenerateRandomVn(50, 0.5, d, ValueRule::kNodeDemandSum, 18);
  ASSERT_EQ(a.vnode_count(), 50);
  ASSERT_EQ(a.vlink_count(), b.vlink_count());
  for (int v = 0; v < 50; ++v) {
    EXPECT_EQ(a.vnodes()[v].demand, b.vnodes()[v].demand);
    EXPECT_GE(a.vnodes()[v].demand, 1.0);
    EXPECT_LE(a.vnodes()[v].demand, 10.0);
  }
  for (int e = 0; e < a.vlink_count(); ++e) {
    EXPECT_EQ(a.vlinks()[e].from, b.vlinks()[e].from);
    EXPECT_EQ(a.vlinks()[e].to, b.vlinks()[e].to);
    EXPECT_EQ(a.vlinks()[e].demand, b.vlinks()[e].demand);
  }
  EXPECT_EQ(a.value(), b.value());
  EXPECT_NE(a.value(), c.value());
}

TEST(GenerateRandomVn, ValueRules) {
  const Interval d{2, 3};
  const VnRequest node = GenerateRandomVn(5, 0.5, d, ValueRule::kNodeDemandSum, 4);
  EXPECT_DOUBLE_EQ(node.value(), node.TotalNodeDemand());
  const VnRequest total = GenerateRandomVn(5, 0.5, d, ValueRule::kTotalDemandSum, 4);
  EXPECT_DOUBLE_EQ(total.value(), total.TotalNodeDemand() + total.TotalLinkDemand());
  EXPECT_DOUBLE_EQ(GenerateRandomVn(5, 0.5, d, ValueRule::kUnit, 4).value(), 1.0);
  EXPECT_EQ(ParseValueRule(ToString(ValueRule::kTotalDemandSum)),
            ValueRule::kTotalDemandSum);
  EXPECT_THROW(ParseValueRule("bogus"), std::invalid_argument);
}

TEST(GenerateRandomVn, RejectsBadArguments) {
  EXPECT_THROW(GenerateRandomVn(3, 0.5, {5, 1}, ValueRule::kUnit, 1),
               std::invalid_argument);
  EXPECT_THROW(GenerateRandomVn(0, 0.5, {1, 2}, ValueRule::kUnit, 1),
               std::invalid_argument);
  EXPECT_THROW(GenerateRandomVn(3, 1.5, {1, 2}, ValueRule::kUnit, 1),
               std::invalid_argument);
}

TEST(ResidualCapacity, NoEmbeddingsLeavesCapacities) {
  const PhysicalNetwork net = Triangle();
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const Residuals r = ResidualCapacity(net, paths, {}, {});
  EXPECT_EQ(r.node, net.NodeCapacities());
  EXPECT_EQ(r.link, net.LinkBandwidths());
  for (int k = 0; k < paths.size(); ++k) {
    EXPECT_DOUBLE_EQ(r.path[k], paths.path(k).capacity);
  }
}

TEST(ResidualCapacity, SingleVnodeSubtractsDemand) {
  const PhysicalNetwork net = Triangle();
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const std::vector<VnRequest> requests{VnRequest(0, {{3.0}}, {}, 3.0)};
  const std::vector<Embedding> embeddings{{0, true, {1}, {}, false}};
  const Residuals r = ResidualCapacity(net, paths, embeddings, requests);
  EXPECT_DOUBLE_EQ(r.node[1], 7.0);
  EXPECT_DOUBLE_EQ(r.node[0], 10.0);
}

TEST(ResidualCapacity, OversubscriptionNamesNode) {
  const PhysicalNetwork net({{4, 10}, {9, 10}}, {{4, 9, 10}});
  const PathSet paths = EnumerateLoopFreePaths(net, 2);
  const std::vector<VnRequest> requests{VnRequest(0, {{6.0}}, {}, 6.0),
                                        VnRequest(1, {{6.0}}, {}, 6.0)};
  const std::vector<Embedding> embeddings{{0, true, {1}, {}, false},
                                          {1, true, {1}, {}, false}};
  try {
    ResidualCapacity(net, paths, embeddings, requests);
    FAIL() << "expected a violation";
  } catch (const CapacityViolation& e) {
    EXPECT_EQ(e.resource(), CapacityViolation::Resource::kNode);
    EXPECT_EQ(e.id(), 9);
    EXPECT_DOUBLE_EQ(e.residual(), -2.0);
  }
}

TEST(ResidualCapacity, LinkAccountingSharedAcrossPaths) {
  const PhysicalNetwork net = Triangle();
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const VnRequest request(0, {{1.0}, {1.0}}, {{0, 1, 4.0}}, 2.0);
  const int detour = paths.Between(0, 1)[1];  // 0-2-1
  const std::vector<VnRequest> requests{request};
  const std::vector<Embedding> embeddings{{0, true, {0, 1}, {detour}, false}};
  const Residuals r = ResidualCapacity(net, paths, embeddings, requests);
  EXPECT_DOUBLE_EQ(r.link[*net.LinkBetween(0, 2)], 6.0);
  EXPECT_DOUBLE_EQ(r.link[*net.LinkBetween(2, 1)], 6.0);
  EXPECT_DOUBLE_EQ(r.link[*net.LinkBetween(0, 1)], 10.0);
  // The reverse direction of the shared link sees the same residual.
  EXPECT_DOUBLE_EQ(r.path[paths.Between(2, 0)[0]], 6.0);
}

TEST(ResidualCapacity, RejectedEmbeddingsIgnored) {
  const PhysicalNetwork net = Triangle();
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const std::vector<VnRequest> requests{VnRequest(0, {{30.0}}, {}, 1.0)};
  const std::vector<Embedding> embeddings{{0, false, {kUnmapped}, {}, false}};
  EXPECT_EQ(ResidualCapacity(net, paths, embeddings, requests).node,
            net.NodeCapacities());
}

TEST(ResidualCapacityProperty, AddingEmbeddingNeverIncreasesResidual) {
  Rng rng(5);
  const PhysicalNetwork net = GenerateFullMesh(5, 100, 100);
  const PathSet paths = EnumerateLoopFreePaths(net, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<VnRequest> requests;
    std::vector<Embedding> embeddings;
    Residuals before = ResidualCapacity(net, paths, embeddings, requests);
    for (int j = 0; j < 6; ++j) {
      VnRequest request = GenerateRandomVn(j, rng.UniformInt(1, 3), 0.5, {1, 4},
                                           {1, 4}, ValueRule::kUnit, rng.Next());
      Embedding e{j, true, {}, {}, false};
      for (int v = 0; v < request.vnode_count(); ++v) {
        e.node_map.push_back(rng.UniformInt(0, 4));
      }
      for (const VirtualLink& l : request.vlinks()) {
        const int s = e.node_map[l.from];
        const int t = e.node_map[l.to];
        e.link_map.push_back(s == t ? kNoPath : paths.Between(s, t)[0]);
      }
      CheckEmbeddingConsistency(net, paths, request, e);
      requests.push_back(std::move(request));
      embeddings.push_back(std::move(e));
      const Residuals after = ResidualCapacity(net, paths, embeddings, requests);
      for (std::size_t i = 0; i < after.node.size(); ++i) {
        EXPECT_LE(after.node[i], before.node[i]);
      }
      for (std::size_t k = 0; k < after.path.size(); ++k) {
        EXPECT_LE(after.path[k], before.path[k]);
      }
      before = after;
    }
  }
}

TEST(CheckEmbeddingConsistency, RejectsMismatchedPath) {
  const PhysicalNetwork net = Triangle();
  const PathSet paths = EnumerateLoopFreePaths(net, 4);
  const VnRequest request(0, {{1.0}, {1.0}}, {{0, 1, 1.0}}, 2.0);
  const Embedding wrong{0, true, {0, 2}, {paths.Between(0, 1)[0]}, false};
  EXPECT_THROW(CheckEmbeddingConsistency(net, paths, request, wrong),
               std::invalid_argument);
  const Embedding colocated_with_path{0, true, {0, 0}, {paths.Between(0, 1)[0]}, false};
  EXPECT_THROW(CheckEmbeddingConsistency(net, paths, request, colocated_with_path),
               std::invalid_argument);
  const Embedding good{0, true, {0, 2}, {paths.Between(0, 2)[1]}, false};
  EXPECT_NO_THROW(CheckEmbeddingConsistency(net, paths, request, good));
}

TEST(DiscoverResources, ThresholdAndHopLimit) {
  const PhysicalNetwork net({{0, 5}, {1, 5}, {2, 5}}, {{0, 1, 5}, {1, 2, 5}});
  const PathSet paths = EnumerateLoopFreePaths(net, 2);
  const std::vector<double> node_residual{5, 0.5, 5};
  std::vector<double> path_residual(paths.size(), 1.0);
  path_residual[0] = 0.0;
  const DiscoveryMask mask =
      DiscoverResources(net, paths, node_residual, path_residual, 2, 1.0);
  ASSERT_EQ(mask.node_available.size(), 2u);
  EXPECT_EQ(mask.node_available[1], (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(mask.path_available[0][0], 0);
  EXPECT_EQ(mask.path_available[0][1], 1);
  const DiscoveryMask near =
      DiscoverResources(net, paths, node_residual, path_residual, 1, 0.0, 1, 0);
  EXPECT_EQ(near.node_available[0], (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_NO_THROW(mask.Validate(2, 3, paths.size()));
  EXPECT_THROW(mask.Validate(3, 3, paths.size()), std::invalid_argument);
}

}  // namespace
}  // namespace vne
