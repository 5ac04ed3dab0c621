#include <algorithm>
#include <limits>
#include <queue>

#include "vne/model.h"

namespace vne {
namespace {

// Depth-limited search from `source`, emitting simple paths of exactly
// `hops` links that end at `target`. Neighbours are visited by ascending id,
// so paths of equal length come out in lexicographic order.
class HopBoundedSearch {
 public:
  HopBoundedSearch(const PhysicalNetwork& net, int target,
                   const std::vector<int>& distance_to_target)
      : net_(net), target_(target), distance_(distance_to_target) {}

  void Run(int source, int hops, int limit, std::vector<Path>& out) {
    hops_ = hops;
    limit_ = limit;
    out_ = &out;
    emitted_ = 0;
    on_path_.assign(net_.node_count(), false);
    nodes_.assign(1, source);
    on_path_[source] = true;
    Extend(source);
  }

  int emitted() const { return emitted_; }

 private:
  void Extend(int u) {
    if (emitted_ >= limit_) return;
    const int used = static_cast<int>(nodes_.size()) - 1;
    if (u == target_) {
      if (used == hops_) Emit();
      return;
    }
    if (used == hops_) return;
    for (int w : net_.Neighbours(u)) {
      if (on_path_[w]) continue;
      // Remaining budget must still reach the target.
      if (distance_[w] < 0 || used + 1 + distance_[w] > hops_) continue;
      on_path_[w] = true;
      nodes_.push_back(w);
      Extend(w);
      nodes_.pop_back();
      on_path_[w] = false;
      if (emitted_ >= limit_) return;
    }
  }

  void Emit() {
    Path p;
    p.nodes = nodes_;
    p.capacity = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      const int l = *net_.LinkBetween(nodes_[i], nodes_[i + 1]);
      p.links.push_back(l);
      p.capacity = std::min(p.capacity, net_.links()[l].bandwidth);
    }
    out_->push_back(std::move(p));
    ++emitted_;
  }

  const PhysicalNetwork& net_;
  int target_;
  const std::vector<int>& distance_;
  int hops_ = 0;
  int limit_ = 0;
  std::vector<Path>* out_ = nullptr;
  int emitted_ = 0;
  std::vector<bool> on_path_;
  std::vector<int> nodes_;
};

std::vector<int> HopDistances(const PhysicalNetwork& net, int target) {
  std::vector<int> distance(net.node_count(), -1);
  std::queue<int> frontier;
  distance[target] = 0;
  frontier.push(target);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int w : net.Neighbours(u)) {
      if (distance[w] < 0) {
        distance[w] = distance[u] + 1;
        frontier.push(w);
      }
    }
  }
  return distance;
}

}  // namespace

PathSet EnumerateLoopFreePaths(const PhysicalNetwork& net, int k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  const int n = net.node_count();
  // Pairs are visited in node-id order so global path indices are stable.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&net](int a, int b) {
    return net.nodes()[a].id < net.nodes()[b].id;
  });

  std::vector<Path> paths;
  std::vector<std::vector<int>> distances(n);
  for (int t = 0; t < n; ++t) distances[t] = HopDistances(net, t);

  for (int source : order) {
    for (int target : order) {
      if (source == target || distances[target][source] < 0) continue;
      HopBoundedSearch search(net, target, distances[target]);
      int found = 0;
      for (int hops = distances[target][source]; hops < n && found < k_max;
           ++hops) {
        search.Run(source, hops, k_max - found, paths);
        found += search.emitted();
      }
    }
  }
  return PathSet(n, k_max, std::move(paths));
}

}  // namespace vne
