// Brute-force graph oracles for cross-checking the union-find machinery.
#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "perclab/graph.hpp"

namespace testsupport {

// BFS connected components; returns component id per vertex.
inline std::vector<int> bfs_components(const perclab::GeoGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    std::queue<std::uint32_t> q;
    q.push(static_cast<std::uint32_t>(s));
    while (!q.empty()) {
      std::uint32_t u = q.front();
      q.pop();
      for (std::uint32_t w : adj[u])
        if (comp[w] < 0) {
          comp[w] = next;
          q.push(w);
        }
    }
    ++next;
  }
  return comp;
}

inline std::size_t bfs_largest_component(const perclab::GeoGraph& g) {
  auto comp = bfs_components(g);
  std::vector<std::size_t> sizes;
  for (int c : comp) {
    if (static_cast<std::size_t>(c) >= sizes.size()) sizes.resize(c + 1, 0);
    ++sizes[static_cast<std::size_t>(c)];
  }
  std::size_t best = 0;
  for (auto s : sizes) best = std::max(best, s);
  return best;
}

}  // namespace testsupport
