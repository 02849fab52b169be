//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/rings.h"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace fabind {
namespace {

using Adjacency = std::vector<std::vector<int>>;

// Shortest path u -> v avoiding the direct edge (u, v).
std::vector<int> shortest_detour(const Adjacency &adj, int u, int v) {
  std::vector<int> prev(adj.size(), -2);
  std::queue<int> q;
  q.push(u);
  prev[u] = -1;
  while (!q.empty()) {
    const int x = q.front();
    q.pop();
    if (x == v)
      break;
    for (int y: adj[x]) {
      if (x == u && y == v)
        continue;
      if (prev[y] == -2) {
        prev[y] = x;
        q.push(y);
      }
    }
  }
  if (prev[v] == -2)
    return {};
  std::vector<int> path;
  for (int x = v; x != -1; x = prev[x])
    path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

int count_components(int n, const Adjacency &adj) {
  std::vector<char> seen(n, 0);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s])
      continue;
    ++c;
    std::vector<int> stack = { s };
    seen[s] = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y: adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
  }
  return c;
}

std::vector<int> canonical_cycle(std::vector<int> cycle) {
  const auto mn = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), mn, cycle.end());
  if (cycle.size() > 2 && cycle.back() < cycle[1])
    std::reverse(cycle.begin() + 1, cycle.end());
  return cycle;
}

}  // namespace

std::vector<std::vector<int>> find_sssr(int num_nodes,
                                        const std::vector<std::pair<int, int>> &edges) {
  Adjacency adj(num_nodes);
  std::map<std::pair<int, int>, int> edge_id;
  for (auto [a, b]: edges) {
    if (a > b)
      std::swap(a, b);
    if (a == b || edge_id.contains({ a, b }))
      continue;
    edge_id[{ a, b }] = static_cast<int>(edge_id.size());
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto &nbrs: adj)
    std::sort(nbrs.begin(), nbrs.end());

  const int rank = static_cast<int>(edge_id.size()) - num_nodes
                   + count_components(num_nodes, adj);
  if (rank <= 0)
    return {};

  std::set<std::vector<int>> candidates;
  for (const auto &[e, id]: edge_id) {
    auto path = shortest_detour(adj, e.first, e.second);
    if (path.size() >= 3)
      candidates.insert(canonical_cycle(std::move(path)));
  }
  std::vector<std::vector<int>> sorted(candidates.begin(), candidates.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto &a, const auto &b) { return a.size() < b.size(); });

  // Gaussian elimination over GF(2) on edge-incidence vectors.
  const std::size_t ne = edge_id.size();
  std::vector<std::vector<char>> basis;
  std::vector<int> pivots;
  std::vector<std::vector<int>> rings;
  for (const auto &cyc: sorted) {
    std::vector<char> vec(ne, 0);
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
      if (a > b)
        std::swap(a, b);
      vec[edge_id.at({ a, b })] ^= 1;
    }
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (vec[pivots[k]])
        for (std::size_t j = 0; j < ne; ++j)
          vec[j] ^= basis[k][j];
    const auto pivot = std::find(vec.begin(), vec.end(), 1);
    if (pivot == vec.end())
      continue;
    pivots.push_back(static_cast<int>(pivot - vec.begin()));
    basis.push_back(std::move(vec));
    rings.push_back(cyc);
    if (static_cast<int>(rings.size()) == rank)
      break;
  }
  return rings;
}

}  // namespace fabind
