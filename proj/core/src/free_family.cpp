#include "powers/free_family.hpp"

#include <cstdlib>
#include <map>
#include <set>
#include <utility>

#include "powers/errors.hpp"

namespace powers {

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  // Directed: the root `child` is absorbed into the root `keep`.
  void absorb(int child, int keep) { parent[child] = keep; }
};

}  // namespace

int subgroup_rank(const std::vector<Word>& words) {
  if (words.empty()) return 0;
  for (const Word& w : words) {
    if (w.descriptor().kind() != GroupKind::free_group)
      throw WrongBackend("subgroup_rank needs free-group words");
    if (w.descriptor() != words.front().descriptor()) throw GroupMismatch("mixed descriptors in word family");
  }

  // Wedge of loops at vertex 0, one per word. Signed labels double as
  // directions: adj[v][l] = w means an l-edge from v to w, mirrored as
  // adj[w][-l] = v.
  std::vector<std::map<int, int>> adj(1);
  std::vector<std::pair<int, int>> pending;  // vertex pairs to identify
  auto add_edge = [&adj, &pending](int from, int to, int label) {
    auto [it, fresh] = adj[static_cast<std::size_t>(from)].try_emplace(label, to);
    if (!fresh && it->second != to) pending.emplace_back(it->second, to);
    auto [rit, rfresh] = adj[static_cast<std::size_t>(to)].try_emplace(-label, from);
    if (!rfresh && rit->second != from) pending.emplace_back(rit->second, from);
  };
  for (const Word& w : words) {
    const auto letters = w.letters();
    int cur = 0;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      int tgt;
      if (i + 1 == letters.size()) {
        tgt = 0;
      } else {
        adj.emplace_back();
        tgt = static_cast<int>(adj.size()) - 1;
      }
      add_edge(cur, tgt, letters[i]);
      cur = tgt;
    }
  }

  // Fold: repeatedly identify the queued vertex pairs, merging adjacency
  // maps small-into-large; conflicting targets queue further pairs.
  UnionFind uf(static_cast<int>(adj.size()));
  while (!pending.empty()) {
    auto [x, y] = pending.back();
    pending.pop_back();
    int a = uf.find(x), b = uf.find(y);
    if (a == b) continue;
    if (adj[static_cast<std::size_t>(a)].size() < adj[static_cast<std::size_t>(b)].size()) std::swap(a, b);
    uf.absorb(b, a);
    auto& into = adj[static_cast<std::size_t>(a)];
    auto from = std::move(adj[static_cast<std::size_t>(b)]);
    adj[static_cast<std::size_t>(b)].clear();
    for (const auto& [label, tgt] : from) {
      int t = uf.find(tgt);
      auto [it, fresh] = into.try_emplace(label, t);
      if (!fresh && uf.find(it->second) != t) pending.emplace_back(it->second, t);
    }
  }

  // Cycle rank of the folded graph: every geometric edge appears once
  // per direction across the surviving vertices' maps.
  std::int64_t half_edges = 0;
  std::int64_t vertices = 0;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (uf.find(static_cast<int>(v)) != static_cast<int>(v)) continue;
    ++vertices;
    half_edges += static_cast<std::int64_t>(adj[v].size());
  }
  std::int64_t edges = half_edges / 2;
  return static_cast<int>(edges - vertices + 1);
}

bool is_free_basis(const std::vector<Word>& words) {
  if (words.empty()) return true;
  return subgroup_rank(words) == static_cast<int>(words.size());
}

}  // namespace powers
