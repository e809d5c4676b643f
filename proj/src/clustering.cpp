#include "mwc/clustering.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <sstream>

namespace mwc {

const char* to_string(MergeRule rule) {
  switch (rule) {
    case MergeRule::EdgeSum:
      return "edge-sum";
    case MergeRule::PathIntersection:
      return "path-intersection";
    case MergeRule::ForcedByConstraints:
      return "forced-by-constraints";
  }
  return "?";
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<char> member_mask(int n, std::span<const int> set) {
  std::vector<char> mask(n, 0);
  for (int v : set) mask[v] = 1;
  return mask;
}

}  // namespace

PositiveTreePartition positive_tree_partition(const MatrixWeightedGraph& g) {
  const int n = g.vertex_count();
  UnionFind uf(n);
  for (const auto& e : g.edges()) {
    if (e.weight.is_definite()) uf.unite(e.i, e.j);
  }

  // Components keyed by their smallest vertex, in ascending seed order.
  std::vector<int> root_to_tree(n, -1);
  PositiveTreePartition partition;
  for (int v = 0; v < n; ++v) {
    const int root = uf.find(v);
    if (root_to_tree[root] < 0) {
      root_to_tree[root] = static_cast<int>(partition.trees.size());
      partition.trees.push_back({});
    }
    partition.trees[root_to_tree[root]].vertices.push_back(v);
  }

  // Spanning tree of positive edges inside each component.
  UnionFind span(n);
  for (const auto& e : g.edges()) {
    if (!e.weight.is_definite()) continue;
    if (span.find(e.i) == span.find(e.j)) continue;
    span.unite(e.i, e.j);
    partition.trees[root_to_tree[uf.find(e.i)]].edges.emplace_back(e.i, e.j);
  }
  return partition;
}

PathFamily enumerate_paths(const MatrixWeightedGraph& g, int source,
                           std::span<const int> target, int max_paths) {
  const int n = g.vertex_count();
  if (source < 0 || source >= n) {
    fail(ErrorKind::ValidationError, "path source out of range");
  }
  const auto in_target = member_mask(n, target);
  if (in_target[source]) {
    fail(ErrorKind::ValidationError, "path source lies inside the target set");
  }

  PathFamily family;
  family.source = source;
  family.target.assign(target.begin(), target.end());
  std::sort(family.target.begin(), family.target.end());

  std::vector<char> visited(n, 0);
  std::vector<int> path{source};
  visited[source] = 1;

  // Iterative DFS in ascending neighbor order.
  struct Frame {
    int vertex;
    std::size_t next;
  };
  std::vector<Frame> stack{{source, 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& nbrs = g.neighbors(top.vertex);
    if (top.next >= nbrs.size()) {
      visited[top.vertex] = 0;
      path.pop_back();
      stack.pop_back();
      continue;
    }
    const int w = nbrs[top.next++];
    if (visited[w]) continue;
    if (in_target[w]) {
      path.push_back(w);
      family.paths.push_back(path);
      path.pop_back();
      if (static_cast<int>(family.paths.size()) >= max_paths) {
        family.truncated = true;
        break;
      }
    } else {
      visited[w] = 1;
      path.push_back(w);
      stack.push_back({w, 0});
    }
  }

  family.nullspaces.reserve(family.paths.size());
  for (const auto& p : family.paths) {
    family.nullspaces.push_back(path_nullspace(g, p));
  }
  return family;
}

Subspace path_nullspace(const MatrixWeightedGraph& g,
                        std::span<const int> path, double rank_tol) {
  if (path.size() < 2) {
    fail(ErrorKind::NotAPath, "a path needs at least two vertices");
  }
  Subspace acc = Subspace::zero(g.dimension());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const MatrixWeight* w = g.weight_between(path[k], path[k + 1]);
    if (!w) {
      std::ostringstream msg;
      msg << "vertices " << path[k] << " and " << path[k + 1]
          << " are not adjacent";
      fail(ErrorKind::NotAPath, msg.str());
    }
    if (w->is_definite()) continue;  // trivial nullspace
    acc = acc.sum(Subspace::nullspace_of(w->entries(), rank_tol), rank_tol);
  }
  return acc;
}

JoinTestResult vertex_joins_cluster(const MatrixWeightedGraph& g, int v,
                                    std::span<const int> cluster,
                                    int max_paths, double rank_tol) {
  // Intersections only shrink, so stop as soon as the running intersection
  // is trivial. Enumeration order matches enumerate_paths.
  const int n = g.vertex_count();
  const auto in_target = member_mask(n, cluster);
  if (v < 0 || v >= n || in_target[v]) {
    fail(ErrorKind::ValidationError, "vertex must lie outside the cluster");
  }

  JoinTestResult result;
  Subspace inter = Subspace::full(g.dimension());
  int found = 0;

  std::vector<char> visited(n, 0);
  std::vector<int> path{v};
  visited[v] = 1;
  struct Frame {
    int vertex;
    std::size_t next;
  };
  std::vector<Frame> stack{{v, 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& nbrs = g.neighbors(top.vertex);
    if (top.next >= nbrs.size()) {
      visited[top.vertex] = 0;
      path.pop_back();
      stack.pop_back();
      continue;
    }
    const int w = nbrs[top.next++];
    if (visited[w]) continue;
    if (in_target[w]) {
      path.push_back(w);
      inter = inter.intersect(path_nullspace(g, path, rank_tol), rank_tol);
      path.pop_back();
      ++found;
      if (inter.is_zero()) {
        result.joins = true;
        return result;
      }
      if (found >= max_paths) {
        result.truncated = true;  // conservative: do not merge
        return result;
      }
    } else {
      visited[w] = 1;
      path.push_back(w);
      stack.push_back({w, 0});
    }
  }
  return result;  // no path or a nonzero intersection: no join
}

bool merge_by_edge_sum(const MatrixWeightedGraph& g, std::span<const int> c1,
                       std::span<const int> c2, double rank_tol) {
  const auto in1 = member_mask(g.vertex_count(), c1);
  const auto in2 = member_mask(g.vertex_count(), c2);
  const int d = g.dimension();
  Matrix sum = Matrix::Zero(d, d);
  bool any = false;
  for (const auto& e : g.edges()) {
    if ((in1[e.i] && in2[e.j]) || (in2[e.i] && in1[e.j])) {
      sum += e.weight.entries();
      any = true;
    }
  }
  if (!any) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sum, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::EigensolverFailure, "edge-sum eigendecomposition failed");
  }
  const double scale = std::max(std::abs(eig.eigenvalues().minCoeff()),
                                std::abs(eig.eigenvalues().maxCoeff()));
  return eig.eigenvalues().minCoeff() > rank_threshold(scale, rank_tol);
}

namespace {

std::vector<std::pair<int, int>> inter_cluster_edges(
    const MatrixWeightedGraph& g, const std::vector<char>& in1,
    const std::vector<char>& in2) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : g.edges()) {
    if ((in1[e.i] && in2[e.j]) || (in2[e.i] && in1[e.j])) {
      edges.emplace_back(e.i, e.j);
    }
  }
  return edges;
}

// Edges of the examined satisfying paths that leave the merged pair's
// current clusters; recorded as merge provenance for the path rule.
std::vector<std::pair<int, int>> path_merge_edges(
    const MatrixWeightedGraph& g, int witness,
    std::span<const int> cluster, int max_paths, double rank_tol) {
  PathFamily family = enumerate_paths(g, witness, cluster, max_paths);
  Subspace inter = Subspace::full(g.dimension());
  std::vector<std::pair<int, int>> edges;
  for (std::size_t k = 0; k < family.paths.size(); ++k) {
    const auto& p = family.paths[k];
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
      edges.emplace_back(std::min(p[s], p[s + 1]), std::max(p[s], p[s + 1]));
    }
    inter = inter.intersect(family.nullspaces[k], rank_tol);
    if (inter.is_zero()) break;
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// Nullspace of the constraint system on cluster-constant state vectors:
// the Laplacian of the graph with every cluster collapsed to one vertex
// and parallel edges weight-summed (the nullspace of a PSD sum is the
// intersection of the nullspaces, so no constraint is lost).
Matrix quotient_nullspace_basis(const MatrixWeightedGraph& g,
                                const std::vector<std::vector<int>>& clusters,
                                double rank_tol) {
  const int q = static_cast<int>(clusters.size());
  const int d = g.dimension();
  std::vector<int> cluster_of(g.vertex_count(), -1);
  for (int a = 0; a < q; ++a) {
    for (int v : clusters[a]) cluster_of[v] = a;
  }
  Matrix l = Matrix::Zero(q * d, q * d);
  for (const auto& e : g.edges()) {
    const int a = cluster_of[e.i];
    const int b = cluster_of[e.j];
    if (a == b) continue;
    const Matrix& w = e.weight.entries();
    l.block(a * d, a * d, d, d) += w;
    l.block(b * d, b * d, d, d) += w;
    l.block(a * d, b * d, d, d) -= w;
    l.block(b * d, a * d, d, d) -= w;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (l + l.transpose()));
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::EigensolverFailure,
         "cluster constraint system eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = rank_threshold(
      std::max(std::abs(lambda(0)), std::abs(lambda(q * d - 1))), rank_tol);
  int count = 0;
  while (count < q * d && std::abs(lambda(count)) <= cutoff) ++count;
  return eig.eigenvectors().leftCols(count);
}

void sort_clusters(std::vector<std::vector<int>>& clusters) {
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

ClusterPartition find_clusters(const MatrixWeightedGraph& g, int max_paths,
                               double rank_tol) {
  ClusterPartition result;
  for (const auto& tree : positive_tree_partition(g).trees) {
    result.clusters.push_back(tree.vertices);
  }

  const int n = g.vertex_count();
  while (true) {
    sort_clusters(result.clusters);
    auto& clusters = result.clusters;
    const int q = static_cast<int>(clusters.size());
    bool merged = false;

    for (int m = 0; m < q && !merged; ++m) {
      for (int l = 0; l < q && !merged; ++l) {
        if (l == m) continue;
        MergeStep step;
        if (merge_by_edge_sum(g, clusters[m], clusters[l], rank_tol)) {
          step.rule = MergeRule::EdgeSum;
          step.edges_used = inter_cluster_edges(
              g, member_mask(n, clusters[m]), member_mask(n, clusters[l]));
        } else {
          int witness = -1;
          for (int v : clusters[l]) {
            const auto join =
                vertex_joins_cluster(g, v, clusters[m], max_paths, rank_tol);
            result.truncation_warning |= join.truncated;
            if (join.joins) {
              witness = v;
              break;
            }
          }
          if (witness < 0) continue;
          step.rule = MergeRule::PathIntersection;
          step.witness = witness;
          step.edges_used =
              path_merge_edges(g, witness, clusters[m], max_paths, rank_tol);
        }
        step.into = clusters[m];
        step.absorbed = clusters[l];
        clusters[m].insert(clusters[m].end(), clusters[l].begin(),
                           clusters[l].end());
        clusters.erase(clusters.begin() + l);
        result.merges.push_back(std::move(step));
        merged = true;
      }
    }
    if (merged) continue;

    // Fixpoint of the pairwise rules: merge any clusters whose states are
    // forced equal by the aggregated constraint system. Pairwise path
    // intersections cannot see joint coupling across three or more
    // clusters, so this step is required for a complete partition.
    if (clusters.size() > 1) {
      const Matrix basis = quotient_nullspace_basis(g, clusters, rank_tol);
      const int d = g.dimension();
      UnionFind uf(static_cast<int>(clusters.size()));
      bool any = false;
      for (std::size_t a = 0; a < clusters.size(); ++a) {
        for (std::size_t b = a + 1; b < clusters.size(); ++b) {
          const Matrix diff = basis.middleRows(a * d, d) -
                              basis.middleRows(b * d, d);
          if (basis.cols() == 0 || diff.cwiseAbs().maxCoeff() <= 1e-8) {
            uf.unite(static_cast<int>(a), static_cast<int>(b));
            any = true;
          }
        }
      }
      if (any) {
        std::vector<std::vector<int>> merged_clusters;
        std::vector<int> root_to_new(clusters.size(), -1);
        for (std::size_t a = 0; a < clusters.size(); ++a) {
          const int root = uf.find(static_cast<int>(a));
          if (root_to_new[root] < 0) {
            root_to_new[root] = static_cast<int>(merged_clusters.size());
            merged_clusters.push_back({});
          }
          auto& target = merged_clusters[root_to_new[root]];
          if (!target.empty()) {
            MergeStep step;
            step.rule = MergeRule::ForcedByConstraints;
            step.into = target;
            step.absorbed = clusters[a];
            result.merges.push_back(std::move(step));
          }
          target.insert(target.end(), clusters[a].begin(), clusters[a].end());
        }
        result.clusters = std::move(merged_clusters);
        continue;
      }
    }
    break;
  }

  sort_clusters(result.clusters);
  result.spanning = result.clusters.size() == 1 &&
                    static_cast<int>(result.clusters.front().size()) == n;
  return result;
}

bool predict_consensus(const MatrixWeightedGraph& g, int max_paths,
                       double rank_tol) {
  return find_clusters(g, max_paths, rank_tol).spanning;
}

}  // namespace mwc
