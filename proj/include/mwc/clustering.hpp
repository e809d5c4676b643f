#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mwc/graph.hpp"
#include "mwc/subspace.hpp"

namespace mwc {

/// Cap on the number of simple paths examined per (vertex, cluster)
/// membership query. Exceeding it yields a conservative "not merged"
/// answer flagged as truncated, never a wrong merge.
inline constexpr int kDefaultMaxPaths = 10000;

/// A maximal set of vertices mutually reachable through positive-definite
/// edges, together with a spanning tree of such edges (empty for
/// singletons).
struct PositiveTree {
  std::vector<int> vertices;                 // ascending
  std::vector<std::pair<int, int>> edges;    // tree edges, (min, max)
};

struct PositiveTreePartition {
  std::vector<PositiveTree> trees;  // ordered by smallest member
};

/// Unique partition of the vertex set into maximal positive trees:
/// connected components of the subgraph induced by positive-definite
/// edges, seeded ascending by vertex index.
PositiveTreePartition positive_tree_partition(const MatrixWeightedGraph& g);

/// All simple paths from `source` into `target` whose intermediate
/// vertices avoid `target`, found depth-first in ascending neighbor order.
struct PathFamily {
  int source = -1;
  std::vector<int> target;
  std::vector<std::vector<int>> paths;
  std::vector<Subspace> nullspaces;  // one per path
  bool truncated = false;            // stopped at max_paths
};

PathFamily enumerate_paths(const MatrixWeightedGraph& g, int source,
                           std::span<const int> target,
                           int max_paths = kDefaultMaxPaths);

/// Subspace sum of the edge-weight nullspaces along a path: the freedom
/// available to the difference of the endpoint equilibrium states.
Subspace path_nullspace(const MatrixWeightedGraph& g,
                        std::span<const int> path,
                        double rank_tol = kRankTol);

struct JoinTestResult {
  bool joins = false;
  bool truncated = false;  // budget hit while the intersection was nonzero
};

/// Membership test: v joins `cluster` iff the intersection of the
/// nullspaces over all simple paths from v into the cluster is trivial.
/// No path at all means no constraint and therefore no join.
JoinTestResult vertex_joins_cluster(const MatrixWeightedGraph& g, int v,
                                    std::span<const int> cluster,
                                    int max_paths = kDefaultMaxPaths,
                                    double rank_tol = kRankTol);

/// Sufficient merge test: the sum of the weights over all edges joining
/// the two sets is positive definite. Cheap pre-filter for the path test.
bool merge_by_edge_sum(const MatrixWeightedGraph& g, std::span<const int> c1,
                       std::span<const int> c2, double rank_tol = kRankTol);

enum class MergeRule {
  EdgeSum,             // inter-cluster weight sum is positive definite
  PathIntersection,    // some vertex passes the path-nullspace test
  ForcedByConstraints  // equality forced by the aggregated constraint system
};

const char* to_string(MergeRule rule);

struct MergeStep {
  MergeRule rule;
  std::vector<int> into;      // absorbing cluster, members at merge time
  std::vector<int> absorbed;  // members of the cluster merged in
  int witness = -1;           // vertex passing the path test, if any
  std::vector<std::pair<int, int>> edges_used;
};

struct ClusterPartition {
  std::vector<std::vector<int>> clusters;  // each ascending; by smallest member
  std::vector<MergeStep> merges;           // in the order applied
  bool spanning = false;                   // single cluster covering V
  bool truncation_warning = false;         // some path query hit max_paths
};

/// Cluster analysis: start from the positive-tree partition, then merge
/// cluster pairs until a fixpoint. Each sweep tries the edge-sum rule, then
/// the path test for every member of the candidate cluster; the first merge
/// found restarts the sweep. When a sweep completes with no merge, any
/// cluster pairs whose states are forced equal by the full inter-cluster
/// constraint system (nullspace of the cluster-collapsed Laplacian, with
/// parallel edges weight-summed) are merged; per-pair path tests alone are
/// provably insufficient on rare graphs. Deterministic for a given graph.
ClusterPartition find_clusters(const MatrixWeightedGraph& g,
                               int max_paths = kDefaultMaxPaths,
                               double rank_tol = kRankTol);

/// True iff a single cluster spans all vertices, which is equivalent to
/// globally reaching the average consensus.
bool predict_consensus(const MatrixWeightedGraph& g,
                       int max_paths = kDefaultMaxPaths,
                       double rank_tol = kRankTol);

}  // namespace mwc
