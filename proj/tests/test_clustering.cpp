#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "mwc/clustering.hpp"
#include "mwc/random_graphs.hpp"
#include "mwc/spectral.hpp"

using namespace mwc;
using namespace mwc::test;

namespace {

std::vector<std::vector<int>> cluster_sets(const ClusterPartition& p) {
  return p.clusters;
}

bool has_rule(const ClusterPartition& p, MergeRule rule) {
  return std::any_of(p.merges.begin(), p.merges.end(),
                     [&](const MergeStep& s) { return s.rule == rule; });
}

}  // namespace

TEST_SUITE_BEGIN("clustering");

TEST_CASE("positive_tree_partition") {
  SUBCASE("example1: the definite edge joins 1 and 4") {
    const auto partition = positive_tree_partition(example1_graph());
    REQUIRE(partition.trees.size() == 3);
    CHECK(partition.trees[0].vertices == std::vector<int>{0, 3});
    CHECK(partition.trees[0].edges ==
          std::vector<std::pair<int, int>>{{0, 3}});
    CHECK(partition.trees[1].vertices == std::vector<int>{1});
    CHECK(partition.trees[2].vertices == std::vector<int>{2});
  }

  SUBCASE("nine-agent graph: four positive groups") {
    const auto partition = positive_tree_partition(cluster9_graph(false));
    REQUIRE(partition.trees.size() == 4);
    CHECK(partition.trees[0].vertices == std::vector<int>{0, 1, 2});
    CHECK(partition.trees[1].vertices == std::vector<int>{3, 4});
    CHECK(partition.trees[2].vertices == std::vector<int>{5});
    CHECK(partition.trees[3].vertices == std::vector<int>{6, 7, 8});
  }

  SUBCASE("all-definite connected graph is one spanning tree") {
    const Matrix eye = Matrix::Identity(2, 2);
    const auto g = MatrixWeightedGraph::build(
        4, 2, {{0, 1, eye}, {1, 2, eye}, {2, 3, eye}, {0, 3, eye}});
    const auto partition = positive_tree_partition(g);
    REQUIRE(partition.trees.size() == 1);
    CHECK(partition.trees[0].vertices == std::vector<int>{0, 1, 2, 3});
    CHECK(partition.trees[0].edges.size() == 3);  // spanning tree of 4
  }

  SUBCASE("invariant under edge input order") {
    const double s = std::sqrt(3.0) / 4.0;
    std::vector<std::tuple<int, int, Matrix>> edges{
        {3, 4, m22(1, 0.5, 0.5, 1)},
        {0, 1, m22(2, 0, 0, 1)},
        {0, 3, m22(0.75, -s, -s, 0.25)},
    };
    auto forward = MatrixWeightedGraph::build(5, 2, edges);
    std::reverse(edges.begin(), edges.end());
    auto backward = MatrixWeightedGraph::build(5, 2, edges);
    const auto pf = positive_tree_partition(forward);
    const auto pb = positive_tree_partition(backward);
    REQUIRE(pf.trees.size() == pb.trees.size());
    for (std::size_t k = 0; k < pf.trees.size(); ++k) {
      CHECK(pf.trees[k].vertices == pb.trees[k].vertices);
    }
  }
}

TEST_CASE("enumerate_paths") {
  const auto g = example1_graph();

  SUBCASE("vertex 2 to the tree {1,4}") {
    const std::vector<int> target{0, 3};
    const PathFamily family = enumerate_paths(g, 1, target);
    REQUIRE(family.paths.size() == 2);
    CHECK(family.paths[0] == std::vector<int>{1, 0});
    CHECK(family.paths[1] == std::vector<int>{1, 2, 0});
    CHECK_FALSE(family.truncated);
  }

  SUBCASE("vertex 3 to the cluster {1,2,4}") {
    const std::vector<int> target{0, 1, 3};
    const PathFamily family = enumerate_paths(g, 2, target);
    REQUIRE(family.paths.size() == 2);
    CHECK(family.paths[0] == std::vector<int>{2, 0});
    CHECK(family.paths[1] == std::vector<int>{2, 1});
  }

  SUBCASE("single-route graph yields exactly one path") {
    const Matrix one = Matrix::Identity(1, 1);
    const auto path_graph =
        MatrixWeightedGraph::build(3, 1, {{0, 1, one}, {1, 2, one}});
    const std::vector<int> target{0};
    const PathFamily family = enumerate_paths(path_graph, 2, target);
    REQUIRE(family.paths.size() == 1);
    CHECK(family.paths[0] == std::vector<int>{2, 1, 0});
  }

  SUBCASE("budget truncation is flagged") {
    const Matrix eye = Matrix::Identity(2, 2);
    std::vector<std::tuple<int, int, Matrix>> edges;
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) edges.emplace_back(i, j, eye);
    }
    const auto complete = MatrixWeightedGraph::build(6, 2, edges);
    const std::vector<int> target{5};
    const PathFamily family = enumerate_paths(complete, 0, target, 3);
    CHECK(family.paths.size() == 3);
    CHECK(family.truncated);
  }
}

TEST_CASE("path_nullspace") {
  const auto g = example1_graph();

  SUBCASE("single semidefinite edge") {
    const std::vector<int> path{1, 0};
    const Subspace ns = path_nullspace(g, path);
    REQUIRE(ns.dimension() == 1);
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    CHECK(ns.contains(e1, 1e-12));
  }

  SUBCASE("two-edge path accumulates both nullspaces") {
    const std::vector<int> path{1, 2, 0};
    const Subspace ns = path_nullspace(g, path);
    CHECK(ns.dimension() == 2);
    Vector e2 = Vector::Zero(3), e3 = Vector::Zero(3);
    e2(1) = 1.0;
    e3(2) = 1.0;
    CHECK(ns.contains(e2, 1e-12));
    CHECK(ns.contains(e3, 1e-12));
  }

  SUBCASE("definite edges contribute nothing") {
    const std::vector<int> path{1, 0, 3};  // (1,2) then the definite (1,4)
    CHECK(path_nullspace(g, path).dimension() == 1);
    const std::vector<int> direct{0, 3};
    CHECK(path_nullspace(g, direct).dimension() == 0);
  }

  SUBCASE("non-adjacent vertices") {
    const std::vector<int> bad{1, 3};  // no (2,4) edge
    CHECK_THROWS_AS(path_nullspace(g, bad), Error);
  }
}

TEST_CASE("vertex_joins_cluster") {
  const auto g = example1_graph();

  SUBCASE("vertex 2 joins {1,4}") {
    const std::vector<int> tree{0, 3};
    CHECK(vertex_joins_cluster(g, 1, tree).joins);
  }

  SUBCASE("vertex 3 does not join {1,2,4}") {
    const std::vector<int> cluster{0, 1, 3};
    const auto result = vertex_joins_cluster(g, 2, cluster);
    CHECK_FALSE(result.joins);
    CHECK_FALSE(result.truncated);
  }

  SUBCASE("one definite edge suffices") {
    const Matrix eye = Matrix::Identity(2, 2);
    const auto h = MatrixWeightedGraph::build(2, 2, {{0, 1, eye}});
    const std::vector<int> cluster{0};
    CHECK(vertex_joins_cluster(h, 1, cluster).joins);
  }

  SUBCASE("no path means no join") {
    const Matrix eye = Matrix::Identity(2, 2);
    const auto h =
        MatrixWeightedGraph::build(4, 2, {{0, 1, eye}, {2, 3, eye}});
    const std::vector<int> cluster{0, 1};
    CHECK_FALSE(vertex_joins_cluster(h, 2, cluster).joins);
  }
}

TEST_CASE("merge_by_edge_sum") {
  const auto g2 = cluster9_graph(true);

  SUBCASE("rank-1 bridges combine into a definite sum") {
    // A_17 + A_28 (paper labels): between {1,2,3} and {7,8,9}
    const std::vector<int> c1{0, 1, 2};
    const std::vector<int> c3{6, 7, 8};
    CHECK(merge_by_edge_sum(g2, c1, c3));
  }

  SUBCASE("merged pair against the middle cluster") {
    // between {1,2,3,7,8,9} and {4,5,6}: A_14 + A_47 is definite
    const std::vector<int> c13{0, 1, 2, 6, 7, 8};
    const std::vector<int> c2{3, 4, 5};
    CHECK(merge_by_edge_sum(g2, c13, c2));
  }

  SUBCASE("no connecting edges") {
    const std::vector<int> a{1, 2};
    const std::vector<int> b{4, 5};
    CHECK_FALSE(merge_by_edge_sum(g2, a, b));
  }

  SUBCASE("a single rank-deficient bridge does not merge") {
    const std::vector<int> c1{0, 1, 2};
    const std::vector<int> c2{3, 4, 5};
    CHECK_FALSE(merge_by_edge_sum(cluster9_graph(false), c1, c2));
  }
}

TEST_CASE("find_clusters") {
  SUBCASE("example1") {
    const ClusterPartition p = find_clusters(example1_graph());
    REQUIRE(p.clusters.size() == 2);
    CHECK(p.clusters[0] == std::vector<int>{0, 1, 3});
    CHECK(p.clusters[1] == std::vector<int>{2});
    CHECK_FALSE(p.spanning);
    CHECK_FALSE(p.truncation_warning);
    CHECK_FALSE(has_rule(p, MergeRule::ForcedByConstraints));
  }

  SUBCASE("nine agents, no bridge: three clusters") {
    const ClusterPartition p = find_clusters(cluster9_graph(false));
    REQUIRE(p.clusters.size() == 3);
    CHECK(p.clusters[0] == std::vector<int>{0, 1, 2});
    CHECK(p.clusters[1] == std::vector<int>{3, 4, 5});
    CHECK(p.clusters[2] == std::vector<int>{6, 7, 8});
    CHECK_FALSE(has_rule(p, MergeRule::ForcedByConstraints));
  }

  SUBCASE("nine agents with bridge: spanning cluster via edge sums") {
    const ClusterPartition p = find_clusters(cluster9_graph(true));
    REQUIRE(p.clusters.size() == 1);
    CHECK(p.spanning);
    CHECK(has_rule(p, MergeRule::EdgeSum));
    CHECK_FALSE(has_rule(p, MergeRule::ForcedByConstraints));
  }

  SUBCASE("cluster count never increases and trees never split") {
    SplitMix64 rng(53);
    for (int trial = 0; trial < 60; ++trial) {
      const auto g = random_graph(rng);
      const auto trees = positive_tree_partition(g);
      const ClusterPartition p = find_clusters(g);
      CHECK(p.clusters.size() <= trees.trees.size());
      // members of one positive tree always end in the same cluster
      for (const auto& tree : trees.trees) {
        int found = -1;
        for (std::size_t c = 0; c < p.clusters.size(); ++c) {
          if (std::binary_search(p.clusters[c].begin(), p.clusters[c].end(),
                                 tree.vertices.front())) {
            found = static_cast<int>(c);
            break;
          }
        }
        REQUIRE(found >= 0);
        for (int v : tree.vertices) {
          CHECK(std::binary_search(p.clusters[found].begin(),
                                   p.clusters[found].end(), v));
        }
      }
    }
  }
}

TEST_CASE("predict_consensus") {
  SUBCASE("positive spanning tree forces consensus") {
    const Matrix eye = Matrix::Identity(3, 3);
    const auto g = MatrixWeightedGraph::build(
        4, 3, {{0, 1, eye}, {1, 2, eye}, {2, 3, eye}});
    CHECK(predict_consensus(g));
  }

  SUBCASE("example1 does not reach consensus") {
    CHECK_FALSE(predict_consensus(example1_graph()));
  }

  SUBCASE("agrees with the nullspace-dimension test on random graphs") {
    SplitMix64 rng(59);
    for (int trial = 0; trial < 200; ++trial) {
      const auto g = random_graph(rng);
      const bool expected = analyze_spectrum(g).nullspace_dim == g.dimension();
      CHECK(predict_consensus(g) == expected);
    }
  }
}

TEST_SUITE_END();
