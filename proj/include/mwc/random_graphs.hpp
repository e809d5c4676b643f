#pragma once

#include "mwc/graph.hpp"
#include "mwc/rng.hpp"

namespace mwc {

/// Knobs for the randomized verification corpus: connected graphs with a
/// mix of definite, semidefinite (one zero eigenvalue) and rank-1 weights.
struct RandomGraphParams {
  int min_n = 2;
  int max_n = 8;
  int min_d = 1;
  int max_d = 3;
  double extra_edge_prob = 0.25;
  double min_eigenvalue = 0.3;  // of nonzero weight modes; keeps every rank
  double max_eigenvalue = 2.0;  // decision far from the tolerance threshold

  // Independently drawn weights can still be nearly aligned. A principal
  // angle theta between weight nullspaces shows up as a singular value
  // ~theta in the d-level subspace tests but as a Laplacian eigenvalue
  // ~theta^2, so the two routes can land on opposite sides of their rank
  // thresholds anywhere in a wide band around the cutoff. Redraw graphs
  // whose Laplacian spectrum enters that band; constructed zeros sit at
  // round-off (~1e-16 of scale), far below its lower edge.
  bool well_conditioned = true;
  double band_below = 1e5;  // reject |lambda| in (thr/band_below,
  double band_above = 1e3;  //                     thr*band_above)
};

/// Random symmetric PSD weight of one of the three kinds. For d = 1 the
/// kinds coincide (a positive scalar).
Matrix random_weight(SplitMix64& rng, int d,
                     const RandomGraphParams& params = {});

/// Connected random graph: a uniform random spanning tree plus Bernoulli
/// extra edges, every edge weighted by random_weight.
MatrixWeightedGraph random_graph(SplitMix64& rng,
                                 const RandomGraphParams& params = {});

/// Stacked initial state with entries uniform in [lo, hi].
Vector random_initial_state(SplitMix64& rng, int n, int d, double lo = -5.0,
                            double hi = 5.0);

}  // namespace mwc
