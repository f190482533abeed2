#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tailgc/gc_tests.hpp"
#include "tailgc/series.hpp"

namespace tailgc {

//======================================================================
// Directed tail-causality networks and the topology metrics used to
// compare them.
//======================================================================

// A directed graph over the panel's series. Edges are (source, target)
// index pairs into `nodes`; self-loops are excluded by construction.
struct CausalityNetwork {
  std::vector<std::string> nodes;
  std::set<std::pair<int, int>> edges;
  std::string method;  // provenance tag: "lr", "hong", or "decimation"
};

// Per-pair outcomes and failures collected while building a pairwise network.
struct PairwiseDiagnostics {
  std::vector<GcTestResult> results;   // all successfully tested ordered pairs
  std::vector<std::string> failures;   // error notes for pairs left out
};

// Tests all N(N-1) ordered pairs with the chosen method and keeps the edges
// whose p-values survive a joint Benjamini–Hochberg correction at `level`.
// `p_max_or_m` is p_max for lr and the bandwidth M for hong. Per-pair test
// errors become missing edges, recorded in `diag` when provided.
CausalityNetwork build_pairwise_network(const BinaryPanel& panel, GcMethod method, double level,
                                        int p_max_or_m, PairwiseDiagnostics* diag = nullptr);

// Builds the network validated by decimation: entry (i, j) != 0 of the pruned
// coupling matrix becomes the edge j -> i.
CausalityNetwork build_multivariate_network(const BinaryPanel& panel);

// |edges| / (N(N-1)); 0 for graphs with fewer than two nodes.
double link_density(const CausalityNetwork& g);

// Fraction of links pointing in both directions: |{(a,b) in E : (b,a) in E}|
// divided by |E|; 0 for an empty graph.
double reciprocity(const CausalityNetwork& g);

// Fraction of node triplets whose three skeleton edges all exist, ignoring
// directions, over C(N,3); 0 for graphs with fewer than three nodes.
double triangle_density(const CausalityNetwork& g);

// |E1 intersect E2| / |E1 union E2| on directed edge sets; 0 when both are
// empty. Throws std::invalid_argument unless the node lists match.
double jaccard(const CausalityNetwork& g1, const CausalityNetwork& g2);

}  // namespace tailgc
