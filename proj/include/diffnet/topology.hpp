#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace diffnet {

// Undirected, connected graph over nodes 0..N-1. Neighbor lists exclude the
// node itself and are kept sorted ascending, so any per-neighbor vector layout
// derived from them is reproducible.
class NetworkTopology {
 public:
  NetworkTopology(int num_nodes, const std::vector<std::pair<int, int>>& edges);

  int num_nodes() const { return num_nodes_; }

  // Neighbors of k, self excluded.
  const std::vector<int>& neighbors(int k) const { return neighbors_[k]; }

  // Closed-neighborhood size N_k (neighbors plus the node itself).
  int closed_degree(int k) const { return static_cast<int>(neighbors_[k].size()) + 1; }

  bool are_neighbors(int l, int k) const;

  int max_closed_degree() const;

 private:
  int num_nodes_;
  std::vector<std::vector<int>> neighbors_;
};

// Loads a plain-text edge list, one "l k" pair per line. Blank lines and
// lines starting with '#' are skipped. If num_nodes < 0 it is inferred as
// max index + 1.
NetworkTopology load_edge_list(const std::string& path, int num_nodes = -1);

// Fixed 15-node benchmark graph used by the bundled experiment presets.
NetworkTopology builtin_topology_15();

enum class CombinerRule { kUniform, kMetropolis, kRelativeDegree, kLaplacian };

CombinerRule combiner_rule_from_string(const std::string& name);
std::string to_string(CombinerRule rule);

// Combination weights for the whole network. Entry (l, k) is the weight node
// k assigns to the estimate received from node l; each column over the closed
// neighborhood of k is a convex combination (nonnegative, sums to one).
struct CombinerMatrix {
  Eigen::MatrixXd weights;
};

CombinerMatrix static_combiners(const NetworkTopology& topology, CombinerRule rule);

struct CombinerViolation {
  enum class Kind { kSupport, kNegative, kColumnSum };
  Kind kind;
  int row;     // source node l (or -1 for column checks)
  int col;     // combining node k
  double value;
  std::string describe() const;
};

// Diagnostic check of all CombinerMatrix invariants. Empty result means ok.
std::vector<CombinerViolation> validate_combiners(const CombinerMatrix& combiners,
                                                  const NetworkTopology& topology,
                                                  double tol = 1e-10);

}  // namespace diffnet
