#include "diffnet/topology.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace diffnet {

NetworkTopology::NetworkTopology(int num_nodes, const std::vector<std::pair<int, int>>& edges)
    : num_nodes_(num_nodes), neighbors_(std::max(num_nodes, 0)) {
  if (num_nodes < 1) {
    throw std::invalid_argument("topology: num_nodes must be positive");
  }
  std::vector<std::set<int>> adj(num_nodes);
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= num_nodes || b < 0 || b >= num_nodes) {
      throw std::invalid_argument("topology: edge index out of range: (" + std::to_string(a) +
                                  ", " + std::to_string(b) + ")");
    }
    if (a == b) {
      throw std::invalid_argument("topology: self-loop at node " + std::to_string(a));
    }
    adj[a].insert(b);
    adj[b].insert(a);
  }
  for (int k = 0; k < num_nodes; ++k) {
    neighbors_[k].assign(adj[k].begin(), adj[k].end());  // sets iterate ascending
  }

  // connectivity check (BFS from node 0)
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    for (int l : neighbors_[k]) {
      if (!seen[l]) {
        seen[l] = 1;
        ++reached;
        stack.push_back(l);
      }
    }
  }
  if (reached != num_nodes) {
    throw std::invalid_argument("topology: graph is not connected (" + std::to_string(reached) +
                                " of " + std::to_string(num_nodes) + " nodes reachable)");
  }
}

bool NetworkTopology::are_neighbors(int l, int k) const {
  const auto& nb = neighbors_[k];
  return std::binary_search(nb.begin(), nb.end(), l);
}

int NetworkTopology::max_closed_degree() const {
  int m = 0;
  for (int k = 0; k < num_nodes_; ++k) m = std::max(m, closed_degree(k));
  return m;
}

NetworkTopology load_edge_list(const std::string& path, int num_nodes) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("topology: cannot open edge list file: " + path);
  }
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int a, b;
    if (!(ls >> a >> b)) {
      throw std::runtime_error("topology: malformed edge list line: '" + line + "'");
    }
    edges.emplace_back(a, b);
    max_index = std::max({max_index, a, b});
  }
  if (num_nodes < 0) num_nodes = max_index + 1;
  return NetworkTopology(num_nodes, edges);
}

NetworkTopology builtin_topology_15() {
  static const std::vector<std::pair<int, int>> edges = {
      {0, 1},  {0, 2},  {0, 3},  {1, 2},  {1, 4},   {2, 3},   {2, 5},   {3, 5},
      {3, 6},  {4, 5},  {4, 7},  {4, 8},  {5, 6},   {5, 8},   {6, 9},   {6, 10},
      {7, 8},  {7, 11}, {8, 9},  {8, 11}, {8, 12},  {9, 10},  {9, 12},  {10, 13},
      {11, 12}, {11, 14}, {12, 13}, {12, 14}, {13, 14}};
  return NetworkTopology(15, edges);
}

CombinerRule combiner_rule_from_string(const std::string& name) {
  if (name == "uniform") return CombinerRule::kUniform;
  if (name == "metropolis") return CombinerRule::kMetropolis;
  if (name == "relative_degree") return CombinerRule::kRelativeDegree;
  if (name == "laplacian") return CombinerRule::kLaplacian;
  throw std::invalid_argument("unknown combiner rule: " + name);
}

std::string to_string(CombinerRule rule) {
  switch (rule) {
    case CombinerRule::kUniform: return "uniform";
    case CombinerRule::kMetropolis: return "metropolis";
    case CombinerRule::kRelativeDegree: return "relative_degree";
    case CombinerRule::kLaplacian: return "laplacian";
  }
  return "?";
}

CombinerMatrix static_combiners(const NetworkTopology& topology, CombinerRule rule) {
  const int n = topology.num_nodes();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  switch (rule) {
    case CombinerRule::kUniform:
      for (int k = 0; k < n; ++k) {
        const double v = 1.0 / topology.closed_degree(k);
        w(k, k) = v;
        for (int l : topology.neighbors(k)) w(l, k) = v;
      }
      break;
    case CombinerRule::kMetropolis:
      for (int k = 0; k < n; ++k) {
        double off = 0.0;
        for (int l : topology.neighbors(k)) {
          w(l, k) = 1.0 / std::max(topology.closed_degree(k), topology.closed_degree(l));
          off += w(l, k);
        }
        w(k, k) = 1.0 - off;
      }
      break;
    case CombinerRule::kRelativeDegree:
      for (int k = 0; k < n; ++k) {
        double total = topology.closed_degree(k);
        for (int l : topology.neighbors(k)) total += topology.closed_degree(l);
        w(k, k) = topology.closed_degree(k) / total;
        for (int l : topology.neighbors(k)) w(l, k) = topology.closed_degree(l) / total;
      }
      break;
    case CombinerRule::kLaplacian: {
      const double v = 1.0 / topology.max_closed_degree();
      for (int k = 0; k < n; ++k) {
        for (int l : topology.neighbors(k)) w(l, k) = v;
        w(k, k) = 1.0 - v * static_cast<double>(topology.neighbors(k).size());
      }
      break;
    }
  }
  return CombinerMatrix{std::move(w)};
}

std::string CombinerViolation::describe() const {
  switch (kind) {
    case Kind::kSupport:
      return "nonzero weight (" + std::to_string(row) + ", " + std::to_string(col) +
             ") outside neighborhood, value " + std::to_string(value);
    case Kind::kNegative:
      return "negative weight (" + std::to_string(row) + ", " + std::to_string(col) +
             ") = " + std::to_string(value);
    case Kind::kColumnSum:
      return "column " + std::to_string(col) + " sums to " + std::to_string(value);
  }
  return "?";
}

std::vector<CombinerViolation> validate_combiners(const CombinerMatrix& combiners,
                                                  const NetworkTopology& topology,
                                                  double tol) {
  std::vector<CombinerViolation> out;
  const int n = topology.num_nodes();
  if (combiners.weights.rows() != n || combiners.weights.cols() != n) {
    throw std::invalid_argument("validate_combiners: matrix size does not match topology");
  }
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
      const double c = combiners.weights(l, k);
      const bool in_support = (l == k) || topology.are_neighbors(l, k);
      if (!in_support && c != 0.0) {
        out.push_back({CombinerViolation::Kind::kSupport, l, k, c});
      }
      if (c < -tol) {
        out.push_back({CombinerViolation::Kind::kNegative, l, k, c});
      }
      sum += c;
    }
    if (std::abs(sum - 1.0) > tol) {
      out.push_back({CombinerViolation::Kind::kColumnSum, -1, k, sum});
    }
  }
  return out;
}

}  // namespace diffnet
