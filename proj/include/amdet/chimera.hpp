#pragma once

#include <vector>

#include "amdet/types.hpp"

namespace amdet {

/// Chimera hardware graph: a rows x cols grid of K_{4,4} unit cells.
///
/// Each cell holds two shores of four qubits. Shore 0 qubits couple
/// vertically to the same shore position in the cells above/below; shore 1
/// qubits couple horizontally. Within a cell the two shores are completely
/// bipartite. Node ids follow the linear convention
///   id = ((row * cols) + col) * 8 + side * 4 + k.
class ChimeraGraph {
 public:
  ChimeraGraph(int rows, int cols, std::vector<int> defects = {});

  /// Defect-free 16x16 production-scale graph (2048 nodes).
  static ChimeraGraph dw2000q();

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  static constexpr int kShore = 4;

  int node_id(int row, int col, int side, int k) const;
  bool has_node(int node) const;
  bool has_edge(int u, int v) const;

  int total_sites() const { return rows_ * cols_ * 2 * kShore; }
  /// Nodes present (total sites minus defects).
  int num_nodes() const { return num_nodes_; }

 private:
  struct Coord { int row, col, side, k; };
  Coord decompose(int node) const;

  int rows_, cols_;
  int num_nodes_;
  std::vector<bool> present_;
};

}  // namespace amdet
