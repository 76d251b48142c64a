#include "amdet/chimera.hpp"

#include <stdexcept>

namespace amdet {

ChimeraGraph::ChimeraGraph(int rows, int cols, std::vector<int> defects)
    : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("chimera: bad grid size");
  present_.assign(static_cast<size_t>(total_sites()), true);
  for (int d : defects) {
    if (d < 0 || d >= total_sites()) throw std::invalid_argument("chimera: defect id out of range");
    present_[d] = false;
  }
  num_nodes_ = 0;
  for (bool p : present_) num_nodes_ += p ? 1 : 0;
}

ChimeraGraph ChimeraGraph::dw2000q() { return ChimeraGraph(16, 16); }

int ChimeraGraph::node_id(int row, int col, int side, int k) const {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_ || side < 0 || side > 1 || k < 0 ||
      k >= kShore)
    throw std::invalid_argument("chimera: bad node coordinate");
  return ((row * cols_) + col) * 2 * kShore + side * kShore + k;
}

ChimeraGraph::Coord ChimeraGraph::decompose(int node) const {
  const int cell = node / (2 * kShore);
  const int within = node % (2 * kShore);
  return {cell / cols_, cell % cols_, within / kShore, within % kShore};
}

bool ChimeraGraph::has_node(int node) const {
  return node >= 0 && node < total_sites() && present_[node];
}

bool ChimeraGraph::has_edge(int u, int v) const {
  if (u == v || !has_node(u) || !has_node(v)) return false;
  const Coord a = decompose(u);
  const Coord b = decompose(v);
  if (a.row == b.row && a.col == b.col) return a.side != b.side;  // K_{4,4} cell
  if (a.side != b.side || a.k != b.k) return false;
  if (a.side == 0)  // vertical shore couples along the column
    return a.col == b.col && std::abs(a.row - b.row) == 1;
  return a.row == b.row && std::abs(a.col - b.col) == 1;
}

}  // namespace amdet
