#pragma once

#include <vector>

#include "smr/config.hpp"
#include "smr/matrix.hpp"
#include "smr/statespace.hpp"

namespace smr {

// One weighted edge; endpoints are 1-based as in the file format.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

// Edge-list description of the static network. Multiple edges into the same
// input or output sum.
struct EdgeLists {
  std::vector<Edge> iedges;     // internal output -> internal input
  std::vector<Edge> einedges;   // external input  -> internal input
  std::vector<Edge> eoutedges;  // internal output -> external output
  std::vector<Edge> eedges;     // external input  -> external output
  int external_inputs = 0;
  int external_outputs = 0;
};

// Static routing [z; u] = N [w; y], stored by block.
struct NetworkMatrix {
  Matrix de;  // p' x m'
  Matrix df;  // p' x p
  Matrix dh;  // m  x m'
  Matrix dk;  // m  x p

  int external_inputs() const { return de.cols(); }
  int external_outputs() const { return de.rows(); }

  // N = [D_E D_F; D_H D_K] as one (p' + m) x (m' + p) matrix.
  Matrix assembled() const;
};

NetworkMatrix assemble_network(const EdgeLists& edges, const BlockDiagonalPlant& plant);

// Closed loop obtained by wiring the plant through the network.
struct ClosedLoop {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix d;
  bool stable = false;
  double abscissa = 0.0;
};

ClosedLoop close_loop(const BlockDiagonalPlant& plant, const NetworkMatrix& net,
                      double cond_limit = tol::kWellPosedCond);

StateSpaceModel to_statespace(const ClosedLoop& cl, std::string label = "closed-loop");

// Realization of F(N, G) - F(N, Ghat) as the parallel stacking of the two
// closed loops with subtracted outputs.
StateSpaceModel error_system(const NetworkMatrix& net, const BlockDiagonalPlant& g,
                             const BlockDiagonalPlant& ghat);

// H-infinity norm of the closed-loop mismatch. Returns +infinity when the
// reduced closed loop is unstable; throws NotStable when the full one is.
double closed_loop_error(const NetworkMatrix& net, const BlockDiagonalPlant& g,
                         const BlockDiagonalPlant& ghat,
                         double rel_tol = tol::kHinfRelTol);

}  // namespace smr
