#include "smr/network.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smr/errors.hpp"
#include "smr/hinf.hpp"
#include "smr/linalg.hpp"
#include "smr/lyapunov.hpp"

namespace smr {

Matrix NetworkMatrix::assembled() const {
  Matrix n(de.rows() + dh.rows(), de.cols() + df.cols());
  n.set_block(0, 0, de);
  n.set_block(0, de.cols(), df);
  n.set_block(de.rows(), 0, dh);
  n.set_block(de.rows(), de.cols(), dk);
  return n;
}

namespace {

void check_edge(const Edge& e, int from_limit, int to_limit, const char* kind) {
  if (e.from < 1 || e.from > from_limit || e.to < 1 || e.to > to_limit) {
    throw IndexOutOfRange(std::string(kind) + ": edge (" + std::to_string(e.from) +
                          ", " + std::to_string(e.to) + ") out of range");
  }
  if (!std::isfinite(e.weight)) {
    throw InvalidArgument(std::string(kind) + ": non-finite edge weight");
  }
}

}  // namespace

NetworkMatrix assemble_network(const EdgeLists& edges, const BlockDiagonalPlant& plant) {
  if (edges.external_inputs < 0 || edges.external_outputs < 0) {
    throw InvalidArgument("assemble_network: negative external port count");
  }
  const int m = plant.inputs();
  const int p = plant.outputs();
  const int mx = edges.external_inputs;
  const int px = edges.external_outputs;
  NetworkMatrix net;
  net.de = Matrix(px, mx);
  net.df = Matrix(px, p);
  net.dh = Matrix(m, mx);
  net.dk = Matrix(m, p);
  for (const Edge& e : edges.iedges) {
    check_edge(e, p, m, "iedges");
    net.dk(e.to - 1, e.from - 1) += e.weight;
  }
  for (const Edge& e : edges.einedges) {
    check_edge(e, mx, m, "einedges");
    net.dh(e.to - 1, e.from - 1) += e.weight;
  }
  for (const Edge& e : edges.eoutedges) {
    check_edge(e, p, px, "eoutedges");
    net.df(e.to - 1, e.from - 1) += e.weight;
  }
  for (const Edge& e : edges.eedges) {
    check_edge(e, mx, px, "eedges");
    net.de(e.to - 1, e.from - 1) += e.weight;
  }
  return net;
}

ClosedLoop close_loop(const BlockDiagonalPlant& plant, const NetworkMatrix& net,
                      double cond_limit) {
  const int m = plant.inputs();
  const int p = plant.outputs();
  if (net.dk.rows() != m || net.dk.cols() != p || net.dh.rows() != m ||
      net.df.cols() != p || net.de.rows() != net.df.rows() ||
      net.de.cols() != net.dh.cols()) {
    throw DimensionMismatch("close_loop: network/plant dimensions disagree");
  }
  // X = (I - D_K D_G)^{-1}; well-posedness means X exists and is benign.
  Matrix ix = -1.0 * (net.dk * plant.D);
  for (int i = 0; i < m; ++i) ix(i, i) += 1.0;
  LuReal lu(ix);
  if (lu.singular() || lu.cond1(ix) > cond_limit) {
    throw IllPosed("close_loop: I - D_K D_G is numerically singular (algebraic loop)");
  }
  const Matrix x = lu.inverse();

  ClosedLoop cl;
  const Matrix bgx = plant.B * x;
  cl.a = plant.A + bgx * (net.dk * plant.C);
  cl.b = bgx * net.dh;
  // (I - D_G D_K)^{-1} C_G = C_G + D_G X D_K C_G by the push-through identity.
  cl.c = net.df * (plant.C + plant.D * (x * (net.dk * plant.C)));
  cl.d = net.de + net.df * (plant.D * (x * net.dh));
  const StabilityInfo stab = is_hurwitz(cl.a);
  cl.stable = stab.hurwitz;
  cl.abscissa = stab.abscissa;
  return cl;
}

StateSpaceModel to_statespace(const ClosedLoop& cl, std::string label) {
  return StateSpaceModel(cl.a, cl.b, cl.c, cl.d, std::move(label));
}

StateSpaceModel error_system(const NetworkMatrix& net, const BlockDiagonalPlant& g,
                             const BlockDiagonalPlant& ghat) {
  if (ghat.count() != g.count()) {
    throw DimensionMismatch("error_system: subsystem count differs");
  }
  for (int i = 0; i < g.count(); ++i) {
    if (g.subsystems[i].inputs() != ghat.subsystems[i].inputs() ||
        g.subsystems[i].outputs() != ghat.subsystems[i].outputs()) {
      throw DimensionMismatch("error_system: subsystem port partition differs");
    }
  }
  const ClosedLoop full = close_loop(g, net);
  const ClosedLoop red = close_loop(ghat, net);
  StateSpaceModel err;
  err.A = block_diag(full.a, red.a);
  err.B = vcat(full.b, red.b);
  err.C = hcat(full.c, -1.0 * red.c);
  err.D = full.d - red.d;
  err.label = "error-system";
  return err;
}

double closed_loop_error(const NetworkMatrix& net, const BlockDiagonalPlant& g,
                         const BlockDiagonalPlant& ghat, double rel_tol) {
  const ClosedLoop full = close_loop(g, net);
  if (!full.stable) {
    throw NotStable("closed_loop_error: full closed loop is unstable");
  }
  const ClosedLoop red = close_loop(ghat, net);
  if (!red.stable) {
    return std::numeric_limits<double>::infinity();
  }
  StateSpaceModel err = error_system(net, g, ghat);
  return hinf_norm(err, rel_tol).value;
}

}  // namespace smr
