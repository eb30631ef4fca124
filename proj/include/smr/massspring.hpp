#pragma once

#include "smr/modelfile.hpp"

namespace smr {

// Stand-in elastic two-body benchmark: each body is a damped spring-mass
// chain (one end anchored), the two bodies are coupled through a linear
// spring of stiffness k routed through the network. Subsystem 1 takes two
// force inputs (external drive and coupling) and reports the interface
// position; subsystem 2 takes the coupling force and reports its interface
// position.
struct MassSpringOptions {
  double k = 10.0;
  int order1 = 8;    // even, >= 2: chain of order1/2 masses
  int order2 = 10;   // even, >= 2
  double alpha = 0.0;   // Rayleigh damping, mass term
  double beta = 1e-3;   // Rayleigh damping, stiffness term
  double stiffness_growth = 3.0;  // geometric chain-stiffness profile
};

ModelDocument make_massspring_model(const MassSpringOptions& opts);

}  // namespace smr
