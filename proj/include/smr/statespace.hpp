#pragma once

#include <string>
#include <vector>

#include "smr/matrix.hpp"

namespace smr {

// One LTI subsystem x' = A x + B u, y = C x + D u. A zero state dimension is
// allowed and denotes a pure gain y = D u.
struct StateSpaceModel {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  std::string label;

  StateSpaceModel() = default;
  StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d, std::string lbl = "");

  int order() const { return A.rows(); }
  int inputs() const { return D.cols(); }
  int outputs() const { return D.rows(); }

  void validate() const;
};

// Aggregate of q subsystems with exactly block-diagonal A_G, B_G, C_G, D_G.
struct BlockDiagonalPlant {
  std::vector<StateSpaceModel> subsystems;
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  std::vector<int> state_offset;   // size q+1
  std::vector<int> input_offset;   // size q+1
  std::vector<int> output_offset;  // size q+1

  int count() const { return static_cast<int>(subsystems.size()); }
  int order() const { return state_offset.back(); }
  int inputs() const { return input_offset.back(); }
  int outputs() const { return output_offset.back(); }
};

BlockDiagonalPlant aggregate(const std::vector<StateSpaceModel>& subsystems);

// The i-th diagonal block realization; `index` is 1-based as in the file
// format and the CLI.
StateSpaceModel extract_subsystem(const BlockDiagonalPlant& plant, int index);

// Requested reduced orders, one per subsystem.
struct OrderVector {
  std::vector<int> r;

  int total() const;
  void validate(const BlockDiagonalPlant& plant) const;
};

}  // namespace smr
