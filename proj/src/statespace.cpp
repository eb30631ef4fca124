#include "smr/statespace.hpp"

#include <numeric>

#include "smr/errors.hpp"

namespace smr {

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d, std::string lbl)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), label(std::move(lbl)) {
  validate();
}

void StateSpaceModel::validate() const {
  const int n = A.rows();
  if (A.cols() != n) throw DimensionMismatch(label + ": A must be square");
  if (B.rows() != n) throw DimensionMismatch(label + ": B row count must match A");
  if (C.cols() != n) throw DimensionMismatch(label + ": C column count must match A");
  if (D.rows() != C.rows()) throw DimensionMismatch(label + ": D row count must match C");
  if (D.cols() != B.cols()) throw DimensionMismatch(label + ": D column count must match B");
  if (!A.all_finite() || !B.all_finite() || !C.all_finite() || !D.all_finite()) {
    throw InvalidArgument(label + ": non-finite matrix entry");
  }
}

BlockDiagonalPlant aggregate(const std::vector<StateSpaceModel>& subsystems) {
  if (subsystems.empty()) throw EmptyNetwork("aggregate: no subsystems");
  BlockDiagonalPlant plant;
  plant.subsystems = subsystems;
  const int q = static_cast<int>(subsystems.size());
  plant.state_offset.assign(q + 1, 0);
  plant.input_offset.assign(q + 1, 0);
  plant.output_offset.assign(q + 1, 0);
  for (int i = 0; i < q; ++i) {
    subsystems[i].validate();
    plant.state_offset[i + 1] = plant.state_offset[i] + subsystems[i].order();
    plant.input_offset[i + 1] = plant.input_offset[i] + subsystems[i].inputs();
    plant.output_offset[i + 1] = plant.output_offset[i] + subsystems[i].outputs();
  }
  const int n = plant.state_offset[q];
  const int m = plant.input_offset[q];
  const int p = plant.output_offset[q];
  plant.A = Matrix(n, n);
  plant.B = Matrix(n, m);
  plant.C = Matrix(p, n);
  plant.D = Matrix(p, m);
  for (int i = 0; i < q; ++i) {
    const StateSpaceModel& s = subsystems[i];
    plant.A.set_block(plant.state_offset[i], plant.state_offset[i], s.A);
    plant.B.set_block(plant.state_offset[i], plant.input_offset[i], s.B);
    plant.C.set_block(plant.output_offset[i], plant.state_offset[i], s.C);
    plant.D.set_block(plant.output_offset[i], plant.input_offset[i], s.D);
  }
  return plant;
}

StateSpaceModel extract_subsystem(const BlockDiagonalPlant& plant, int index) {
  if (index < 1 || index > plant.count()) {
    throw IndexOutOfRange("extract_subsystem: index out of range");
  }
  return plant.subsystems[index - 1];
}

int OrderVector::total() const { return std::accumulate(r.begin(), r.end(), 0); }

void OrderVector::validate(const BlockDiagonalPlant& plant) const {
  if (static_cast<int>(r.size()) != plant.count()) {
    throw DimensionMismatch("OrderVector: one order per subsystem required");
  }
  for (int i = 0; i < plant.count(); ++i) {
    const int n_i = plant.subsystems[i].order();
    if (r[i] < 0 || r[i] > n_i) {
      throw InvalidArgument("OrderVector: order out of [0, n_i]");
    }
  }
}

}  // namespace smr
