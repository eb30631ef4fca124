#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "smr/network.hpp"
#include "smr/statespace.hpp"

namespace smr {

// Textual model description: per-subsystem state-space matrices, the four
// edge lists, external port counts and optional named scalar parameters that
// edge weights may reference as `k` or `-k`.
//
//   # comment
//   param k 10
//   subsystem G1
//   A 2 2
//     0 1
//     -1 -0.1
//   B 2 1 ...
//   C 1 2 ...
//   D 1 1 ...
//   end
//   external_inputs 1
//   external_outputs 2
//   iedges
//     1 2 -k
//     2 2 k
//   end
//   einedges ... end
//   eoutedges ... end
//   eedges ... end
//
// Numbers are decimal or scientific; serialization uses 17 significant
// digits so write-then-parse reproduces every matrix bitwise.
struct ModelDocument {
  std::vector<StateSpaceModel> subsystems;
  EdgeLists edges;
  std::map<std::string, double> params;

  BlockDiagonalPlant plant() const { return aggregate(subsystems); }
};

ModelDocument parse_model(const std::string& text);
ModelDocument load_model(const std::filesystem::path& path);

std::string write_model(const ModelDocument& doc);
void save_model(const ModelDocument& doc, const std::filesystem::path& path);

}  // namespace smr
