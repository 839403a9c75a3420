#pragma once

#include <string>
#include <utility>

#include "hypermix/grid.hpp"

namespace hypermix {

struct SnapshotMeta {
  int dim = 0;
  int npts = 0;
  double length = 0.0;
  double time = 0.0;
  std::string name;
};

/// Writes <stem>.bin (flat little-endian IEEE-754 doubles, row-major) and
/// <stem>.json with fields {n, N, L, time, name}.
void write_snapshot(const RealField& field, const std::string& stem, double time,
                    const std::string& name);

std::pair<RealField, SnapshotMeta> read_snapshot(const std::string& stem);

}  // namespace hypermix
