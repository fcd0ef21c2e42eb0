#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "remx/state.hpp"

namespace remx {

/// Columnar text snapshot. Layout:
///
///   # remx-snapshot dim=<d> n=<nx>,<ny>,<nz> length=<lx>,<ly>,<lz>
///   # time=<t> step=<n>
///   # <key>=<value>            (zero or more metadata lines)
///   i j k rho u1 u2 u3 theta Er B1 B2 B3 E1 E2 E3
///   <one row per cell, x index fastest>
///
/// Floats are written with 17 significant digits.
struct SnapshotMeta {
  double time = 0.0;
  long step = 0;
  std::map<std::string, std::string> extra;
};

struct Snapshot {
  FieldGrid grid;
  SnapshotMeta meta;
};

inline constexpr const char* kSnapshotColumns =
    "i j k rho u1 u2 u3 theta Er B1 B2 B3 E1 E2 E3";

/// Checkpoint layout: the snapshot columns followed by the momentum and
/// matter energy, so a restart does not pass through the primitive
/// conversion.
inline constexpr const char* kCheckpointColumns =
    "i j k rho u1 u2 u3 theta Er B1 B2 B3 E1 E2 E3 m1 m2 m3 energy";

void write_snapshot(std::ostream& os, const FieldGrid& grid,
                    const EquationOfState& eos, const SnapshotMeta& meta,
                    bool conserved_columns = false);
void write_snapshot(const std::filesystem::path& path, const FieldGrid& grid,
                    const EquationOfState& eos, const SnapshotMeta& meta,
                    bool conserved_columns = false);

/// Throws std::runtime_error on malformed input.
Snapshot read_snapshot(std::istream& is, const EquationOfState& eos);
Snapshot read_snapshot(const std::filesystem::path& path,
                       const EquationOfState& eos);

}  // namespace remx
