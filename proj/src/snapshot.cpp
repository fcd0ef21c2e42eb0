#include "remx/snapshot.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace remx {

namespace {

std::map<std::string, std::string> parse_pairs(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream is(line);
  std::string token;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

template <class T, std::size_t N>
std::array<T, N> parse_triplet(const std::string& text) {
  std::array<T, N> out{};
  std::istringstream is(text);
  std::string item;
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::getline(is, item, ',')) {
      throw std::runtime_error("snapshot: malformed triplet '" + text + "'");
    }
    std::istringstream(item) >> out[i];
  }
  return out;
}

}  // namespace

void write_snapshot(std::ostream& os, const FieldGrid& grid,
                    const EquationOfState& eos, const SnapshotMeta& meta,
                    bool conserved_columns) {
  const GridShape& s = grid.shape();
  os << std::setprecision(17);
  os << "# remx-snapshot dim=" << s.dim << " n=" << s.n[0] << ',' << s.n[1]
     << ',' << s.n[2] << " length=" << s.length[0] << ',' << s.length[1]
     << ',' << s.length[2] << '\n';
  os << "# time=" << meta.time << " step=" << meta.step << '\n';
  for (const auto& [key, value] : meta.extra) {
    os << "# " << key << '=' << value << '\n';
  }
  os << (conserved_columns ? kCheckpointColumns : kSnapshotColumns) << '\n';

  double theta_guess = 1.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const PrimitiveState p = to_primitive(grid[idx], eos, theta_guess, idx);
    theta_guess = p.theta;
    const auto c = grid.coords(idx);
    os << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << p.rho << ' ' << p.u.x
       << ' ' << p.u.y << ' ' << p.u.z << ' ' << p.theta << ' ' << p.er
       << ' ' << p.b.x << ' ' << p.b.y << ' ' << p.b.z << ' ' << p.e.x << ' '
       << p.e.y << ' ' << p.e.z;
    if (conserved_columns) {
      const ConservedState& u = grid[idx];
      os << ' ' << u.m.x << ' ' << u.m.y << ' ' << u.m.z << ' ' << u.energy;
    }
    os << '\n';
  }
}

void write_snapshot(const std::filesystem::path& path, const FieldGrid& grid,
                    const EquationOfState& eos, const SnapshotMeta& meta,
                    bool conserved_columns) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write_snapshot(os, grid, eos, meta, conserved_columns);
}

Snapshot read_snapshot(std::istream& is, const EquationOfState& eos) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# remx-snapshot", 0) != 0) {
    throw std::runtime_error("snapshot: missing remx-snapshot header");
  }
  auto grid_meta = parse_pairs(line.substr(15));
  GridShape shape;
  try {
    shape.dim = std::stoi(grid_meta.at("dim"));
    shape.n = parse_triplet<int, 3>(grid_meta.at("n"));
    shape.length = parse_triplet<double, 3>(grid_meta.at("length"));
  } catch (const std::out_of_range&) {
    throw std::runtime_error("snapshot: incomplete grid metadata");
  }

  Snapshot snap{FieldGrid(shape), {}};
  bool have_time = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const std::string body = line.substr(2);
    if (!have_time && body.rfind("time=", 0) == 0) {
      auto kv = parse_pairs(body);
      snap.meta.time = std::stod(kv.at("time"));
      snap.meta.step = std::stol(kv.at("step"));
      have_time = true;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    snap.meta.extra[body.substr(0, eq)] = body.substr(eq + 1);
  }
  const bool conserved_columns = line == kCheckpointColumns;
  if (line != kSnapshotColumns && !conserved_columns) {
    throw std::runtime_error("snapshot: unexpected column header '" + line +
                             "'");
  }

  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int i, j, k;
    PrimitiveState p;
    row >> i >> j >> k >> p.rho >> p.u.x >> p.u.y >> p.u.z >> p.theta >>
        p.er >> p.b.x >> p.b.y >> p.b.z >> p.e.x >> p.e.y >> p.e.z;
    if (!row || i < 0 || j < 0 || k < 0 || i >= shape.n[0] ||
        j >= shape.n[1] || k >= shape.n[2]) {
      throw std::runtime_error("snapshot: malformed row " +
                               std::to_string(rows));
    }
    ConservedState u = to_conserved(p, eos);
    if (conserved_columns) row >> u.m.x >> u.m.y >> u.m.z >> u.energy;
    if (!row) {
      throw std::runtime_error("snapshot: malformed row " +
                               std::to_string(rows));
    }
    snap.grid[snap.grid.index(i, j, k)] = u;
    ++rows;
  }
  if (rows != snap.grid.size()) {
    throw std::runtime_error("snapshot: expected " +
                             std::to_string(snap.grid.size()) + " rows, got " +
                             std::to_string(rows));
  }
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path,
                       const EquationOfState& eos) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_snapshot(is, eos);
}

}  // namespace remx
