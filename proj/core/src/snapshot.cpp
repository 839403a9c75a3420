#include "hypermix/snapshot.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hypermix {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping not implemented");

void write_snapshot(const RealField& field, const std::string& stem, double time,
                    const std::string& name) {
  {
    std::ofstream bin(stem + ".bin", std::ios::binary | std::ios::trunc);
    if (!bin) throw std::runtime_error("write_snapshot: cannot open " + stem + ".bin");
    bin.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!bin) throw std::runtime_error("write_snapshot: short write to " + stem + ".bin");
  }
  nlohmann::json meta = {
      {"n", field.grid.dim}, {"N", field.grid.npts}, {"L", field.grid.length},
      {"time", time},        {"name", name},
  };
  std::ofstream js(stem + ".json", std::ios::trunc);
  if (!js) throw std::runtime_error("write_snapshot: cannot open " + stem + ".json");
  js << meta.dump(2) << "\n";
}

std::pair<RealField, SnapshotMeta> read_snapshot(const std::string& stem) {
  std::ifstream js(stem + ".json");
  if (!js) throw std::runtime_error("read_snapshot: missing sidecar " + stem + ".json");
  nlohmann::json meta = nlohmann::json::parse(js);
  SnapshotMeta m;
  m.dim = meta.at("n").get<int>();
  m.npts = meta.at("N").get<int>();
  m.length = meta.at("L").get<double>();
  m.time = meta.at("time").get<double>();
  m.name = meta.value("name", "");

  RealField field = make_real_field(make_grid(m.dim, m.npts, m.length));
  std::ifstream bin(stem + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("read_snapshot: missing data file " + stem + ".bin");
  bin.read(reinterpret_cast<char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(field.values.size() * sizeof(double)))
    throw std::runtime_error("read_snapshot: " + stem + ".bin truncated");
  return {std::move(field), std::move(m)};
}

}  // namespace hypermix
