#include "fracdirac/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracdirac::io {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

void put_le(std::ostream& out, double x) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get_le(std::istream& in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char*>(&bits), sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_band_csv(const fs::path& path, const BandTable& table) {
  auto out = open_out(path);
  out << "kx,ky";
  for (Eigen::Index b = 0; b < table.energies.cols(); ++b) out << ",E" << b + 1;
  out << '\n';
  for (std::size_t r = 0; r < table.k.size(); ++r) {
    out << format_double(table.k[r][0]) << ',' << format_double(table.k[r][1]);
    for (Eigen::Index b = 0; b < table.energies.cols(); ++b)
      out << ',' << format_double(table.energies(static_cast<Eigen::Index>(r), b));
    out << '\n';
  }
}

BandTable read_band_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("kx,ky", 0) != 0)
    throw std::runtime_error(path.string() + ": missing kx,ky header");
  const long cols = static_cast<long>(std::count(line.begin(), line.end(), ',')) - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    if (static_cast<long>(row.size()) != cols + 2)
      throw std::runtime_error(path.string() + ": ragged row " + std::to_string(rows.size() + 1));
    rows.push_back(std::move(row));
  }
  BandTable t{{}, Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), cols)};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    t.k.emplace_back(rows[r][0], rows[r][1]);
    for (long b = 0; b < cols; ++b) t.energies(static_cast<Eigen::Index>(r), b) = rows[r][b + 2];
  }
  return t;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_snapshot(const fs::path& dir, const std::string& stem, const ObliqueGrid& grid, double t, double sigma,
                    const std::vector<Complex>& values, const nlohmann::json& extra) {
  if (values.size() != grid.size()) throw ContractError(ContractKind::GridMismatch, "snapshot size does not match grid");
  {
    auto out = open_out(dir / (stem + ".bin"), std::ios::out | std::ios::binary);
    for (const Complex& v : values) {
      put_le(out, v.real());
      put_le(out, v.imag());
    }
  }
  nlohmann::json meta = {{"schemaVersion", kSchemaVersion},
                         {"M", grid.cells()},
                         {"n", grid.points_per_cell()},
                         {"epsilon", grid.epsilon()},
                         {"t", t},
                         {"sigma", sigma},
                         {"byteOrder", "LE"},
                         {"layout", "row-major-interleaved"},
                         {"data", stem + ".bin"}};
  if (extra.is_object()) meta.update(extra);
  write_json(dir / (stem + ".json"), meta);
}

Snapshot read_snapshot(const fs::path& dir, const std::string& stem) {
  Snapshot s;
  s.meta = read_json(dir / (stem + ".json"));
  if (s.meta.value("schemaVersion", 0) != kSchemaVersion)
    throw std::runtime_error(stem + ": unsupported schemaVersion");
  const long side = s.meta.at("M").get<long>() * s.meta.at("n").get<long>();
  auto in = open_in(dir / (stem + ".bin"), std::ios::in | std::ios::binary);
  s.values.resize(static_cast<std::size_t>(side * side));
  for (auto& v : s.values) {
    const double re = get_le(in);
    const double im = get_le(in);
    v = {re, im};
  }
  if (!in) throw std::runtime_error(stem + ".bin is shorter than its sidecar says");
  return s;
}

}  // namespace fracdirac::io
