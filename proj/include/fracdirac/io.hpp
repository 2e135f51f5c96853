#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdirac/bloch.hpp"
#include "fracdirac/field.hpp"

namespace fracdirac::io {

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits, lowercase exponent.
std::string format_double(double x);

/// Header kx,ky,E1..EB, one row per k.
void write_band_csv(const std::filesystem::path& path, const BandTable& table);
BandTable read_band_csv(const std::filesystem::path& path);

/// Pretty-printed with a trailing newline; parent directories are created.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Raw little-endian float64 (re, im) pairs in grid storage order, plus
/// `<stem>.json` with the grid metadata.
void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const ObliqueGrid& grid, double t,
                    double sigma, const std::vector<Complex>& values, const nlohmann::json& extra = {});

struct Snapshot {
  nlohmann::json meta;
  std::vector<Complex> values;
};
Snapshot read_snapshot(const std::filesystem::path& dir, const std::string& stem);

}  // namespace fracdirac::io
