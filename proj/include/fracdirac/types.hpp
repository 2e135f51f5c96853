#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fracdirac {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Integer coordinates of a dual-lattice vector m1*k1 + m2*k2.
struct MillerIndex {
  int m1 = 0;
  int m2 = 0;

  friend constexpr auto operator<=>(const MillerIndex&, const MillerIndex&) = default;
  constexpr MillerIndex operator+(MillerIndex o) const { return {m1 + o.m1, m2 + o.m2}; }
  constexpr MillerIndex operator-(MillerIndex o) const { return {m1 - o.m1, m2 - o.m2}; }
  constexpr MillerIndex operator-() const { return {-m1, -m2}; }
};

/// Structured failure of a numerical contract (degeneracy, symmetry, fit...).
/// The CLI maps these to exit code 3.
enum class ContractKind {
  NoDegeneracy,
  NotIsolated,
  RotationEigenvalueMismatch,
  DegenerateVelocity,
  StructureViolation,
  FitFailure,
  NyquistViolation,
  GridMismatch,
  MissingProfiles,
  GeometryCorrupted,
};

const char* to_string(ContractKind kind);

class ContractError : public std::runtime_error {
 public:
  ContractError(ContractKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ContractKind kind() const noexcept { return kind_; }

 private:
  ContractKind kind_;
};

/// Eigensolver breakdown or non-finite values during time stepping (exit code 4).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracdirac
