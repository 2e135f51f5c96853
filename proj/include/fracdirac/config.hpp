#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdirac/study.hpp"

namespace fracdirac {

enum class Experiment { Bands, Dirac, Evolve, Validate, ShallowCheck, ProductRule };
const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

struct BandsSettings {
  enum class Mode { Path, Grid, Random };
  Mode mode = Mode::Path;
  std::vector<double> sigmas{2.0};
  int N = 12;
  int bands = 4;
  /// W added to V with this factor (0 keeps the pure honeycomb potential)
  double perturbation = 0.0;
  /// path: K + lambda k2, lambda in [-lambdaMax, lambdaMax]
  double lambdaMax = 0.1;
  int points = 201;
  /// grid: K + (a, b) over [-halfWidth, halfWidth]^2
  double halfWidth = 0.3;
  int gridPoints = 41;
  /// random: k uniform in the unit cell of the dual lattice
  int samples = 20;
};

struct ValidateSettings {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  /// also run the corrected initial data at this epsilon (<= 0: skip)
  double compareEpsilon = 0.1;
};

struct ShallowSettings {
  double epsPot = 0.01;
  int N = 12;
};

struct ProductRuleSettings {
  std::vector<double> sigmas{1.6, 2.0};
  double epsilon = 0.2;
  int halvings = 2;
  double boxLength = 4.8;
  int pointsPerCell = 8;
  double width = 1.2;
  int s = 1;
};

/// Envelope centres are stored as fractions (a1, a2) of the box along
/// (v1, v2) so one preset works for every epsilon.
struct EnvelopeConfig {
  Complex amplitude{0.0, 0.0};
  Vec2 centerFraction{0.5, 0.5};
  double width = 1.0;
};

struct KappaConfig {
  Modulation::Kind kind = Modulation::Kind::Constant;
  double amplitude = 0.0;
  Vec2 centerFraction{0.5, 0.5};
  double width = 1.0;
};

struct RunConfig {
  Experiment experiment = Experiment::Dirac;
  std::filesystem::path outDir = "out";
  unsigned seed = 7;
  int threads = 0;  // 0: OpenMP default
  // sim.sigma is the exponent of the single-sigma experiments (dirac, evolve, validate, shallow-check)
  std::string potentialV = "honeycomb_cos";
  std::string potentialW = "honeycomb_sin";
  FourierPotential V = builtin_V();
  FourierPotential W = builtin_W();
  BandsSettings bands;
  DiracOptions dirac;
  SimConfig sim;
  KappaConfig kappa;
  std::array<EnvelopeConfig, 2> envelopes{EnvelopeConfig{{1.0, 0.0}}, EnvelopeConfig{{0.5, 0.0}}};
  ValidateSettings validate;
  ShallowSettings shallow;
  ProductRuleSettings productRule;

  /// SimConfig at the given epsilon with envelope and modulation positions
  /// resolved against that box.
  SimConfig sim_at(double epsilon) const;
};

/// Parses the sectioned JSON config; unknown keys and invalid values raise
/// ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);
/// Fully resolved config (every default filled in); parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& c);

std::filesystem::path preset_path(const std::string& name);
/// Preset (if any) overlaid by the config file (if any), as a JSON merge patch.
nlohmann::json load_config_json(const std::string& preset, const std::filesystem::path& configFile);

}  // namespace fracdirac
