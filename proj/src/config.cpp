#include "fracdirac/config.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "fracdirac/io.hpp"

namespace fracdirac {

using nlohmann::json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Bands: return "bands";
    case Experiment::Dirac: return "dirac";
    case Experiment::Evolve: return "evolve";
    case Experiment::Validate: return "validate";
    case Experiment::ShallowCheck: return "shallow-check";
    case Experiment::ProductRule: return "product-rule";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  for (Experiment e : {Experiment::Bands, Experiment::Dirac, Experiment::Evolve, Experiment::Validate,
                       Experiment::ShallowCheck, Experiment::ProductRule})
    if (name == to_string(e)) return e;
  throw ConfigError("experiment: unknown value \"" + name + "\"");
}

namespace {

const char* to_string(BandsSettings::Mode m) {
  switch (m) {
    case BandsSettings::Mode::Path: return "path";
    case BandsSettings::Mode::Grid: return "grid";
    case BandsSettings::Mode::Random: return "random";
  }
  return "unknown";
}

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported as typos.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key) + ": wrong type");
    }
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  Section sub(const std::string& key) {
    used_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, field(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) throw ConfigError(field(key) + ": unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

double positive(Section& s, const std::string& key, double fallback) {
  const double v = s.get(key, fallback);
  require(std::isfinite(v) && v > 0.0, s.field(key), "must be positive");
  return v;
}

int at_least(Section& s, const std::string& key, int fallback, int lo) {
  const int v = s.get(key, fallback);
  require(v >= lo, s.field(key), "must be >= " + std::to_string(lo));
  return v;
}

Vec2 vec2(Section& s, const std::string& key, const Vec2& fallback) {
  const auto v = s.get(key, std::vector<double>{fallback[0], fallback[1]});
  require(v.size() == 2, s.field(key), "expected two numbers");
  return {v[0], v[1]};
}

Complex complex_value(Section& s, const std::string& key, Complex fallback) {
  if (!s.has(key)) return fallback;
  const json& v = s.raw(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(s.field(key) + ": expected a number or [re, im]");
}

std::vector<double> positive_list(Section& s, const std::string& key, std::vector<double> fallback) {
  auto v = s.get(key, std::move(fallback));
  require(!v.empty(), s.field(key), "must not be empty");
  for (double x : v) require(std::isfinite(x) && x > 0.0, s.field(key), "entries must be positive");
  return v;
}

FourierPotential potential(Section& s, const std::string& key, const std::string& fallback, std::string& name) {
  if (!s.has(key)) {
    name = fallback;
    return builtin_potential(fallback);
  }
  const json& v = s.raw(key);
  if (v.is_string()) {
    name = v.get<std::string>();
    try {
      return builtin_potential(name);
    } catch (const std::exception&) {
      throw ConfigError(s.field(key) + ": unknown builtin \"" + name + "\"");
    }
  }
  if (!v.is_array()) throw ConfigError(s.field(key) + ": expected a builtin name or [[m1, m2, re, im], ...]");
  FourierPotential pot;
  for (const auto& q : v) {
    if (!q.is_array() || q.size() != 4 || !q[0].is_number_integer() || !q[1].is_number_integer() ||
        !q[2].is_number() || !q[3].is_number())
      throw ConfigError(s.field(key) + ": each coefficient must be [m1, m2, re, im] with integer m");
    pot.coeffs[{q[0].get<int>(), q[1].get<int>()}] += Complex(q[2].get<double>(), q[3].get<double>());
  }
  name = "custom";
  return pot;
}

json potential_json(const std::string& name, const FourierPotential& pot) {
  if (name != "custom") return name;
  json list = json::array();
  for (const auto& [m, c] : pot.coeffs) list.push_back({m.m1, m.m2, c.real(), c.imag()});
  return list;
}

Vec2 box_point(const LatticeBasis& b, double boxLength, const Vec2& fraction) {
  return boxLength * (fraction[0] * b.v1 + fraction[1] * b.v2);
}

}  // namespace

SimConfig RunConfig::sim_at(double epsilon) const {
  SimConfig s = sim;
  s.epsilon = epsilon;
  s.V = V;
  s.W = W;
  s.dirac = dirac;
  const LatticeBasis b = make_honeycomb_basis();
  s.kappa.kind = kappa.kind;
  s.kappa.amplitude = kappa.amplitude;
  s.kappa.center = box_point(b, s.boxLength, kappa.centerFraction);
  s.kappa.width = kappa.width;
  for (int c = 0; c < 2; ++c)
    s.envelopes[c] = {envelopes[c].amplitude, box_point(b, s.boxLength, envelopes[c].centerFraction),
                      envelopes[c].width};
  return s;
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  Section top(j, "");
  const int version = top.get("schemaVersion", io::kSchemaVersion);
  require(version == io::kSchemaVersion, "schemaVersion", "unsupported version " + std::to_string(version));
  c.experiment = experiment_from_string(top.get<std::string>("experiment", to_string(c.experiment)));
  c.outDir = top.get<std::string>("outDir", c.outDir.string());
  c.seed = top.get("seed", c.seed);
  c.threads = at_least(top, "threads", c.threads, 0);
  c.sim.sigma = top.get("sigma", c.sim.sigma);
  require(c.sim.sigma > 1.0 && c.sim.sigma <= 2.0, "sigma", "must lie in (1, 2]");

  {
    auto s = top.sub("potential");
    c.V = potential(s, "V", c.potentialV, c.potentialV);
    c.W = potential(s, "W", c.potentialW, c.potentialW);
    s.finish();
  }
  {
    auto s = top.sub("bands");
    auto& b = c.bands;
    const auto mode = s.get<std::string>("mode", to_string(b.mode));
    if (mode == "path") b.mode = BandsSettings::Mode::Path;
    else if (mode == "grid") b.mode = BandsSettings::Mode::Grid;
    else if (mode == "random") b.mode = BandsSettings::Mode::Random;
    else throw ConfigError(s.field("mode") + ": expected path, grid or random");
    b.sigmas = positive_list(s, "sigmas", b.sigmas);
    for (double sg : b.sigmas) require(sg > 1.0 && sg <= 2.0, s.field("sigmas"), "entries must lie in (1, 2]");
    b.N = at_least(s, "N", b.N, 1);
    b.bands = at_least(s, "bands", b.bands, 1);
    require(b.bands <= (2 * b.N + 1) * (2 * b.N + 1), s.field("bands"), "exceeds the basis size");
    b.perturbation = s.get("perturbation", b.perturbation);
    b.lambdaMax = positive(s, "lambdaMax", b.lambdaMax);
    b.points = at_least(s, "points", b.points, 2);
    b.halfWidth = positive(s, "halfWidth", b.halfWidth);
    b.gridPoints = at_least(s, "gridPoints", b.gridPoints, 2);
    b.samples = at_least(s, "samples", b.samples, 1);
    s.finish();
  }
  {
    auto s = top.sub("dirac");
    auto& d = c.dirac;
    d.N = at_least(s, "N", d.N, 2);
    d.bandN = at_least(s, "bandN", d.bandN, 2);
    d.bandsAtK = at_least(s, "bandsAtK", d.bandsAtK, 3);
    d.degeneracyTol = positive(s, "degeneracyTol", d.degeneracyTol);
    d.isolation = positive(s, "isolation", d.isolation);
    d.rotationTol = positive(s, "rotationTol", d.rotationTol);
    d.structureTol = positive(s, "structureTol", d.structureTol);
    d.cone = s.get("cone", d.cone);
    d.coneOptions.directions = at_least(s, "coneDirections", d.coneOptions.directions, 3);
    d.coneOptions.radii = at_least(s, "coneRadii", d.coneOptions.radii, 2);
    d.coneOptions.rMin = positive(s, "coneRMin", d.coneOptions.rMin);
    d.coneOptions.rMax = positive(s, "coneRMax", d.coneOptions.rMax);
    require(d.coneOptions.rMin < d.coneOptions.rMax, s.field("coneRMin"), "must be below coneRMax");
    d.coneOptions.isotropyRadius = positive(s, "isotropyRadius", d.coneOptions.isotropyRadius);
    d.gapEpsilons = s.get("gapEpsilons", d.gapEpsilons);
    for (double e : d.gapEpsilons) require(e > 0.0, s.field("gapEpsilons"), "entries must be positive");
    s.finish();
  }
  {
    auto s = top.sub("dynamics");
    auto& m = c.sim;
    m.epsilon = positive(s, "epsilon", m.epsilon);
    m.mu = s.get("mu", m.mu);
    m.boxLength = positive(s, "boxLength", m.boxLength);
    m.pointsPerCell = at_least(s, "pointsPerCell", m.pointsPerCell, 2);
    m.dtOverEpsilon = positive(s, "dtOverEpsilon", m.dtOverEpsilon);
    m.maxDtOverEpsilon = positive(s, "maxDtOverEpsilon", m.maxDtOverEpsilon);
    m.envelopeDt = positive(s, "envelopeDt", m.envelopeDt);
    m.T = s.get("T", m.T);
    require(std::isfinite(m.T) && m.T >= 0.0, s.field("T"), "must be non-negative");
    m.s = s.get("s", m.s);
    require(m.s >= 0 && m.s <= 3, s.field("s"), "must be 0, 1, 2 or 3");
    m.frames = at_least(s, "frames", m.frames, 0);
    const auto order = s.get<std::string>("order", to_string(m.order));
    if (order == "leading") m.order = AnsatzOrder::Leading;
    else if (order == "corrected") m.order = AnsatzOrder::Corrected;
    else throw ConfigError(s.field("order") + ": expected leading or corrected");
    {
      auto k = s.sub("kappa");
      try {
        c.kappa.kind = modulation_kind_from_string(k.get<std::string>("kind", to_string(c.kappa.kind)));
      } catch (const ConfigError& e) {
        throw ConfigError(k.field("kind") + ": " + e.what());
      }
      c.kappa.amplitude = k.get("amplitude", c.kappa.amplitude);
      c.kappa.centerFraction = vec2(k, "center", c.kappa.centerFraction);
      c.kappa.width = positive(k, "width", c.kappa.width);
      k.finish();
    }
    if (s.has("envelopes")) {
      const json& list = s.raw("envelopes");
      require(list.is_array() && list.size() == 2, s.field("envelopes"), "expected two envelope objects");
      for (int e = 0; e < 2; ++e) {
        Section env(list[e], s.field("envelopes[" + std::to_string(e) + "]"));
        c.envelopes[e].amplitude = complex_value(env, "amplitude", c.envelopes[e].amplitude);
        c.envelopes[e].centerFraction = vec2(env, "center", c.envelopes[e].centerFraction);
        c.envelopes[e].width = positive(env, "width", c.envelopes[e].width);
        env.finish();
      }
    }
    s.finish();
    try {
      c.sim.cells();
    } catch (const ConfigError& e) {
      throw ConfigError(s.field("boxLength") + ": " + e.what());
    }
  }
  {
    auto s = top.sub("validate");
    c.validate.epsilons = positive_list(s, "epsilons", c.validate.epsilons);
    c.validate.compareEpsilon = s.get("compareEpsilon", c.validate.compareEpsilon);
    s.finish();
  }
  {
    auto s = top.sub("shallow");
    c.shallow.epsPot = positive(s, "epsPot", c.shallow.epsPot);
    require(c.shallow.epsPot <= 0.05, s.field("epsPot"), "must be <= 0.05 for the first-order asymptotics");
    c.shallow.N = at_least(s, "N", c.shallow.N, 2);
    s.finish();
  }
  {
    auto s = top.sub("productRule");
    auto& p = c.productRule;
    p.sigmas = positive_list(s, "sigmas", p.sigmas);
    for (double sg : p.sigmas) require(sg > 1.0 && sg <= 2.0, s.field("sigmas"), "entries must lie in (1, 2]");
    p.epsilon = positive(s, "epsilon", p.epsilon);
    p.halvings = at_least(s, "halvings", p.halvings, 1);
    p.boxLength = positive(s, "boxLength", p.boxLength);
    p.pointsPerCell = at_least(s, "pointsPerCell", p.pointsPerCell, 2);
    p.width = positive(s, "width", p.width);
    p.s = s.get("s", p.s);
    require(p.s >= 0 && p.s <= 3, s.field("s"), "must be 0, 1, 2 or 3");
    s.finish();
  }
  top.finish();
  return c;
}

json to_json(const RunConfig& c) {
  const auto& b = c.bands;
  const auto& d = c.dirac;
  const auto& m = c.sim;
  json envs = json::array();
  for (const auto& e : c.envelopes)
    envs.push_back({{"amplitude", {e.amplitude.real(), e.amplitude.imag()}},
                    {"center", {e.centerFraction[0], e.centerFraction[1]}},
                    {"width", e.width}});
  return {
      {"schemaVersion", io::kSchemaVersion},
      {"experiment", to_string(c.experiment)},
      {"outDir", c.outDir.string()},
      {"seed", c.seed},
      {"threads", c.threads},
      {"sigma", c.sim.sigma},
      {"potential", {{"V", potential_json(c.potentialV, c.V)}, {"W", potential_json(c.potentialW, c.W)}}},
      {"bands",
       {{"mode", to_string(b.mode)},
        {"sigmas", b.sigmas},
        {"N", b.N},
        {"bands", b.bands},
        {"perturbation", b.perturbation},
        {"lambdaMax", b.lambdaMax},
        {"points", b.points},
        {"halfWidth", b.halfWidth},
        {"gridPoints", b.gridPoints},
        {"samples", b.samples}}},
      {"dirac",
       {{"N", d.N},
        {"bandN", d.bandN},
        {"bandsAtK", d.bandsAtK},
        {"degeneracyTol", d.degeneracyTol},
        {"isolation", d.isolation},
        {"rotationTol", d.rotationTol},
        {"structureTol", d.structureTol},
        {"cone", d.cone},
        {"coneDirections", d.coneOptions.directions},
        {"coneRadii", d.coneOptions.radii},
        {"coneRMin", d.coneOptions.rMin},
        {"coneRMax", d.coneOptions.rMax},
        {"isotropyRadius", d.coneOptions.isotropyRadius},
        {"gapEpsilons", d.gapEpsilons}}},
      {"dynamics",
       {{"epsilon", m.epsilon},
        {"mu", m.mu},
        {"boxLength", m.boxLength},
        {"pointsPerCell", m.pointsPerCell},
        {"dtOverEpsilon", m.dtOverEpsilon},
        {"maxDtOverEpsilon", m.maxDtOverEpsilon},
        {"envelopeDt", m.envelopeDt},
        {"T", m.T},
        {"s", m.s},
        {"frames", m.frames},
        {"order", to_string(m.order)},
        {"kappa",
         {{"kind", to_string(c.kappa.kind)},
          {"amplitude", c.kappa.amplitude},
          {"center", {c.kappa.centerFraction[0], c.kappa.centerFraction[1]}},
          {"width", c.kappa.width}}},
        {"envelopes", envs}}},
      {"validate", {{"epsilons", c.validate.epsilons}, {"compareEpsilon", c.validate.compareEpsilon}}},
      {"shallow", {{"epsPot", c.shallow.epsPot}, {"N", c.shallow.N}}},
      {"productRule",
       {{"sigmas", c.productRule.sigmas},
        {"epsilon", c.productRule.epsilon},
        {"halvings", c.productRule.halvings},
        {"boxLength", c.productRule.boxLength},
        {"pointsPerCell", c.productRule.pointsPerCell},
        {"width", c.productRule.width},
        {"s", c.productRule.s}}},
  };
}

std::filesystem::path preset_path(const std::string& name) {
  if (name.empty() || name.find_first_of("/\\.") != std::string::npos)
    throw ConfigError("preset: invalid name \"" + name + "\"");
  std::filesystem::path dir = FRACDIRAC_PRESET_DIR;
  if (const char* env = std::getenv("FRACDIRAC_PRESETS")) dir = env;
  const auto p = dir / (name + ".json");
  if (!std::filesystem::exists(p)) throw ConfigError("preset: no preset named \"" + name + "\" in " + dir.string());
  return p;
}

json load_config_json(const std::string& preset, const std::filesystem::path& configFile) {
  json j = json::object();
  auto load = [](const std::filesystem::path& p) {
    try {
      return io::read_json(p);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  };
  if (!preset.empty()) j = load(preset_path(preset));
  if (!configFile.empty()) j.merge_patch(load(configFile));
  return j;
}

}  // namespace fracdirac
