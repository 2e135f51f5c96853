#include "fracdirac/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "fracdirac/io.hpp"

namespace fracdirac {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json vec_json(const Vec2& v) { return {v[0], v[1]}; }
json complex_json(Complex z) { return {z.real(), z.imag()}; }

void write_resolved(const RunConfig& cfg) { io::write_json(cfg.outDir / "config.resolved.json", to_json(cfg)); }

std::string sigma_tag(double sigma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", sigma);
  return buf;
}

// min over rows of E2 - E1 and the k where it occurs
std::pair<double, Vec2> min_pair_gap(const BandTable& t) {
  double best = INFINITY;
  Vec2 at = Vec2::Zero();
  for (Eigen::Index r = 0; r < t.energies.rows(); ++r) {
    const double g = t.energies(r, 1) - t.energies(r, 0);
    if (g < best) {
      best = g;
      at = t.k[static_cast<std::size_t>(r)];
    }
  }
  return {best, at};
}

}  // namespace

json run_bands(const RunConfig& cfg, std::ostream& log) {
  const auto& b = cfg.bands;
  const LatticeBasis lat = make_honeycomb_basis();
  const FourierPotential pot = b.perturbation == 0.0 ? cfg.V : cfg.V.plus(cfg.W.scaled(b.perturbation));
  const PlaneWaveBasis pw(lat, b.N, Vec2::Zero());
  if (b.bands < 2 && b.mode != BandsSettings::Mode::Random)
    throw ConfigError("bands.bands: path and grid modes need at least two bands");

  std::vector<Vec2> ks;
  json axis;
  switch (b.mode) {
    case BandsSettings::Mode::Path: {
      std::vector<double> lambda;
      for (int i = 0; i < b.points; ++i) {
        const double l = -b.lambdaMax + 2.0 * b.lambdaMax * i / (b.points - 1);
        lambda.push_back(l);
        ks.push_back(lat.K + l * lat.k2);
      }
      axis = {{"lambda", lambda}, {"direction", vec_json(lat.k2)}};
      break;
    }
    case BandsSettings::Mode::Grid: {
      std::vector<double> offs;
      for (int i = 0; i < b.gridPoints; ++i) offs.push_back(-b.halfWidth + 2.0 * b.halfWidth * i / (b.gridPoints - 1));
      for (double a : offs)
        for (double c : offs) ks.push_back(lat.K + Vec2(a, c));
      axis = {{"offsets", offs}, {"order", "kx-major"}};
      break;
    }
    case BandsSettings::Mode::Random: {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < b.samples; ++i) ks.push_back(u(rng) * lat.k1 + u(rng) * lat.k2);
      axis = {{"seed", cfg.seed}};
      break;
    }
  }

  json files = json::array();
  json perSigma = json::array();
  for (double sigma : b.sigmas) {
    const BandTable table = band_sweep(pw, pot, sigma, ks, b.bands);
    const std::string name = "bands_sigma" + sigma_tag(sigma) + ".csv";
    io::write_band_csv(cfg.outDir / name, table);
    files.push_back(name);
    json entry = {{"sigma", sigma}, {"file", name}};
    if (b.bands >= 2) {
      const auto [gap, at] = min_pair_gap(table);
      entry["minGap"] = gap;
      entry["minGapOffsetFromK"] = vec_json(at - lat.K);
      log << "sigma " << sigma << ": min E2 - E1 = " << io::format_double(gap) << " at K + ("
          << io::format_double(at[0] - lat.K[0]) << ", " << io::format_double(at[1] - lat.K[1]) << ")\n";
    }
    entry["energyAtK"] = solve_band_energies(assemble_bloch_matrix(pw, pot, lat.K, sigma), std::min(b.bands, 2))[0];
    perSigma.push_back(entry);
  }
  const char* modes[] = {"path", "grid", "random"};
  json meta = {{"schemaVersion", io::kSchemaVersion},
               {"mode", modes[static_cast<int>(b.mode)]},
               {"N", b.N},
               {"bands", b.bands},
               {"perturbation", b.perturbation},
               {"K", vec_json(lat.K)},
               {"axis", axis},
               {"files", files},
               {"results", perSigma}};
  io::write_json(cfg.outDir / "bands.json", meta);
  write_resolved(cfg);
  return meta;
}

json dirac_report(const DiracPointData& d) {
  json structure = {{"massResidual", d.mass.residual},
                    {"cubicResidual", d.cubic.residual},
                    {"rotationMismatch", d.rotationMismatch},
                    {"thetaImag", std::abs(d.mass.entries(0, 0).imag())},
                    {"pairGap", d.pairGap}};
  json mu = json::array();
  for (const Complex& z : d.cubic.mu) mu.push_back(complex_json(z));
  json j = {{"schemaVersion", io::kSchemaVersion},
            {"sigma", d.sigma},
            {"N", d.N},
            {"E_D", d.E_D},
            {"pairLow", d.pairLow},
            {"vF", d.vF},
            {"theta", d.theta},
            {"b1", d.cubic.b1},
            {"b2", d.cubic.b2},
            {"rotationEigenvalues", {complex_json(d.lambda1), complex_json(d.lambda2)}},
            {"velocityPairingRaw", {complex_json(d.rawPairing[0]), complex_json(d.rawPairing[1])}},
            {"cubicInnerProducts", mu},
            {"structureResiduals", structure}};
  if (d.cone) {
    const ConeFit& c = *d.cone;
    j["coneFit"] = {{"slopePlus", c.slopePlus},
                    {"slopeMinus", c.slopeMinus},
                    {"quadraticResidual", c.quadraticResidual},
                    {"isotropyVariation", c.isotropyVariation},
                    {"isotropySpread", c.isotropySpread},
                    {"directionSlopes", c.directionSlopes},
                    {"velocityMismatch", c.velocityMismatch}};
  } else {
    j["coneFit"] = nullptr;
  }
  if (d.gap) {
    j["gapTable"] = {{"epsilon", d.gap->epsilon}, {"gap", d.gap->gap}, {"slope", d.gap->slope},
                     {"twiceTheta", 2.0 * std::abs(d.theta)}};
  } else {
    j["gapTable"] = nullptr;
  }
  return j;
}

json run_dirac(const RunConfig& cfg, std::ostream& log) {
  const auto d = analyze_dirac_point(make_honeycomb_basis(), cfg.V, cfg.W, cfg.sim.sigma, cfg.dirac);
  const json j = dirac_report(d);
  io::write_json(cfg.outDir / "dirac.json", j);
  write_resolved(cfg);
  log << "sigma " << d.sigma << ": E_D = " << io::format_double(d.E_D) << ", vF = " << io::format_double(d.vF)
      << ", theta = " << io::format_double(d.theta) << ", b1 = " << io::format_double(d.cubic.b1)
      << ", b2 = " << io::format_double(d.cubic.b2) << '\n';
  if (d.cone)
    log << "cone slopes " << io::format_double(d.cone->slopePlus) << " / " << io::format_double(d.cone->slopeMinus)
        << ", mismatch " << io::format_double(d.cone->velocityMismatch) << ", isotropy "
        << io::format_double(d.cone->isotropyVariation) << '\n';
  return j;
}

json run_evolve(const RunConfig& cfg, std::ostream& log) {
  const SimConfig sim = cfg.sim_at(cfg.sim.epsilon);
  DiracOptions dopts = cfg.dirac;
  dopts.cone = false;
  dopts.gapEpsilons.clear();
  const auto d = analyze_dirac_point(make_honeycomb_basis(), cfg.V, cfg.W, sim.sigma, dopts);
  const auto micro = micro_profiles(d, sim.pointsPerCell);
  std::optional<CorrectorProfiles> corr;
  if (sim.order == AnsatzOrder::Corrected) corr = corrector_profiles(d, cfg.V, cfg.W, sim.pointsPerCell);

  const fs::path dir = cfg.outDir;
  json frames = json::array();
  CaseHooks hooks;
  hooks.onField = [&](int frame, const Field2D& f) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "psi_%04d", frame);
    io::write_snapshot(dir, stem, f.grid, f.t, sim.sigma, f.physical(), {{"field", "psi"}});
    frames.push_back({{"frame", frame}, {"t", f.t}, {"psi", std::string(stem) + ".bin"}, {"mass", mass(f)}});
  };
  std::size_t envIndex = 0;
  hooks.onEnvelope = [&](int frame, const EnvelopeState& e) {
    char stem[32];
    for (int c = 0; c < 2; ++c) {
      std::snprintf(stem, sizeof stem, "alpha%d_%04d", c + 1, frame);
      io::write_snapshot(dir, stem, e.grid, e.t, sim.sigma, c == 0 ? e.alpha1 : e.alpha2, {{"field", stem}});
    }
    if (envIndex < frames.size()) frames[envIndex]["charge"] = e.charge();
    ++envIndex;
  };
  const CaseResult r = simulate_case(sim, d, micro, corr ? &*corr : nullptr, hooks);
  json j = {{"schemaVersion", io::kSchemaVersion},
            {"sigma", sim.sigma},
            {"epsilon", r.epsilon},
            {"M", r.cells},
            {"order", to_string(r.order)},
            {"T", sim.T},
            {"error", r.error},
            {"initialNorm", r.initialNorm},
            {"relativeError", r.error / r.initialNorm},
            {"fnlsSteps", r.fnlsSteps},
            {"fnlsDt", r.fnlsDt},
            {"massDrift", r.massDrift},
            {"chargeDrift", r.chargeDrift},
            {"runtimeSec", r.runtimeSec},
            {"frames", frames}};
  io::write_json(cfg.outDir / "evolve.json", j);
  write_resolved(cfg);
  log << "epsilon " << r.epsilon << ", T " << sim.T << ": H^" << sim.s << " error " << io::format_double(r.error)
      << " (relative " << io::format_double(r.error / r.initialNorm) << "), mass drift "
      << io::format_double(r.massDrift) << ", charge drift " << io::format_double(r.chargeDrift) << '\n';
  return j;
}

json convergence_report(const ConvergenceReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases)
    cases.push_back({{"epsilon", c.epsilon},
                     {"error", c.error},
                     {"runtimeSec", c.runtimeSec},
                     {"M", c.cells},
                     {"order", to_string(c.order)},
                     {"initialNorm", c.initialNorm},
                     {"fnlsSteps", c.fnlsSteps},
                     {"massDrift", c.massDrift},
                     {"chargeDrift", c.chargeDrift}});
  json j = {{"schemaVersion", io::kSchemaVersion}, {"cases", cases}};
  j["fittedRate"] = r.cases.size() >= 2 ? json(r.fittedRate) : json(nullptr);
  return j;
}

json run_validate(const RunConfig& cfg, std::ostream& log) {
  write_resolved(cfg);
  const fs::path path = cfg.outDir / "convergence.json";
  SimConfig sim = cfg.sim_at(cfg.sim.epsilon);
  sim.order = AnsatzOrder::Leading;
  auto save = [&](const ConvergenceReport& r) {
    io::write_json(path, convergence_report(r));
    const auto& c = r.cases.back();
    log << "epsilon " << c.epsilon << " (M " << c.cells << "): error " << io::format_double(c.error) << ", "
        << io::format_double(c.runtimeSec) << " s\n";
  };
  const ConvergenceReport leading = convergence_study(sim, cfg.validate.epsilons, save);
  json j = convergence_report(leading);
  log << "fitted rate " << (leading.cases.size() >= 2 ? io::format_double(leading.fittedRate) : "n/a") << '\n';

  if (cfg.validate.compareEpsilon > 0.0) {
    const double eps = cfg.validate.compareEpsilon;
    double leadErr = -1.0;
    for (const auto& c : leading.cases)
      if (std::abs(c.epsilon - eps) < 1e-12) leadErr = c.error;
    SimConfig s2 = cfg.sim_at(eps);
    if (leadErr < 0.0) {
      s2.order = AnsatzOrder::Leading;
      leadErr = convergence_study(s2, {eps}).cases.front().error;
    }
    s2.order = AnsatzOrder::Corrected;
    const auto corrected = convergence_study(s2, {eps});
    const double corrErr = corrected.cases.front().error;
    j["comparison"] = {{"epsilon", eps},
                       {"leadingError", leadErr},
                       {"correctedError", corrErr},
                       {"correctedRuntimeSec", corrected.cases.front().runtimeSec},
                       {"improved", corrErr < leadErr}};
    log << "epsilon " << eps << ": corrected error " << io::format_double(corrErr) << " vs leading "
        << io::format_double(leadErr) << '\n';
  }
  io::write_json(path, j);
  return j;
}

json run_shallow_check(const RunConfig& cfg, std::ostream& log) {
  const auto r = shallow_check(make_honeycomb_basis(), cfg.V, cfg.shallow.epsPot, cfg.sim.sigma, cfg.shallow.N);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  json j = {{"schemaVersion", io::kSchemaVersion},
            {"epsPot", r.epsPot},
            {"sigma", r.sigma},
            {"E0", r.E0},
            {"E_D", {{"computed", r.E_D}, {"predicted", r.E_D_predicted}, {"deviation", r.E_D - r.E_D_predicted}}},
            {"symmetricLevel",
             {{"computed", r.symmetric},
              {"predicted", r.symmetric_predicted},
              {"deviation", r.symmetric - r.symmetric_predicted}}},
            {"split", {{"computed", r.split}, {"predicted", r.split_predicted}, {"deviation", r.split - r.split_predicted}}},
            {"vF", {{"computed", r.vF}, {"predicted", r.vF_predicted}, {"relativeDeviation", rel(r.vF, r.vF_predicted)}}},
            {"overlap", r.overlap}};
  io::write_json(cfg.outDir / "shallow.json", j);
  write_resolved(cfg);
  log << "epsPot " << r.epsPot << ": E_D deviation " << io::format_double(r.E_D - r.E_D_predicted)
      << ", split deviation " << io::format_double(r.split - r.split_predicted) << ", vF relative deviation "
      << io::format_double(rel(r.vF, r.vF_predicted)) << '\n';
  return j;
}

json run_product_rule(const RunConfig& cfg, std::ostream& log) {
  const auto& p = cfg.productRule;
  const LatticeBasis lat = make_honeycomb_basis();
  json results = json::array();
  for (double sigma : p.sigmas) {
    DiracOptions dopts = cfg.dirac;
    dopts.cone = false;
    dopts.gapEpsilons.clear();
    const auto d = analyze_dirac_point(lat, cfg.V, cfg.W, sigma, dopts);
    json rows = json::array();
    double prev = 0.0;
    double eps = p.epsilon;
    for (int h = 0; h <= p.halvings; ++h, eps *= 0.5) {
      SimConfig geom;
      geom.epsilon = eps;
      geom.boxLength = p.boxLength;
      const ObliqueGrid grid(lat, geom.cells(), p.pointsPerCell, eps);
      const EnvelopeSpec gamma{{1.0, 0.0}, 0.5 * p.boxLength * (lat.v1 + lat.v2), p.width};
      const auto r = product_rule_check(grid, gamma, d.basis(), d.phi1, sigma, p.s);
      json row = {{"epsilon", eps}, {"residual", r.residual}};
      if (r.leibnizError >= 0.0) row["leibnizError"] = r.leibnizError;
      row["ratio"] = prev > 0.0 ? json(prev / r.residual) : json(nullptr);
      log << "sigma " << sigma << ", epsilon " << eps << ": residual " << io::format_double(r.residual);
      if (prev > 0.0) log << ", ratio " << io::format_double(prev / r.residual);
      if (r.leibnizError >= 0.0) log << ", Leibniz error " << io::format_double(r.leibnizError);
      log << '\n';
      prev = r.residual;
      rows.push_back(row);
    }
    results.push_back({{"sigma", sigma}, {"rows", rows}});
  }
  json j = {{"schemaVersion", io::kSchemaVersion}, {"s", p.s}, {"width", p.width}, {"results", results}};
  io::write_json(cfg.outDir / "product_rule.json", j);
  write_resolved(cfg);
  return j;
}

json run_experiment(const RunConfig& cfg, std::ostream& log) {
  switch (cfg.experiment) {
    case Experiment::Bands: return run_bands(cfg, log);
    case Experiment::Dirac: return run_dirac(cfg, log);
    case Experiment::Evolve: return run_evolve(cfg, log);
    case Experiment::Validate: return run_validate(cfg, log);
    case Experiment::ShallowCheck: return run_shallow_check(cfg, log);
    case Experiment::ProductRule: return run_product_rule(cfg, log);
  }
  throw ConfigError("experiment: unhandled value");
}

}  // namespace fracdirac
