// Acceptance run: one PASS/FAIL line per criterion. Arguments select criteria
// by number (default: all). Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fracdirac/config.hpp"
#include "fracdirac/experiments.hpp"
#include "fracdirac/study.hpp"

using namespace fracdirac;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const LatticeBasis& lattice() {
  static const LatticeBasis b = make_honeycomb_basis();
  return b;
}

const std::vector<double> kSigmas{1.2, 1.6, 2.0};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

RunConfig preset_config(const std::string& name, const std::string& sub) {
  RunConfig cfg = parse_config(load_config_json(name, {}));
  cfg.outDir = fs::temp_directory_path() / "fracdirac_acceptance" / sub;
  return cfg;
}

// Dirac data at N = 16 for every sigma, shared by criteria 2 to 6.
struct DiracCache {
  std::map<double, DiracPointData> data;
  const DiracPointData& at(double sigma) {
    auto it = data.find(sigma);
    if (it != data.end()) return it->second;
    DiracOptions o;
    o.N = 16;
    o.cone = false;
    return data.emplace(sigma, analyze_dirac_point(lattice(), builtin_V(), builtin_W(), sigma, o)).first->second;
  }
};

DiracCache& dirac_cache() {
  static DiracCache c;
  return c;
}

Verdict free_operator() {
  // dual basis recomputed from the direct vectors: k_i . v_j = 2 pi delta_ij
  Mat2 A;
  A.row(0) = lattice().v1.transpose();
  A.row(1) = lattice().v2.transpose();
  const Mat2 dual = 2.0 * kPi * A.inverse();
  const Vec2 k1 = dual.col(0), k2 = dual.col(1);

  std::mt19937 gen(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int N = 8, bands = 24, far = 24;
  const PlaneWaveBasis pw(lattice(), N, Vec2::Zero());
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const Vec2 k = u(gen) * k1 + u(gen) * k2;
    for (double sigma : kSigmas) {
      std::vector<double> brute;
      for (int m1 = -far; m1 <= far; ++m1)
        for (int m2 = -far; m2 <= far; ++m2) brute.push_back(std::pow((k + m1 * k1 + m2 * k2).norm(), sigma));
      std::sort(brute.begin(), brute.end());
      const auto E = solve_band_energies(assemble_bloch_matrix(pw, FourierPotential{}, k, sigma), bands);
      for (int b = 0; b < bands; ++b) worst = std::max(worst, std::abs(E[b] - brute[b]));
    }
  }
  return {worst < 1e-10, "max |E - oracle| " + fmt(worst) + " over 20 k, 3 sigma, 24 bands"};
}

Verdict degeneracy() {
  bool ok = true;
  std::string d;
  for (double sigma : kSigmas) {
    const auto& dd = dirac_cache().at(sigma);
    const double rel = dd.pairGap / std::abs(dd.E_D);
    const double rot = std::max(std::abs(dd.lambda1 - kTau), std::abs(dd.lambda2 - std::conj(kTau)));
    ok = ok && rel < 1e-8 && rot < 1e-6;
    d += "sigma " + fmt(sigma) + ": gap/E_D " + fmt(rel) + ", rotation " + fmt(rot) + "; ";
  }
  return {ok, d};
}

Verdict velocity() {
  bool ok = true;
  std::string d;
  for (double sigma : kSigmas) {
    const auto& dd = dirac_cache().at(sigma);
    // band sampling at the default bandN, as in the pipeline
    const PlaneWaveBasis pw(lattice(), DiracOptions{}.bandN, lattice().K);
    const auto samples = cone_samples(pw, builtin_V(), sigma, dd.pairLow);
    const auto fit = cone_fit(samples, dd.E_D, dd.vF);
    ok = ok && fit.velocityMismatch < 0.02 && fit.isotropyVariation < 0.02;
    d += "sigma " + fmt(sigma) + ": vF " + fmt(dd.vF) + " mismatch " + fmt(fit.velocityMismatch) + ", direction variation " +
         fmt(fit.isotropyVariation) + "; ";
  }
  return {ok, d};
}

Verdict shallow() {
  const double eps = 0.01;
  const auto r = shallow_check(lattice(), builtin_V(), eps, 2.0, 12);
  const double vF0 = 4.0 * kPi / 3.0;
  const double ED0 = vF0 * vF0 - eps;
  const double vfDev = std::abs(r.vF - vF0) / vF0;
  const double edDev = std::abs(r.E_D - ED0);
  const double splitDev = std::abs(r.split - 3.0 * eps);
  const bool ok = vfDev < 0.05 && edDev < eps * eps && splitDev < eps * eps;
  return {ok, "vF " + fmt(r.vF) + " (rel " + fmt(vfDev) + "), |E_D - (4pi/3)^2 + eps| " + fmt(edDev) +
                  ", |split - 3 eps| " + fmt(splitDev) + ", eps^2 " + fmt(eps * eps)};
}

Verdict gap_opening_check() {
  bool ok = true;
  std::string d;
  for (double sigma : kSigmas) {
    const auto& dd = dirac_cache().at(sigma);
    const PlaneWaveBasis pw = dd.basis();
    const auto tab = gap_opening(pw, builtin_V(), builtin_W(), sigma, dd.pairLow, {0.01, 0.02, 0.03, 0.04, 0.05});
    const double g01 = gap_opening(pw, builtin_V(), builtin_W(), sigma, dd.pairLow, {0.1}).gap.front();
    const double rel = std::abs(tab.slope - 2.0 * std::abs(dd.theta)) / (2.0 * std::abs(dd.theta));
    ok = ok && g01 > 0.0 && rel < 0.1;
    d += "sigma " + fmt(sigma) + ": gap(0.1) " + fmt(g01) + ", slope/2|theta| - 1 = " + fmt(rel) + "; ";
  }
  return {ok, d};
}

Verdict structure() {
  bool ok = true;
  std::string d;
  std::mt19937 gen(6);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (double sigma : kSigmas) {
    const auto& dd = dirac_cache().at(sigma);
    const PlaneWaveBasis pw = dd.basis();
    const double forbidden = std::max({std::abs(dd.mass.entries(0, 1)), std::abs(dd.mass.entries(1, 0)),
                                       dd.mass.residual, dd.cubic.residual});
    const double imag = std::max({std::abs(dd.mass.entries(0, 0).imag()), std::abs(dd.cubic.at(0, 0, 0, 0).imag()),
                                  std::abs(dd.cubic.at(0, 1, 0, 1).imag())});
    double gauge = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto g = gauge_fix(std::polar(1.0, u(gen)) * dd.phi1, pw, sigma);
      const auto m = mass_coefficient(pw, g.phi1, g.phi2, builtin_W());
      const auto c = cubic_coefficients(pw, g.phi1, g.phi2);
      gauge = std::max({gauge, std::abs(g.vF - dd.vF), std::abs(m.theta - dd.theta), std::abs(c.b1 - dd.cubic.b1),
                        std::abs(c.b2 - dd.cubic.b2)});
    }
    ok = ok && forbidden < 1e-8 && imag < 1e-8 && gauge < 1e-10;
    d += "sigma " + fmt(sigma) + ": forbidden " + fmt(forbidden) + ", imag " + fmt(imag) + ", gauge " + fmt(gauge) + "; ";
  }
  return {ok, d};
}

Verdict product_rule() {
  std::ostringstream log;
  const auto j = run_experiment(preset_config("product-rule", "product-rule"), log);
  bool ok = true;
  std::set<double> seen;
  std::string d;
  for (const auto& r : j["results"]) {
    const double sigma = r["sigma"];
    seen.insert(sigma);
    for (const auto& row : r["rows"]) {
      if (!row["ratio"].is_null()) {
        const double ratio = row["ratio"];
        ok = ok && std::abs(ratio - 4.0) < 0.8;
        d += "sigma " + fmt(sigma) + " ratio " + fmt(ratio) + "; ";
      }
      if (sigma == 2.0) {
        const double le = row.value("leibnizError", 1.0);
        ok = ok && le < 1e-9;
        d += "Leibniz " + fmt(le) + "; ";
      }
    }
  }
  ok = ok && seen.count(1.6) && seen.count(2.0);
  return {ok, d};
}

Verdict conservation() {
  RunConfig cfg = preset_config("validate", "conservation");
  SimConfig sim = cfg.sim_at(0.2);
  sim.T = 1.0;
  DiracOptions o = sim.dirac;
  o.cone = false;
  o.gapEpsilons.clear();
  const auto d = analyze_dirac_point(lattice(), sim.V, sim.W, sim.sigma, o);
  const auto micro = micro_profiles(d, sim.pointsPerCell);
  bool ok = true;
  std::string detail;
  for (double mu : {1.0, -1.0}) {
    sim.mu = mu;
    const auto r = simulate_case(sim, d, micro, nullptr);
    ok = ok && r.massDrift < 1e-8 && r.chargeDrift < 1e-6;
    detail += "mu " + fmt(mu) + ": mass drift " + fmt(r.massDrift) + ", charge drift " + fmt(r.chargeDrift) + "; ";
  }
  return {ok, detail};
}

Verdict convergence() {
  std::ostringstream log;
  const auto j = run_experiment(preset_config("validate", "validate"), log);
  std::string d;
  for (const auto& c : j["cases"]) d += "eps " + fmt(c["epsilon"]) + " error " + fmt(c["error"]) + "; ";
  const double rate = j["fittedRate"].is_null() ? 0.0 : j["fittedRate"].get<double>();
  const auto& cmp = j["comparison"];
  const bool improved = cmp.value("improved", false);
  d += "rate " + fmt(rate) + ", corrected " + fmt(cmp.value("correctedError", -1.0)) + " vs leading " +
       fmt(cmp.value("leadingError", -1.0));
  return {rate >= 0.8 && improved && j["cases"].size() == 3, d};
}

struct Criterion {
  int id;
  const char* name;
  double limitSec;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "free-operator oracle", 10, free_operator},
      {2, "Dirac degeneracy", 30, degeneracy},
      {3, "velocity cross-validation", 120, velocity},
      {4, "shallow-potential asymptotics", 60, shallow},
      {5, "gap opening", 120, gap_opening_check},
      {6, "coefficient structure", 60, structure},
      {7, "product rule", 60, product_rule},
      {8, "conservation", 300, conservation},
      {9, "effective-dynamics convergence", 1800, convergence},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = v.pass && sec < c.limitSec;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << v.detail
              << " [" << fmt(sec) << " s, limit " << c.limitSec << " s]" << std::endl;
  }
  return failures;
}
