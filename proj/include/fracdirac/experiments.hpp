#pragma once

#include <iosfwd>

#include <json.hpp>

#include "fracdirac/config.hpp"

namespace fracdirac {

/// Each runner writes its files under cfg.outDir (plus the resolved config as
/// config.resolved.json), prints a short summary and returns the report JSON.
nlohmann::json run_bands(const RunConfig& cfg, std::ostream& log);
nlohmann::json run_dirac(const RunConfig& cfg, std::ostream& log);
nlohmann::json run_evolve(const RunConfig& cfg, std::ostream& log);
nlohmann::json run_validate(const RunConfig& cfg, std::ostream& log);
nlohmann::json run_shallow_check(const RunConfig& cfg, std::ostream& log);
nlohmann::json run_product_rule(const RunConfig& cfg, std::ostream& log);

nlohmann::json run_experiment(const RunConfig& cfg, std::ostream& log);

nlohmann::json dirac_report(const DiracPointData& d);
nlohmann::json convergence_report(const ConvergenceReport& r);

}  // namespace fracdirac
