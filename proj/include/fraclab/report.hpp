#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>
#include "fraclab/experiments.hpp"

namespace fraclab {

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

nlohmann::json to_json(const FracParams& p);
nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const FlatNormResult& r);
nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const LowerBoundReport& r);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const CompactnessReport& r);
nlohmann::json to_json(const LemmaReport& r);

/// Header s,eps,F_s,gagliardo_near,gagliardo_tail,gl_dirichlet,gl_potential,flat_dist,deg_boundary.
/// Aborted rows keep s and eps and leave the other columns empty.
void write_sweep_csv(std::ostream& os, const SweepReport& r);

}  // namespace fraclab
