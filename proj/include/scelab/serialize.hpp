#pragma once

#include <string>

#include "scelab/harriman.hpp"
#include "scelab/mmot.hpp"
#include "scelab/semiclassical.hpp"

namespace sce {

// shortest round-trip decimal representation
std::string format_double(double x);

// Flat CSV layout: header row "n,N,h", then one value per line in row-major
// order.  Optional leading "# config: ..." comment lines are skipped by the
// readers.
std::string plan_to_csv(const TransportPlan& p, const std::string& config_echo = "");
TransportPlan plan_from_csv(const std::string& text, const Grid1D& grid_hint);
std::string density_to_csv(const MarginalDensity& d, const std::string& config_echo = "");
MarginalDensity density_from_csv(const std::string& text, const Grid1D& grid_hint);

// {value, n, N, plan: flat array, status}
std::string solution_to_json(const MmotSolution& s, const std::string& config_echo = "");

std::string sweep_to_csv(const SweepResult& r, const std::string& config_echo = "");
std::string sweep_to_json(const SweepResult& r, const std::string& config_echo);

std::string orbitals_to_csv(const OrbitalSet& s, const std::string& config_echo = "");

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace sce
