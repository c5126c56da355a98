#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "sociotraffic/analysis.hpp"
#include "sociotraffic/scenario.hpp"

namespace sociotraffic::cli {

struct CommandOptions {
  std::optional<std::string> out_dir;      // overrides scenario.outputs
  std::optional<std::uint64_t> seed;       // overrides scenario (and social) seed
  std::vector<double> sweep_alphas;        // simulate: one independent run per alpha
  std::vector<double> dhdx;                // fd: cost-gradient slices
};

struct ChoiceResult {
  route_choice::RouteChoiceOutcome outcome;
  std::filesystem::path vehicles_csv;
  std::filesystem::path summary_csv;
};

/// Runs the route-choice pipeline and writes the per-vehicle subjective
/// values plus the (M1, M2, alpha, kappa) summary.
ChoiceResult cmd_choice(const Scenario& scenario, const CommandOptions& opts = {});

struct AnalyzeResult {
  double alpha = 0.0;
  analysis::StabilityReport report;
  std::filesystem::path report_txt;
  std::filesystem::path report_csv;
};

/// Emits the stability report (text + one CSV row, sweep-appendable).
AnalyzeResult cmd_analyze(const Scenario& scenario, const CommandOptions& opts = {});

struct SimulationRun {
  double alpha = 0.0;
  solver::Trajectory trajectory;
  std::optional<analysis::DecayFit> fit_class1;
  std::optional<analysis::DecayFit> fit_class2;
  std::filesystem::path states_csv;
  std::filesystem::path norms_csv;
};

struct SimulateResult {
  std::vector<SimulationRun> runs;
  std::optional<std::filesystem::path> sweep_summary_csv;
};

/// Integrates the scenario (or one run per sweep alpha) and writes state and
/// norm CSVs; decay fits are attached when the tail window allows them.
SimulateResult cmd_simulate(const Scenario& scenario, const CommandOptions& opts = {});

struct FdResult {
  std::filesystem::path csv;
  std::size_t rows = 0;
};

/// Tabulates the fundamental diagram over the requested dH/dx slices
/// (default {-0.2, 0, 0.2}).
FdResult cmd_fd(const Scenario& scenario, const CommandOptions& opts = {});

}  // namespace sociotraffic::cli
