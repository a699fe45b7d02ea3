// Copyright 2026 The cprepair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Experiment drivers behind the command-line tool. Each run_* function is
// pure: it takes a validated config and returns data; the writers turn that
// data into files. Keeping the two apart lets tests check the numbers without
// touching the filesystem.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cprepair/errors.hpp"
#include "cprepair/gaussian_core.hpp"
#include "cprepair/trajectory.hpp"
#include "json.hpp"

namespace cprepair::tools {

using nlohmann::json;

/// File-system failure; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Parses "a:b:n" (n evenly spaced points from a to b) or "x1,x2,...".
/// Throws InvalidInputError on malformed text or a grid that is empty or not
/// strictly increasing.
std::vector<double> parse_grid(const std::string& text);

/// Parses "nu:r,nu:r,...".
std::vector<SqueezedThermalParams> parse_class(const std::string& text);

WeightSource parse_weight_source(const std::string& text);
std::string to_string(WeightSource w);

enum class TableFormat { csv, json };

// ---------------------------------------------------------------------------
// phase-diagram

struct PhaseDiagramConfig {
  double gamma = 1.0;
  std::vector<double> nu_grid;
  std::vector<double> r_grid;
  void validate() const;
};

struct PhaseRow {
  double nu = 0.0;
  double r = 0.0;
  double lambda_min = 0.0;
  double repair_trace = 0.0;
};

struct PhaseDiagram {
  std::vector<PhaseRow> rows;  // nu-major: all r for nu_grid[0] first
  /// (r, nu) along cosh(2r) = nu, clipped to the nu range of the grid.
  std::vector<std::pair<double, double>> boundary;
  /// Largest |closed-form lambda_min - eigensolver lambda_min|.
  double crosscheck_deviation = 0.0;
};

/// Tolerance on the closed-form versus eigensolver cross-check.
inline constexpr double kCrosscheckTol = 1e-9;

PhaseDiagram run_phase_diagram(const PhaseDiagramConfig& cfg);

// ---------------------------------------------------------------------------
// witness

enum class WitnessChannel { identity, attenuator, bayes };
WitnessChannel parse_witness_channel(const std::string& text);
std::string to_string(WitnessChannel c);

struct WitnessConfig {
  WitnessChannel channel = WitnessChannel::bayes;
  double gamma = 1.0;
  /// Attenuator exposure gamma*t, or the Euler step for the Bayes channel.
  double time = 1e-6;
  SqueezedThermalParams reference{1.2, 0.6};
  std::vector<double> mus{1.1, 1.5, 2.0, 5.0, 20.0};
  void validate() const;
};

struct WitnessReport {
  std::vector<CMatrix> witnesses;   // one per mu
  double mu_deviation = 0.0;        // max pairwise entry deviation
  double closed_form_deviation = 0.0;
  bool has_rate = false;            // Bayes channel only
  double rescaled_min_eig = 0.0;    // min eig S / dt
  double richardson_min_eig = 0.0;
  double closed_form_lambda_min = 0.0;
};

/// mu-independence is asserted to this tolerance, scaled by 1 + max |S|.
inline constexpr double kWitnessTol = 1e-10;

WitnessReport run_witness(const WitnessConfig& cfg);

// ---------------------------------------------------------------------------
// repair

enum class RepairWeight { identity, bkm, bures };
RepairWeight parse_repair_weight(const std::string& text);
std::string to_string(RepairWeight w);

struct RepairConfig {
  double gamma = 1.0;
  SqueezedThermalParams reference{1.2, 0.6};
  RepairWeight weight = RepairWeight::identity;
  void validate() const;
};

struct RepairReport {
  CMatrix M;
  double lambda_min = 0.0;
  double closed_form_lambda_min = 0.0;
  Matrix weight;
  RepairResult result;
  bool has_closed_form = false;  // isotropic weight only
  double closed_form_cost = 0.0;
};

RepairReport run_repair(const RepairConfig& cfg);

// ---------------------------------------------------------------------------
// noise-floor

struct NoiseFloorConfig {
  TrajectoryConfig base{};
  std::vector<double> s_grid;
  std::vector<SqueezedThermalParams> members;
  /// Self-test hook: negate the left-hand side before checking, so a run
  /// that would pass is forced to report a violation.
  bool negate_lhs = false;
  void validate() const;
};

struct NoiseFloorResult {
  std::vector<NoiseFloorRow> rows;
  bool all_satisfied = true;
};

NoiseFloorResult run_noise_floor(const NoiseFloorConfig& cfg);

// ---------------------------------------------------------------------------
// output

inline constexpr const char* kPhaseHeader = "nu,r,lambda_min,repair_trace";
inline constexpr const char* kBoundaryHeader = "r,nu";
inline constexpr const char* kNoiseFloorHeader = "S,neg2lnF_wc,bound,defect_flag";

std::string phase_table(const PhaseDiagram& d, TableFormat f);
std::string boundary_table(const PhaseDiagram& d, TableFormat f);
std::string noise_floor_table(const NoiseFloorResult& r, TableFormat f);

json to_json(const WitnessReport& r, const WitnessConfig& cfg);
json to_json(const RepairReport& r, const RepairConfig& cfg);
/// Per-member detail for every depth.
json members_json(const NoiseFloorResult& r, const NoiseFloorConfig& cfg);

json config_json(const PhaseDiagramConfig& c);
json config_json(const WitnessConfig& c);
json config_json(const RepairConfig& c);
json config_json(const NoiseFloorConfig& c);

/// Sidecar written next to every run's outputs.
json sidecar(const std::string& command, const json& config,
             const std::vector<std::filesystem::path>& outputs);

/// Matplotlib scripts that read the CSV outputs from their own directory.
std::string phase_plot_script();
std::string noise_floor_plot_script();

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

const char* version();

}  // namespace cprepair::tools
