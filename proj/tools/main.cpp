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


// Command-line runner for the sweeps and reports.
//
// Exit status: 0 success, 1 usage or I/O error, 2 the analysis itself failed
// (an asserted inequality or cross-check did not hold).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiments.hpp"

namespace fs = std::filesystem;
using namespace cprepair;
using namespace cprepair::tools;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

struct Output {
  std::string dir;
  std::string format = "csv";
  bool plot_script = false;

  TableFormat table_format() const {
    return format == "json" ? TableFormat::json : TableFormat::csv;
  }
  std::string table_ext() const { return format == "json" ? ".json" : ".csv"; }
};

void add_output_flags(CLI::App* sub, Output& out) {
  sub->add_option("--out", out.dir, "Output directory (default $CPREPAIR_OUT_DIR or ./cprepair_out)");
  sub->add_option("--format", out.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--plot-script", out.plot_script, "Also write a matplotlib script");
}

int finish(const std::string& command, const json& config, const fs::path& dir,
           std::vector<fs::path> outputs) {
  const fs::path meta = dir / (command + ".meta.json");
  outputs.push_back(meta);
  write_text(meta, sidecar(command, config, outputs).dump(2) + "\n");
  for (const auto& p : outputs) std::cout << "wrote " << p.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complete-positivity repair experiments for Gaussian reverse decoders"};
  app.set_config("--config", "", "INI file with one [section] per subcommand; flags win");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Output out;
  if (const char* env = std::getenv("CPREPAIR_OUT_DIR"); env != nullptr && *env != '\0') {
    out.dir = env;
  } else {
    out.dir = "cprepair_out";
  }

  // phase-diagram
  auto* phase = app.add_subcommand("phase-diagram", "lambda_min and repair size over (nu, r)");
  double phase_gamma = 1.0;
  std::string nu_grid = "1:4:101", r_grid = "0:1.5:101";
  phase->add_option("--gamma", phase_gamma, "Attenuation rate")->capture_default_str();
  // The INI reader splits comma lists into separate values; join restores them.
  phase->add_option("--nu-grid", nu_grid, "start:stop:count or comma list")
      ->join(',')
      ->capture_default_str();
  phase->add_option("--r-grid", r_grid, "start:stop:count or comma list")
      ->join(',')
      ->capture_default_str();
  add_output_flags(phase, out);

  // witness
  auto* witness = app.add_subcommand("witness", "Two-mode squeezed vacuum CP witness");
  WitnessConfig wcfg;
  std::string channel = "bayes", mu_grid = "1.1,1.5,2,5,20";
  witness->add_option("--channel", channel, "identity, attenuator or bayes")
      ->check(CLI::IsMember({"identity", "attenuator", "bayes"}))
      ->capture_default_str();
  witness->add_option("--gamma", wcfg.gamma, "Attenuation rate")->capture_default_str();
  witness->add_option("--time", wcfg.time, "Channel exposure (Euler step for bayes)")
      ->capture_default_str();
  witness->add_option("--nu", wcfg.reference.nu, "Reference symplectic eigenvalue")
      ->capture_default_str();
  witness->add_option("--r", wcfg.reference.r, "Reference squeezing")->capture_default_str();
  witness->add_option("--mu", mu_grid, "TMSV parameters")
      ->join(',')
      ->capture_default_str();
  add_output_flags(witness, out);

  // repair
  auto* repair = app.add_subcommand("repair", "Minimal CP repair at one reference state");
  RepairConfig rcfg;
  std::string weight = "identity";
  repair->add_option("--gamma", rcfg.gamma, "Attenuation rate")->capture_default_str();
  repair->add_option("--nu", rcfg.reference.nu, "Reference symplectic eigenvalue")
      ->capture_default_str();
  repair->add_option("--r", rcfg.reference.r, "Reference squeezing")->capture_default_str();
  repair->add_option("--weight", weight, "identity, bkm or bures")
      ->check(CLI::IsMember({"identity", "bkm", "bures"}))
      ->capture_default_str();
  add_output_flags(repair, out);

  // noise-floor
  auto* floor = app.add_subcommand("noise-floor", "Worst-case infidelity against its bound");
  NoiseFloorConfig ncfg;
  ncfg.base.steps = 512;
  std::string s_grid = "0.25,0.5,1,2", klass = "1.5:0.8,2:0.5,1.2:1.0", weight_source = "actual";
  floor->add_option("--gamma", ncfg.base.gamma, "Attenuation rate")->capture_default_str();
  floor->add_option("--s-grid", s_grid, "Depths")
      ->join(',')
      ->capture_default_str();
  floor->add_option("--class", klass, "Members as nu:r,nu:r,...")
      ->join(',')
      ->capture_default_str();
  floor->add_option("--steps", ncfg.base.steps, "Integration steps per trajectory")
      ->capture_default_str();
  floor->add_option("--weight-source", weight_source, "State weighting the entropy increment")
      ->check(CLI::IsMember({"reference", "actual"}))
      ->capture_default_str();
  floor->add_option("--nu-min-floor", ncfg.base.nu_min_floor, "Abort below this eigenvalue")
      ->capture_default_str();
  floor->add_flag("--selftest-negate-lhs", ncfg.negate_lhs, "Harness self-test")
      ->group("");
  add_output_flags(floor, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const fs::path dir = out.dir;
  try {
    if (*phase) {
      PhaseDiagramConfig cfg{phase_gamma, parse_grid(nu_grid), parse_grid(r_grid)};
      const PhaseDiagram d = run_phase_diagram(cfg);
      if (out.plot_script && out.format != "csv") {
        throw InvalidInputError("--plot-script reads CSV; drop --format json");
      }
      std::vector<fs::path> files{dir / ("phase_diagram" + out.table_ext()),
                                  dir / ("phase_boundary" + out.table_ext())};
      write_text(files[0], phase_table(d, out.table_format()));
      write_text(files[1], boundary_table(d, out.table_format()));
      if (out.plot_script) {
        files.push_back(dir / "phase_diagram_plot.py");
        write_text(files.back(), phase_plot_script());
      }
      finish("phase_diagram", config_json(cfg), dir, files);
      std::cout << d.rows.size() << " grid points, closed-form cross-check deviation "
                << d.crosscheck_deviation << "\n";
      if (d.crosscheck_deviation > kCrosscheckTol) {
        std::cerr << "violation: closed-form lambda_min disagrees with the eigensolver\n";
        return kViolation;
      }
      return kOk;
    }
    if (*witness) {
      wcfg.channel = parse_witness_channel(channel);
      wcfg.mus = parse_grid(mu_grid);
      const WitnessReport rep = run_witness(wcfg);
      const fs::path file = dir / "witness.json";
      write_text(file, to_json(rep, wcfg).dump(2) + "\n");
      finish("witness", config_json(wcfg), dir, {file});
      double scale = 1.0;
      for (const auto& s : rep.witnesses) scale = std::max(scale, 1.0 + s.cwiseAbs().maxCoeff());
      std::cout << "mu deviation " << rep.mu_deviation << ", closed-form deviation "
                << rep.closed_form_deviation << "\n";
      if (rep.has_rate) {
        std::cout << "rescaled min eigenvalue " << rep.rescaled_min_eig << " vs closed form "
                  << rep.closed_form_lambda_min << "\n";
      }
      if (rep.mu_deviation > kWitnessTol * scale || rep.closed_form_deviation > kWitnessTol * scale) {
        std::cerr << "violation: witness depends on mu\n";
        return kViolation;
      }
      return kOk;
    }
    if (*repair) {
      rcfg.weight = parse_repair_weight(weight);
      const RepairReport rep = run_repair(rcfg);
      const fs::path file = dir / "repair.json";
      write_text(file, to_json(rep, rcfg).dump(2) + "\n");
      finish("repair", config_json(rcfg), dir, {file});
      std::cout << "lambda_min " << rep.lambda_min << ", repair cost " << rep.result.cost
                << ", gap " << rep.result.optimality_gap << "\n";
      if (rep.result.feasibility_margin < -kPsdTol) {
        std::cerr << "violation: repaired generator is not completely positive\n";
        return kViolation;
      }
      return kOk;
    }
    if (*floor) {
      ncfg.s_grid = parse_grid(s_grid);
      ncfg.members = parse_class(klass);
      ncfg.base.weight_source = parse_weight_source(weight_source);
      const NoiseFloorResult res = run_noise_floor(ncfg);
      if (out.plot_script && out.format != "csv") {
        throw InvalidInputError("--plot-script reads CSV; drop --format json");
      }
      std::vector<fs::path> files{dir / ("noise_floor" + out.table_ext()),
                                  dir / "noise_floor_members.json"};
      write_text(files[0], noise_floor_table(res, out.table_format()));
      write_text(files[1], members_json(res, ncfg).dump(2) + "\n");
      if (out.plot_script) {
        files.push_back(dir / "noise_floor_plot.py");
        write_text(files.back(), noise_floor_plot_script());
      }
      finish("noise_floor", config_json(ncfg), dir, files);
      for (const auto& row : res.rows) {
        std::cout << "S=" << row.depth << "  -2lnF_wc=" << row.neg2_log_f_wc
                  << "  bound=" << row.bound << (row.satisfied ? "  ok" : "  VIOLATED") << "\n";
      }
      if (!res.all_satisfied) {
        std::cerr << "violation: worst-case infidelity falls below the bound\n";
        return kViolation;
      }
      return kOk;
    }
  } catch (const NearPurityError& e) {
    std::cerr << "near-purity abort: " << e.what() << "\n";
    return kViolation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
