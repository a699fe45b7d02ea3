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


#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cprepair/detail/parallel.hpp"
#include "cprepair/fisher_geometry.hpp"
#include "cprepair/generator_cp.hpp"
#include "cprepair/repair_sdp.hpp"

#ifndef CPREPAIR_VERSION
#define CPREPAIR_VERSION "unknown"
#endif

namespace cprepair::tools {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInputError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InvalidInputError("not a number: '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json matrix_json(const CMatrix& m) {
  return {{"re", matrix_json(Matrix(m.real()))}, {"im", matrix_json(Matrix(m.imag()))}};
}

json params_json(const SqueezedThermalParams& p) { return {{"nu", p.nu}, {"r", p.r}}; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInputError(std::string(what) + " must be positive and finite");
  }
}

void require_state(const SqueezedThermalParams& p, const char* what) {
  if (!(p.nu >= 1.0) || !(p.r >= 0.0) || !std::isfinite(p.nu) || !std::isfinite(p.r)) {
    throw InvalidInputError(std::string(what) + " needs nu >= 1 and r >= 0");
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidInputError("empty grid");
  std::vector<double> grid;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw InvalidInputError("grid range must be start:stop:count");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const double n = parse_number(parts[2]);
    if (n < 1 || n != std::floor(n)) throw InvalidInputError("grid count must be a positive integer");
    const int count = static_cast<int>(n);
    if (count == 1) {
      grid.push_back(a);
    } else {
      for (int i = 0; i < count; ++i) {
        grid.push_back(i + 1 == count ? b : a + (b - a) * i / (count - 1));
      }
    }
  } else {
    for (const auto& p : split(t, ',')) grid.push_back(parse_number(p));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidInputError("grid must be strictly increasing: " + t);
  }
  return grid;
}

std::vector<SqueezedThermalParams> parse_class(const std::string& text) {
  std::vector<SqueezedThermalParams> out;
  for (const auto& item : split(trim(text), ',')) {
    const auto nr = split(item, ':');
    if (nr.size() != 2) throw InvalidInputError("class members are nu:r, got '" + item + "'");
    out.push_back({parse_number(nr[0]), parse_number(nr[1])});
  }
  if (out.empty()) throw InvalidInputError("empty class");
  return out;
}

WeightSource parse_weight_source(const std::string& text) {
  if (text == "actual") return WeightSource::actual;
  if (text == "reference") return WeightSource::reference;
  throw InvalidInputError("weight source must be 'actual' or 'reference'");
}

std::string to_string(WeightSource w) {
  return w == WeightSource::actual ? "actual" : "reference";
}

WitnessChannel parse_witness_channel(const std::string& text) {
  if (text == "identity") return WitnessChannel::identity;
  if (text == "attenuator") return WitnessChannel::attenuator;
  if (text == "bayes") return WitnessChannel::bayes;
  throw InvalidInputError("channel must be identity, attenuator or bayes");
}

std::string to_string(WitnessChannel c) {
  switch (c) {
    case WitnessChannel::identity:
      return "identity";
    case WitnessChannel::attenuator:
      return "attenuator";
    case WitnessChannel::bayes:
      return "bayes";
  }
  return "?";
}

RepairWeight parse_repair_weight(const std::string& text) {
  if (text == "identity") return RepairWeight::identity;
  if (text == "bkm") return RepairWeight::bkm;
  if (text == "bures") return RepairWeight::bures;
  throw InvalidInputError("weight must be identity, bkm or bures");
}

std::string to_string(RepairWeight w) {
  switch (w) {
    case RepairWeight::identity:
      return "identity";
    case RepairWeight::bkm:
      return "bkm";
    case RepairWeight::bures:
      return "bures";
  }
  return "?";
}

// ---------------------------------------------------------------------------

void PhaseDiagramConfig::validate() const {
  require_positive(gamma, "gamma");
  if (nu_grid.empty() || r_grid.empty()) throw InvalidInputError("phase diagram grids are empty");
  if (nu_grid.front() < 1.0) throw InvalidInputError("nu grid must start at or above 1");
  if (r_grid.front() < 0.0) throw InvalidInputError("r grid must be nonnegative");
}

PhaseDiagram run_phase_diagram(const PhaseDiagramConfig& cfg) {
  cfg.validate();
  const std::size_t nr = cfg.r_grid.size();
  struct Cell {
    PhaseRow row;
    double deviation;
  };
  const auto cells = detail::parallel_map(cfg.nu_grid.size() * nr, [&](std::size_t k) {
    const SqueezedThermalParams p{cfg.nu_grid[k / nr], cfg.r_grid[k % nr]};
    const CpMatrix m = attenuator_bayes_cp_matrix(cfg.gamma, p);
    const double closed = nogo_lambda_min(cfg.gamma, p);
    Cell c;
    c.row = {p.nu, p.r, closed, isotropic_repair_closed_form(m.M).delta_d.trace()};
    c.deviation = std::abs(m.min_eigenvalue() - closed) / (1.0 + std::abs(closed));
    return c;
  });
  PhaseDiagram d;
  d.rows.reserve(cells.size());
  for (const Cell& c : cells) {
    d.rows.push_back(c.row);
    d.crosscheck_deviation = std::max(d.crosscheck_deviation, c.deviation);
  }
  for (double r : cfg.r_grid) {
    const double nu = std::cosh(2.0 * r);
    if (nu >= cfg.nu_grid.front() && nu <= cfg.nu_grid.back()) d.boundary.emplace_back(r, nu);
  }
  return d;
}

// ---------------------------------------------------------------------------

void WitnessConfig::validate() const {
  require_positive(gamma, "gamma");
  require_positive(time, "time");
  require_state(reference, "witness reference");
  if (mus.empty()) throw InvalidInputError("witness needs at least one mu");
  for (double mu : mus) {
    if (!(mu > 1.0)) throw InvalidInputError("witness mu values must exceed 1");
  }
}

WitnessReport run_witness(const WitnessConfig& cfg) {
  cfg.validate();
  GaussianChannel channel;
  GaussianGenerator bayes;
  switch (cfg.channel) {
    case WitnessChannel::identity:
      channel = {Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
      break;
    case WitnessChannel::attenuator:
      channel = attenuator_channel(cfg.gamma * cfg.time);
      break;
    case WitnessChannel::bayes:
      bayes = bayes_reverse_generator(attenuator_generator(cfg.gamma),
                                      squeezed_thermal_cov(cfg.reference));
      channel = infinitesimal_channel(bayes, cfg.time);
      break;
  }
  WitnessReport rep;
  const CMatrix closed = tmsv_witness_closed_form(channel);
  for (double mu : cfg.mus) rep.witnesses.push_back(tmsv_schur_witness(channel, mu));
  for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
    rep.closed_form_deviation =
        std::max(rep.closed_form_deviation, (rep.witnesses[i] - closed).cwiseAbs().maxCoeff());
    for (std::size_t j = 0; j < i; ++j) {
      rep.mu_deviation = std::max(rep.mu_deviation,
                                  (rep.witnesses[i] - rep.witnesses[j]).cwiseAbs().maxCoeff());
    }
  }
  if (cfg.channel == WitnessChannel::bayes) {
    const InfinitesimalWitness w = infinitesimal_witness(bayes, cfg.time);
    rep.has_rate = true;
    rep.rescaled_min_eig = w.rate;
    rep.richardson_min_eig = w.richardson;
    rep.closed_form_lambda_min = nogo_lambda_min(cfg.gamma, cfg.reference);
  }
  return rep;
}

// ---------------------------------------------------------------------------

void RepairConfig::validate() const {
  require_positive(gamma, "gamma");
  require_state(reference, "repair reference");
}

RepairReport run_repair(const RepairConfig& cfg) {
  cfg.validate();
  RepairReport rep;
  const CovarianceMatrix tau = squeezed_thermal_cov(cfg.reference);
  const CpMatrix m = attenuator_bayes_cp_matrix(cfg.gamma, cfg.reference);
  rep.M = m.M;
  rep.lambda_min = m.min_eigenvalue();
  rep.closed_form_lambda_min = nogo_lambda_min(cfg.gamma, cfg.reference);
  switch (cfg.weight) {
    case RepairWeight::identity:
      rep.weight = Matrix::Identity(2, 2);
      break;
    case RepairWeight::bkm:
      rep.weight = bkm_displacement_metric(tau);
      break;
    case RepairWeight::bures:
      rep.weight = bures_displacement_metric(tau);
      break;
  }
  rep.result = minimal_repair({m.M, rep.weight});
  if (cfg.weight == RepairWeight::identity) {
    rep.has_closed_form = true;
    rep.closed_form_cost = isotropic_repair_closed_form(m.M).cost;
  }
  return rep;
}

// ---------------------------------------------------------------------------

void NoiseFloorConfig::validate() const {
  base.validate();
  if (s_grid.empty()) throw InvalidInputError("noise floor needs a depth grid");
  if (s_grid.front() < 0.0) throw InvalidInputError("depths must be nonnegative");
  if (members.empty()) throw InvalidInputError("noise floor needs a nonempty class");
  for (const auto& m : members) require_state(m, "class member");
}

NoiseFloorResult run_noise_floor(const NoiseFloorConfig& cfg) {
  cfg.validate();
  NoiseFloorResult res;
  res.rows = noise_floor_report(cfg.s_grid, cfg.members, cfg.base);
  for (NoiseFloorRow& row : res.rows) {
    if (cfg.negate_lhs) {
      row.neg2_log_f_wc = -row.neg2_log_f_wc;
      row.satisfied = row.neg2_log_f_wc >= row.bound - kNoiseFloorTol;
    }
    res.all_satisfied = res.all_satisfied && row.satisfied;
  }
  return res;
}

// ---------------------------------------------------------------------------

std::string phase_table(const PhaseDiagram& d, TableFormat f) {
  if (f == TableFormat::json) {
    json rows = json::array();
    for (const auto& r : d.rows) {
      rows.push_back({{"nu", r.nu}, {"r", r.r}, {"lambda_min", r.lambda_min},
                      {"repair_trace", r.repair_trace}});
    }
    return rows.dump(2) + "\n";
  }
  std::string out = std::string(kPhaseHeader) + "\n";
  for (const auto& r : d.rows) {
    out += fmt(r.nu) + "," + fmt(r.r) + "," + fmt(r.lambda_min) + "," + fmt(r.repair_trace) + "\n";
  }
  return out;
}

std::string boundary_table(const PhaseDiagram& d, TableFormat f) {
  if (f == TableFormat::json) {
    json rows = json::array();
    for (const auto& [r, nu] : d.boundary) rows.push_back({{"r", r}, {"nu", nu}});
    return rows.dump(2) + "\n";
  }
  std::string out = std::string(kBoundaryHeader) + "\n";
  for (const auto& [r, nu] : d.boundary) out += fmt(r) + "," + fmt(nu) + "\n";
  return out;
}

std::string noise_floor_table(const NoiseFloorResult& r, TableFormat f) {
  if (f == TableFormat::json) {
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"S", row.depth}, {"neg2lnF_wc", row.neg2_log_f_wc}, {"bound", row.bound},
                      {"defect_flag", row.defect ? 1 : 0}});
    }
    return rows.dump(2) + "\n";
  }
  std::string out = std::string(kNoiseFloorHeader) + "\n";
  for (const auto& row : r.rows) {
    out += fmt(row.depth) + "," + fmt(row.neg2_log_f_wc) + "," + fmt(row.bound) + "," +
           (row.defect ? "1" : "0") + "\n";
  }
  return out;
}

json to_json(const WitnessReport& r, const WitnessConfig& cfg) {
  json j;
  j["channel"] = to_string(cfg.channel);
  json per_mu = json::array();
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    per_mu.push_back({{"mu", cfg.mus[i]}, {"S", matrix_json(r.witnesses[i])}});
  }
  j["witness"] = per_mu;
  j["mu_deviation"] = r.mu_deviation;
  j["closed_form_deviation"] = r.closed_form_deviation;
  if (r.has_rate) {
    j["rescaled_min_eig"] = r.rescaled_min_eig;
    j["richardson_min_eig"] = r.richardson_min_eig;
    j["closed_form_lambda_min"] = r.closed_form_lambda_min;
    j["rate_error"] = std::abs(r.rescaled_min_eig - r.closed_form_lambda_min);
  }
  return j;
}

json to_json(const RepairReport& r, const RepairConfig& cfg) {
  json j;
  j["reference"] = params_json(cfg.reference);
  j["weight_kind"] = to_string(cfg.weight);
  j["M"] = matrix_json(r.M);
  j["lambda_min"] = r.lambda_min;
  j["closed_form_lambda_min"] = r.closed_form_lambda_min;
  j["weight"] = matrix_json(r.weight);
  j["delta_d"] = matrix_json(r.result.delta_d);
  j["cost"] = r.result.cost;
  j["feasibility_margin"] = r.result.feasibility_margin;
  j["optimality_gap"] = r.result.optimality_gap;
  if (r.has_closed_form) j["closed_form_cost"] = r.closed_form_cost;
  return j;
}

json members_json(const NoiseFloorResult& r, const NoiseFloorConfig& cfg) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json members = json::array();
    for (std::size_t i = 0; i < row.detail.members.size(); ++i) {
      const TrajectoryRecord& rec = row.detail.members[i];
      std::size_t defects = 0;
      for (const auto& s : rec.samples) defects += s.defect ? 1 : 0;
      members.push_back({{"initial", params_json(cfg.members[i])},
                         {"i_dec", rec.i_dec},
                         {"fidelity", rec.endpoint_fidelity.f},
                         {"bures_angle", rec.endpoint_fidelity.angle},
                         {"neg2lnF", rec.neg2_log_f},
                         {"nu_min_observed", rec.nu_min_observed},
                         {"c_geom", rec.c_geom},
                         {"bound", rec.bound},
                         {"samples", rec.samples.size()},
                         {"defect_samples", defects}});
    }
    rows.push_back({{"S", row.depth},
                    {"neg2lnF_wc", row.neg2_log_f_wc},
                    {"argmax_infidelity", row.detail.argmax_infidelity},
                    {"i_dec_wc", row.detail.i_dec_wc},
                    {"argmax_irreversibility", row.detail.argmax_irreversibility},
                    {"nu_min", row.detail.nu_min},
                    {"bound", row.bound},
                    {"defect_flag", row.defect},
                    {"satisfied", row.satisfied},
                    {"members", members}});
  }
  return rows;
}

json config_json(const PhaseDiagramConfig& c) {
  return {{"gamma", c.gamma}, {"nu_grid", c.nu_grid}, {"r_grid", c.r_grid}};
}

json config_json(const WitnessConfig& c) {
  return {{"channel", to_string(c.channel)}, {"gamma", c.gamma}, {"time", c.time},
          {"reference", params_json(c.reference)}, {"mu", c.mus}};
}

json config_json(const RepairConfig& c) {
  return {{"gamma", c.gamma}, {"reference", params_json(c.reference)},
          {"weight", to_string(c.weight)}};
}

json config_json(const NoiseFloorConfig& c) {
  json members = json::array();
  for (const auto& m : c.members) members.push_back(params_json(m));
  return {{"gamma", c.base.gamma},
          {"steps", c.base.steps},
          {"weight_source", to_string(c.base.weight_source)},
          {"nu_min_floor", c.base.nu_min_floor},
          {"s_grid", c.s_grid},
          {"class", members},
          {"negate_lhs", c.negate_lhs}};
}

json sidecar(const std::string& command, const json& config,
             const std::vector<std::filesystem::path>& outputs) {
  json files = json::array();
  for (const auto& p : outputs) files.push_back(p.string());
  const RepairOptions repair;
  return {{"command", command},
          {"version", version()},
          {"config", config},
          {"tolerances",
           {{"symmetry", kSymmetryTol},
            {"psd", kPsdTol},
            {"noise_floor", kNoiseFloorTol},
            {"witness", kWitnessTol},
            {"crosscheck", kCrosscheckTol},
            {"repair_rel_gap", repair.rel_gap}}},
          {"outputs", files}};
}

std::string phase_plot_script() {
  return R"(#!/usr/bin/env python3
# Heat map of lambda_min with the cosh(2r) = nu boundary overlaid.
import csv, os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "phase_diagram.csv"))))
nus = sorted({float(r["nu"]) for r in rows})
rs = sorted({float(r["r"]) for r in rows})
lam = [[0.0] * len(nus) for _ in rs]
for row in rows:
    lam[rs.index(float(row["r"]))][nus.index(float(row["nu"]))] = float(row["lambda_min"])
edge = list(csv.DictReader(open(os.path.join(here, "phase_boundary.csv"))))
fig, ax = plt.subplots()
m = ax.pcolormesh(nus, rs, lam, shading="nearest", cmap="RdBu")
fig.colorbar(m, ax=ax, label="lambda_min")
ax.plot([float(e["nu"]) for e in edge], [float(e["r"]) for e in edge], "k-")
ax.set_xlabel("nu")
ax.set_ylabel("r")
fig.savefig(os.path.join(here, "phase_diagram.png"), dpi=150)
)";
}

std::string noise_floor_plot_script() {
  return R"(#!/usr/bin/env python3
# Worst-case infidelity against the geometric lower bound.
import csv, os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "noise_floor.csv"))))
s = [float(r["S"]) for r in rows]
fig, ax = plt.subplots()
ax.plot(s, [float(r["neg2lnF_wc"]) for r in rows], "o-", label="-2 ln F_wc")
ax.plot(s, [float(r["bound"]) for r in rows], "s--", label="c_geom I_dec")
for x, r in zip(s, rows):
    if r["defect_flag"] == "1":
        ax.axvline(x, color="0.9", zorder=0)
ax.set_xlabel("S")
ax.legend()
fig.savefig(os.path.join(here, "noise_floor.png"), dpi=150)
)";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

const char* version() { return CPREPAIR_VERSION; }

}  // namespace cprepair::tools
