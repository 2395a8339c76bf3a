// SPDX-FileCopyrightText: Copyright (c) 2026 fdcap contributors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fdcap: command-line front end for the rate-region library.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdcap/fdcap.hpp"

namespace {

using namespace fdcap;
using nlohmann::json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Writes to the file when a path is given, else to stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string region_csv(const RateRegion& r) {
  std::ostringstream os;
  write_region_csv(os, r);
  return os.str();
}

int report_checks(const std::vector<CheckResult>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.pass;
  }
  return ok ? 0 : kExitCheckFailed;
}

struct Common {
  std::string config, out;
  std::uint64_t seed = 1;
  bool check = false;
};

ExperimentConfig load_config(const Common& c, const std::string& id) {
  ExperimentConfig cfg = experiment_defaults(id);
  if (!c.config.empty()) {
    auto j = read_json(c.config);
    j["id"] = id;
    cfg = experiment_config_from_json(j, cfg);
  }
  cfg.seed = c.seed;
  cfg.validate();
  return cfg;
}

int run_fig(const Common& c, int n, const std::function<void(ExperimentConfig&)>& tweak = {}) {
  auto cfg = load_config(c, "fig" + std::to_string(n));
  if (tweak) tweak(cfg);
  cfg.gdof.grid = cfg.grid;
  cfg.validate();
  const auto t = run_experiment(cfg);
  emit(c.out, to_csv(t));
  return c.check ? report_checks(check_experiment(cfg, t)) : 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, sep);)
    if (!tok.empty()) out.push_back(tok);
  return out;
}

// "lo:hi" in dB
std::pair<double, double> parse_range(const std::string& s) {
  const auto p = split(s, ':');
  if (p.size() != 2) throw UsageError("range must look like lo:hi, got '" + s + "'");
  return {std::stod(p[0]), std::stod(p[1])};
}

// "5:1,1:1,1:5" as downlink:uplink strength
std::vector<double> parse_ratios(const std::string& s) {
  std::vector<double> out;
  for (const auto& r : split(s, ',')) {
    const auto p = split(r, ':');
    if (p.size() != 2) throw UsageError("ratio must look like a:b, got '" + r + "'");
    out.push_back(std::stod(p[0]) / std::stod(p[1]));
  }
  return out;
}

ScalarChannel channel_from_args(const std::string& path, std::optional<double> snr_db, std::optional<double> inr_db,
                                std::optional<double> dl_db) {
  if (!path.empty()) return scalar_channel_from_json(read_json(path));
  if (!snr_db || !inr_db) throw UsageError("give --channel or both --snr-db and --inr-db");
  const double snr = db_to_linear(*snr_db);
  return ScalarChannel::from_ratios(snr, db_to_linear(*inr_db), dl_db ? db_to_linear(*dl_db) : snr);
}

MimoChannel random_mimo(const std::vector<int>& ant, double snr_db, std::uint64_t seed) {
  std::mt19937_64 rng(detail::splitmix64(seed));
  MimoChannel m;
  m.G21 = detail::gaussian_matrix(rng, ant[1], ant[0]);
  m.G31 = detail::gaussian_matrix(rng, ant[3], ant[0]);
  m.G32 = detail::gaussian_matrix(rng, ant[3], ant[2]);
  m.P1 = m.P2 = db_to_linear(snr_db);
  return m;
}

json covariance_json(const CovarianceSet& c) {
  return {{"Lambda_a", detail::matrix_to_json(c.La)}, {"Lambda_b", detail::matrix_to_json(c.Lb)},
          {"Lambda_c", detail::matrix_to_json(c.Lc)}, {"Lambda_d", detail::matrix_to_json(c.Ld)},
          {"Lambda_e", detail::matrix_to_json(c.Le)}, {"Lambda_f", detail::matrix_to_json(c.Lf)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex cellular network rate regions and constant-gap analysis"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config, "JSON configuration file");
  app.add_option("--out", common.out, "Output path (default stdout)");
  app.add_option("--seed", common.seed, "Random seed");
  app.add_flag("--check", common.check, "Assert the stated figure values; nonzero exit on failure");

  // region
  auto* region = app.add_subcommand("region", "Evaluate one scheme on one scalar channel");
  std::string r_channel, r_scheme = "proposed";
  std::optional<double> r_snr, r_inr, r_dl;
  bool r_d2d = false, r_gap = false;
  region->add_option("--channel", r_channel, "Scalar channel JSON (gains or link_budget)");
  region->add_option("--snr-db", r_snr, "Uplink SNR in dB");
  region->add_option("--inr-db", r_inr, "Cross-link INR in dB");
  region->add_option("--snr-dl-db", r_dl, "Downlink SNR in dB (default: uplink SNR)");
  region->add_option("--scheme", r_scheme, "Scheme name");
  region->add_flag("--d2d", r_d2d, "Include the D2D message (same as --model d2d)");
  std::string r_model, r_hull;
  std::size_t r_grid = 0;
  region->add_option("--model", r_model, "no-d2d or d2d")->check(CLI::IsMember({"no-d2d", "d2d"}));
  region->add_option("--grid", r_grid, "Points per scheme parameter");
  region->add_option("--hull", r_hull, "Time-sharing hull: on or off")->check(CLI::IsMember({"on", "off"}));
  region->add_flag("--gap", r_gap, "Also report the gap to the outer bound");

  // gap-map
  auto* gmap = app.add_subcommand("gap-map", "Gap heat map over (SNR, INR)");
  std::string g_d2d = "off", g_ratio, g_snr, g_inr;
  std::size_t g_grid = 0;
  gmap->add_flag("--d2d{on}", g_d2d, "Model with D2D (--d2d or --d2d=on|off)")->check(CLI::IsMember({"on", "off"}));
  gmap->add_option("--ratio", g_ratio, "Downlink:uplink strength list, e.g. 5:1,1:1,1:5");
  gmap->add_option("--snr-range", g_snr, "SNR axis lo:hi in dB");
  gmap->add_option("--inr-range", g_inr, "INR axis lo:hi in dB");
  gmap->add_option("--grid", g_grid, "Points per axis");

  // gdof
  auto* gdof = app.add_subcommand("gdof", "Symmetric GDoF curves");
  std::string k_schemes;
  std::optional<double> k_max, k_snr;
  std::size_t k_samples = 0;
  gdof->add_option("--schemes", k_schemes, "Comma-separated scheme names");
  gdof->add_option("--kappa-max", k_max, "Largest kappa");
  gdof->add_option("--samples", k_samples, "Number of kappa samples");
  gdof->add_option("--snr-db", k_snr, "Evaluation SNR in dB");

  // mimo
  auto* mimo = app.add_subcommand("mimo", "Vector dirty-paper regions");
  std::string m_ant = "2,2,2,2", m_variant = "union", m_channel, m_cov_out;
  std::size_t m_budget = 64;
  double m_snr = 20.0;
  bool m_nod2d = false;
  mimo->add_option("--antennas", m_ant, "L1,L2rx,L2tx,L3");
  mimo->add_option("--variant", m_variant, "1, 2, 3 or union")->check(CLI::IsMember({"1", "2", "3", "union"}));
  mimo->add_option("--budget", m_budget, "Covariance evaluations");
  mimo->add_option("--channel", m_channel, "MIMO channel JSON (G21, G31, G32, p1, p2, sigma2)");
  mimo->add_option("--snr-db", m_snr, "Power for a random channel");
  mimo->add_option("--cov-out", m_cov_out, "Write the best beamformers as JSON");
  mimo->add_flag("--no-d2d", m_nod2d, "Closed-form scheme without D2D and its gap");

  // dmc
  auto* dmc = app.add_subcommand("dmc", "Discrete memoryless regions");
  std::string d_channel, d_input, d_theorem = "1";
  dmc->add_option("--channel", d_channel, "Channel pmf JSON")->required();
  dmc->add_option("--input", d_input, "Input pmf JSON")->required();
  dmc->add_option("--theorem", d_theorem, "1, 2, 3, 5 or prop2")->check(CLI::IsMember({"1", "2", "3", "5", "prop2"}));

  // fig
  auto* fig = app.add_subcommand("fig", "Reproduce a figure recipe");
  int f_n = 4;
  fig->add_option("n", f_n, "Figure number (3-8)")->required()->check(CLI::Range(3, 8));

  // subcommand options may also come after the subcommand name
  for (auto* sub : {region, gmap, gdof, mimo, dmc, fig}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*region) {
      const auto ch = channel_from_args(r_channel, r_snr, r_inr, r_dl);
      GridConfig grid;
      if (!common.config.empty()) grid = experiment_config_from_json(read_json(common.config)).grid;
      if (r_grid) grid.scheme_points = r_grid;
      if (!r_hull.empty()) grid.hull = r_hull == "on";
      if (!r_model.empty()) r_d2d = r_model == "d2d";
      grid.validate();
      const auto s = parse_scheme(r_scheme);
      const auto reg = scheme_region(s, ch, r_d2d, grid);
      std::ostringstream os;
      os << "# scheme: " << to_string(s) << '\n'
         << "# channel: " << to_json(ch).dump() << '\n'
         << "# symmetric_rate: " << fmt_real(symmetric_rate(reg)) << '\n'
         << "# sum_rate: " << fmt_real(support_value(reg, {1, 1, r_d2d ? 1.0 : 0.0})) << '\n';
      if (r_gap) {
        if (!is_achievable(s)) throw UsageError("--gap needs an achievable scheme");
        const auto g = constant_gap(outer_union(ch, r_d2d, grid), reg, {grid.ray_directions});
        os << "# gap_bits: " << fmt_real(g.delta) << '\n';
      }
      os << region_csv(reg);
      emit(common.out, os.str());
      return 0;
    }
    if (*gmap)
      return run_fig(common, g_d2d == "on" ? 6 : 3, [&](ExperimentConfig& cfg) {
        if (!g_ratio.empty()) cfg.ratios = parse_ratios(g_ratio);
        if (!g_snr.empty()) std::tie(cfg.map_db_min, cfg.map_db_max) = parse_range(g_snr);
        if (!g_inr.empty()) std::tie(cfg.map_inr_db_min, cfg.map_inr_db_max) = parse_range(g_inr);
        if (g_grid) cfg.map_points = g_grid;
      });
    if (*gdof)
      return run_fig(common, 7, [&](ExperimentConfig& cfg) {
        if (!k_schemes.empty()) {
          cfg.schemes.clear();
          for (const auto& n : split(k_schemes, ',')) cfg.schemes.push_back(parse_scheme(n));
        }
        if (k_max) cfg.kappa_max = *k_max;
        if (k_samples) cfg.kappa_samples = k_samples;
        if (k_snr) cfg.gdof_snr_db = *k_snr;
      });
    if (*fig) return run_fig(common, f_n);
    if (*mimo) {
      std::vector<int> ant;
      for (const auto& tok : split(m_ant, ',')) ant.push_back(std::stoi(tok));
      if (ant.size() != 4) throw UsageError("--antennas needs four comma-separated counts");
      const auto ch = m_channel.empty() ? random_mimo(ant, m_snr, common.seed) : mimo_channel_from_json(read_json(m_channel));
      ch.validate();
      std::ostringstream os;
      if (m_nod2d) {
        const auto sch = no_d2d_mimo_scheme(ch);
        const auto outer = vector_outer_union(ch, 200, common.seed);
        const auto g = constant_gap(outer, sch.region);
        os << "# scheme: no-d2d closed form\n"
           << "# gap_bits: " << fmt_real(g.delta) << '\n'
           << "# gap_bound_bits: " << fmt_real(mimo_gap_bound(ch)) << '\n';
        os << region_csv(sch.region);
        if (!m_cov_out.empty()) emit(m_cov_out, covariance_json(sch.cov).dump(2) + "\n");
      } else {
        const DpcVariant v = m_variant == "union" ? DpcVariant::kUnion : static_cast<DpcVariant>(std::stoi(m_variant));
        const auto res = covariance_search(ch, v, m_budget, common.seed);
        os << "# variant: " << m_variant << '\n'
           << "# budget: " << m_budget << '\n'
           << "# seed: " << common.seed << '\n'
           << "# symmetric_rate: " << fmt_real(res.value) << '\n';
        os << region_csv(res.region);
        if (!m_cov_out.empty()) emit(m_cov_out, covariance_json(res.best).dump(2) + "\n");
      }
      emit(common.out, os.str());
      return 0;
    }
    if (*dmc) {
      const auto ch = channel_pmf_from_json(read_json(d_channel));
      const auto in = read_json(d_input);
      std::ostringstream os;
      if (d_theorem == "1" || d_theorem == "3") {
        const auto f = factorization_from_json(in);
        const auto p = d_theorem == "1" ? region_thm1(ch, f) : region_thm3(ch, f);
        RateRegion r(p.dim());
        r.add(p);
        os << region_csv(r);
      } else if (d_theorem == "2") {
        const auto pxx = detail::flat(in.at("p_x1x2"), static_cast<std::size_t>(ch.nx1 * ch.nx2), "p_x1x2");
        RateRegion r(2);
        r.add(region_thm2_outer(ch, pxx));
        os << region_csv(r);
      } else if (d_theorem == "5") {
        const int nu = in.at("sizes").value("u", 1), nv = in.at("sizes").value("v", 1);
        const auto p = detail::flat(in.at("p_uvx1x2"), static_cast<std::size_t>(nu * nv * ch.nx1 * ch.nx2), "p_uvx1x2");
        RateRegion r(3);
        r.add(region_thm5_outer(ch, nu, nv, p));
        os << region_csv(r);
      } else {
        const auto rep = check_prop2(ch, factorization_from_json(in));
        os << "# status: " << to_string(rep.status) << '\n';
        for (double m : rep.terms.values()) os << "# mu: " << fmt_real(m) << '\n';
        if (rep.witness) os << "# witness: " << *rep.witness << " (" << rep.stage << ")\n";
        if (rep.status != Prop2Status::kSkipped) {
          RateRegion r(3);
          r.add(rep.fallback);
          os << region_csv(r);
        }
        emit(common.out, os.str());
        return rep.status == Prop2Status::kFail ? kExitCheckFailed : 0;
      }
      emit(common.out, os.str());
      return 0;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // std::stod on a malformed number
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
