// Command-line front end: distribution tables, sampling, BER curves across
// the three evaluation methods, gain read-off, and cross-method checks.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fso/ber_analytic.hpp"
#include "fso/ber_numeric.hpp"
#include "fso/channel.hpp"
#include "fso/errors.hpp"
#include "fso/montecarlo.hpp"
#include "fso/scenario.hpp"

namespace {

using fso::ber_numeric::BerCurve;
using fso::ber_numeric::Combiner;
using fso::ber_numeric::LinkConfig;

struct GridSpec {
  double lo = 0.01;
  double hi = 10.0;
  int count = 200;
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &g.lo, &g.hi, &g.count) != 3 || g.count < 2 ||
      !(g.hi > g.lo) || !(g.lo > 0.0))
    throw CLI::ValidationError("grid", "expected lo:hi:count with 0 < lo < hi, count >= 2");
  return g;
}

std::vector<double> make_grid(const GridSpec& g, bool log_spacing) {
  std::vector<double> xs(g.count);
  for (int i = 0; i < g.count; ++i) {
    const double t = static_cast<double>(i) / (g.count - 1);
    xs[i] = log_spacing ? g.lo * std::pow(g.hi / g.lo, t) : g.lo + (g.hi - g.lo) * t;
  }
  return xs;
}

fso::channel::DoubleGGParams load_channel(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw CLI::ValidationError("channel", "cannot open " + spec.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return fso::cli::channel_from_json_text(ss.str());
  }
  return fso::cli::channel_from_json_text(spec);
}

std::vector<fso::channel::DoubleGGParams> load_channels(const std::string& list) {
  std::vector<fso::channel::DoubleGGParams> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(load_channel(item));
  if (out.empty()) throw CLI::ValidationError("channels", "empty channel list");
  return out;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw CLI::ValidationError("out", "cannot write " + path);
  return file;
}

int run_table(const std::string& channel_spec, const std::string& grid_spec, bool log_spacing,
              const std::string& out_path, bool cumulative) {
  const auto ch = load_channel(channel_spec);
  const auto grid = make_grid(parse_grid(grid_spec), log_spacing);
  std::ofstream file;
  auto& out = open_out(out_path, file);
  out << "irradiance," << (cumulative ? "cdf" : "pdf") << "\n";
  for (double x : grid) {
    const double v = cumulative ? fso::channel::cdf(ch, x) : fso::channel::pdf(ch, x);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", x, v);
    out << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double generalized-Gamma optical fading: distributions and link BER"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  std::string scenario_path;
  auto* run = app.add_subcommand("run", "run a scenario file (JSON)");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();

  // --- pdf / cdf -----------------------------------------------------------
  std::string ch_spec = "a", grid_spec = "0.01:10:200", out_path, spacing = "log";
  auto add_table_opts = [&](CLI::App* cmd) {
    cmd->add_option("--channel", ch_spec, "preset a..d, inline JSON, or @file");
    cmd->add_option("--grid", grid_spec, "irradiance grid lo:hi:count");
    cmd->add_option("--spacing", spacing, "log|lin")->check(CLI::IsMember({"log", "lin"}));
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };
  auto* pdf = app.add_subcommand("pdf", "tabulate the channel density");
  add_table_opts(pdf);
  auto* cdf = app.add_subcommand("cdf", "tabulate the channel distribution function");
  add_table_opts(cdf);

  // --- sample --------------------------------------------------------------
  std::int64_t count = 10;
  std::uint64_t seed = 1;
  auto* sample = app.add_subcommand("sample", "draw irradiance samples");
  sample->add_option("--channel", ch_spec, "preset a..d, inline JSON, or @file");
  sample->add_option("--count", count, "number of draws")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "rng seed");
  sample->add_option("--out", out_path, "output file (default stdout)");

  // --- ber -----------------------------------------------------------------
  std::string channels_spec = "b", combiner = "oc", method = "quadrature", snr_spec = "0:90:1";
  std::string config_id = "link";
  int m_tx = 1, n_rx = 1;
  std::int64_t draws = 10'000'000;
  auto* ber = app.add_subcommand("ber", "compute one BER curve");
  ber->add_option("--channels", channels_spec, "comma list: presets/inline JSON/@file (1 or m*n)");
  ber->add_option("--m", m_tx, "transmit apertures")->check(CLI::PositiveNumber);
  ber->add_option("--n", n_rx, "receive apertures")->check(CLI::PositiveNumber);
  ber->add_option("--combiner", combiner, "oc|egc|sc (single-input links)")
      ->check(CLI::IsMember({"oc", "egc", "sc"}));
  ber->add_option("--method", method, "closed|quadrature|montecarlo")
      ->check(CLI::IsMember({"closed", "quadrature", "montecarlo"}));
  ber->add_option("--snr", snr_spec, "SNR grid in dB, start:stop:step");
  ber->add_option("--draws", draws, "Monte Carlo draws");
  ber->add_option("--seed", seed, "Monte Carlo seed");
  ber->add_option("--id", config_id, "config id written to the CSV");
  ber->add_option("--out", out_path, "output CSV (default stdout)");

  // --- gain ------------------------------------------------------------
  std::string ref_path, new_path;
  double target = 1e-5;
  auto* gain = app.add_subcommand("gain", "SNR gain between two curves at a target BER");
  gain->add_option("--target", target, "target BER")->check(CLI::PositiveNumber);
  gain->add_option("--ref", ref_path, "reference curve CSV")->required();
  gain->add_option("--new", new_path, "improved curve CSV")->required();

  // --- check ------------------------------------------------------------
  int check_n = 2;
  std::string check_channel = "b";
  std::int64_t check_draws = 2'000'000;
  auto* check = app.add_subcommand("check", "closed vs quadrature vs Monte Carlo agreement");
  check->add_option("--channel", check_channel, "preset a..d, inline JSON, or @file");
  check->add_option("--n", check_n, "receive apertures")->check(CLI::PositiveNumber);
  check->add_option("--draws", check_draws, "Monte Carlo draws");
  check->add_option("--seed", seed, "Monte Carlo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return fso::cli::run_scenario(scenario_path, std::cout);

    if (pdf->parsed()) return run_table(ch_spec, grid_spec, spacing == "log", out_path, false);
    if (cdf->parsed()) return run_table(ch_spec, grid_spec, spacing == "log", out_path, true);

    if (sample->parsed()) {
      const auto ch = load_channel(ch_spec);
      const auto xs = fso::channel::sample(ch, seed, count);
      std::ofstream file;
      auto& out = open_out(out_path, file);
      out << "irradiance\n";
      for (Eigen::Index i = 0; i < xs.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g\n", xs[i]);
        out << buf;
      }
      return 0;
    }

    if (ber->parsed()) {
      fso::cli::ScenarioLink link;
      link.id = config_id;
      link.link.m_tx = m_tx;
      link.link.n_rx = n_rx;
      auto chs = load_channels(channels_spec);
      const std::size_t need = static_cast<std::size_t>(m_tx) * n_rx;
      if (chs.size() == 1 && need > 1) chs.assign(need, chs[0]);
      if (chs.size() != need) {
        std::cerr << "need 1 or m*n channels\n";
        return fso::cli::kExitSchema;
      }
      link.link.channels = std::move(chs);
      link.link.combiner = fso::ber_numeric::combiner_from_string(combiner);
      GridSpec g;
      double step = 1.0;
      if (std::sscanf(snr_spec.c_str(), "%lf:%lf:%lf", &g.lo, &g.hi, &step) != 3 ||
          !(step > 0.0)) {
        std::cerr << "bad --snr range\n";
        return fso::cli::kExitSchema;
      }
      for (double s = g.lo; s <= g.hi + 1e-9; s += step) link.link.snr_grid_db.push_back(s);
      link.link.validate();
      fso::montecarlo::McSettings mc;
      mc.draws = draws;
      mc.seed = seed;
      const BerCurve curve = fso::cli::compute_curve(link, method, mc);
      if (out_path.empty() || out_path == "-") {
        fso::cli::write_csv("/dev/stdout", curve);
      } else {
        fso::cli::write_csv(out_path, curve);
      }
      return 0;
    }

    if (gain->parsed()) {
      const BerCurve ref = fso::cli::read_csv(ref_path);
      const BerCurve neu = fso::cli::read_csv(new_path);
      const double g = fso::montecarlo::gain_at_target(ref, neu, target);
      std::printf("%.3f dB\n", g);
      return 0;
    }

    if (check->parsed()) {
      const auto ch = load_channel(check_channel);
      std::vector<fso::channel::DoubleGGParams> chs(static_cast<std::size_t>(check_n), ch);
      const auto ctx = fso::ber_analytic::make_lambda_context(ch);
      std::vector<fso::ber_analytic::LambdaContext> ctxs(chs.size(), ctx);
      LinkConfig cfg;
      cfg.m_tx = 1;
      cfg.n_rx = check_n;
      cfg.channels = chs;
      cfg.combiner = Combiner::OC;
      fso::montecarlo::McSettings mc;
      mc.draws = check_draws;
      mc.seed = seed;
      mc.streams = 16;
      bool ok = true;
      std::printf("%8s %13s %13s %13s %9s %9s\n", "snr_db", "closed", "quadrature", "montecarlo",
                  "cl/qd", "|z| mc");
      for (double snr_db : {10.0, 20.0, 30.0}) {
        const double snr = std::pow(10.0, snr_db / 10.0);
        const double c = fso::ber_analytic::ber_simo_oc_closed(ctxs, snr);
        const double qd = fso::ber_numeric::ber_simo_oc(chs, snr);
        const auto m = fso::montecarlo::ber_mc(cfg, snr, mc);
        const double ratio = c / qd;
        const double z = std::abs(m.ber - qd) / std::max(m.ci_halfwidth / 2.5758, 1e-300);
        // closed vs exact carries the two-exponential approximation bias plus
        // the rationalization of the exponents; 35% covers the supported set
        const bool pass_ratio = ratio > 0.65 && ratio < 1.35;
        const bool pass_mc = z < 4.0;
        ok = ok && pass_ratio && pass_mc;
        std::printf("%8.1f %13.6e %13.6e %13.6e %9.3f %9.2f %s\n", snr_db, c, qd, m.ber, ratio, z,
                    pass_ratio && pass_mc ? "ok" : "FAIL");
      }
      std::printf("%s\n", ok ? "check passed" : "check FAILED");
      return ok ? 0 : 1;
    }
  } catch (const fso::cli::schema_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fso::cli::kExitSchema;
  } catch (const CLI::Error& e) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fso::cli::kExitNumeric;
  }
  return 0;
}
