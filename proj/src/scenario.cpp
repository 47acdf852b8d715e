#include "fso/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fso/ber_analytic.hpp"
#include "fso/errors.hpp"
#include "fso/parallel.hpp"

namespace fso::cli {

using json = nlohmann::json;
using ber_numeric::BerCurve;
using ber_numeric::BerPoint;
using ber_numeric::Combiner;
using ber_numeric::LinkConfig;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

channel::DoubleGGParams channel_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'd') return channel::preset(s[0]);
    throw schema_error("unknown channel preset '" + s + "' (expected a..d)");
  }
  if (!j.is_object()) throw schema_error("channel must be a preset name or a parameter object");
  try {
    const double g1 = j.at("gamma1").get<double>();
    const double b1 = j.at("beta1").get<double>();
    const double g2 = j.at("gamma2").get<double>();
    const double b2 = j.at("beta2").get<double>();
    const double o1 = j.contains("omega1") ? j["omega1"].get<double>()
                                           : channel::omega_from(b1, g1);
    const double o2 = j.contains("omega2") ? j["omega2"].get<double>()
                                           : channel::omega_from(b2, g2);
    int p, q;
    if (j.contains("p") && j.contains("q")) {
      p = j["p"].get<int>();
      q = j["q"].get<int>();
    } else {
      const auto r = channel::best_rational(g1 / g2, j.value("max_den", 64));
      p = static_cast<int>(r.num);
      q = static_cast<int>(r.den);
    }
    return channel::DoubleGGParams(channel::GenGammaParams(g1, b1, o1),
                                   channel::GenGammaParams(g2, b2, o2), p, q);
  } catch (const json::exception& e) {
    throw schema_error(std::string("bad channel object: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw schema_error(std::string("bad channel parameters: ") + e.what());
  }
}

std::vector<double> grid_from_json(const json& j) {
  std::vector<double> grid;
  if (j.is_array()) {
    grid = j.get<std::vector<double>>();
  } else if (j.is_object()) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const double step = j.value("step", 1.0);
    if (!(step > 0.0) || stop < start) throw schema_error("bad snr_db range");
    for (double s = start; s <= stop + 1e-9; s += step) grid.push_back(s);
  } else {
    throw schema_error("snr_db must be an array or {start, stop, step}");
  }
  return grid;
}

}  // namespace

channel::DoubleGGParams channel_from_json_text(const std::string& text) {
  if (text.size() == 1 && text[0] >= 'a' && text[0] <= 'd') return channel::preset(text[0]);
  return channel_from_json(json::parse(text));
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw schema_error("cannot open scenario file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw schema_error(std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario sc;
  try {
    sc.name = j.value("name", path.stem().string());
    if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty())
      throw schema_error("scenario requires a non-empty 'methods' array");
    for (const auto& m : j["methods"]) {
      const std::string s = m.get<std::string>();
      if (s != "closed" && s != "quadrature" && s != "montecarlo")
        throw schema_error("unknown method '" + s + "'");
      sc.methods.push_back(s);
    }
    if (j.contains("mc")) {
      const auto& m = j["mc"];
      sc.mc.draws = m.value("draws", sc.mc.draws);
      sc.mc.seed = m.value("seed", sc.mc.seed);
      sc.mc.streams = m.value("streams", sc.mc.streams);
      if (m.contains("target_rel_ci")) sc.mc.target_rel_ci = m["target_rel_ci"].get<double>();
    }
    if (j.contains("output")) {
      sc.out_dir = j["output"].value("dir", std::string("out"));
      sc.format = j["output"].value("format", std::string("csv"));
      if (sc.format != "csv") throw schema_error("only csv output is supported");
    } else {
      sc.out_dir = "out";
    }
    if (!j.contains("links") || !j["links"].is_array() || j["links"].empty())
      throw schema_error("scenario requires a non-empty 'links' array");
    for (const auto& l : j["links"]) {
      ScenarioLink link;
      link.id = l.at("id").get<std::string>();
      link.link.m_tx = l.value("m", 1);
      link.link.n_rx = l.value("n", 1);
      if (!l.contains("channels") || !l["channels"].is_array() || l["channels"].empty())
        throw schema_error("link '" + link.id + "' requires a channels array");
      std::vector<channel::DoubleGGParams> chs;
      for (const auto& c : l["channels"]) chs.push_back(channel_from_json(c));
      const std::size_t need =
          static_cast<std::size_t>(link.link.m_tx) * static_cast<std::size_t>(link.link.n_rx);
      if (chs.size() == 1 && need > 1) chs.assign(need, chs[0]);
      if (chs.size() != need)
        throw schema_error("link '" + link.id + "': need 1 or m*n channel entries");
      link.link.channels = std::move(chs);
      if (l.contains("combiner")) {
        if (link.link.m_tx > 1)
          throw schema_error("link '" + link.id + "': combiner applies to single-input links");
        link.link.combiner = ber_numeric::combiner_from_string(l["combiner"].get<std::string>());
      }
      link.link.snr_grid_db = grid_from_json(l.at("snr_db"));
      link.link.validate();
      sc.links.push_back(std::move(link));
    }
  } catch (const json::exception& e) {
    throw schema_error(std::string("scenario schema: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw schema_error(std::string("scenario schema: ") + e.what());
  }
  return sc;
}

bool method_applies(const LinkConfig& link, const std::string& method) {
  if (method != "closed") return true;
  return link.m_tx == 1 && (link.n_rx == 1 || link.combiner == Combiner::OC);
}

BerCurve compute_curve(const ScenarioLink& sl, const std::string& method,
                       const montecarlo::McSettings& mc) {
  const LinkConfig& link = sl.link;
  link.validate();
  BerCurve curve;
  curve.method = method;
  curve.config_id = sl.id;
  curve.points.resize(link.snr_grid_db.size());

  if (method == "closed") {
    if (!method_applies(link, method))
      throw capability_error("closed form applies to SISO / SIMO-OC links only");
    std::vector<ber_analytic::LambdaContext> ctxs;
    for (const auto& ch : link.channels) ctxs.push_back(ber_analytic::make_lambda_context(ch));
    double max_acc = 0.0;
    for (const auto& c : ctxs) max_acc = std::max(max_acc, c.reported_accuracy);
    curve.tolerance = max_acc;
    curve.nodes = static_cast<long>(ctxs.size());
    parallel_for(static_cast<long>(link.snr_grid_db.size()), [&](long i) {
      const double snr = std::pow(10.0, link.snr_grid_db[i] / 10.0);
      curve.points[i] = {link.snr_grid_db[i], ber_analytic::ber_simo_oc_closed(ctxs, snr), {}};
    });
    return curve;
  }

  if (method == "quadrature") {
    const int dims = link.m_tx * link.n_rx;
    curve.nodes = dims <= 4
                      ? static_cast<long>(ber_numeric::quantile_nodes(link.channels[0],
                                                                      dims).size())
                      : (1L << 20);
    parallel_for(static_cast<long>(link.snr_grid_db.size()), [&](long i) {
      const double snr = std::pow(10.0, link.snr_grid_db[i] / 10.0);
      double v;
      if (link.m_tx == 1 && link.n_rx == 1) {
        v = ber_numeric::ber_siso(link.channels[0], snr);
      } else if (link.m_tx == 1) {
        std::span<const channel::DoubleGGParams> chs(link.channels);
        switch (link.combiner) {
          case Combiner::OC: v = ber_numeric::ber_simo_oc(chs, snr); break;
          case Combiner::EGC: v = ber_numeric::ber_simo_egc(chs, snr); break;
          default: v = ber_numeric::ber_simo_sc(chs, snr); break;
        }
      } else if (link.n_rx == 1) {
        v = ber_numeric::ber_miso(link.channels, snr);
      } else {
        v = ber_numeric::ber_mimo(link, snr);
      }
      curve.points[i] = {link.snr_grid_db[i], v, {}};
    });
    // node-doubling error estimate at a mid-grid point
    if (link.m_tx == 1 && link.combiner == Combiner::OC && dims <= 4 &&
        !link.snr_grid_db.empty()) {
      const double snr_mid =
          std::pow(10.0, link.snr_grid_db[link.snr_grid_db.size() / 2] / 10.0);
      curve.tolerance = ber_numeric::oc_refinement_delta(link.channels, snr_mid);
    }
    return curve;
  }

  if (method == "montecarlo") {
    curve.seed = mc.seed;
    curve.nodes = mc.draws;
    parallel_for(static_cast<long>(link.snr_grid_db.size()), [&](long i) {
      // each SNR point runs single-threaded here; points parallelize instead
      montecarlo::McSettings local = mc;
      local.streams = 1;
      const double snr = std::pow(10.0, link.snr_grid_db[i] / 10.0);
      const auto r = montecarlo::ber_mc(link, snr, local);
      curve.points[i] = {link.snr_grid_db[i], r.ber, r.ci_halfwidth};
    });
    return curve;
  }

  throw schema_error("unknown method '" + method + "'");
}

void write_csv(const std::filesystem::path& path, const BerCurve& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# method=" << curve.method << "\n";
  out << "# config_id=" << curve.config_id << "\n";
  out << "# seed=" << curve.seed << "\n";
  out << "# nodes=" << curve.nodes << "\n";
  out << "# tolerance=" << fmt17(curve.tolerance) << "\n";
  out << "snr_db,ber,ci_halfwidth,method,config_id\n";
  for (const auto& p : curve.points) {
    out << fmt17(p.snr_db) << "," << fmt17(p.ber) << ",";
    if (p.ci_halfwidth) out << fmt17(*p.ci_halfwidth);
    out << "," << curve.method << "," << curve.config_id << "\n";
  }
}

BerCurve read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  BerCurve curve;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string val = line.substr(eq + 1);
      if (key == "method") curve.method = val;
      else if (key == "config_id") curve.config_id = val;
      else if (key == "seed") curve.seed = std::stoull(val);
      else if (key == "nodes") curve.nodes = std::stol(val);
      else if (key == "tolerance") curve.tolerance = std::stod(val);
      continue;
    }
    if (line.rfind("snr_db", 0) == 0) continue;
    std::stringstream ss(line);
    std::string field;
    BerPoint p;
    std::getline(ss, field, ',');
    p.snr_db = std::stod(field);
    std::getline(ss, field, ',');
    p.ber = std::stod(field);
    std::getline(ss, field, ',');
    if (!field.empty()) p.ci_halfwidth = std::stod(field);
    curve.points.push_back(p);
  }
  return curve;
}

int run_scenario(const std::filesystem::path& path, std::ostream& log) {
  Scenario sc;
  try {
    sc = load_scenario(path);
  } catch (const schema_error& e) {
    log << "scenario error: " << e.what() << "\n";
    return kExitSchema;
  }
  std::error_code ec;
  std::filesystem::create_directories(sc.out_dir, ec);
  if (ec) {
    log << "scenario error: cannot create output dir " << sc.out_dir << "\n";
    return kExitSchema;
  }
  std::ostringstream summary;
  summary << "scenario " << sc.name << "\n";
  int rc = kExitOk;
  for (const auto& link : sc.links) {
    for (const auto& method : sc.methods) {
      if (!method_applies(link.link, method)) {
        log << "skip " << link.id << " [" << method << "]: method not applicable\n";
        summary << link.id << " " << method << " skipped\n";
        continue;
      }
      try {
        const BerCurve curve = compute_curve(link, method, sc.mc);
        const auto file = sc.out_dir / (link.id + "_" + method + ".csv");
        write_csv(file, curve);
        log << "wrote " << file.string() << " (" << curve.points.size() << " points)\n";
        summary << link.id << " " << method << " points=" << curve.points.size()
                << " nodes=" << curve.nodes << " tolerance=" << fmt17(curve.tolerance) << "\n";
      } catch (const capability_error& e) {
        log << "skip " << link.id << " [" << method << "]: " << e.what() << "\n";
        summary << link.id << " " << method << " skipped\n";
      } catch (const std::exception& e) {
        log << "error on " << link.id << " [" << method << "]: " << e.what() << "\n";
        rc = kExitNumeric;
      }
    }
  }
  std::ofstream sf(sc.out_dir / "summary.txt");
  sf << summary.str();
  return rc;
}

}  // namespace fso::cli
