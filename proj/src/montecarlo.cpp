#include "fso/montecarlo.hpp"

#include <cmath>
#include <atomic>
#include <sstream>
#include <thread>
#include <vector>

#include "fso/channel.hpp"
#include "fso/parallel.hpp"
#include "fso/rng.hpp"
#include "fso/specfun.hpp"

namespace fso::montecarlo {

namespace {

constexpr std::int64_t kBlock = 1 << 16;
constexpr double kZ99 = 2.5758293035489004;  // Phi^{-1}(0.995)

// One draw of the irradiance matrix plus its conditional BEP sample.
double draw_bep(const ber_numeric::LinkConfig& cfg, double snr, std::uint64_t seed,
                std::int64_t index, bool bit_level, std::vector<double>& irr) {
  auto rng = rng::CounterRng::substream(seed, static_cast<std::uint64_t>(index));
  const int dims = cfg.m_tx * cfg.n_rx;
  for (int d = 0; d < dims; ++d) {
    const auto& ch = cfg.channels[d];
    const double gx = rng.next_gamma(ch.gg1.beta);
    const double gy = rng.next_gamma(ch.gg2.beta);
    irr[d] = std::pow(gx * ch.gg1.omega / ch.gg1.beta, 1.0 / ch.gg1.gamma) *
             std::pow(gy * ch.gg2.omega / ch.gg2.beta, 1.0 / ch.gg2.gamma);
  }
  if (!bit_level) return ber_numeric::conditional_bep(cfg, irr, snr);
  // noisy-bit mode: metric y = 2*arg*x + z with threshold at arg reproduces
  // the conditional error probability Q(arg) for either bit value
  double arg;
  {
    const int m = cfg.m_tx, n = cfg.n_rx;
    if (m == 1 && n == 1) {
      arg = irr[0] * std::sqrt(0.5 * snr);
    } else if (m == 1) {
      switch (cfg.combiner) {
        case ber_numeric::Combiner::OC: {
          double s2 = 0.0;
          for (double v : irr) s2 += v * v;
          arg = std::sqrt(snr / (2.0 * n) * s2);
          break;
        }
        case ber_numeric::Combiner::EGC: {
          double s = 0.0;
          for (double v : irr) s += v;
          arg = std::sqrt(snr) / (n * M_SQRT2) * s;
          break;
        }
        default: {
          double mx = 0.0;
          for (double v : irr) mx = std::max(mx, v);
          arg = mx * std::sqrt(snr / (2.0 * n));
        }
      }
    } else if (n == 1) {
      double s = 0.0;
      for (double v : irr) s += v;
      arg = std::sqrt(snr) / (m * M_SQRT2) * s;
    } else {
      double metric = 0.0;
      for (int rx = 0; rx < n; ++rx) {
        double row = 0.0;
        for (int tx = 0; tx < m; ++tx) row += irr[rx * m + tx];
        metric += row * row;
      }
      arg = std::sqrt(0.5 * snr * metric) / (m * n);
    }
  }
  const bool bit_on = rng.next_uniform() < 0.5;
  const double y = (bit_on ? 2.0 * arg : 0.0) + rng.next_normal();
  const bool decided_on = y > arg;
  return decided_on == bit_on ? 0.0 : 1.0;
}

}  // namespace

McResult ber_mc(const ber_numeric::LinkConfig& cfg, double snr, const McSettings& settings) {
  cfg.validate();
  if (!(snr > 0.0)) throw std::domain_error("ber_mc: snr must be > 0");
  if (settings.draws < 1) throw std::invalid_argument("ber_mc: draws must be >= 1");

  const std::int64_t blocks = (settings.draws + kBlock - 1) / kBlock;
  std::vector<double> block_sum(blocks, 0.0), block_sq(blocks, 0.0);

  // Blocks are assigned to workers dynamically, but each block's sums are
  // accumulated in draw order and combined in block order, so the estimate is
  // a pure function of (seed, draws).
  const int workers = std::max(1, std::min<int>(settings.streams, max_workers()));
  std::atomic<std::int64_t> next{0};
  auto work = [&](int) {
    std::vector<double> irr(cfg.m_tx * cfg.n_rx);
    for (std::int64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      const std::int64_t lo = b * kBlock;
      const std::int64_t hi = std::min<std::int64_t>(lo + kBlock, settings.draws);
      double s = 0.0, s2 = 0.0;
      for (std::int64_t i = lo; i < hi; ++i) {
        const double v = draw_bep(cfg, snr, settings.seed, i, settings.bit_level, irr);
        s += v;
        s2 += v * v;
      }
      block_sum[b] = s;
      block_sq[b] = s2;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  double sum = 0.0, sq = 0.0;
  std::int64_t n = 0;
  McResult out;
  for (std::int64_t b = 0; b < blocks; ++b) {
    sum += block_sum[b];
    sq += block_sq[b];
    n = std::min<std::int64_t>((b + 1) * kBlock, settings.draws);
    if (settings.target_rel_ci && n > 4096) {
      const double mean = sum / n;
      const double var = std::max(0.0, (sq - sum * mean) / std::max<std::int64_t>(n - 1, 1));
      const double ci = kZ99 * std::sqrt(var / n);
      if (mean > 0.0 && ci / mean <= *settings.target_rel_ci) break;
    }
  }
  const double mean = sum / n;
  const double var = std::max(0.0, (sq - sum * mean) / std::max<std::int64_t>(n - 1, 1));
  out.ber = mean;
  out.ci_halfwidth = kZ99 * std::sqrt(var / n);
  out.draws_used = n;
  return out;
}

double gain_at_target(const ber_numeric::BerCurve& reference,
                      const ber_numeric::BerCurve& candidate, double target_ber) {
  const auto crossing = [&](const ber_numeric::BerCurve& c) {
    const double lt = std::log10(target_ber);
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
      const double b0 = c.points[i].ber, b1 = c.points[i + 1].ber;
      if (b0 <= 0.0 || b1 <= 0.0) continue;
      const double l0 = std::log10(b0), l1 = std::log10(b1);
      if ((l0 - lt) * (l1 - lt) <= 0.0 && l0 != l1) {
        return c.points[i].snr_db +
               (c.points[i + 1].snr_db - c.points[i].snr_db) * (lt - l0) / (l1 - l0);
      }
    }
    std::ostringstream os;
    os << "gain_at_target: curve '" << c.config_id << "' does not bracket BER " << target_ber;
    throw std::range_error(os.str());
  };
  return crossing(reference) - crossing(candidate);
}

}  // namespace fso::montecarlo
