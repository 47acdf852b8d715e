#include "fso/ber_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fso/errors.hpp"
#include "fso/quadrature.hpp"
#include "fso/rng.hpp"
#include "fso/sobol.hpp"
#include "fso/specfun.hpp"

namespace fso::ber_numeric {

using channel::DoubleGGParams;

Combiner combiner_from_string(const std::string& s) {
  if (s == "oc" || s == "OC") return Combiner::OC;
  if (s == "egc" || s == "EGC") return Combiner::EGC;
  if (s == "sc" || s == "SC") return Combiner::SC;
  throw std::invalid_argument("unknown combiner: " + s);
}

std::string to_string(Combiner c) {
  switch (c) {
    case Combiner::OC: return "oc";
    case Combiner::EGC: return "egc";
    default: return "sc";
  }
}

void LinkConfig::validate() const {
  if (m_tx < 1 || n_rx < 1) throw std::invalid_argument("LinkConfig: m, n must be >= 1");
  if (channels.size() != static_cast<std::size_t>(m_tx) * n_rx)
    throw std::invalid_argument("LinkConfig: channels matrix must have m*n entries");
  for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
    if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
      throw std::invalid_argument("LinkConfig: snr grid must be strictly increasing");
}

QuadSpec default_rule(int dims) {
  switch (dims) {
    case 1: return {46, 24, 12};
    case 2: return {24, 16, 8};
    case 3: return {18, 12, 6};
    case 4: return {12, 8, 6};
    default: throw std::invalid_argument("default_rule: tensor rules cover dims 1..4");
  }
}

namespace {

constexpr double kPruneArgSq = 95.0;  // Q(sqrt(95)) ~ 3e-23

struct RuleKey {
  QuadSpec spec;
  bool operator<(const RuleKey& o) const {
    return std::tie(spec.levels_lo, spec.levels_hi, spec.order) <
           std::tie(o.spec.levels_lo, o.spec.levels_hi, o.spec.order);
  }
};

std::string channel_key(const DoubleGGParams& ch) {
  char buf[6 * sizeof(double) + 2 * sizeof(int)];
  double d[6] = {ch.gg1.gamma, ch.gg1.beta, ch.gg1.omega, ch.gg2.gamma, ch.gg2.beta, ch.gg2.omega};
  std::memcpy(buf, d, sizeof(d));
  std::memcpy(buf + sizeof(d), &ch.p, sizeof(int));
  std::memcpy(buf + sizeof(d) + sizeof(int), &ch.q, sizeof(int));
  return std::string(buf, sizeof(buf));
}

// Monotone root solve for cdf(I) = u on log I with a warm bracket.
double solve_quantile(const DoubleGGParams& ch, double u, double guess_lo) {
  double lo = std::max(guess_lo, 1e-290);
  double f_lo = channel::cdf(ch, lo) - u;
  while (f_lo > 0.0) {
    lo *= 0.0625;
    if (lo < 1e-290) break;
    f_lo = channel::cdf(ch, lo) - u;
  }
  double hi = lo, f_hi = f_lo;
  while (f_hi < 0.0 && hi < 1e250) {
    lo = hi;
    f_lo = f_hi;
    hi *= 4.0;
    f_hi = channel::cdf(ch, hi) - u;
  }
  double la = std::log(lo), lb = std::log(hi);
  double fa = f_lo, fb = f_hi;
  // secant with periodic bisection safeguards, on log I
  for (int it = 0; it < 80 && lb - la > 4e-14; ++it) {
    double lm = (it % 4 == 3 || fb == fa) ? 0.5 * (la + lb) : (la * fb - lb * fa) / (fb - fa);
    if (!(lm > la && lm < lb)) lm = 0.5 * (la + lb);
    const double fm = channel::cdf(ch, std::exp(lm)) - u;
    if (fm <= 0.0) {
      la = lm;
      fa = fm;
    } else {
      lb = lm;
      fb = fm;
    }
    if (std::abs(fm) < 1e-13 && lb - la < 1e-9) break;
  }
  return std::exp(0.5 * (la + lb));
}

const quadrature::PanelRule& rule_for(const QuadSpec& spec) {
  static std::mutex mu;
  static std::map<RuleKey, quadrature::PanelRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({spec});
  if (it == cache.end())
    it = cache.emplace(RuleKey{spec}, quadrature::dyadic_panels(spec.levels_lo, spec.levels_hi,
                                                                spec.order)).first;
  return it->second;
}

const std::vector<double>& quantiles_for(const DoubleGGParams& ch, const QuadSpec& spec) {
  static std::mutex mu;
  static std::map<std::pair<std::string, RuleKey>, std::unique_ptr<std::vector<double>>> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_pair(channel_key(ch), RuleKey{spec});
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto& rule = rule_for(spec);
    auto vals = std::make_unique<std::vector<double>>(rule.u.size());
    double warm = 1e-12;
    for (Eigen::Index i = 0; i < rule.u.size(); ++i) {
      warm = solve_quantile(ch, rule.u[i], warm * 0.5);
      (*vals)[i] = warm;
    }
    it = cache.emplace(key, std::move(vals)).first;
  }
  return *it->second;
}

// Quantiles of the max statistic H(t) = prod cdf_k(t) at 1-D rule nodes.
std::vector<double> max_quantiles(std::span<const DoubleGGParams> chs, const QuadSpec& spec) {
  const auto& rule = rule_for(spec);
  std::vector<double> vals(rule.u.size());
  const auto H = [&](double t) {
    double h = 1.0;
    for (const auto& ch : chs) h *= channel::cdf(ch, t);
    return h;
  };
  double warm = 1e-12;
  for (Eigen::Index i = 0; i < rule.u.size(); ++i) {
    const double u = rule.u[i];
    double lo = std::max(warm * 0.5, 1e-290);
    while (H(lo) > u) lo *= 0.0625;
    double hi = lo;
    while (H(hi) < u && hi < 1e250) hi *= 4.0;
    double la = std::log(lo), lb = std::log(hi);
    for (int it = 0; it < 60 && lb - la > 1e-13; ++it) {
      const double lm = 0.5 * (la + lb);
      (H(std::exp(lm)) < u ? la : lb) = lm;
    }
    warm = std::exp(0.5 * (la + lb));
    vals[i] = warm;
  }
  return vals;
}

// Tensor expectation of Q(arg(metric)) over independent per-dim quantile maps.
// kind: 0 -> metric += I^2 (OC); 1 -> metric += I (EGC/MISO);
//       2 -> MIMO rows: within a row accumulate sum, at row end add sum^2.
struct TensorProblem {
  std::vector<const std::vector<double>*> nodes;  // per dim
  const quadrature::PanelRule* rule;
  int m_tx = 1;  // for MIMO row grouping (kind 2)
  int kind = 0;
  double scale = 1.0;      // arg = sqrt(scale * metric) [kind 0,2] or scale * metric [kind 1]
  double divisor = 1.0;    // final arg multiplier 1/divisor
};

double tensor_recurse(const TensorProblem& p, int dim, double wgt, double metric, double rowsum) {
  const auto& I = *p.nodes[dim];
  const auto& w = p.rule->w;
  const int dims = static_cast<int>(p.nodes.size());
  const bool last = dim == dims - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < I.size(); ++k) {
    double metric_k = metric, rowsum_k = rowsum;
    if (p.kind == 0)
      metric_k += I[k] * I[k];
    else if (p.kind == 1)
      metric_k += I[k];
    else {
      rowsum_k += I[k];
      if ((dim + 1) % p.m_tx == 0) {
        metric_k += rowsum_k * rowsum_k;
        rowsum_k = 0.0;
      }
    }
    if (last) {
      const double arg = (p.kind == 1) ? p.scale * metric_k / p.divisor
                                       : std::sqrt(p.scale * metric_k) / p.divisor;
      acc += w[k] * specfun::q_function(arg);
    } else {
      // metric only grows below this node, so Q(current) bounds the subtree
      if (p.kind != 1 && p.scale * metric_k / (p.divisor * p.divisor) > kPruneArgSq) {
        acc += w[k] * specfun::q_function(std::sqrt(p.scale * metric_k) / p.divisor);
        continue;
      }
      acc += w[k] * tensor_recurse(p, dim + 1, wgt, metric_k, rowsum_k);
    }
  }
  return acc;
}

double tensor_expectation(const TensorProblem& p) { return tensor_recurse(p, 0, 1.0, 0.0, 0.0); }

// ---- randomized QMC path for dims > 4 ----------------------------------

// Monotone interpolant of log I against logit(u), built from exact quantiles.
class QuantileTable {
 public:
  explicit QuantileTable(const DoubleGGParams& ch) {
    const int n = 2048;
    const double lo = std::log(1e-12 / (1.0 - 1e-12));
    const double hi = std::log((1.0 - 1e-9) / 1e-9);
    x_.resize(n);
    y_.resize(n);
    double warm = 1e-12;
    for (int i = 0; i < n; ++i) {
      x_[i] = lo + (hi - lo) * i / (n - 1);
      const double u = 1.0 / (1.0 + std::exp(-x_[i]));
      warm = solve_quantile(ch, u, warm * 0.5);
      y_[i] = std::log(warm);
    }
  }
  double operator()(double u) const {
    const double uu = std::min(std::max(u, 1e-12), 1.0 - 1e-9);
    const double x = std::log(uu / (1.0 - uu));
    const double t = (x - x_.front()) / (x_[1] - x_[0]);
    const int i = std::min(std::max(static_cast<int>(t), 0), static_cast<int>(x_.size()) - 2);
    const double f = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return std::exp(y_[i] + (y_[i + 1] - y_[i]) * f);
  }

 private:
  std::vector<double> x_, y_;
};

const QuantileTable& table_for(const DoubleGGParams& ch) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<QuantileTable>> cache;
  std::lock_guard lock(mu);
  const std::string key = channel_key(ch);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<QuantileTable>(ch)).first;
  return *it->second;
}

double qmc_expectation(const LinkConfig& cfg, double snr) {
  const int dims = cfg.m_tx * cfg.n_rx;
  if (dims > rng::SobolSequence::kMaxDims)
    throw capability_error("ber quadrature: more than 18 fading dimensions");
  std::vector<const QuantileTable*> tables;
  tables.reserve(dims);
  for (const auto& ch : cfg.channels) tables.push_back(&table_for(ch));

  const long points = 1L << 20;
  const int randomizations = 16;
  std::vector<double> means(randomizations);
  std::vector<double> irr(dims);
  std::vector<std::uint32_t> raw(dims), shift(dims);
  for (int r = 0; r < randomizations; ++r) {
    auto shift_rng = rng::CounterRng::substream(0x51CB0Cull, r);
    for (int d = 0; d < dims; ++d) shift[d] = static_cast<std::uint32_t>(shift_rng.next_u64());
    rng::SobolSequence seq(dims);
    double acc = 0.0;
    for (long i = 0; i < points; ++i) {
      seq.next_raw(raw.data());
      for (int d = 0; d < dims; ++d) {
        const double u = (static_cast<double>(raw[d] ^ shift[d]) + 0.5) * 0x1.0p-32;
        irr[d] = (*tables[d])(u);
      }
      acc += conditional_bep(cfg, irr, snr);
    }
    means[r] = acc / points;
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  return mean / randomizations;
}

TensorProblem make_problem(std::span<const DoubleGGParams> chs, int kind, double scale,
                           double divisor, int m_tx, const QuadSpec& spec) {
  TensorProblem p;
  p.rule = &rule_for(spec);
  for (const auto& ch : chs) p.nodes.push_back(&quantiles_for(ch, spec));
  p.kind = kind;
  p.scale = scale;
  p.divisor = divisor;
  p.m_tx = m_tx;
  return p;
}

}  // namespace

double ber_simo_oc(std::span<const DoubleGGParams> chs, double snr) {
  const int n = static_cast<int>(chs.size());
  if (n < 1) throw std::invalid_argument("ber_simo_oc: need at least one channel");
  if (!(snr > 0.0)) throw std::domain_error("ber: snr must be > 0");
  if (n <= 4) {
    const auto p = make_problem(chs, 0, snr / (2.0 * n), 1.0, 1, default_rule(n));
    return tensor_expectation(p);
  }
  LinkConfig cfg;
  cfg.m_tx = 1;
  cfg.n_rx = n;
  cfg.channels.assign(chs.begin(), chs.end());
  cfg.combiner = Combiner::OC;
  return qmc_expectation(cfg, snr);
}

double ber_siso(const channel::DoubleGGParams& ch, double snr) {
  return ber_simo_oc(std::span<const DoubleGGParams>(&ch, 1), snr);
}

namespace {
double equal_gain_sum(std::span<const DoubleGGParams> chs, double snr) {
  const int k = static_cast<int>(chs.size());
  if (k < 1) throw std::invalid_argument("equal-gain: need at least one channel");
  if (!(snr > 0.0)) throw std::domain_error("ber: snr must be > 0");
  if (k <= 4) {
    const auto p = make_problem(chs, 1, std::sqrt(snr) / (k * M_SQRT2), 1.0, 1, default_rule(k));
    return tensor_expectation(p);
  }
  LinkConfig cfg;
  cfg.m_tx = 1;
  cfg.n_rx = k;
  cfg.channels.assign(chs.begin(), chs.end());
  cfg.combiner = Combiner::EGC;
  return qmc_expectation(cfg, snr);
}
}  // namespace

double ber_simo_egc(std::span<const DoubleGGParams> chs, double snr) {
  return equal_gain_sum(chs, snr);
}

double ber_miso(std::span<const DoubleGGParams> chs, double snr) {
  return equal_gain_sum(chs, snr);
}

double ber_simo_sc(std::span<const DoubleGGParams> chs, double snr) {
  const int n = static_cast<int>(chs.size());
  if (n < 1) throw std::invalid_argument("ber_simo_sc: need at least one channel");
  if (!(snr > 0.0)) throw std::domain_error("ber: snr must be > 0");
  const QuadSpec spec = default_rule(1);
  static std::mutex mu;
  static std::map<std::string, std::vector<double>> cache;
  std::string key;
  for (const auto& ch : chs) key += channel_key(ch);
  const std::vector<double>* nodes;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, max_quantiles(chs, spec)).first;
    nodes = &it->second;
  }
  const auto& rule = rule_for(spec);
  const double c = std::sqrt(snr / (2.0 * n));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rule.u.size(); ++i)
    acc += rule.w[i] * specfun::q_function((*nodes)[i] * c);
  return acc;
}

double ber_mimo(const LinkConfig& cfg, double snr) {
  cfg.validate();
  if (!(snr > 0.0)) throw std::domain_error("ber: snr must be > 0");
  const int dims = cfg.m_tx * cfg.n_rx;
  if (dims <= 4) {
    const auto p = make_problem(cfg.channels, 2, snr / 2.0,
                                static_cast<double>(cfg.m_tx) * cfg.n_rx, cfg.m_tx,
                                default_rule(dims));
    return tensor_expectation(p);
  }
  return qmc_expectation(cfg, snr);
}

double conditional_bep(const LinkConfig& cfg, std::span<const double> irradiance, double snr) {
  const int m = cfg.m_tx, n = cfg.n_rx;
  if (m == 1) {
    if (n == 1) return specfun::q_function(irradiance[0] * std::sqrt(0.5 * snr));
    switch (cfg.combiner) {
      case Combiner::OC: {
        double s2 = 0.0;
        for (double v : irradiance) s2 += v * v;
        return specfun::q_function(std::sqrt(snr / (2.0 * n) * s2));
      }
      case Combiner::EGC: {
        double s = 0.0;
        for (double v : irradiance) s += v;
        return specfun::q_function(std::sqrt(snr) / (n * M_SQRT2) * s);
      }
      case Combiner::SC: {
        double mx = 0.0;
        for (double v : irradiance) mx = std::max(mx, v);
        return specfun::q_function(mx * std::sqrt(snr / (2.0 * n)));
      }
    }
  }
  if (n == 1) {
    double s = 0.0;
    for (double v : irradiance) s += v;
    return specfun::q_function(std::sqrt(snr) / (m * M_SQRT2) * s);
  }
  double metric = 0.0;
  for (int rx = 0; rx < n; ++rx) {
    double row = 0.0;
    for (int tx = 0; tx < m; ++tx) row += irradiance[rx * m + tx];
    metric += row * row;
  }
  return specfun::q_function(std::sqrt(0.5 * snr * metric) / (m * n));
}

double lambda_oracle(const channel::DoubleGGParams& ch, int upsilon, int n_apertures,
                     double snr) {
  if (upsilon != 3 && upsilon != 4) throw std::invalid_argument("lambda_oracle: upsilon in {3,4}");
  if (n_apertures < 1) throw std::invalid_argument("lambda_oracle: N >= 1");
  if (!(snr > 0.0)) throw std::domain_error("lambda_oracle: snr must be > 0");
  const double c = snr / (upsilon * static_cast<double>(n_apertures));
  const double hi = solve_quantile(ch, 1.0 - 1e-10, 1.0);
  const double tstar = 1.0 / std::sqrt(c);
  std::vector<double> brk{0.0};
  for (double f : {1e-2, 1e-1, 1.0, 1e1, 1e2})
    if (tstar * f > 1e-14 && tstar * f < hi) brk.push_back(tstar * f);
  brk.push_back(hi);
  std::sort(brk.begin(), brk.end());
  const auto f = [&](double t) { return channel::pdf(ch, t) * std::exp(-c * t * t); };
  auto res = quadrature::integrate_segmented(f, brk, 1e-9, 1e-300);
  // decay-based tail extension beyond the 1 - 1e-10 quantile
  double a = hi, total = res.value;
  for (int j = 0; j < 40; ++j) {
    const auto seg = quadrature::integrate(f, a, 2.0 * a, 1e-6, 1e-16 * std::abs(total));
    total += seg.value;
    a *= 2.0;
    if (std::abs(seg.value) < 1e-13 * std::abs(total)) break;
  }
  return total;
}

double oc_refinement_delta(std::span<const DoubleGGParams> chs, double snr) {
  const int n = static_cast<int>(chs.size());
  if (n > 4) return 0.0;
  const QuadSpec base = default_rule(n);
  const QuadSpec fine{base.levels_lo + 4, base.levels_hi + 2, base.order + 4};
  const auto p0 = make_problem(chs, 0, snr / (2.0 * n), 1.0, 1, base);
  const auto p1 = make_problem(chs, 0, snr / (2.0 * n), 1.0, 1, fine);
  const double v0 = tensor_expectation(p0);
  const double v1 = tensor_expectation(p1);
  return std::abs(v1 - v0) / std::max(std::abs(v1), kBerFloor);
}

const std::vector<double>& quantile_nodes(const channel::DoubleGGParams& ch, int dims) {
  return quantiles_for(ch, default_rule(dims));
}

}  // namespace fso::ber_numeric
