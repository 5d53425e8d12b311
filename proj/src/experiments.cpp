#include "thetacf/experiments.hpp"

#include "thetacf/errors.hpp"
#include "thetacf/expansion.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <exception>
#include <mutex>
#include <thread>

namespace thetacf {

namespace {

constexpr std::size_t kMinGkSamples = 10000;
constexpr std::size_t kRescaleEvery = 50;
constexpr int kMaxRejections = 1000000;

// A float orbit that lands exactly on 0 has no further digits; continue
// from a fresh γ_θ point drawn from the same stream.
RealStep generic_step(Real& x, CounterRng& rng, const ThetaContext& ctx) {
  while (x == 0) x = gamma_inverse_cdf(rng.uniform(), ctx);
  return gauss_step(x, ctx);
}

Real least_squares_rate(const std::vector<Real>& values, std::size_t first, std::size_t last) {
  Real sn = 0, sy = 0, snn = 0, sny = 0;
  const Real count = Real(last - first + 1);
  for (std::size_t n = first; n <= last; ++n) {
    const Real nn = Real(n);
    const Real y = log(values[n]);
    sn += nn;
    sy += y;
    snn += nn * nn;
    sny += nn * y;
  }
  return exp((count * sny - sn * sy) / (count * snn - sn * sn));
}

Real median_of(std::vector<Real> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, count));
  if (workers == 1) {
    body(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void require_samplable(const MeasureKind& mu) {
  if (const auto* c = std::get_if<CustomDensity>(&mu)) {
    if (c->density.size() < 2) throw ValidationError("custom density needs a grid");
    if (c->density.min_value() < 0) throw ValidationError("custom density takes negative values");
    if (!(c->density.max_value() > 0)) throw ValidationError("custom density has no mass");
  }
}

Real sample_measure(const MeasureKind& mu, CounterRng& rng, const ThetaContext& ctx) {
  struct Visitor {
    CounterRng& rng;
    const ThetaContext& ctx;
    Real operator()(const LebesgueMeasure&) const { return rng.uniform() * ctx.theta_r(); }
    Real operator()(const GammaMeasure&) const { return gamma_inverse_cdf(rng.uniform(), ctx); }
    Real operator()(const GammaAMeasure& g) const { return gamma_a_inverse_cdf(rng.uniform(), g.a, ctx); }
    Real operator()(const CustomDensity& c) const {
      const Real envelope = c.density.max_value();
      for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const Real x = rng.uniform() * ctx.theta_r();
        if (rng.uniform() * envelope < c.density.eval(x)) return x;
      }
      throw NumericError("rejection sampling of custom density did not terminate");
    }
  };
  return std::visit(Visitor{rng, ctx}, mu);
}

std::vector<Real> default_x_grid(std::size_t count, const ThetaContext& ctx) {
  if (count < 1) throw ValidationError("x grid needs at least one point");
  std::vector<Real> xs(count);
  for (std::size_t j = 0; j < count; ++j) xs[j] = ctx.theta_r() * Real(j + 1) / Real(count);
  xs.back() = ctx.theta_r();
  return xs;
}

GkCurve gk_error_curve(const MeasureKind& mu, std::size_t n_max, std::size_t samples, const std::vector<Real>& x_grid,
                       std::uint64_t seed, const ThetaContext& ctx, unsigned threads) {
  if (samples < kMinGkSamples) throw ValidationError("gk_error_curve needs at least 10000 samples");
  if (x_grid.empty()) throw ValidationError("empty x grid");
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    if (!(x_grid[j] > 0) || x_grid[j] > ctx.theta_r()) throw DomainError("x grid point outside (0, theta]");
    if (j > 0 && !(x_grid[j] > x_grid[j - 1])) throw ValidationError("x grid must be strictly increasing");
  }
  require_samplable(mu);

  const std::size_t g = x_grid.size();
  const bool closes_at_theta = x_grid.back() == ctx.theta_r();
  std::vector<std::vector<std::uint64_t>> hist(n_max + 1, std::vector<std::uint64_t>(g + 1, 0));
  std::mutex merge;
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::vector<std::uint64_t>> local(n_max + 1, std::vector<std::uint64_t>(g + 1, 0));
    for (std::size_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      Real x = sample_measure(mu, rng, ctx);
      for (std::size_t n = 0; n <= n_max; ++n) {
        std::size_t idx = static_cast<std::size_t>(std::upper_bound(x_grid.begin(), x_grid.end(), x) - x_grid.begin());
        // T_θⁿ(x₀) ≤ θ always, so the point x = θ counts every sample.
        if (idx == g && closes_at_theta) idx = g - 1;
        ++local[n][idx];
        if (n < n_max) x = gauss_map(x, ctx);
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    for (std::size_t n = 0; n <= n_max; ++n) {
      for (std::size_t j = 0; j <= g; ++j) hist[n][j] += local[n][j];
    }
  });

  GkCurve out;
  out.xs = x_grid;
  out.samples = samples;
  out.limit.resize(g);
  for (std::size_t j = 0; j < g; ++j) out.limit[j] = gamma_cdf(x_grid[j], ctx);
  const Real total = Real(samples);
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<Real> row(g);
    std::uint64_t running = 0;
    Real worst = 0, sigma = 0;
    for (std::size_t j = 0; j < g; ++j) {
      running += hist[n][j];
      row[j] = Real(running) / total;
      worst = std::max(worst, Real(fabs(row[j] - out.limit[j])));
      sigma = std::max(sigma, Real(sqrt(out.limit[j] * (1 - out.limit[j]) / total)));
    }
    out.empirical.push_back(std::move(row));
    out.sup_error.push_back(worst);
    out.mc_sigma.push_back(sigma);
  }
  // Fit the geometric regime: n ≥ 1 while the error stands clear of noise.
  std::size_t last = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (out.sup_error[n] > 5 * out.mc_sigma[n] && out.sup_error[n] > 0) {
      last = n;
    } else {
      break;
    }
  }
  if (last >= 2) {
    out.fit_first = 1;
    out.fit_last = last;
    out.q_hat = least_squares_rate(out.sup_error, 1, last);
  }
  return out;
}

Real log_denominator(const std::vector<std::int64_t>& digits, const ThetaContext& ctx) {
  Real q_prev = 0, q = 1, log_acc = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] < ctx.m()) throw DomainError("digit below m");
    const Real next = Real(digits[k]) * ctx.theta_r() * q + q_prev;
    q_prev = q;
    q = next;
    if ((k + 1) % kRescaleEvery == 0) {
      log_acc += log(q);
      q_prev /= q;
      q = 1;
    }
  }
  return log_acc + log(q);
}

Real levy_integral(const ThetaContext& ctx) {
  const Real theta = ctx.theta_r();
  boost::math::quadrature::tanh_sinh<Real> integrator;
  auto f = [&theta](const Real& x) { return x > 0 ? Real(theta * log(x) / (1 + x * theta)) : Real(0); };
  return integrator.integrate(f, Real(0), theta);
}

LevyResult levy_beta(std::size_t samples, std::size_t n, std::uint64_t seed, const ThetaContext& ctx,
                     unsigned threads) {
  if (n < 100) throw ValidationError("levy_beta needs n >= 100");
  if (samples < 100) throw ValidationError("levy_beta needs at least 100 samples");
  LevyResult out;
  out.n = n;
  out.per_sample.assign(samples, Real(0));
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      Real x = gamma_inverse_cdf(rng.uniform(), ctx);
      Real q_prev = 0, q = 1, log_acc = 0;
      for (std::size_t step = 1; step <= n; ++step) {
        const RealStep st = generic_step(x, rng, ctx);
        const Real next = st.digit * ctx.theta_r() * q + q_prev;
        q_prev = q;
        q = next;
        x = st.next;
        if (step % kRescaleEvery == 0) {
          log_acc += log(q);
          q_prev /= q;
          q = 1;
        }
      }
      if (!isfinite(q) || !isfinite(log_acc)) throw NumericError("denominator recurrence overflowed");
      out.per_sample[k] = (log_acc + log(q)) / Real(n);
    }
  });
  Real sum = 0;
  for (const auto& v : out.per_sample) sum += v;
  out.beta_hat = sum / Real(samples);
  Real sq = 0;
  for (const auto& v : out.per_sample) sq += (v - out.beta_hat) * (v - out.beta_hat);
  out.stderr_beta = sqrt(sq / Real(samples - 1) / Real(samples));
  const Real integral = levy_integral(ctx);
  const Real theta = ctx.theta_r();
  out.printed_integral = integral / (1 + theta * theta);
  out.corrected_integral = -integral / ctx.log_norm_r();
  return out;
}

KhinchinTable khinchin_mean(std::size_t samples, const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                            const ThetaContext& ctx, unsigned threads) {
  if (samples < 1) throw ValidationError("khinchin_mean needs at least one sample");
  if (checkpoints.empty()) throw ValidationError("khinchin_mean needs checkpoints");
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    if (checkpoints[c] < 1 || (c > 0 && checkpoints[c] <= checkpoints[c - 1])) {
      throw ValidationError("checkpoints must be positive and strictly increasing");
    }
  }
  const std::size_t nc = checkpoints.size();
  std::vector<Real> averages(samples * nc);
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      Real x = gamma_inverse_cdf(rng.uniform(), ctx);
      Real sum = 0;
      std::size_t next_cp = 0;
      for (std::size_t step = 1; next_cp < nc; ++step) {
        const RealStep st = generic_step(x, rng, ctx);
        sum += st.digit;
        x = st.next;
        if (step == checkpoints[next_cp]) {
          averages[k * nc + next_cp] = sum / Real(step);
          ++next_cp;
        }
      }
    }
  });
  KhinchinTable out;
  out.checkpoints = checkpoints;
  out.samples = samples;
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<Real> column(samples);
    Real sum = 0;
    for (std::size_t k = 0; k < samples; ++k) {
      column[k] = averages[k * nc + c];
      sum += column[k];
    }
    out.mean.push_back(sum / Real(samples));
    out.median.push_back(median_of(std::move(column)));
  }
  return out;
}

DigitFrequency digit_frequency(std::size_t samples, std::size_t n, std::uint64_t seed, const ThetaContext& ctx,
                               std::size_t rows, unsigned threads) {
  if (samples < kMinGkSamples) throw ValidationError("digit_frequency needs at least 10000 samples");
  if (n < 1) throw ValidationError("digit index n must be at least 1");
  if (rows < 1) throw ValidationError("need at least one table row");
  std::vector<std::uint64_t> first(rows + 1, 0), nth(rows + 1, 0);
  std::mutex merge;
  const std::int64_t m = ctx.m();
  auto slot = [&](const Real& digit) {
    const Real offset = digit - Real(m);
    return offset >= Real(rows) ? rows : static_cast<std::size_t>(offset.convert_to<long long>());
  };
  parallel_for(samples, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> lf(rows + 1, 0), ln(rows + 1, 0);
    for (std::size_t k = begin; k < end; ++k) {
      CounterRng rng(seed, k);
      Real x = rng.uniform() * ctx.theta_r();
      while (x == 0) x = rng.uniform() * ctx.theta_r();
      for (std::size_t step = 1; step <= n; ++step) {
        const RealStep st = generic_step(x, rng, ctx);
        if (step == 1) ++lf[slot(st.digit)];
        if (step == n) ++ln[slot(st.digit)];
        x = st.next;
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    for (std::size_t r = 0; r <= rows; ++r) {
      first[r] += lf[r];
      nth[r] += ln[r];
    }
  });
  DigitFrequency out;
  out.samples = samples;
  out.n = n;
  const Real total = Real(samples);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::int64_t i = m + static_cast<std::int64_t>(r);
    out.digits.push_back(i);
    out.first.push_back(Real(first[r]) / total);
    out.nth.push_back(Real(nth[r]) / total);
    out.first_law.push_back(Real(m) / (Real(i) * Real(i + 1)));
    out.stationary_law.push_back(stationary_digit_law(i, ctx));
  }
  out.first_tail = Real(first[rows]) / total;
  out.nth_tail = Real(nth[rows]) / total;
  return out;
}

Real ks_critical_01(std::size_t n) { return Real("1.62762") / sqrt(Real(n)); }

ExperimentReport gk_report(const GkCurve& curve) {
  ExperimentReport r;
  r.columns = {"n", "x", "empirical", "limit", "error"};
  for (std::size_t n = 0; n < curve.empirical.size(); ++n) {
    for (std::size_t j = 0; j < curve.xs.size(); ++j) {
      r.rows.push_back({static_cast<std::int64_t>(n), curve.xs[j], curve.empirical[n][j], curve.limit[j],
                        curve.empirical[n][j] - curve.limit[j]});
    }
  }
  r.add_summary("q_hat", curve.q_hat);
  r.add_summary("fit_first", std::to_string(curve.fit_first));
  r.add_summary("fit_last", std::to_string(curve.fit_last));
  for (std::size_t n = 0; n < curve.sup_error.size(); ++n) {
    r.add_summary("sup_error." + std::to_string(n), curve.sup_error[n]);
    r.add_summary("mc_sigma." + std::to_string(n), curve.mc_sigma[n]);
  }
  return r;
}

ExperimentReport levy_report(const LevyResult& result) {
  ExperimentReport r;
  r.columns = {"sample", "beta"};
  for (std::size_t k = 0; k < result.per_sample.size(); ++k) {
    r.rows.push_back({static_cast<std::int64_t>(k), result.per_sample[k]});
  }
  r.add_summary("beta_hat", result.beta_hat);
  r.add_summary("stderr", result.stderr_beta);
  r.add_summary("integral_as_printed", result.printed_integral);
  r.add_summary("integral_sign_log_normalized", result.corrected_integral);
  r.add_summary("integral_note", "printed form is negative and uses 1+theta^2 in place of log(1+theta^2); not asserted");
  return r;
}

ExperimentReport khinchin_report(const KhinchinTable& table) {
  ExperimentReport r;
  r.columns = {"n", "mean", "median"};
  for (std::size_t c = 0; c < table.checkpoints.size(); ++c) {
    r.rows.push_back({static_cast<std::int64_t>(table.checkpoints[c]), table.mean[c], table.median[c]});
  }
  return r;
}

ExperimentReport digit_report(const DigitFrequency& freq) {
  ExperimentReport r;
  r.columns = {"i", "first_empirical", "first_law", "nth_empirical", "stationary_law"};
  for (std::size_t k = 0; k < freq.digits.size(); ++k) {
    r.rows.push_back({freq.digits[k], freq.first[k], freq.first_law[k], freq.nth[k], freq.stationary_law[k]});
  }
  r.add_summary("first_tail", freq.first_tail);
  r.add_summary("nth_tail", freq.nth_tail);
  return r;
}

}  // namespace thetacf
