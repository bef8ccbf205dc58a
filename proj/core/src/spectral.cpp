#include "pqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "pqed/units.hpp"

namespace pqed {

namespace {

struct Extremum {
  double t;
  double v;
};

struct EnvelopeFit {
  bool valid = false;
  double sign = 1.0;
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double t) const {
    return valid ? sign * std::exp(intercept + slope * t) : 0.0;
  }
};

// least-squares line through (t, log|v|), keeping the sign of the first point
EnvelopeFit fit_envelope(const std::vector<Extremum>& pts, double floor) {
  std::vector<Extremum> kept;
  for (const auto& p : pts) {
    if (std::abs(p.v) > floor) kept.push_back(p);
  }
  EnvelopeFit fit;
  if (kept.size() < 2) return fit;
  fit.sign = kept.front().v > 0 ? 1.0 : -1.0;
  double st = 0.0, sy = 0.0;
  for (const auto& p : kept) {
    st += p.t;
    sy += std::log(std::abs(p.v));
  }
  const double n = static_cast<double>(kept.size());
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : kept) {
    const double dt = p.t - tbar;
    sxx += dt * dt;
    sxy += dt * (std::log(std::abs(p.v)) - ybar);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * tbar;
  fit.valid = true;
  return fit;
}

}  // namespace

RabiEstimate rabi_frequency(const std::vector<double>& times, const std::vector<double>& values,
                            double floor) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("rabi_frequency: times/values length mismatch");
  }
  RabiEstimate out;
  const std::size_t n = times.size();
  if (n < 8) return out;
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw std::invalid_argument("rabi_frequency: times must increase");

  // local extrema with parabolic refinement of position and value
  std::vector<Extremum> maxima, minima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = values[i - 1], b = values[i], c = values[i + 1];
    std::vector<Extremum>* bucket = nullptr;
    if (b >= a && b > c) bucket = &maxima;
    else if (b <= a && b < c) bucket = &minima;
    if (bucket == nullptr) continue;
    const double denom = a - 2.0 * b + c;
    double d = denom == 0.0 ? 0.0 : 0.5 * (a - c) / denom;
    d = std::clamp(d, -0.5, 0.5);
    bucket->push_back({times[i] + d * dt, b - 0.25 * (a - c) * d});
  }

  std::vector<Extremum> all;
  all.reserve(maxima.size() + minima.size());
  all.insert(all.end(), maxima.begin(), maxima.end());
  all.insert(all.end(), minima.begin(), minima.end());
  std::sort(all.begin(), all.end(), [](const Extremum& x, const Extremum& y) { return x.t < y.t; });
  int swings = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (std::abs(all[i].v - all[i - 1].v) > floor) ++swings;
  }
  out.significant_extrema = swings > 0 ? swings + 1 : 0;
  if (out.significant_extrema < 3) return out;

  const EnvelopeFit emax = fit_envelope(maxima, floor);
  const EnvelopeFit emin = fit_envelope(minima, floor);
  const double t_first = all.front().t;
  const double t_last = all.back().t;
  const double spacing = (t_last - t_first) / std::max<std::size_t>(1, all.size() - 1);
  const double seg_start = std::max(0.0, t_first - 0.5 * spacing);
  const std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(times.begin(), times.end(), seg_start) - times.begin());
  const std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(times.begin(), times.end(), t_last) - times.begin());
  const std::size_t m = hi - lo;
  if (m < 8) return out;

  // midline removal + amplitude normalization, then Hann window
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = times[lo + i];
    const double mid = 0.5 * (emax(t) + emin(t));
    const double amp = std::max(0.5 * (emax(t) - emin(t)), 1e-300);
    y[i] = std::clamp((values[lo + i] - mid) / amp, -2.0, 2.0);
  }
  std::size_t npad = 1;
  while (npad < 16 * m) npad *= 2;
  std::vector<Complex> padded(npad, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                          static_cast<double>(m - 1));
    padded[i] = Complex(y[i] * w, 0.0);
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, padded);

  const std::size_t n_bins = npad / 2 + 1;  // one-sided spectrum
  const double df = 2.0 * M_PI / (static_cast<double>(npad) * dt);
  const double span = times[hi - 1] - times[lo];
  const std::size_t kmin =
      static_cast<std::size_t>(std::ceil(0.75 * 2.0 * M_PI / span / df));
  if (kmin + 2 >= n_bins) return out;
  std::size_t k = kmin;
  double best = -1.0;
  for (std::size_t i = kmin; i + 1 < n_bins; ++i) {
    const double mag = std::abs(spectrum[i]);
    if (mag > best) {
      best = mag;
      k = i;
    }
  }
  const double la = std::log(std::abs(spectrum[k - 1]));
  const double lb = std::log(std::abs(spectrum[k]));
  const double lc = std::log(std::abs(spectrum[k + 1]));
  const double den = la - 2.0 * lb + lc;
  const double d = den == 0.0 ? 0.0 : 0.5 * (la - lc) / den;
  const double omega = df * (static_cast<double>(k) + d);  // rad/fs
  out.overdamped = false;
  out.omega_mev = omega * units::hbar_mev_fs;
  return out;
}

HybridStates hybrid_states_analytic(const NanocavityParams& cav, const EmitterSpec& em, double g) {
  const Complex wc(cav.omega_cav, -cav.kappa_out);
  const Complex we(em.omega_qe, -em.kappa_vib);
  const double r_ratio = cav.mode_volume_re != 0.0 ? cav.mode_volume_im / cav.mode_volume_re : 0.0;
  const Complex mean = 0.5 * (we + wc);
  const Complex half_diff = 0.5 * (we - wc);
  const Complex root = std::sqrt(g * g * Complex(1.0, -r_ratio) + half_diff * half_diff);
  return {mean + root, mean - root};
}

DecayFit fit_exponential_decay(const std::vector<double>& times, const std::vector<double>& values,
                               double t_lo, double t_hi, double floor) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("fit_exponential_decay: length mismatch");
  }
  double st = 0.0, sy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi || values[i] <= floor) continue;
    st += times[i];
    sy += std::log(values[i]);
    ++n;
  }
  DecayFit fit;
  fit.points = n;
  if (n < 2) throw std::invalid_argument("fit_exponential_decay: fewer than 2 usable samples");
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi || values[i] <= floor) continue;
    const double dt = times[i] - tbar;
    sxx += dt * dt;
    sxy += dt * (std::log(values[i]) - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponential_decay: degenerate time window");
  const double slope = sxy / sxx;  // 1/fs of log
  fit.rate_mev = -slope * units::hbar_mev_fs;
  fit.log_intercept = ybar - slope * tbar;
  return fit;
}

}  // namespace pqed
