#include "gsf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gsf/error.hpp"

namespace gsf::quad {

namespace {

// Rule tables. Kronrod abscissae are non-negative, index 0 is the centre and
// the odd indices coincide with the 10-point Gauss nodes.
struct Rule {
  std::array<double, 11> x{};
  std::array<double, 11> wk{};
  std::array<double, 5> wg{};
};

const Rule& rule() {
  static const Rule r = [] {
    Rule t;
    const auto& kx = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
    const auto& kw = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
    const auto& gw = boost::math::quadrature::gauss<double, 10>::weights();
    std::copy(kx.begin(), kx.end(), t.x.begin());
    std::copy(kw.begin(), kw.end(), t.wk.begin());
    std::copy(gw.begin(), gw.end(), t.wg.begin());
    return t;
  }();
  return r;
}

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// QUADPACK-style error estimate (qk21).
Panel gk21(const Integrand& f, double a, double b) {
  const Rule& r = rule();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};
  fv[0] = f(centre);
  for (int i = 1; i <= 10; ++i) {
    const double dx = half * r.x[i];
    fv[2 * i - 1] = f(centre - dx);
    fv[2 * i] = f(centre + dx);
  }
  double resk = r.wk[0] * fv[0];
  double resg = 0.0;
  double resabs = r.wk[0] * std::abs(fv[0]);
  for (int i = 1; i <= 10; ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    resk += r.wk[i] * pair;
    resabs += r.wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 1) resg += r.wg[(i - 1) / 2] * pair;
  }
  const double mean = 0.5 * resk;
  double resasc = r.wk[0] * std::abs(fv[0] - mean);
  for (int i = 1; i <= 10; ++i) {
    resasc += r.wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }
  resk *= half;
  resg *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(err, 50 * eps * resabs);
  if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
  return {a, b, resk, err, resabs};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts) {
  Result out;
  if (a == b) return out;
  std::priority_queue<Panel> heap;
  Panel first = gk21(f, a, b);
  double total = first.value, err = first.error, l1 = first.l1;
  heap.push(first);
  int panels = 1;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto done = [&] {
    if (!std::isfinite(total) || !std::isfinite(err)) return false;
    return err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) || err <= 100 * eps * l1;
  };
  while (!done() && panels < opts.max_panels) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at machine resolution
      heap.push(worst);
      break;
    }
    Panel left = gk21(f, worst.a, mid);
    Panel right = gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to avoid drift from the incremental updates.
  total = err = l1 = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    l1 += heap.top().l1;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  out.l1 = l1;
  out.panels = panels;
  out.converged = done();
  return out;
}

namespace {

constexpr int kTailDecades = 8;

struct Segment {
  double a, b;
};

std::vector<Segment> segments_of(const RangeSpec& range) {
  std::vector<double> cuts;
  cuts.push_back(range.a);
  std::vector<double> bps(range.breakpoints.begin(), range.breakpoints.end());
  if (range.a < 1.0 && range.b > 1.0) bps.push_back(1.0);
  std::sort(bps.begin(), bps.end());
  for (double p : bps) {
    if (std::isfinite(p) && p > cuts.back() * (1 + 1e-12) && p < range.b * (1 - 1e-12) && p > range.a) {
      cuts.push_back(p);
    }
  }
  cuts.push_back(range.b);
  std::vector<Segment> segs;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) segs.push_back({cuts[i], cuts[i + 1]});
  return segs;
}

// Integral over consecutive panels between the cuts.
Result integrate_panels(const Integrand& f, const std::vector<double>& cuts, const Options& opts) {
  Result out;
  std::vector<Result> parts;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    parts.push_back(integrate(f, cuts[i], cuts[i + 1], opts));
    out.value += parts.back().value;
    out.error += parts.back().error;
    out.l1 += parts.back().l1;
    out.panels += parts.back().panels;
  }
  for (const auto& r : parts) {
    out.converged =
        out.converged && (r.converged || r.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value)));
  }
  return out;
}

// Decade cuts of [a, b] when b / a is large.
std::vector<double> decade_cuts(double a, double b) {
  std::vector<double> cuts{a};
  if (a > 0.0 && std::isfinite(b)) {
    for (double c = a * 10.0; c < b * 0.999; c *= 10.0) cuts.push_back(c);
  }
  cuts.push_back(b);
  return cuts;
}

Result integrate_segment(const Integrand& f, const Segment& seg, double exponent, bool is_first, const RangeSpec& range,
                         const Options& opts) {
  if (std::isinf(seg.b)) {
    const double p = seg.a;
    Integrand g = [&f, p](double t) {
      if (t <= 0.0) return 0.0;
      const double v = f(p / t);
      return v == 0.0 ? 0.0 : v * p / (t * t);
    };
    std::vector<double> cuts{0.0};
    for (int i = kTailDecades; i >= 1; --i) cuts.push_back(std::pow(10.0, -i));
    cuts.push_back(1.0);
    return integrate_panels(g, cuts, opts);
  }
  if (is_first && range.a == 0.0 && exponent < 0.0 && exponent > -1.0) {
    const double p = seg.b;
    const double beta = 1.0 / (exponent + 1.0);
    Integrand g = [&f, p, beta](double v) {
      if (v <= 0.0) return 0.0;
      const double s = p * std::pow(v, beta);
      return f(s) * p * beta * std::pow(v, beta - 1.0);
    };
    return integrate(g, 0.0, 1.0, opts);
  }
  return integrate_panels(f, decade_cuts(seg.a, seg.b), opts);
}

bool exceeds(double increment, double reference) {
  return std::abs(increment) > 0.01 * std::abs(reference) || !std::isfinite(increment);
}

}  // namespace

RangeResult integrate_range(const Integrand& f, const RangeSpec& range, const Options& opts) {
  RangeResult out;
  if (!(range.b > range.a)) return out;
  const auto segs = segments_of(range);
  std::vector<Result> parts;
  for (size_t i = 0; i < segs.size(); ++i) {
    parts.push_back(integrate_segment(f, segs[i], range.exponent_at_zero, i == 0, range, opts));
  }
  double value = 0.0, error = 0.0;
  for (const auto& r : parts) {
    value += r.value;
    error += r.error;
  }
  bool all_converged = std::isfinite(value) && std::isfinite(error);
  for (const auto& r : parts) {
    const bool ok = r.converged || r.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    all_converged = all_converged && ok;
  }
  out.value = value;
  out.error = error;

  const bool probe = range.probe_divergence || !all_converged;
  if (probe) {
    Options probe_opts = opts;
    probe_opts.max_panels = std::min(opts.max_panels, 2048);
    if (range.a == 0.0) {
      const double p = segs.front().b;
      const double eps = 1e-12 * std::min(1.0, p);
      double ref = integrate(f, eps, p, probe_opts).value;
      for (size_t i = 1; i < parts.size(); ++i) ref += parts[i].value;
      const double i1 = integrate(f, eps / 2, eps, probe_opts).value;
      const double i2 = integrate(f, eps / 4, eps / 2, probe_opts).value;
      if (exceeds(i1, ref) && exceeds(i2, ref + i1)) {
        out.status = Status::divergent;
        out.diagnostics = "integral diverges at 0 (lower cutoff halving keeps changing the value)";
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
    }
    if (std::isinf(range.b)) {
      const double p = segs.back().a;
      const double big = 1e12 * std::max(1.0, p);
      double ref = 0.0;
      for (size_t i = 0; i + 1 < parts.size(); ++i) ref += parts[i].value;
      Integrand g = [&f, p](double t) {
        const double v = f(p / t);
        return v == 0.0 ? 0.0 : v * p / (t * t);
      };
      ref += integrate(g, p / big, 1.0, probe_opts).value;
      const double i1 = integrate(f, big, 2 * big, probe_opts).value;
      const double i2 = integrate(f, 2 * big, 4 * big, probe_opts).value;
      if (exceeds(i1, ref) && exceeds(i2, ref + i1)) {
        out.status = Status::divergent;
        out.diagnostics = "integral diverges at infinity (upper cutoff doubling keeps changing the value)";
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
    }
  }
  if (!all_converged) {
    std::ostringstream msg;
    msg << "adaptive quadrature did not converge on (" << range.a << ", " << range.b << "): estimate " << value
        << " +- " << error;
    out.status = Status::not_converged;
    out.diagnostics = msg.str();
  }
  return out;
}

double quad_semiinfinite(const Integrand& f, double exponent_at_zero, std::span<const double> breakpoints,
                         const Options& opts) {
  RangeSpec range;
  range.a = 0.0;
  range.b = std::numeric_limits<double>::infinity();
  range.exponent_at_zero = exponent_at_zero;
  range.breakpoints = breakpoints;
  const RangeResult r = integrate_range(f, range, opts);
  if (r.status == Status::divergent) throw DivergenceError("quad_semiinfinite", r.diagnostics);
  if (r.status == Status::not_converged) throw QuadratureError(r.diagnostics);
  return r.value;
}

}  // namespace gsf::quad
