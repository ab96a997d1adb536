#include "fscn/specfun.hpp"

#include <algorithm>
#include <cmath>

#include "fscn/quadrature.hpp"

namespace fscn {

std::pair<SignedLog, double> SignedLogSum::reduce() const {
  if (terms_.empty()) return {SignedLog::zero(), 0.0};
  std::vector<SignedLog> sorted(terms_);
  std::sort(sorted.begin(), sorted.end(),
            [](const SignedLog& a, const SignedLog& b) { return a.log_abs > b.log_abs; });
  const double scale = sorted.front().log_abs;
  // Neumaier compensated sum of sign * exp(log_abs - scale)
  double sum = 0.0, comp = 0.0, abs_sum = 0.0;
  for (const auto& t : sorted) {
    const double x = t.sign * std::exp(t.log_abs - scale);
    abs_sum += std::fabs(x);
    const double s = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - s) + x;
    else
      comp += (x - s) + sum;
    sum = s;
  }
  sum += comp;
  SignedLog total = SignedLog::from(sum);
  if (!total.is_zero()) total.log_abs += scale;
  return {total, std::log(abs_sum) + scale};
}

double ln_gamma(double x) {
  if (!(x > 0)) throw std::domain_error("ln_gamma: requires x > 0");
  return std::lgamma(x);
}

double complex_mv_ln_gamma(int m, double a) {
  if (m < 1) throw std::domain_error("complex_mv_ln_gamma: requires m >= 1");
  if (!(a > m - 1))
    throw std::domain_error("complex_mv_ln_gamma: requires a > m - 1");
  constexpr double kLnPi = 1.1447298858494001741434273513531;
  double s = 0.5 * m * (m - 1) * kLnPi;
  for (int j = 1; j <= m; ++j) s += std::lgamma(a - j + 1);
  return s;
}

SignedLog pochhammer_ln(double a, long k) {
  if (k < 0) throw std::domain_error("pochhammer_ln: requires k >= 0");
  SignedLog r = SignedLog::one();
  for (long i = 0; i < k; ++i) {
    const double f = a + static_cast<double>(i);
    if (f == 0.0) return SignedLog::zero();
    r *= SignedLog::from(f);
  }
  return r;
}

double ln_beta(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw std::domain_error("ln_beta: requires a, b > 0");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

bool nonpositive_integer(double x, long* n) {
  const double r = std::round(x);
  if (r <= 0 && std::fabs(x - r) < 1e-12) {
    *n = static_cast<long>(r);
    return true;
  }
  return false;
}

// Direct series sum of 2F1 for |z| < 1; stops when two consecutive terms are
// below the mixed tolerance (guards alternating-term false convergence).
double series_2f1(double a, double b, double c, double z, const AccuracyBudget& budget) {
  double term = 1.0, sum = 1.0;
  bool prev_small = false;
  for (int k = 0; k < budget.max_terms; ++k) {
    const double ck = c + k;
    if (ck == 0.0)
      throw std::domain_error("gauss_2f1: c is a nonpositive integer reached before termination");
    term *= (a + k) * (b + k) / (ck * (k + 1.0)) * z;
    sum += term;
    const bool small = std::fabs(term) < budget.abs_tol + budget.rel_tol * std::fabs(sum);
    if (small && prev_small) return sum;
    prev_small = small;
  }
  throw NonConvergenceError("gauss_2f1: series did not converge within max_terms");
}

// Terminating case: a (or b) is a nonpositive integer; the polynomial has
// N+1 terms and is valid for any z.
double terminating_2f1(double a, double b, double c, double z, long N) {
  double term = 1.0, sum = 1.0;
  for (long k = 0; k < N; ++k) {
    const double ck = c + k;
    if (ck == 0.0)
      throw std::domain_error("gauss_2f1: c pole inside terminating series");
    term *= (a + k) * (b + k) / (ck * (k + 1.0)) * z;
    sum += term;
  }
  return sum;
}

// Integrates exp(ln_f(v)) over (0, vmax) after normalizing by the sampled
// peak; keeps tiny or huge integrands in range so the error control works in
// relative terms. Returns log of the integral.
double log_integrate_peaked(const std::function<double(double)>& ln_f, double vmax,
                            const std::vector<double>& inner_pts,
                            const AccuracyBudget& budget) {
  std::vector<double> pts = {0.0};
  for (double s : {1e-14, 1e-11, 1e-8, 1e-5, 1e-3, 1e-2, 0.1, 0.3, 0.6, 0.9})
    pts.push_back(s * vmax);
  for (double s : inner_pts)
    if (s > 1e-300 && s < vmax) pts.push_back(s);
  pts.push_back(vmax);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double peak = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    peak = std::max(peak, ln_f(0.5 * (pts[i] + pts[i + 1])));
  if (!std::isfinite(peak)) peak = 0.0;
  auto g = [&](double v) {
    if (v <= 0.0 || v >= vmax) return 0.0;
    const double h = ln_f(v) - peak;
    return h < -745.0 ? 0.0 : std::exp(h);
  };
  const QuadResult q = integrate_adaptive(g, pts, budget);
  if (!(q.value > 0.0))
    throw NonConvergenceError("log_integrate_peaked: integral not positive");
  return peak + std::log(q.value);
}

// log of int_0^1 u^{pa} (1-u)^{pb} exp(g(u)) du with pa, pb > -1. The smooth
// factor is supplied twice: g_of_u(u) near the left end and g_of_1mu(s) with
// s = 1-u near the right end (keeps log arguments accurate at both ends).
// Splits at 1/2 and applies power substitutions u = v^p, 1-u = w^q so the
// endpoint behavior is polynomial and the error estimates stay honest.
double log_beta_weighted_integral(double pa, double pb,
                                  const std::function<double(double)>& g_of_u,
                                  const std::function<double(double)>& g_of_1mu,
                                  std::initializer_list<double> u_layers,
                                  const AccuracyBudget& budget) {
  const int p = pa + 1.0 >= 2.0 ? 1 : static_cast<int>(std::ceil(2.0 / (pa + 1.0)));
  const int q = pb + 1.0 >= 2.0 ? 1 : static_cast<int>(std::ceil(2.0 / (pb + 1.0)));

  // left piece: u = v^p over v in (0, (1/2)^{1/p})
  const double vmax = std::pow(0.5, 1.0 / p);
  auto ln_left = [&, p](double v) {
    const double u = std::pow(v, p);
    return (pa * p + p - 1) * std::log(v) + pb * std::log1p(-u) + g_of_u(u) +
           std::log(static_cast<double>(p));
  };
  // right piece: 1-u = w^q over w in (0, (1/2)^{1/q})
  const double wmax = std::pow(0.5, 1.0 / q);
  auto ln_right = [&, q](double w) {
    const double s = std::pow(w, q);  // s = 1-u
    return (pb * q + q - 1) * std::log(w) + pa * std::log1p(-s) + g_of_1mu(s) +
           std::log(static_cast<double>(q));
  };

  std::vector<double> left_pts, right_pts;
  for (double u0 : u_layers) {
    for (double f : {0.125, 1.0, 8.0}) {
      const double u = u0 * f;
      if (u > 0.0 && u < 0.5) left_pts.push_back(std::pow(u, 1.0 / p));
      const double s = 1.0 - u;  // layer measured from the right end
      if (u > 0.5 && u < 1.0) right_pts.push_back(std::pow(s, 1.0 / q));
    }
  }
  const double ll = log_integrate_peaked(ln_left, vmax, left_pts, budget);
  const double lr = log_integrate_peaked(ln_right, wmax, right_pts, budget);
  const double hi = std::max(ll, lr), lo = std::min(ll, lr);
  return hi + std::log1p(std::exp(lo - hi));
}

// Euler integral: 2F1(a,b;c;z) = [1/B(b,c-b)] int_0^1 u^{b-1}(1-u)^{c-b-1}(1-zu)^{-a} du,
// valid for c > b > 0 and z < 1.
double euler_2f1(double a, double b, double c, double z, const AccuracyBudget& budget) {
  const double ln_b = ln_beta(b, c - b);
  auto g_u = [=](double u) { return -a * std::log1p(-z * u); };
  auto g_s = [=](double s) { return -a * std::log((1.0 - z) + z * s); };
  const double lv = log_beta_weighted_integral(b - 1, c - b - 1, g_u, g_s,
                                               {1.0 / (1.0 + std::fabs(z))}, budget);
  return std::exp(lv - ln_b);
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z, const AccuracyBudget& budget) {
  budget.validate();
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;

  long na = 0, nb = 0;
  const bool ta = nonpositive_integer(a, &na);
  const bool tb = nonpositive_integer(b, &nb);
  if (ta || tb) {
    long N = ta && tb ? std::min(-na, -nb) : (ta ? -na : -nb);
    return terminating_2f1(a, b, c, z, N);
  }

  long nc = 0;
  if (nonpositive_integer(c, &nc))
    throw std::domain_error("gauss_2f1: c is a nonpositive integer and the series does not terminate");
  if (z >= 1.0)
    throw std::domain_error("gauss_2f1: requires z < 1 for non-terminating series");

  if (z > 0.0) {
    if (z <= 0.7) return series_2f1(a, b, c, z, budget);
    if (c > b && b > 0) return euler_2f1(a, b, c, z, budget);
    if (c > a && a > 0) return euler_2f1(b, a, c, z, budget);
    return series_2f1(a, b, c, z, budget);  // slow but correct; may throw
  }

  // z < 0: Pfaff transformation onto w = z/(z-1) in (0,1). Transforming away
  // the larger of a, b gives the faster-decaying transformed series.
  const double w = z / (z - 1.0);
  const double la = std::log1p(-z);  // ln(1-z) > 0
  double pa, pb, prefactor_exp;
  if (a >= b) {
    pa = c - a, pb = b, prefactor_exp = -b * la;   // (1-z)^{-b} F(c-a, b; c; w)
  } else {
    pa = a, pb = c - b, prefactor_exp = -a * la;   // (1-z)^{-a} F(a, c-b; c; w)
  }
  if (w <= 0.98) {
    long nn = 0;
    double s;
    if (nonpositive_integer(pa, &nn) || nonpositive_integer(pb, &nn))
      s = terminating_2f1(pa, pb, c, w, -nn);
    else
      s = series_2f1(pa, pb, c, w, budget);
    return std::exp(prefactor_exp) * s;
  }
  // Extreme |z|: the transformed series needs ~1/(1-w) terms, use the Euler
  // integral on the original arguments instead.
  if (c > b && b > 0) return euler_2f1(a, b, c, z, budget);
  if (c > a && a > 0) return euler_2f1(b, a, c, z, budget);
  return std::exp(prefactor_exp) * series_2f1(pa, pb, c, w, budget);
}

namespace {

// Row-ordered double series: F1 = sum_r [x^r (a)_r (b1)_r / ((c)_r r!)] 2F1(a+r, b2; c+r; y).
// Requires |x| < 1; the inner 2F1 handles any y < 1 through its own transforms.
double appell_series(double a, double b1, double b2, double c, double x, double y,
                     const AccuracyBudget& budget) {
  double row_factor = 1.0, sum = 0.0;
  bool prev_small = false;
  for (int r = 0; r < budget.max_terms; ++r) {
    const double row = row_factor * gauss_2f1(a + r, b2, c + r, y, budget);
    sum += row;
    const bool small = std::fabs(row) < budget.abs_tol + budget.rel_tol * std::fabs(sum);
    if (small && prev_small) return sum;
    prev_small = small;
    row_factor *= (a + r) * (b1 + r) / ((c + r) * (r + 1.0)) * x;
    if (row_factor == 0.0) return sum;  // terminating b1 (or a): series is complete
  }
  throw NonConvergenceError("appell_f1: series did not converge within max_terms");
}

bool appell_integrand_singular(double x, double b) {
  // (1-ux)^{-b} misbehaves inside (0,1) iff x >= 1, unless b is a nonpositive
  // integer (the factor is then a polynomial).
  if (x < 1.0) return false;
  long n = 0;
  return !nonpositive_integer(b, &n);
}

double appell_euler(double a, double b1, double b2, double c, double x, double y,
                    const AccuracyBudget& budget) {
  const double ln_b = ln_beta(a, c - a);
  auto g_u = [=](double u) {
    return -b1 * std::log1p(-x * u) - b2 * std::log1p(-y * u);
  };
  auto g_s = [=](double s) {
    return -b1 * std::log((1.0 - x) + x * s) - b2 * std::log((1.0 - y) + y * s);
  };
  const double lv = log_beta_weighted_integral(
      a - 1, c - a - 1, g_u, g_s,
      {1.0 / (1.0 + std::fabs(x)), 1.0 / (1.0 + std::fabs(y))}, budget);
  return std::exp(lv - ln_b);
}

}  // namespace

double appell_f1_series_path(double a, double b1, double b2, double c, double x,
                             double y, const AccuracyBudget& budget) {
  budget.validate();
  if (std::fabs(x) >= 1.0 && std::fabs(y) >= 1.0)
    throw std::domain_error("appell_f1_series_path: needs min(|x|,|y|) < 1");
  return std::fabs(x) <= std::fabs(y) ? appell_series(a, b1, b2, c, x, y, budget)
                                      : appell_series(a, b2, b1, c, y, x, budget);
}

double appell_f1_integral_path(double a, double b1, double b2, double c, double x,
                               double y, const AccuracyBudget& budget) {
  budget.validate();
  if (!(c > a && a > 0))
    throw std::domain_error("appell_f1_integral_path: requires c > a > 0");
  if (appell_integrand_singular(x, b1) || appell_integrand_singular(y, b2))
    throw NotEvaluableError("appell_f1_integral_path: integrand singular inside (0,1)");
  return appell_euler(a, b1, b2, c, x, y, budget);
}

double appell_f1(double a, double b1, double b2, double c, double x, double y,
                 const AccuracyBudget& budget) {
  budget.validate();
  // reductions to 2F1
  if (x == 0.0 && y == 0.0) return 1.0;
  if (b1 == 0.0 || x == 0.0) return gauss_2f1(a, b2, c, y, budget);
  if (b2 == 0.0 || y == 0.0) return gauss_2f1(a, b1, c, x, budget);
  if (x == y) return gauss_2f1(a, b1 + b2, c, x, budget);

  const double ax = std::fabs(x), ay = std::fabs(y);
  if (std::max(ax, ay) <= 0.7)
    return ax <= ay ? appell_series(a, b1, b2, c, x, y, budget)
                    : appell_series(a, b2, b1, c, y, x, budget);

  const bool singular = appell_integrand_singular(x, b1) || appell_integrand_singular(y, b2);
  if (!singular && c > a && a > 0 && x < 1.0 && y < 1.0)
    return appell_euler(a, b1, b2, c, x, y, budget);

  // Rescue: F1(a;b1,b2;c;x,y) = (1-x)^{-b1} (1-y)^{-b2} F1(c-a;b1,b2;c; x/(x-1), y/(y-1)),
  // which maps negative arguments into (0,1).
  if (x < 1.0 && y < 1.0) {
    const double xt = x / (x - 1.0), yt = y / (y - 1.0);
    if (std::max(std::fabs(xt), std::fabs(yt)) <= 0.99) {
      const double pref = std::exp(-b1 * std::log1p(-x) - b2 * std::log1p(-y));
      const double at = c - a;
      if (std::max(std::fabs(xt), std::fabs(yt)) <= 0.7)
        return pref * (std::fabs(xt) <= std::fabs(yt)
                           ? appell_series(at, b1, b2, c, xt, yt, budget)
                           : appell_series(at, b2, b1, c, yt, xt, budget));
      if (c > at && at > 0)
        return pref * appell_euler(at, b1, b2, c, xt, yt, budget);
    }
  }
  throw NotEvaluableError(
      "appell_f1: no evaluation path for a=" + std::to_string(a) +
      " b1=" + std::to_string(b1) + " b2=" + std::to_string(b2) +
      " c=" + std::to_string(c) + " x=" + std::to_string(x) +
      " y=" + std::to_string(y) +
      (singular ? " (integrand singular inside (0,1))" : " (parameters outside Euler domain)"));
}

}  // namespace fscn
