#ifndef FSCN_SPECFUN_HPP
#define FSCN_SPECFUN_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fscn {

/// Tolerance and work-limit bundle shared by all series and quadrature code.
struct AccuracyBudget {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_terms = 100000;
  int max_quad_refinements = 30;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || max_terms < 1 || max_quad_refinements < 1)
      throw std::invalid_argument("AccuracyBudget: tolerances must be positive, caps >= 1");
  }
};

/// A series or quadrature failed to reach the requested tolerance.
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The requested evaluation has no usable path (e.g. an Appell F1 whose Euler
/// integrand is singular inside (0,1) and whose series does not converge).
struct NotEvaluableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Sign/log-magnitude arithmetic. The closed-form c.d.f.s multiply factorials
// that overflow double well before m reaches 20, so every per-term product is
// carried as (sign, log|x|) and only the final compensated sum is exponentiated.
// ---------------------------------------------------------------------------
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;  // -1, 0, +1

  static SignedLog zero() { return {}; }
  static SignedLog one() { return {0.0, 1}; }

  static SignedLog from(double x) {
    if (x == 0.0) return zero();
    return {std::log(std::fabs(x)), x > 0 ? 1 : -1};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool is_zero() const { return sign == 0; }

  SignedLog operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return {log_abs + o.log_abs, sign * o.sign};
  }
  SignedLog& operator*=(const SignedLog& o) { return *this = *this * o; }

  SignedLog operator/(const SignedLog& o) const {
    if (o.sign == 0) throw std::domain_error("SignedLog: division by zero");
    if (sign == 0) return zero();
    return {log_abs - o.log_abs, sign * o.sign};
  }
  SignedLog& operator/=(const SignedLog& o) { return *this = *this / o; }

  /// x^k with integer k (sign handled exactly).
  SignedLog pow_int(long k) const {
    if (sign == 0) return k == 0 ? one() : zero();
    int s = (sign < 0 && (k & 1)) ? -1 : 1;
    return {log_abs * static_cast<double>(k), s};
  }
};

/// Accumulates signed log-space terms and reduces them by compensated
/// summation in descending magnitude order. Also tracks sum(|term|), which
/// feeds cancellation-aware error estimates.
class SignedLogSum {
 public:
  void add(const SignedLog& t) {
    if (t.sign != 0) terms_.push_back(t);
  }
  size_t size() const { return terms_.size(); }

  /// (value, sum of |terms|) both as SignedLog; value uses Neumaier summation.
  std::pair<SignedLog, double> reduce() const;

 private:
  std::vector<SignedLog> terms_;
};

// ---------------------------------------------------------------------------
// Scalar special functions
// ---------------------------------------------------------------------------

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// ln of the complex multivariate gamma function:
/// (m(m-1)/2) ln pi + sum_{j=1..m} ln Gamma(a - j + 1), requires a > m-1.
double complex_mv_ln_gamma(int m, double a);

/// Rising factorial (a)_k as sign/log-magnitude; exact zero when a is a
/// nonpositive integer with |a| < k.
SignedLog pochhammer_ln(double a, long k);

/// ln B(a,b), a,b > 0.
double ln_beta(double a, double b);

/// Gauss hypergeometric 2F1(a,b;c;z) for z < 1. Terminating series are summed
/// exactly; z < 0 is mapped to (0,1) by a Pfaff transformation; arguments the
/// transformed series cannot reach fast are handled by the Euler integral.
double gauss_2f1(double a, double b, double c, double z,
                 const AccuracyBudget& budget = {});

/// Appell F1(a; b1, b2; c; x, y). Series when max(|x|,|y|) <= 0.7, otherwise
/// the one-dimensional Euler integral (requires c > a > 0 and no integrand
/// singularity in (0,1)); a Pfaff-type transform is tried as a rescue before
/// giving up with NotEvaluableError.
double appell_f1(double a, double b1, double b2, double c, double x, double y,
                 const AccuracyBudget& budget = {});

/// The two F1 evaluation paths individually (diagnostic surface; the paths
/// must agree on the overlap region and the identity suite checks that).
double appell_f1_series_path(double a, double b1, double b2, double c, double x,
                             double y, const AccuracyBudget& budget = {});
double appell_f1_integral_path(double a, double b1, double b2, double c, double x,
                               double y, const AccuracyBudget& budget = {});

}  // namespace fscn

#endif
