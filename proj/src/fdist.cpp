#include "fscn/fdist.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace fscn {

const char* to_string(CdfMethod m) {
  switch (m) {
    case CdfMethod::Theorem1: return "Theorem1";
    case CdfMethod::Corollary1: return "Corollary1";
    case CdfMethod::Corollary2: return "Corollary2";
    case CdfMethod::Theorem2: return "Theorem2";
    case CdfMethod::MonteCarlo: return "MonteCarlo";
    case CdfMethod::BruteForceQuadrature: return "BruteForceQuadrature";
  }
  return "?";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double ln_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// ln K_{m,n,p}; the pi powers of the multivariate gamma functions cancel.
double ln_k_mnp(int m, int n, int p) {
  double s = 0.0;
  for (int j = 1; j <= m; ++j) {
    s += ln_factorial(n + p - j);
    s -= ln_factorial(m - j) + ln_factorial(n - j) + ln_factorial(p - j);
  }
  return s;
}

// Integer-argument Pochhammer (a)_k as a double; exact for the small
// determinant entries used here.
double poch_int(long a, long k) {
  double r = 1.0;
  for (long i = 0; i < k; ++i) r *= static_cast<double>(a + i);
  return r;
}

// Cofactor determinant; the ledger matrices are at most (alpha+beta)^2.
double small_det(const std::vector<std::vector<double>>& a) {
  const size_t n = a.size();
  if (n == 0) return 1.0;
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  double det = 0.0;
  std::vector<std::vector<double>> sub(n - 1, std::vector<double>(n - 1));
  for (size_t c = 0; c < n; ++c) {
    for (size_t i = 1; i < n; ++i) {
      size_t cc = 0;
      for (size_t j = 0; j < n; ++j)
        if (j != c) sub[i - 1][cc++] = a[i][j];
    }
    const double cof = a[0][c] * small_det(sub);
    det += (c % 2 == 0) ? cof : -cof;
  }
  return det;
}

// Odometer over index tuples j_k in 0..range[k]; returns false when done.
bool advance_tuple(std::vector<int>& j, const std::vector<int>& range) {
  for (size_t k = 0; k < j.size(); ++k) {
    if (j[k] < range[k]) {
      ++j[k];
      return true;
    }
    j[k] = 0;
  }
  return false;
}

void check_ascending_positive(std::span<const double> lambdas) {
  if (lambdas.empty()) throw std::domain_error("joint density: empty eigenvalue list");
  double prev = 0.0;
  for (double l : lambdas) {
    if (!(l > 0.0)) throw std::domain_error("joint density: eigenvalues must be positive");
    if (l < prev) throw std::domain_error("joint density: eigenvalues must be ascending");
    prev = l;
  }
}

}  // namespace

double joint_density_h0(const ProblemDims& dims, std::span<const double> lambdas) {
  dims.validate();
  if (static_cast<int>(lambdas.size()) != dims.m)
    throw std::domain_error("joint_density_h0: eigenvalue count != m");
  check_ascending_positive(lambdas);
  const int m = dims.m, n = dims.n, p = dims.p;
  double log_base = ln_k_mnp(m, n, p);
  for (double l : lambdas)
    log_base += (p - m) * std::log(l) - (p + n) * std::log1p(l);
  double vandermonde = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) vandermonde *= lambdas[j] - lambdas[i];
  return std::exp(log_base) * vandermonde * vandermonde;
}

double joint_density_h1(const ProblemDims& dims, double gamma,
                        std::span<const double> lambdas) {
  dims.validate();
  if (!(gamma > 0.0)) throw std::domain_error("joint_density_h1: requires gamma > 0");
  if (static_cast<int>(lambdas.size()) != dims.m)
    throw std::domain_error("joint_density_h1: eigenvalue count != m");
  check_ascending_positive(lambdas);
  const int m = dims.m, n = dims.n, p = dims.p;

  double log_pref = ln_k_mnp(m, n, p) + ln_factorial(m - 1) + ln_factorial(p + n - m) -
                    ln_factorial(p + n - 1) - (m - 1) * std::log(gamma) -
                    (p + 1 - m) * std::log1p(gamma);
  for (double l : lambdas)
    log_pref += (p - m) * std::log(l) - (p + n - 1) * std::log1p(l);

  // k-sum with the removable poles cancelled against the Vandermonde factor:
  // Delta^2 / prod_{j!=k}(l_k - l_j) = prod_{i<j; i,j!=k}(l_j-l_i)^2 * prod_{j!=k}(l_k-l_j)
  double ksum = 0.0;
  for (int k = 0; k < m; ++k) {
    double reduced = 1.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (i != k && j != k) reduced *= (lambdas[j] - lambdas[i]) * (lambdas[j] - lambdas[i]);
    for (int j = 0; j < m; ++j)
      if (j != k) reduced *= lambdas[k] - lambdas[j];
    const double log_k = (p + n - 1) * std::log1p(lambdas[k]) -
                         (p + n + 1 - m) * std::log1p(lambdas[k] / (gamma + 1.0));
    ksum += reduced * std::exp(log_k);
  }
  return std::exp(log_pref) * ksum;
}

// ---------------------------------------------------------------------------
// Theorem 1: general (alpha, beta) H0 c.d.f.
//
// Prefactor used here is (t-1)^{tau - alpha - beta - 1} with no power of two;
// the index tuples bind column-local coefficients in both determinant blocks.
// Both choices were pinned against the brute-force quadrature oracle.
// ---------------------------------------------------------------------------
CdfEvaluation cdf_h0_theorem1(const ProblemDims& dims, double t,
                              const AccuracyBudget& budget) {
  dims.validate();
  budget.validate();
  if (!(t > 1.0)) throw std::invalid_argument("cdf_h0_theorem1: requires t > 1");
  if (dims.m < 2) throw std::invalid_argument("cdf_h0_theorem1: requires m >= 2");
  const int m = dims.m, alpha = dims.alpha(), beta = dims.beta();
  const int size = alpha + beta;
  if (size < 1)
    throw std::invalid_argument("cdf_h0_theorem1: alpha + beta >= 1 (square case is Corollary 2)");
  const long tau = dims.tau();

  // constant ledger (log space)
  SignedLog k_const{ln_k_mnp(m, dims.n, dims.p) - ln_factorial(m - 1),
                    (static_cast<long>(beta) * (alpha + m - 1)) % 2 == 0 ? 1 : -1};
  for (int i = 1; i <= alpha; ++i)
    k_const.log_abs += ln_factorial(m + i) - 2.0 * ln_factorial(i - 1) -
                       ln_factorial(m + alpha + beta - i - 1);
  for (int j = 1; j <= beta; ++j)
    k_const.log_abs += ln_factorial(m + j) - 2.0 * ln_factorial(j - 1) -
                       ln_factorial(m + alpha + beta - j - 1);
  for (int i = 1; i <= size; ++i)
    k_const.log_abs += 2.0 * ln_factorial(m - 2 + i) - ln_factorial(2 * m + 2 * i - 2);
  for (int j = 0; j <= m - 2; ++j)
    k_const.log_abs += ln_factorial(j) + ln_factorial(j + 1) + ln_factorial(j + 2) -
                       ln_factorial(m + j + 1);

  // column ranges: position k within its own block, both blocks alike
  std::vector<int> range(size);
  for (int k = 1; k <= alpha; ++k) range[k - 1] = m + alpha + beta - k - 1;
  for (int c = 1; c <= beta; ++c) range[alpha + c - 1] = m + alpha + beta - c - 1;

  // memoized y-integrals keyed by (J_U, J_V)
  std::unordered_map<long, QuadResult> integrals;
  AccuracyBudget quad_budget = budget;
  quad_budget.rel_tol = std::min(budget.rel_tol, 1e-11);
  auto y_integral = [&](long ju, long jv) -> QuadResult {
    const long key = ju * 4096 + jv;
    auto it = integrals.find(key);
    if (it != integrals.end()) return it->second;
    const double e1 = static_cast<double>(tau - alpha - 1 - ju);
    const double e2 = static_cast<double>(ju + jv) - tau - 1.0;
    const double e3 = static_cast<double>(tau - alpha - beta - 1);
    QuadResult q = integrate_semi_infinite(
        [=](double y) {
          return std::exp(e1 * std::log(y) + e2 * std::log1p(y) - e3 * std::log1p(t * y));
        },
        quad_budget);
    integrals.emplace(key, q);
    return q;
  };

  const double ln_t = std::log(t);
  const double ln_tm1 = std::log(t - 1.0);
  const long pref_exp = tau - alpha - beta - 1;

  SignedLogSum sum;
  double quad_err = 0.0;
  std::vector<int> jt(size, 0);
  std::vector<std::vector<double>> mat(size, std::vector<double>(size));
  do {
    // per-tuple coefficient (both blocks use their local column position)
    SignedLog coef = SignedLog::one();
    for (int pos = 0; pos < size; ++pos) {
      const int local = pos < alpha ? pos + 1 : pos - alpha + 1;
      const int j = jt[pos];
      coef *= pochhammer_ln(m + 1 + local, j);
      coef *= pochhammer_ln(-(m + alpha + beta - local - 1), j);
      coef /= SignedLog{ln_factorial(j), 1} * pochhammer_ln(local, j);
    }
    if (coef.is_zero()) continue;

    long ju = 0, jv = 0;
    for (int k = 0; k < alpha; ++k) ju += jt[k];
    for (int c = alpha; c < size; ++c) jv += jt[c];
    if (tau - alpha - ju <= 0 || tau - beta - jv <= 0)
      throw NonConvergenceError(
          "cdf_h0_theorem1: term-by-term y-integral diverges for this shape");

    for (int i = 1; i <= size; ++i) {
      for (int pos = 0; pos < size; ++pos) {
        const int local = pos < alpha ? pos + 1 : pos - alpha + 1;
        const int j = jt[pos];
        mat[i - 1][pos] = poch_int(m + local + 1 + j, i - 1) *
                          poch_int(m + i - local - j, alpha + beta - i);
      }
    }
    const SignedLog det = SignedLog::from(small_det(mat));
    if (det.is_zero()) continue;

    SignedLog tpow{jv * ln_t + static_cast<double>(pref_exp - ju - jv) * ln_tm1,
                   (ju % 2 == 0) ? 1 : -1};
    const QuadResult q = y_integral(ju, jv);
    const SignedLog scale = k_const * coef * det * tpow;
    sum.add(scale * SignedLog::from(q.value));
    quad_err += std::exp(scale.log_abs) * q.err_estimate;
  } while (advance_tuple(jt, range));

  auto [total, log_abs_sum] = sum.reduce();
  const double value = total.value();
  const double cancellation = 8.0 * kEps * std::exp(log_abs_sum);
  return {t, value, CdfMethod::Theorem1, quad_err + cancellation};
}

// ---------------------------------------------------------------------------
// Corollary 1: alpha = 0 closed form. The Beta factor is B(nu, nu - S - beta)
// (the convergent orientation of the y-integral).
// ---------------------------------------------------------------------------
CdfEvaluation cdf_h0_corollary1(const ProblemDims& dims, double t,
                                const AccuracyBudget& budget) {
  dims.validate();
  budget.validate();
  if (!(t > 1.0)) throw std::invalid_argument("cdf_h0_corollary1: requires t > 1");
  if (dims.m < 2) throw std::invalid_argument("cdf_h0_corollary1: requires m >= 2");
  if (dims.alpha() != 0)
    throw std::domain_error("cdf_h0_corollary1: requires n = m (alpha = 0); use cdf_h0_theorem1");
  const int m = dims.m, p = dims.p, beta = dims.beta();
  if (static_cast<long>(p - m) * (p + m - 1) >= 2L * m * p)
    throw std::domain_error(
        "cdf_h0_corollary1: constraint (p-m)(p+m-1) < 2mp violated; use cdf_h0_theorem1");
  if (beta == 0) {
    CdfEvaluation r = cdf_h0_corollary2(m, t);
    r.method = CdfMethod::Corollary1;
    return r;
  }
  const long nu = dims.nu();

  SignedLog k_tilde{ln_k_mnp(m, m, p) - ln_factorial(m - 1),
                    (static_cast<long>(beta) * (m - 1)) % 2 == 0 ? 1 : -1};
  for (int i = 1; i <= beta; ++i)
    k_tilde.log_abs += 2.0 * ln_factorial(m - 2 + i) - ln_factorial(2 * m + 2 * i - 2);
  for (int j = 0; j <= m - 2; ++j)
    k_tilde.log_abs += ln_factorial(j) + ln_factorial(j + 1) + ln_factorial(j + 2) -
                       ln_factorial(m + j + 1);

  std::vector<int> range(beta);
  for (int c = 1; c <= beta; ++c) range[c - 1] = m + beta - c - 1;

  const double ln_t = std::log(t);
  const double ln_tm1 = std::log(t - 1.0);
  // each tuple's 2F1 is cheap; evaluate them two decades past the target
  AccuracyBudget f21_budget = budget;
  f21_budget.rel_tol = std::min(budget.rel_tol, 1e-13);
  f21_budget.abs_tol = std::min(budget.abs_tol, 1e-18);
  f21_budget.max_terms = std::max(budget.max_terms, 400000);
  f21_budget.max_quad_refinements = std::max(budget.max_quad_refinements, 40);

  SignedLogSum sum;
  std::vector<int> jt(beta, 0);
  std::vector<std::vector<double>> mat(beta, std::vector<double>(beta));
  do {
    long s = 0;
    for (int c = 0; c < beta; ++c) s += jt[c];

    SignedLog coef = SignedLog::one();  // product of G_l(j_l), all positive
    for (int c = 1; c <= beta; ++c) {
      const int j = jt[c - 1];
      coef.log_abs += ln_factorial(m + c + j) - ln_factorial(j) -
                      pochhammer_ln(c, j).log_abs - 2.0 * ln_factorial(c - 1) -
                      ln_factorial(m + beta - c - 1 - j);
    }

    for (int i = 1; i <= beta; ++i)
      for (int c = 1; c <= beta; ++c) {
        const int j = jt[c - 1];
        mat[i - 1][c - 1] =
            poch_int(m + c + 1 + j, i - 1) * poch_int(m + i - c - j, beta - i);
      }
    const SignedLog det = SignedLog::from(small_det(mat));
    if (det.is_zero()) continue;

    const long b2 = nu - s - beta;  // second Beta argument; > 0 under the constraint
    if (b2 <= 0)
      throw NonConvergenceError("cdf_h0_corollary1: divergent tuple (constraint edge)");
    const double f21 =
        gauss_2f1(static_cast<double>(nu - beta - 1), static_cast<double>(nu),
                  static_cast<double>(2 * nu - beta - s), 1.0 - t, f21_budget);
    SignedLog term = k_tilde * coef * det;
    term *= SignedLog{ln_beta(static_cast<double>(nu), static_cast<double>(b2)), 1};
    term *= SignedLog{s * ln_t, (s % 2 == 0) ? 1 : -1};              // (-t)^S
    term *= SignedLog{static_cast<double>(nu - s - beta - 1) * ln_tm1, 1};
    term *= SignedLog::from(f21);
    sum.add(term);
  } while (advance_tuple(jt, range));

  auto [total, log_abs_sum] = sum.reduce();
  const double abs_scale = std::exp(log_abs_sum);
  const double err = abs_scale * (8.0 * kEps + budget.rel_tol);
  return {t, total.value(), CdfMethod::Corollary1, err};
}

CdfEvaluation cdf_h0_corollary2(int m, double t) {
  if (m < 1) throw std::invalid_argument("cdf_h0_corollary2: requires m >= 1");
  if (!(t > 1.0)) throw std::invalid_argument("cdf_h0_corollary2: requires t > 1");
  const double m2 = static_cast<double>(m) * m;
  const AccuracyBudget budget{1e-13, 1e-18, 400000, 40};
  const double f21 = gauss_2f1(m2, m2 - 1.0, 2.0 * m2, 1.0 - t, budget);
  const double log_val = std::log(m2) + ln_beta(m2, m2) +
                         (m2 - 1.0) * std::log(t - 1.0) + std::log(f21);
  const double value = std::exp(log_val);
  return {t, value, CdfMethod::Corollary2, value * 1e-12 + 1e-16};
}

// ---------------------------------------------------------------------------
// Theorem 2: H1 c.d.f. for m = n = p. The F1 in the infinite series carries
// the argument pair (1-t, 1 - t/(gamma+1)); both lie left of 1 for t > 1, so
// the Euler path stays regular on the whole t range.
// ---------------------------------------------------------------------------
CdfEvaluation cdf_h1_theorem2(int m, double gamma, double t,
                              const AccuracyBudget& budget) {
  budget.validate();
  if (m < 1) throw std::invalid_argument("cdf_h1_theorem2: requires m >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("cdf_h1_theorem2: requires gamma > 0");
  if (!(t > 1.0)) throw std::invalid_argument("cdf_h1_theorem2: requires t > 1");
  if (m == 1) return {t, 1.0, CdfMethod::Theorem2, 0.0};

  const long mt = static_cast<long>(m) * m - m + 1;
  const double ln_g = std::log(gamma);
  const double ln_1pg = std::log1p(gamma);
  const double ln_tm1 = std::log(t - 1.0);

  SignedLogSum sum;

  // I^A
  {
    const double f1 = appell_f1(static_cast<double>(mt), static_cast<double>(mt - 1),
                                static_cast<double>((m - 1) * (m - 1)),
                                static_cast<double>(2 * mt),
                                1.0 - 1.0 / (t * (gamma + 1.0)), gamma / (gamma + 1.0),
                                budget);
    SignedLog ia{std::log(static_cast<double>(m)) - (m - 1) * ln_g -
                     static_cast<double>((m - 1) * (m - 1)) * ln_1pg +
                     (mt - 1) * std::log1p(-1.0 / t) +
                     ln_beta(static_cast<double>(mt), static_cast<double>(mt)),
                 (m % 2 == 1) ? 1 : -1};  // (-1)^{m-1}
    ia *= SignedLog::from(f1);
    sum.add(ia);
  }

  // I^B: finite (k, j) ledger, infinite l-series truncated when terms fall
  // 16 decades below the running maximum.
  const double y_arg = 1.0 - t / (gamma + 1.0);
  for (int k = 0; k <= m - 2; ++k) {
    for (int j = 0; j <= m - 2 - k; ++j) {
      SignedLog cj{std::log(static_cast<double>(m)) + ln_factorial(m + k) -
                       ln_factorial(k) + std::log(static_cast<double>(j + 1)) +
                       (mt - 1 + j) * ln_tm1 - ln_factorial(k + 2 + j) -
                       ln_factorial(m - k - 2 - j),
                   (k % 2 == 0) ? 1 : -1};
      double max_log = -std::numeric_limits<double>::infinity();
      for (long l = 0; l < 10000; ++l) {
        const double f1 = appell_f1(static_cast<double>(mt + j + l),
                                    static_cast<double>(mt - 3),
                                    static_cast<double>(j + 2),
                                    static_cast<double>(2 * (mt + j) + l), 1.0 - t,
                                    y_arg, budget);
        SignedLog term = cj;
        term *= pochhammer_ln(static_cast<double>(m - 1), l);
        term.log_abs += -ln_factorial(l) + (l + j - m + 1) * ln_g -
                        (l + j + 1) * ln_1pg +
                        ln_beta(static_cast<double>(mt + j),
                                static_cast<double>(mt + j + l));
        term *= SignedLog::from(f1);
        sum.add(term);
        max_log = std::max(max_log, term.log_abs);
        if (term.log_abs < max_log - 16.0 * 2.302585092994046) break;
      }
    }
  }

  auto [total, log_abs_sum] = sum.reduce();
  const double abs_scale = std::exp(log_abs_sum);
  const double err = abs_scale * (8.0 * kEps + budget.rel_tol);
  return {t, total.value(), CdfMethod::Theorem2, err};
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------
std::vector<CdfEvaluation> cdf_scn_monte_carlo(const ProblemDims& dims,
                                               const Hypothesis& hyp,
                                               std::span<const double> t_grid,
                                               const MonteCarloOptions& opts) {
  dims.validate();
  if (opts.draws < 1) throw std::invalid_argument("cdf_scn_monte_carlo: draws >= 1");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 1.0))
      throw std::invalid_argument("cdf_scn_monte_carlo: t grid must be > 1");
    if (i > 0 && t_grid[i] < t_grid[i - 1])
      throw std::invalid_argument("cdf_scn_monte_carlo: t grid must be ascending");
  }
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dims.m, dims.m);

  BatchLayout layout;
  layout.total = opts.draws;
  layout.seed = opts.seed;
  layout.threads = opts.threads > 0 ? opts.threads : default_thread_count();
  const long nblocks = layout.num_blocks();
  std::vector<std::vector<long>> counts(nblocks, std::vector<long>(t_grid.size(), 0));

  run_blocks(layout, [&](long b, long draws, RngStream& rng) {
    auto& slot = counts[b];
    for (long d = 0; d < draws; ++d) {
      const double scn = sample_f_eigenvalues(dims, hyp, eye, rng).scn();
      for (size_t i = 0; i < t_grid.size(); ++i)
        if (scn <= t_grid[i]) ++slot[i];
    }
  });

  std::vector<CdfEvaluation> out(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    long c = 0;
    for (long b = 0; b < nblocks; ++b) c += counts[b][i];
    const double f = static_cast<double>(c) / static_cast<double>(opts.draws);
    out[i] = {t_grid[i], f, CdfMethod::MonteCarlo,
              std::sqrt(f * (1.0 - f) / static_cast<double>(opts.draws))};
  }
  return out;
}

CdfEvaluation cdf_scn_bruteforce_quadrature(const ProblemDims& dims,
                                            const Hypothesis& hyp, double t,
                                            const AccuracyBudget& budget) {
  dims.validate();
  budget.validate();
  if (dims.m != 2)
    throw std::invalid_argument("cdf_scn_bruteforce_quadrature: implemented for m = 2");
  if (!(t > 1.0)) throw std::invalid_argument("cdf_scn_bruteforce_quadrature: requires t > 1");
  const double gamma = hyp ? hyp->gamma : 0.0;
  if (hyp && !(gamma > 0.0))
    throw std::invalid_argument("cdf_scn_bruteforce_quadrature: H1 requires gamma > 0");

  auto density = [&](double l1, double l2) {
    const double lams[2] = {l1, l2};
    return hyp ? joint_density_h1(dims, gamma, lams) : joint_density_h0(dims, lams);
  };
  AccuracyBudget inner = budget;
  inner.rel_tol = std::min(budget.rel_tol, 1e-11);
  inner.abs_tol = std::min(budget.abs_tol, 1e-15);
  auto outer = [&](double l1) {
    // geometric breakpoints: the inner range spans up to t decades and the
    // density peak (lambda_2 ~ 1) must be seen by the initial panels
    std::vector<double> pts{l1};
    for (double s = l1 * 4.0; s < t * l1; s *= 4.0) pts.push_back(s);
    for (double anchor : {0.1, 1.0, 10.0})
      if (anchor > l1 && anchor < t * l1) pts.push_back(anchor);
    pts.push_back(t * l1);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return integrate_adaptive([&](double l2) { return density(l1, l2); }, pts, inner)
        .value;
  };
  QuadResult q = integrate_semi_infinite(outer, budget);
  return {t, q.value, CdfMethod::BruteForceQuadrature, 2.0 * q.err_estimate + 1e-12};
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------
CdfEvaluation cdf_h0(const ProblemDims& dims, double t, const DispatchOptions& opts) {
  dims.validate();
  if (!(t > 1.0)) throw std::invalid_argument("cdf_h0: requires t > 1");
  if (dims.m == 1) return {t, 1.0, CdfMethod::Corollary2, 0.0};  // SCN is identically 1
  const int alpha = dims.alpha(), beta = dims.beta();
  if (alpha == 0 && beta == 0) return cdf_h0_corollary2(dims.m, t);
  if (alpha == 0 &&
      static_cast<long>(dims.p - dims.m) * (dims.p + dims.m - 1) < 2L * dims.m * dims.p)
    return cdf_h0_corollary1(dims, t, opts.budget);
  try {
    return cdf_h0_theorem1(dims, t, opts.budget);
  } catch (const NonConvergenceError&) {
    if (!opts.allow_monte_carlo) throw;
  }
  const double grid[1] = {t};
  return cdf_scn_monte_carlo(dims, std::nullopt, grid, opts.mc)[0];
}

CdfEvaluation cdf_h1(const ProblemDims& dims, double gamma, double t,
                     const DispatchOptions& opts) {
  dims.validate();
  if (gamma < 0.0) throw std::invalid_argument("cdf_h1: requires gamma >= 0");
  if (!(t > 1.0)) throw std::invalid_argument("cdf_h1: requires t > 1");
  if (gamma == 0.0) return cdf_h0(dims, t, opts);  // spike vanishes
  if (dims.m == 1) return {t, 1.0, CdfMethod::Theorem2, 0.0};
  if (dims.m == dims.n && dims.n == dims.p) {
    try {
      return cdf_h1_theorem2(dims.m, gamma, t, opts.budget);
    } catch (const NotEvaluableError&) {
      if (!opts.allow_monte_carlo) throw;
    } catch (const NonConvergenceError&) {
      if (!opts.allow_monte_carlo) throw;
    }
  } else if (!opts.allow_monte_carlo) {
    throw NotEvaluableError("cdf_h1: no closed form for m != n or n != p");
  }
  const double grid[1] = {t};
  SpikeParams spike = SpikeParams::with_gamma(gamma);
  return cdf_scn_monte_carlo(dims, spike, grid, opts.mc)[0];
}

}  // namespace fscn
