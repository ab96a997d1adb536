#ifndef FSCN_FDIST_HPP
#define FSCN_FDIST_HPP

#include <span>
#include <string>
#include <vector>

#include "fscn/matrand.hpp"
#include "fscn/quadrature.hpp"
#include "fscn/specfun.hpp"

namespace fscn {

enum class CdfMethod {
  Theorem1,
  Corollary1,
  Corollary2,
  Theorem2,
  MonteCarlo,
  BruteForceQuadrature,
};

const char* to_string(CdfMethod m);

/// One evaluation of an SCN c.d.f.: stored unclamped, consumers may clamp
/// to [0,1].
struct CdfEvaluation {
  double t = 0.0;
  double value = 0.0;
  CdfMethod method = CdfMethod::MonteCarlo;
  double err_estimate = 0.0;
};

// -- joint eigenvalue densities ---------------------------------------------

/// H0 joint density of the ordered eigenvalues of W1 W2^{-1} (unscaled
/// Wisharts). Input must be strictly ascending and positive.
double joint_density_h0(const ProblemDims& dims, std::span<const double> lambdas);

/// H1 (spiked) joint density; gamma > 0. The k-sum's removable poles are
/// evaluated through the reduced Vandermonde polynomial, never by dividing
/// out near-zero differences.
double joint_density_h1(const ProblemDims& dims, double gamma,
                        std::span<const double> lambdas);

// -- exact c.d.f. paths ------------------------------------------------------

/// General-(alpha,beta) H0 c.d.f. for t > 1: nested index-tuple sum over a
/// determinant ledger and a one-dimensional y-integral. Requires
/// alpha + beta >= 1 (the square case routes to Corollary 2).
CdfEvaluation cdf_h0_theorem1(const ProblemDims& dims, double t,
                              const AccuracyBudget& budget = {});

/// alpha = 0 (n = m) closed form via 2F1; valid under the constraint
/// (p-m)(p+m-1) < 2mp. Violations throw std::domain_error.
CdfEvaluation cdf_h0_corollary1(const ProblemDims& dims, double t,
                                const AccuracyBudget& budget = {});

/// alpha = beta = 0 (m = n = p) closed form.
CdfEvaluation cdf_h0_corollary2(int m, double t);

/// H1 c.d.f. for m = n = p via the Appell-function representation.
CdfEvaluation cdf_h1_theorem2(int m, double gamma, double t,
                              const AccuracyBudget& budget = {});

// -- oracles ------------------------------------------------------------------

struct MonteCarloOptions {
  long draws = 100000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = default_thread_count()
};

/// Empirical c.d.f. at each grid point with binomial standard errors; one
/// pass over the draws, deterministic for a fixed seed.
std::vector<CdfEvaluation> cdf_scn_monte_carlo(const ProblemDims& dims,
                                               const Hypothesis& hyp,
                                               std::span<const double> t_grid,
                                               const MonteCarloOptions& opts);

/// m = 2 only: direct nested quadrature of the ordered-region integral of the
/// joint density. Serves as the independent exact oracle for both hypotheses.
CdfEvaluation cdf_scn_bruteforce_quadrature(const ProblemDims& dims,
                                            const Hypothesis& hyp, double t,
                                            const AccuracyBudget& budget = {});

// -- method dispatch -----------------------------------------------------------

struct DispatchOptions {
  AccuracyBudget budget{};
  bool allow_monte_carlo = true;
  MonteCarloOptions mc{};
};

/// H0 dispatcher: Corollary 2 -> Corollary 1 -> Theorem 1 -> Monte Carlo,
/// each tried inside its validity envelope.
CdfEvaluation cdf_h0(const ProblemDims& dims, double t,
                     const DispatchOptions& opts = {});

/// H1 dispatcher: Theorem 2 when m = n = p (gamma = 0 degenerates to H0),
/// Monte Carlo otherwise. The method field records any fallback.
CdfEvaluation cdf_h1(const ProblemDims& dims, double gamma, double t,
                     const DispatchOptions& opts = {});

}  // namespace fscn

#endif
