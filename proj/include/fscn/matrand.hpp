#ifndef FSCN_MATRAND_HPP
#define FSCN_MATRAND_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace fscn {

/// Problem shape (m sensors, n noise-only samples, p signal-plus-noise
/// samples). The derived quantities used throughout the closed forms are
/// computed on demand, never stored.
struct ProblemDims {
  int m = 1;
  int n = 1;
  int p = 1;

  ProblemDims() = default;
  ProblemDims(int m_, int n_, int p_) : m(m_), n(n_), p(p_) { validate(); }

  void validate() const {
    if (m < 1) throw std::invalid_argument("ProblemDims: m must be >= 1");
    if (n < m || p < m)
      throw std::invalid_argument("ProblemDims: requires n >= m and p >= m");
  }

  int alpha() const { return n - m; }            // n - m
  int beta() const { return p - m; }             // p - m
  long tau() const { return static_cast<long>(n) * p; }        // (m+alpha)(m+beta)
  long nu() const { return static_cast<long>(m) * p; }         // m(beta+m)
  long m_tilde() const { return static_cast<long>(m) * m - m + 1; }
};

/// Rank-one spike of the signal-plus-noise covariance, I + gamma v v^H.
struct SpikeParams {
  double gamma = 0.0;
  Eigen::VectorXcd v;  // unit vector; empty means e_1

  static SpikeParams with_gamma(double g) { return {g, {}}; }

  void validate(int m) const {
    if (gamma < 0) throw std::invalid_argument("SpikeParams: gamma must be >= 0");
    if (v.size() != 0) {
      if (v.size() != m) throw std::invalid_argument("SpikeParams: v dimension mismatch");
      if (std::abs(v.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("SpikeParams: v must be a unit vector");
    }
  }
};

/// H0 is nullopt; H1 carries the spike.
using Hypothesis = std::optional<SpikeParams>;

/// One draw of the whitened sample matrix: ascending eigenvalues of
/// S_hat * Sigma_hat^{-1} (sample-estimate scale; eigenvalues of the unscaled
/// W1 W2^{-1} are (p/n) times these, the SCN is identical).
struct FMatrixSample {
  Eigen::VectorXd eigenvalues;  // ascending, all > 0 a.s.

  double lambda_min() const { return eigenvalues(0); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
  double scn() const { return lambda_max() / lambda_min(); }
};

/// Deterministic per-stream RNG: a fixed seed plus a stream index give a
/// reproducible sequence independent of how work is distributed over threads.
/// Normals come from a pinned Box-Muller so the stream is identical across
/// standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  std::complex<double> complex_normal();  // CN(0,1): re,im ~ N(0, 1/2)

 private:
  std::mt19937_64 eng_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// m x n matrix of i.i.d. CN(0,1) entries, filled column-major.
Eigen::MatrixXcd sample_complex_gaussian_matrix(int rows, int cols, RngStream& rng);

/// W ~ CW_m(dof, covariance): W = (L X)(L X)^H with L the Cholesky factor of
/// the covariance and X an m x dof unit complex Gaussian matrix.
/// Throws std::domain_error if the covariance is not positive definite.
Eigen::MatrixXcd sample_wishart(int m, int dof, const Eigen::MatrixXcd& covariance,
                                RngStream& rng);

/// Draws (S_hat, Sigma_hat) under the hypothesis, whitens by the Cholesky
/// factor of Sigma_hat and returns the ascending Hermitian eigenvalues.
/// Under H1 the signal covariance is realized as L (I + gamma v v^H) L^H with
/// v = e_1 unless the spike carries an explicit vector.
FMatrixSample sample_f_eigenvalues(const ProblemDims& dims, const Hypothesis& hyp,
                                   const Eigen::MatrixXcd& noise_cov, RngStream& rng);

double scn_of(const FMatrixSample& sample);

/// Ascending eigenvalues of a Hermitian matrix (helper shared by the
/// robustness experiment, which re-solves scaled matrices).
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a);

// ---------------------------------------------------------------------------
// Deterministic parallel batching: draws are split into fixed-size blocks,
// block b uses RngStream(seed, b + stream_offset), and per-block results are
// merged in block order. The outcome does not depend on the thread count.
// ---------------------------------------------------------------------------
struct BatchLayout {
  long total = 0;
  long block_size = 65536;
  std::uint64_t seed = 0;
  std::uint64_t stream_offset = 0;
  int threads = 1;

  long num_blocks() const { return (total + block_size - 1) / block_size; }
  long block_begin(long b) const { return b * block_size; }
  long block_count(long b) const {
    long lo = block_begin(b);
    return std::min(block_size, total - lo);
  }
};

/// Runs visit(block_index, draws_in_block, rng) for every block, possibly on
/// several threads. Callers store per-block results in slots indexed by the
/// block and merge them in ascending block order afterwards.
void run_blocks(const BatchLayout& layout,
                const std::function<void(long, long, RngStream&)>& visit);

int default_thread_count();

}  // namespace fscn

#endif
