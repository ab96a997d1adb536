#include "fscn/matrand.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace fscn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32)};
  eng_.seed(seq);
}

double RngStream::uniform() {
  return (eng_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  // Box-Muller, pinned so streams are identical across standard libraries.
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double z1 = r * std::cos(kTwoPi * u2);
  cached_normal_ = r * std::sin(kTwoPi * u2);
  has_cached_ = true;
  return z1;
}

std::complex<double> RngStream::complex_normal() {
  constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
  const double re = normal();
  const double im = normal();
  return {re * kInvSqrt2, im * kInvSqrt2};
}

Eigen::MatrixXcd sample_complex_gaussian_matrix(int rows, int cols, RngStream& rng) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("sample_complex_gaussian_matrix: dims must be >= 1");
  Eigen::MatrixXcd x(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) x(i, j) = rng.complex_normal();
  return x;
}

Eigen::MatrixXcd sample_wishart(int m, int dof, const Eigen::MatrixXcd& covariance,
                                RngStream& rng) {
  if (dof < m) throw std::invalid_argument("sample_wishart: requires dof >= m");
  Eigen::LLT<Eigen::MatrixXcd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("sample_wishart: covariance is not positive definite");
  Eigen::MatrixXcd x = sample_complex_gaussian_matrix(m, dof, rng);
  Eigen::MatrixXcd lx = llt.matrixL() * x;
  Eigen::MatrixXcd w = lx * lx.adjoint();
  return 0.5 * (w + w.adjoint().eval());  // strict Hermitian symmetry
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
  return solver.eigenvalues();  // ascending
}

FMatrixSample sample_f_eigenvalues(const ProblemDims& dims, const Hypothesis& hyp,
                                   const Eigen::MatrixXcd& noise_cov, RngStream& rng) {
  dims.validate();
  const int m = dims.m;
  Eigen::LLT<Eigen::MatrixXcd> cov_llt(noise_cov);
  if (cov_llt.info() != Eigen::Success)
    throw std::domain_error("sample_f_eigenvalues: noise covariance not positive definite");

  // Signal block first, noise block second — fixed draw order for
  // reproducibility. Under H1 the first row of the signal Gaussians is scaled
  // by sqrt(1+gamma) (v = e_1), or a general rank-one update when v is given.
  Eigen::MatrixXcd xs = sample_complex_gaussian_matrix(m, dims.p, rng);
  if (hyp && hyp->gamma > 0.0) {
    hyp->validate(m);
    const double scale = std::sqrt(1.0 + hyp->gamma) - 1.0;
    if (hyp->v.size() == 0)
      xs.row(0) *= std::sqrt(1.0 + hyp->gamma);
    else
      xs += scale * hyp->v * (hyp->v.adjoint() * xs);  // (I + (sqrt(1+g)-1) v v^H) X
  }
  Eigen::MatrixXcd xn = sample_complex_gaussian_matrix(m, dims.n, rng);

  if (m == 1) {
    const double s_hat = xs.row(0).squaredNorm() / dims.p;
    const double sig_hat = xn.row(0).squaredNorm() / dims.n;  // covariance scale cancels
    FMatrixSample out;
    out.eigenvalues = Eigen::VectorXd::Constant(1, s_hat / sig_hat);
    return out;
  }

  Eigen::MatrixXcd ls = cov_llt.matrixL() * xs;
  Eigen::MatrixXcd ln = cov_llt.matrixL() * xn;
  Eigen::MatrixXcd s_hat = (ls * ls.adjoint()) / static_cast<double>(dims.p);
  Eigen::MatrixXcd sig_hat = (ln * ln.adjoint()) / static_cast<double>(dims.n);

  Eigen::LLT<Eigen::MatrixXcd> sample_llt(sig_hat);
  if (sample_llt.info() != Eigen::Success)
    throw std::domain_error("sample_f_eigenvalues: degenerate noise sample covariance");
  // Whitened matrix L^{-1} S_hat L^{-H}; generalized eigenvalues of (S, Sigma).
  Eigen::MatrixXcd half = sample_llt.matrixL().solve(s_hat);
  Eigen::MatrixXcd whitened =
      sample_llt.matrixL().solve(half.adjoint().eval()).adjoint();
  whitened = 0.5 * (whitened + whitened.adjoint().eval());

  FMatrixSample out;
  out.eigenvalues = hermitian_eigenvalues(whitened);
  if (out.eigenvalues(0) <= 0.0)
    throw std::domain_error("sample_f_eigenvalues: nonpositive eigenvalue (degenerate draw)");
  return out;
}

double scn_of(const FMatrixSample& sample) {
  if (sample.eigenvalues.size() == 0 || sample.eigenvalues(0) <= 0.0)
    throw std::domain_error("scn_of: requires positive eigenvalues");
  return sample.scn();
}

int default_thread_count() {
  if (const char* env = std::getenv("FSCN_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_blocks(const BatchLayout& layout,
                const std::function<void(long, long, RngStream&)>& visit) {
  const long nblocks = layout.num_blocks();
  const int threads = std::max(1, layout.threads);
  if (threads == 1 || nblocks <= 1) {
    for (long b = 0; b < nblocks; ++b) {
      RngStream rng(layout.seed, layout.stream_offset + static_cast<std::uint64_t>(b));
      visit(b, layout.block_count(b), rng);
    }
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long b = next.fetch_add(1);
      if (b >= nblocks) return;
      RngStream rng(layout.seed, layout.stream_offset + static_cast<std::uint64_t>(b));
      visit(b, layout.block_count(b), rng);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace fscn
