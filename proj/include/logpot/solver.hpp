#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "logpot/mask.hpp"
#include "logpot/shape.hpp"

namespace logpot {

/// Radial kernel profile: (1/2pi) log(1/r) or the Riesz kernel r^{alpha - N}.
struct KernelSpec {
  enum class Kind { Log, Riesz };
  Kind kind = Kind::Log;
  double alpha = 1.0;
  int dim = 2;
  double prefactor = 0.15915494309189535;  // 1 / (2 pi)

  static KernelSpec log();
  /// Only N = 2 is supported by the planar discretisation.
  static KernelSpec riesz(double alpha, int dim = 2);

  /// prefactor * K(r), r > 0.
  double value(double r) const;
  /// prefactor times the integral of K over the disc of area h^2 centred at 0.
  double self_cell(double h) const;
  std::string name() const;
};

/// "log" or "riesz:<alpha>".
KernelSpec parse_kernel(const std::string& text);

/// Assembly cap: LOGPOT_MAX_CELLS if set, else 20000.
std::size_t default_max_cells();

struct AssembleOptions {
  std::size_t max_cells = 0;  // 0: default_max_cells()
  int threads = 1;
};

class ConvolutionOperator;

/// Nystrom matrix A with A_ij = prefactor h^2 K(|x_i - x_j|) off the diagonal
/// and the equal-area-disc self integral on it. Entries depend only on the
/// lattice offset, so they are stored as a table; the dense matrix and the
/// FFT-based matrix-vector product are built on demand.
class OperatorMatrix {
public:
  OperatorMatrix(std::shared_ptr<const PixelMask> mask, KernelSpec kernel, int threads = 1);
  ~OperatorMatrix();
  OperatorMatrix(OperatorMatrix&&) noexcept;
  OperatorMatrix& operator=(OperatorMatrix&&) noexcept;

  const PixelMask& mask() const { return *mask_; }
  const std::shared_ptr<const PixelMask>& mask_ptr() const { return mask_; }
  const KernelSpec& kernel() const { return kernel_; }
  double h() const { return mask_->h(); }
  std::size_t size() const { return mask_->active_count(); }

  double entry(std::size_t i, std::size_t j) const;
  /// Offset table value for lattice offset (|dcol|, |drow|).
  double table(long dcol, long drow) const { return table_[std::abs(drow) * nx_ + std::abs(dcol)]; }

  /// Materialised symmetric matrix (built once, thread-safe).
  const Eigen::MatrixXd& dense() const;
  /// y = A x. Uses the dense matrix when it exists, else FFT convolution.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

private:
  std::shared_ptr<const PixelMask> mask_;
  KernelSpec kernel_;
  int threads_;
  long nx_ = 0, ny_ = 0;
  std::vector<double> table_;
  mutable std::unique_ptr<std::once_flag> dense_once_, conv_once_;
  mutable std::unique_ptr<Eigen::MatrixXd> dense_;
  mutable std::unique_ptr<ConvolutionOperator> conv_;
};

/// Throws InputError with a suggested coarser h when the cap is exceeded.
OperatorMatrix assemble(std::shared_ptr<const PixelMask> mask, const KernelSpec& kernel,
                        const AssembleOptions& opts = {});
OperatorMatrix assemble(const PixelMask& mask, const KernelSpec& kernel, const AssembleOptions& opts = {});

enum class EigenMethod { Auto, Dense, Jacobi, Lanczos };

struct EigOptions {
  EigenMethod method = EigenMethod::Auto;
  std::size_t dense_limit = 600;
  double tol = 1e-10;           // Lanczos residual target
  int max_restarts = 300;
  int krylov_dim = 0;           // 0: automatic
  bool want_bottom = true;
  bool require_bottom = false;  // throw when the bottom pair does not converge
  int bottom_budget = 40;       // extra restarts spent on an unrequired bottom pair
  std::uint64_t seed = 0;
};

struct SpectralResult {
  std::vector<double> tau_top;                // descending
  double tau_bottom = 0.0;
  bool bottom_converged = false;
  std::vector<GridFunction> vectors;          // top eigenvectors, h^2 sum v^2 = 1
  std::optional<GridFunction> bottom_vector;
  std::vector<double> residuals;              // top pairs, then bottom
  double h = 0.0;
  std::string method;
  int iterations = 0;
};

SpectralResult extremal_eigs(const OperatorMatrix& A, int k, const EigOptions& opts = {});

/// u^T A u / u^T u: the discrete energy over the squared discrete norm
/// (A already carries the h^2 quadrature weight).
double rayleigh(const GridFunction& u, const OperatorMatrix& A);

/// Cyclic Jacobi eigendecomposition: ascending values, eigenvectors as columns.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double tol = 1e-14, int max_sweeps = 100);

struct RefineRow {
  double h = 0.0;
  std::size_t cells = 0;
  double tau_top = 0.0;
  double tau_bottom = 0.0;
  bool bottom_converged = false;
};

struct Extrapolation {
  double limit = 0.0;
  double order = 0.0;
  bool order_assumed = true;  // true when the observed order was unusable and p = 2 was used
};

struct RefineTable {
  std::vector<RefineRow> rows;
  Extrapolation top;
  Extrapolation bottom;
};

/// Richardson extrapolation of the last three (or two) values of a sequence
/// computed at h_0 > h_1 > h_2.
Extrapolation richardson(const std::vector<double>& h, const std::vector<double>& values);

RefineTable refine_study(const Shape& shape, const KernelSpec& kernel, const std::vector<double>& h_list,
                         const EigOptions& eig = {}, const AssembleOptions& asm_opts = {});

struct SignReport {
  double diameter = 0.0;
  double top_min = 0.0;
  double top_max = 0.0;
  bool top_sign_change = false;
  bool flagged = false;  // sign change although diameter <= 1
  std::optional<double> bottom_min;
  std::optional<double> bottom_max;
  std::optional<bool> bottom_one_signed;
};

SignReport positive_sign_check(const SpectralResult& result, const PixelMask& mask);

} // namespace logpot
