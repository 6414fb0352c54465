#include "logpot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <fftw3.h>

#include "logpot/error.hpp"

namespace logpot {
namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void normalize_sign(Eigen::VectorXd& v) {
  const double s = v.sum();
  if (std::abs(s) > 1e-8 * v.lpNorm<1>()) {
    if (s < 0) v = -v;
    return;
  }
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-6 * big) {
      if (v[i] < 0) v = -v;
      return;
    }
}

GridFunction as_grid_function(const OperatorMatrix& A, Eigen::VectorXd v) {
  normalize_sign(v);
  v /= v.norm() * A.h();
  return GridFunction(A.mask_ptr(), std::vector<double>(v.data(), v.data() + v.size()));
}

double residual(const OperatorMatrix& A, const Eigen::VectorXd& v, double tau) {
  Eigen::VectorXd Av(v.size());
  A.apply(v, Av);
  return (Av - tau * v).norm() / v.norm();
}

} // namespace

// Zero-padded FFT product with the block-Toeplitz kernel of the bounding grid.
class ConvolutionOperator {
public:
  ConvolutionOperator(const PixelMask& mask, const std::vector<double>& table, long nx, long ny)
      : px_(static_cast<int>(2 * nx)), py_(static_cast<int>(2 * ny)) {
    const std::size_t nreal = static_cast<std::size_t>(px_) * py_;
    nc_ = static_cast<std::size_t>(py_) * (px_ / 2 + 1);
    for (std::size_t k = 0; k < mask.active_count(); ++k) {
      const Cell c = mask.active_cell(k);
      lin_.push_back(static_cast<std::size_t>(c.row) * px_ + c.col);
    }
    double* in = fftw_alloc_real(nreal);
    khat_ = fftw_alloc_complex(nc_);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fwd_ = fftw_plan_dft_r2c_2d(py_, px_, in, khat_, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_c2r_2d(py_, px_, khat_, in, FFTW_ESTIMATE);
    }
    for (int r = 0; r < py_; ++r) {
      const long dr = r < ny ? r : (r > ny ? py_ - r : -1);
      for (int c = 0; c < px_; ++c) {
        const long dc = c < nx ? c : (c > nx ? px_ - c : -1);
        in[static_cast<std::size_t>(r) * px_ + c] = (dr < 0 || dc < 0) ? 0.0 : table[dr * nx + dc];
      }
    }
    fftw_execute_dft_r2c(fwd_, in, khat_);
    fftw_free(in);
  }

  ~ConvolutionOperator() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(khat_);
  }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    const std::size_t nreal = static_cast<std::size_t>(px_) * py_;
    double* buf = fftw_alloc_real(nreal);
    fftw_complex* spec = fftw_alloc_complex(nc_);
    std::fill(buf, buf + nreal, 0.0);
    for (std::size_t k = 0; k < lin_.size(); ++k) buf[lin_[k]] = x[static_cast<Eigen::Index>(k)];
    fftw_execute_dft_r2c(fwd_, buf, spec);
    for (std::size_t i = 0; i < nc_; ++i) {
      const double a = spec[i][0], b = spec[i][1], c = khat_[i][0], d = khat_[i][1];
      spec[i][0] = a * c - b * d;
      spec[i][1] = a * d + b * c;
    }
    fftw_execute_dft_c2r(bwd_, spec, buf);
    const double scale = 1.0 / static_cast<double>(nreal);
    y.resize(static_cast<Eigen::Index>(lin_.size()));
    for (std::size_t k = 0; k < lin_.size(); ++k) y[static_cast<Eigen::Index>(k)] = buf[lin_[k]] * scale;
    fftw_free(buf);
    fftw_free(spec);
  }

private:
  int px_, py_;
  std::size_t nc_ = 0;
  std::vector<std::size_t> lin_;
  fftw_complex* khat_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

KernelSpec KernelSpec::log() { return {}; }

KernelSpec KernelSpec::riesz(double alpha, int dim) {
  if (dim != 2) throw InputError("riesz kernel: only dimension N = 2 is supported");
  if (!(alpha > 0.0 && alpha < dim)) throw InputError("riesz kernel: need 0 < alpha < N");
  KernelSpec k;
  k.kind = Kind::Riesz;
  k.alpha = alpha;
  k.dim = dim;
  k.prefactor = 1.0;
  return k;
}

double KernelSpec::value(double r) const {
  if (kind == Kind::Log) return prefactor * std::log(1.0 / r);
  return prefactor * std::pow(r, alpha - dim);
}

double KernelSpec::self_cell(double h) const {
  const double rho = h / std::sqrt(kPi);
  if (kind == Kind::Log) return prefactor * kPi * rho * rho * (std::log(1.0 / rho) + 0.5);
  return prefactor * 2.0 * kPi * std::pow(rho, alpha) / alpha;
}

std::string KernelSpec::name() const {
  if (kind == Kind::Log) return "log";
  std::ostringstream os;
  os << "riesz:" << alpha;
  return os.str();
}

KernelSpec parse_kernel(const std::string& text) {
  if (text == "log") return KernelSpec::log();
  if (text.rfind("riesz:", 0) == 0) {
    const std::string num = text.substr(6);
    char* end = nullptr;
    const double alpha = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size()) throw InputError("kernel: bad riesz exponent '" + num + "'");
    return KernelSpec::riesz(alpha);
  }
  throw InputError("kernel: expected 'log' or 'riesz:<alpha>', got '" + text + "'");
}

std::size_t default_max_cells() {
  if (const char* env = std::getenv("LOGPOT_MAX_CELLS")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw InputError("LOGPOT_MAX_CELLS must be a positive integer");
  }
  return 20000;
}

OperatorMatrix::OperatorMatrix(std::shared_ptr<const PixelMask> mask, KernelSpec kernel, int threads)
    : mask_(std::move(mask)), kernel_(kernel), threads_(std::max(1, threads)),
      dense_once_(std::make_unique<std::once_flag>()), conv_once_(std::make_unique<std::once_flag>()) {
  if (!mask_ || mask_->active_count() == 0) throw InputError("assemble: empty mask");
  nx_ = mask_->nx();
  ny_ = mask_->ny();
  const double h = mask_->h();
  table_.resize(static_cast<std::size_t>(nx_ * ny_));
  for (long r = 0; r < ny_; ++r)
    for (long c = 0; c < nx_; ++c)
      table_[r * nx_ + c] = (r == 0 && c == 0)
                                ? kernel_.self_cell(h)
                                : h * h * kernel_.value(h * std::hypot(double(c), double(r)));
}

OperatorMatrix::~OperatorMatrix() = default;
OperatorMatrix::OperatorMatrix(OperatorMatrix&&) noexcept = default;
OperatorMatrix& OperatorMatrix::operator=(OperatorMatrix&&) noexcept = default;

double OperatorMatrix::entry(std::size_t i, std::size_t j) const {
  const Cell a = mask_->active_cell(i), b = mask_->active_cell(j);
  return table(a.col - b.col, a.row - b.row);
}

const Eigen::MatrixXd& OperatorMatrix::dense() const {
  std::call_once(*dense_once_, [this] {
    const auto n = static_cast<Eigen::Index>(size());
    auto m = std::make_unique<Eigen::MatrixXd>(n, n);
    std::vector<Cell> cells(size());
    for (std::size_t k = 0; k < size(); ++k) cells[k] = mask_->active_cell(k);
    auto fill = [&](Eigen::Index c0, Eigen::Index c1) {
      for (Eigen::Index j = c0; j < c1; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
          (*m)(i, j) = table(cells[i].col - cells[j].col, cells[i].row - cells[j].row);
    };
    if (threads_ == 1 || n < 256) {
      fill(0, n);
    } else {
      std::vector<std::thread> pool;
      const Eigen::Index chunk = (n + threads_ - 1) / threads_;
      for (int t = 0; t < threads_; ++t) {
        const Eigen::Index a = std::min(n, t * chunk), b = std::min(n, a + chunk);
        pool.emplace_back(fill, a, b);
      }
      for (auto& th : pool) th.join();
    }
    dense_ = std::move(m);
  });
  return *dense_;
}

void OperatorMatrix::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (x.size() != static_cast<Eigen::Index>(size())) throw InputError("apply: vector size mismatch");
  if (dense_) {
    y.noalias() = dense_->selfadjointView<Eigen::Lower>() * x;
    return;
  }
  std::call_once(*conv_once_, [this] { conv_ = std::make_unique<ConvolutionOperator>(*mask_, table_, nx_, ny_); });
  conv_->apply(x, y);
}

OperatorMatrix assemble(std::shared_ptr<const PixelMask> mask, const KernelSpec& kernel, const AssembleOptions& opts) {
  if (!mask) throw InputError("assemble: null mask");
  const std::size_t cap = opts.max_cells ? opts.max_cells : default_max_cells();
  const std::size_t n = mask->active_count();
  if (n > cap) {
    std::ostringstream os;
    os << "assemble: " << n << " cells exceed the cap of " << cap << "; try h >= "
       << mask->h() * std::sqrt(static_cast<double>(n) / static_cast<double>(cap)) * 1.05
       << " or raise LOGPOT_MAX_CELLS";
    throw InputError(os.str());
  }
  return OperatorMatrix(std::move(mask), kernel, opts.threads);
}

OperatorMatrix assemble(const PixelMask& mask, const KernelSpec& kernel, const AssembleOptions& opts) {
  return assemble(std::make_shared<const PixelMask>(mask), kernel, opts);
}

SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InputError("jacobi_eigen: matrix must be square");
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob2 = a.squaredNorm();
  SymmetricEigen out;
  for (out.sweeps = 0; out.sweeps < max_sweeps; ++out.sweeps) {
    const double off2 = a.squaredNorm() - a.diagonal().squaredNorm();
    if (off2 <= tol * tol * frob2) break;
    int rotations = 0;
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * (std::abs(a(p, p)) + std::abs(a(q, q)))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        ++rotations;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    if (rotations == 0) break;
  }
  if (out.sweeps == max_sweeps) throw ConvergenceError("jacobi_eigen: sweep cap reached", a.squaredNorm() - a.diagonal().squaredNorm());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

namespace {

SpectralResult from_full(const OperatorMatrix& A, int k, const Eigen::VectorXd& vals, const Eigen::MatrixXd& vecs,
                         bool want_bottom, const char* method, int iterations) {
  const Eigen::Index n = vals.size();
  SpectralResult r;
  r.h = A.h();
  r.method = method;
  r.iterations = iterations;
  for (int i = 0; i < k; ++i) {
    const Eigen::Index idx = n - 1 - i;
    r.tau_top.push_back(vals[idx]);
    r.residuals.push_back(residual(A, vecs.col(idx), vals[idx]));
    r.vectors.push_back(as_grid_function(A, vecs.col(idx)));
  }
  if (want_bottom) {
    r.tau_bottom = vals[0];
    r.bottom_converged = true;
    r.residuals.push_back(residual(A, vecs.col(0), vals[0]));
    r.bottom_vector = as_grid_function(A, vecs.col(0));
  }
  return r;
}

struct Locked {
  double value;
  Eigen::VectorXd vec;
  double res;
};

class Lanczos {
public:
  Lanczos(const OperatorMatrix& A, int k, const EigOptions& o)
      : A_(A), k_(k), o_(o), n_(static_cast<Eigen::Index>(A.size())), rng_(o.seed) {
    m_ = o.krylov_dim > 0 ? o.krylov_dim : std::max(60, 3 * k + 30);
  }

  SpectralResult run() {
    Eigen::VectorXd start = random_vector();
    bool verifying = false;
    int extra = 0;
    std::optional<Locked> bottom_guess;
    for (int restart = 0; restart < o_.max_restarts; ++restart) {
      iterations_ = restart + 1;
      const Eigen::Index avail = n_ - static_cast<Eigen::Index>(all_locked_count());
      if (avail <= 0) break;
      const Eigen::Index m = std::min<Eigen::Index>(m_, avail);
      build(start, m);
      const Eigen::Index mm = alpha_.size();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(alpha_, beta_.head(mm - 1), Eigen::ComputeEigenvectors);
      const Eigen::VectorXd& theta = es.eigenvalues();
      const Eigen::MatrixXd& S = es.eigenvectors();
      scale_ = std::max({scale_, std::abs(theta[0]), std::abs(theta[mm - 1])});
      const double tol = o_.tol * std::max(1.0, scale_);
      const double bnext = beta_[mm - 1];
      auto ritz = [&](Eigen::Index i) {
        Eigen::VectorXd y = V_.leftCols(mm) * S.col(i);
        return Locked{theta[i], y / y.norm(), std::abs(bnext * S(mm - 1, i))};
      };
      auto accept = [&](Locked& c) {
        if (c.res > tol) return false;
        c.res = residual(A_, c.vec, c.value);
        return c.res <= 10 * tol;
      };

      const bool top_full = static_cast<int>(top_.size()) == k_;
      const bool bottom_done = !o_.want_bottom || bottom_.has_value();
      std::vector<Eigen::VectorXd> pending;
      bool changed = false;

      const int need = k_ - static_cast<int>(top_.size());
      for (int i = 0; i < std::max(need, 1) && i < mm; ++i) {
        Locked c = ritz(mm - 1 - i);
        if (need > 0) {
          if (accept(c)) {
            top_.push_back(std::move(c));
            changed = true;
          } else {
            pending.push_back(c.vec);
          }
        } else {
          // top full: a Ritz value above the smallest locked one means a missed eigenvalue
          auto low = std::min_element(top_.begin(), top_.end(), [](auto& a, auto& b) { return a.value < b.value; });
          if (c.value > low->value + tol) {
            if (accept(c)) {
              *low = std::move(c);
            } else {
              pending.push_back(c.vec);
            }
            changed = true;
          }
        }
      }
      if (o_.want_bottom && mm > std::max(need, 1)) {
        Locked c = ritz(0);
        if (!bottom_) {
          if (accept(c)) {
            bottom_ = std::move(c);
            changed = true;
          } else {
            bottom_guess = c;
            pending.push_back(c.vec);
          }
        } else if (c.value < bottom_->value - tol) {
          if (accept(c)) bottom_ = std::move(c);
          else pending.push_back(c.vec);
          changed = true;
        }
      }

      if (top_full && bottom_done && verifying && !changed) break;
      if (static_cast<int>(top_.size()) == k_) {
        if (!bottom_.has_value() && o_.want_bottom && !o_.require_bottom && ++extra > o_.bottom_budget) break;
      }
      verifying = static_cast<int>(top_.size()) == k_ && (!o_.want_bottom || bottom_.has_value());

      if (verifying && pending.empty()) {
        start = random_vector();
      } else {
        start = 0.05 * random_vector();
        for (const auto& p : pending) start += p;
      }
    }

    if (static_cast<int>(top_.size()) < k_) {
      double worst = 0.0;
      for (const auto& t : top_) worst = std::max(worst, t.res);
      throw ConvergenceError("lanczos: top eigenpairs did not converge within the restart cap", worst);
    }
    if (o_.want_bottom && !bottom_ && o_.require_bottom)
      throw ConvergenceError("lanczos: smallest eigenpair did not converge",
                             bottom_guess ? residual(A_, bottom_guess->vec, bottom_guess->value) : 0.0);

    std::sort(top_.begin(), top_.end(), [](auto& a, auto& b) { return a.value > b.value; });
    SpectralResult r;
    r.h = A_.h();
    r.method = "lanczos";
    r.iterations = iterations_;
    for (auto& t : top_) {
      r.tau_top.push_back(t.value);
      r.residuals.push_back(t.res);
      r.vectors.push_back(as_grid_function(A_, t.vec));
    }
    if (o_.want_bottom) {
      const Locked* b = bottom_ ? &*bottom_ : (bottom_guess ? &*bottom_guess : nullptr);
      if (b) {
        r.tau_bottom = b->value;
        r.bottom_converged = bottom_.has_value();
        r.residuals.push_back(bottom_ ? b->res : residual(A_, b->vec, b->value));
        r.bottom_vector = as_grid_function(A_, b->vec);
      }
    }
    return r;
  }

private:
  std::size_t all_locked_count() const { return top_.size() + (bottom_ ? 1 : 0); }

  Eigen::VectorXd random_vector() {
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::VectorXd v(n_);
    for (Eigen::Index i = 0; i < n_; ++i) v[i] = N(rng_);
    return v;
  }

  void deflate(Eigen::VectorXd& w, Eigen::Index upto) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& t : top_) w -= t.vec.dot(w) * t.vec;
      if (bottom_) w -= bottom_->vec.dot(w) * bottom_->vec;
      if (upto > 0) w -= V_.leftCols(upto) * (V_.leftCols(upto).transpose() * w);
    }
  }

  void build(Eigen::VectorXd v, Eigen::Index m) {
    V_.resize(n_, m + 1);
    alpha_.resize(m);
    beta_.resize(m);
    deflate(v, 0);
    double nv = v.norm();
    if (nv < 1e-12) {
      v = random_vector();
      deflate(v, 0);
      nv = v.norm();
    }
    V_.col(0) = v / nv;
    Eigen::VectorXd w(n_);
    for (Eigen::Index j = 0; j < m; ++j) {
      A_.apply(V_.col(j), w);
      alpha_[j] = V_.col(j).dot(w);
      deflate(w, j + 1);
      const double b = w.norm();
      beta_[j] = b;
      if (b < 1e-13 * std::max(1.0, std::abs(alpha_[j]) + scale_) || j + 1 == m) {
        if (j + 1 < m) {
          alpha_.conservativeResize(j + 1);
          beta_.conservativeResize(j + 1);
          beta_[j] = 0.0;
        }
        return;
      }
      V_.col(j + 1) = w / b;
    }
  }

  const OperatorMatrix& A_;
  int k_;
  EigOptions o_;
  Eigen::Index n_;
  Eigen::Index m_;
  std::mt19937_64 rng_;
  double scale_ = 0.0;
  int iterations_ = 0;
  Eigen::MatrixXd V_;
  Eigen::VectorXd alpha_, beta_;
  std::vector<Locked> top_;
  std::optional<Locked> bottom_;
};

} // namespace

SpectralResult extremal_eigs(const OperatorMatrix& A, int k, const EigOptions& opts) {
  if (k < 1) throw InputError("extremal_eigs: k must be >= 1");
  const std::size_t n = A.size();
  if (static_cast<std::size_t>(k) + (opts.want_bottom ? 1 : 0) > n)
    throw InputError("extremal_eigs: more eigenpairs requested than cells");
  EigenMethod method = opts.method;
  if (method == EigenMethod::Auto) method = n <= opts.dense_limit ? EigenMethod::Dense : EigenMethod::Lanczos;
  if (method == EigenMethod::Dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.dense());
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
    return from_full(A, k, es.eigenvalues(), es.eigenvectors(), opts.want_bottom, "dense", 1);
  }
  if (method == EigenMethod::Jacobi) {
    const auto je = jacobi_eigen(A.dense());
    return from_full(A, k, je.values, je.vectors, opts.want_bottom, "jacobi", je.sweeps);
  }
  return Lanczos(A, k, opts).run();
}

double rayleigh(const GridFunction& u, const OperatorMatrix& A) {
  if (u.size() != A.size() || !same_cells(u.mask(), A.mask()))
    throw InputError("rayleigh: function does not live on the operator's mask");
  Eigen::Map<const Eigen::VectorXd> x(u.values().data(), static_cast<Eigen::Index>(u.size()));
  const double uu = x.squaredNorm();
  if (uu == 0.0) throw InputError("rayleigh: zero vector");
  Eigen::VectorXd Ax(x.size());
  A.apply(x, Ax);
  return x.dot(Ax) / uu;
}

Extrapolation richardson(const std::vector<double>& h, const std::vector<double>& v) {
  if (h.empty() || h.size() != v.size()) throw InputError("richardson: need matching nonempty lists");
  Extrapolation e;
  const std::size_t n = h.size();
  if (n == 1) {
    e.limit = v[0];
    return e;
  }
  double p = 2.0;
  const double r = h[n - 2] / h[n - 1];
  if (n >= 3) {
    const double r1 = h[n - 3] / h[n - 2];
    const double d1 = v[n - 2] - v[n - 3], d2 = v[n - 1] - v[n - 2];
    if (std::abs(r1 - r) <= 1e-6 * r && d1 * d2 > 0 && std::abs(d2) < std::abs(d1)) {
      const double obs = std::log(d1 / d2) / std::log(r);
      if (obs >= 0.5 && obs <= 4.0) {
        p = obs;
        e.order_assumed = false;
      }
    }
  }
  e.order = p;
  e.limit = v[n - 1] + (v[n - 1] - v[n - 2]) / (std::pow(r, p) - 1.0);
  return e;
}

RefineTable refine_study(const Shape& shape, const KernelSpec& kernel, const std::vector<double>& h_list,
                         const EigOptions& eig, const AssembleOptions& asm_opts) {
  if (h_list.empty()) throw InputError("refine_study: empty h list");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1])) throw InputError("refine_study: h list must be strictly descending");
  RefineTable t;
  std::vector<double> tops, bottoms;
  for (double h : h_list) {
    auto mask = std::make_shared<const PixelMask>(rasterize(shape, h));
    const auto A = assemble(mask, kernel, asm_opts);
    const auto r = extremal_eigs(A, 1, eig);
    t.rows.push_back({h, mask->active_count(), r.tau_top[0], r.tau_bottom, r.bottom_converged});
    tops.push_back(r.tau_top[0]);
    bottoms.push_back(r.tau_bottom);
  }
  t.top = richardson(h_list, tops);
  if (eig.want_bottom) t.bottom = richardson(h_list, bottoms);
  return t;
}

SignReport positive_sign_check(const SpectralResult& result, const PixelMask& mask) {
  if (result.vectors.empty()) throw InputError("positive_sign_check: no eigenvector");
  SignReport s;
  s.diameter = diameter(mask);
  const auto& v = result.vectors[0];
  const auto vals = v.values();
  s.top_min = *std::min_element(vals.begin(), vals.end());
  s.top_max = *std::max_element(vals.begin(), vals.end());
  const double big = std::max(std::abs(s.top_min), std::abs(s.top_max));
  s.top_sign_change = s.top_min < -1e-10 * big && s.top_max > 1e-10 * big;
  s.flagged = s.top_sign_change && s.diameter <= 1.0;
  if (result.bottom_vector) {
    const auto b = result.bottom_vector->values();
    s.bottom_min = *std::min_element(b.begin(), b.end());
    s.bottom_max = *std::max_element(b.begin(), b.end());
    const double bb = std::max(std::abs(*s.bottom_min), std::abs(*s.bottom_max));
    s.bottom_one_signed = !(*s.bottom_min < -1e-10 * bb && *s.bottom_max > 1e-10 * bb);
  }
  return s;
}

} // namespace logpot
