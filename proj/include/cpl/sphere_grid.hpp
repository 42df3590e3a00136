#pragma once

// Discretizations of the unit sphere S^{n-1} used as the parameter domain of
// star-shaped hypersurfaces rho(omega) * omega.
//
//  * axisymmetric: functions of x = cos(theta) only, any n >= 3. Nodes are the
//    Gauss-Jacobi points for the weight (1 - x^2)^{(n-3)/2}, which is exactly the
//    polar factor of the round measure, so weights integrate zonal polynomials
//    exactly. Derivatives use the barycentric collocation matrix on those nodes.
//  * full (n = 3): Gaussian latitude/longitude grid with a spherical-harmonic
//    transform; derivatives are spectral in both angles.
//
// Node order is theta ascending (north pole first); full grids are row-major
// in (latitude, longitude).

#include <array>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <complex>
#include <mutex>

#include <Eigen/Dense>
#include <fftw3.h>

#include "cpl/constants.hpp"
#include "cpl/errors.hpp"
#include "cpl/quadrature.hpp"

namespace cpl {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

enum class GridMode { axisymmetric, full };

inline const char* to_string(GridMode m) {
  return m == GridMode::axisymmetric ? "axisymmetric" : "full";
}

inline GridMode parse_grid_mode(const std::string& s) {
  if (s == "axisymmetric" || s == "axisym") return GridMode::axisymmetric;
  if (s == "full") return GridMode::full;
  throw ParameterError("unknown grid mode '" + s + "' (expected axisymmetric|full)");
}

/// Grid resolution used when none is requested; CPL_DEFAULT_RES overrides 128.
inline int default_resolution() {
  if (const char* env = std::getenv("CPL_DEFAULT_RES")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 4 && v <= 4096) return static_cast<int>(v);
    throw ParameterError(std::string("CPL_DEFAULT_RES must be an integer in [4, 4096], got '") + env + "'");
  }
  return 128;
}

/// Angular derivatives of a nodal function. Axisymmetric grids fill dx/dxx
/// (derivatives in x = cos theta); full grids fill the theta/phi fields.
/// `values` is the function as represented by the discretization (the
/// band-limited projection on full grids).
struct AngularDerivatives {
  std::vector<double> values;
  std::vector<double> dx, dxx;
  std::vector<double> dt, dp, dtt, dtp, dpp;
};

namespace detail {

struct AxisymmetricOps {
  Eigen::MatrixXd d1;  // d/dx
  Eigen::MatrixXd d2;  // d^2/dx^2
};

// Normalized associated Legendre functions (no Condon-Shortley phase) with
// int_{-1}^{1} P_l^m(x)^2 dx = 1 / (2 pi), tabulated on the northern half of a
// latitude set that is symmetric about the equator.
struct HarmonicTables {
  int degree = 0;
  int half = 0;  // rows 0..half-1 (includes the equator row when nlat is odd)
  // per order m: row-major (degree - m + 1) x half
  std::vector<std::vector<double>> p;
  // per order m: sqrt((2l+1)(l^2-m^2)/(2l-1)), the P_{l-1} coefficient in dP_l/dtheta
  std::vector<std::vector<double>> lower;
};

// Batched real FFTs along longitude (one transform per latitude row). Plans are
// created once under a lock; execution on fresh buffers is thread-safe.
class FourierPlans {
 public:
  FourierPlans(int rows, int cols) : rows_(rows), cols_(cols), half_(cols / 2 + 1) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* in = fftw_alloc_real(static_cast<std::size_t>(rows) * cols);
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(rows) * half_);
    forward_ = fftw_plan_many_dft_r2c(1, &cols_, rows, in, nullptr, 1, cols, out, nullptr, 1, half_, FFTW_ESTIMATE);
    backward_ = fftw_plan_many_dft_c2r(1, &cols_, rows, out, nullptr, 1, half_, in, nullptr, 1, cols, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
  }
  ~FourierPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FourierPlans(const FourierPlans&) = delete;
  FourierPlans& operator=(const FourierPlans&) = delete;

  int half() const { return half_; }

  struct RealBuffer {
    explicit RealBuffer(std::size_t n) : p(fftw_alloc_real(n)) {}
    ~RealBuffer() { fftw_free(p); }
    RealBuffer(const RealBuffer&) = delete;
    RealBuffer& operator=(const RealBuffer&) = delete;
    double* p;
  };
  struct ComplexBuffer {
    explicit ComplexBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {}
    ~ComplexBuffer() { fftw_free(p); }
    ComplexBuffer(const ComplexBuffer&) = delete;
    ComplexBuffer& operator=(const ComplexBuffer&) = delete;
    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(p); }
    fftw_complex* p;
  };

  // C(j, m) = sum_k f(j, k) exp(-i m phi_k)
  void forward(const double* f, ComplexBuffer& out) const {
    RealBuffer in(static_cast<std::size_t>(rows_) * cols_);
    std::copy(f, f + static_cast<std::size_t>(rows_) * cols_, in.p);
    fftw_execute_dft_r2c(forward_, in.p, out.p);
  }
  // f(j, k) = sum over the implicit Hermitian spectrum; destroys `spectrum`.
  std::vector<double> backward(ComplexBuffer& spectrum) const {
    RealBuffer out(static_cast<std::size_t>(rows_) * cols_);
    fftw_execute_dft_c2r(backward_, spectrum.p, out.p);
    return std::vector<double>(out.p, out.p + static_cast<std::size_t>(rows_) * cols_);
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  int rows_, cols_, half_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

struct GridData {
  int n = 3;
  GridMode mode = GridMode::axisymmetric;
  int nlat = 0;
  int nlon = 1;
  std::vector<double> x, sin_theta, phi;  // per latitude / longitude
  std::vector<double> cos_phi, sin_phi;   // per longitude
  std::vector<double> polar_weights;      // per latitude
  std::vector<double> weights;            // per node
  AxisymmetricOps axi;
  HarmonicTables sh;
  std::shared_ptr<FourierPlans> fft;
};

inline AxisymmetricOps collocation_matrices(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  // barycentric weights in log form to avoid under/overflow
  std::vector<double> logw(n), sign(n);
  double maxlog = -1e300;
  for (int j = 0; j < n; ++j) {
    double s = 1.0, l = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      l -= std::log(std::abs(d));
      if (d < 0) s = -s;
    }
    logw[j] = l;
    sign[j] = s;
    maxlog = std::max(maxlog, l);
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = sign[j] * std::exp(logw[j] - maxlog);

  AxisymmetricOps ops;
  ops.d1 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = (w[j] / w[i]) / (x[i] - x[j]);
      ops.d1(i, j) = v;
      diag -= v;
    }
    ops.d1(i, i) = diag;
  }
  // second derivative matrix (Berrut-Trefethen), also with the negative-sum diagonal
  ops.d2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = 2.0 * ops.d1(i, j) * (ops.d1(i, i) - 1.0 / (x[i] - x[j]));
      ops.d2(i, j) = v;
      diag -= v;
    }
    ops.d2(i, i) = diag;
  }
  return ops;
}

inline HarmonicTables harmonic_tables(int degree, const std::vector<double>& x,
                                      const std::vector<double>& sin_theta) {
  const int nlat = static_cast<int>(x.size());
  const int half = (nlat + 1) / 2;
  HarmonicTables t;
  t.degree = degree;
  t.half = half;
  t.p.resize(degree + 1);
  t.lower.resize(degree + 1);
  for (int m = 0; m <= degree; ++m) {
    t.p[m].assign(static_cast<std::size_t>(degree - m + 1) * half, 0.0);
    for (int l = m; l <= degree; ++l) {
      const double ll = l, mm = m;
      t.lower[m].push_back(std::sqrt((2.0 * ll + 1.0) * (ll * ll - mm * mm) / (2.0 * ll - 1.0)));
    }
  }
  const double p00 = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int j = 0; j < half; ++j) {
    const double c = x[j], s = sin_theta[j];
    double pmm = p00;
    for (int m = 0; m <= degree; ++m) {
      if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      auto P = [&](int l) -> double& { return t.p[m][static_cast<std::size_t>(l - m) * half + j]; };
      P(m) = pmm;
      if (m + 1 <= degree) P(m + 1) = std::sqrt(2.0 * m + 3.0) * c * pmm;
      for (int l = m + 2; l <= degree; ++l) {
        const double ll = l, mm = m;
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
        const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
        P(l) = a * (c * P(l - 1) - b * P(l - 2));
      }
    }
  }
  return t;
}

}  // namespace detail

class SphereGrid {
 public:
  /// Zonal grid on S^{n-1} with `polar_nodes` Gauss-Jacobi nodes.
  static SphereGrid axisymmetric(int n, int polar_nodes) {
    require_dimension(n);
    if (polar_nodes < 4) throw ParameterError("axisymmetric grid needs at least 4 polar nodes");
    auto g = std::make_shared<detail::GridData>();
    g->n = n;
    g->mode = GridMode::axisymmetric;
    g->nlat = polar_nodes;
    g->nlon = 1;
    const auto rule = quad::gauss_jacobi_symmetric(polar_nodes, 0.5 * (n - 3));
    const double orbit = unit_sphere_area(n - 2);
    // theta ascending => x descending
    for (int j = polar_nodes - 1; j >= 0; --j) {
      const double x = rule.nodes[j];
      g->x.push_back(x);
      g->sin_theta.push_back(std::sqrt((1.0 - x) * (1.0 + x)));
      g->polar_weights.push_back(rule.weights[j] * orbit);
    }
    g->phi = {0.0};
    g->cos_phi = {1.0};
    g->sin_phi = {0.0};
    g->weights = g->polar_weights;
    g->axi = detail::collocation_matrices(g->x);
    return SphereGrid(std::move(g));
  }

  /// Gaussian grid on S^2: `nlat` Gauss-Legendre latitudes by `nlon` equispaced
  /// longitudes; spectral truncation min(nlat - 1, nlon / 2 - 1).
  static SphereGrid full(int nlat, int nlon) {
    if (nlat < 4 || nlon < 8) throw ParameterError("full grid needs nlat >= 4 and nlon >= 8");
    if (nlon % 2 != 0) throw ParameterError("full grid needs an even longitude count");
    auto g = std::make_shared<detail::GridData>();
    g->n = 3;
    g->mode = GridMode::full;
    g->nlat = nlat;
    g->nlon = nlon;
    const auto rule = quad::gauss_legendre(nlat);
    for (int j = nlat - 1; j >= 0; --j) {
      const double x = rule.nodes[j];
      g->x.push_back(x);
      g->sin_theta.push_back(std::sqrt((1.0 - x) * (1.0 + x)));
      g->polar_weights.push_back(rule.weights[j]);
    }
    const double dphi = 2.0 * std::numbers::pi / nlon;
    for (int k = 0; k < nlon; ++k) {
      g->phi.push_back(k * dphi);
      g->cos_phi.push_back(std::cos(k * dphi));
      g->sin_phi.push_back(std::sin(k * dphi));
    }
    g->weights.reserve(static_cast<std::size_t>(nlat) * nlon);
    for (int j = 0; j < nlat; ++j)
      for (int k = 0; k < nlon; ++k) g->weights.push_back(g->polar_weights[j] * dphi);
    const int degree = std::min(nlat - 1, nlon / 2 - 1);
    g->sh = detail::harmonic_tables(degree, g->x, g->sin_theta);
    g->fft = std::make_shared<detail::FourierPlans>(nlat, nlon);
    return SphereGrid(std::move(g));
  }

  /// Grid at a given resolution: axisymmetric uses `resolution` polar nodes,
  /// full uses resolution x 2*resolution.
  static SphereGrid make(int n, int resolution, GridMode mode) {
    if (mode == GridMode::full) {
      if (n != 3) throw ParameterError("full (non-axisymmetric) grids are only supported for n = 3");
      return full(resolution, 2 * resolution);
    }
    return axisymmetric(n, resolution);
  }

  int dimension() const { return d_->n; }
  GridMode mode() const { return d_->mode; }
  std::size_t size() const { return d_->weights.size(); }
  int polar_count() const { return d_->nlat; }
  int azimuth_count() const { return d_->nlon; }
  int polar_index(std::size_t i) const { return static_cast<int>(i / d_->nlon); }
  int azimuth_index(std::size_t i) const { return static_cast<int>(i % d_->nlon); }

  double cos_polar(std::size_t i) const { return d_->x[polar_index(i)]; }
  double sin_polar(std::size_t i) const { return d_->sin_theta[polar_index(i)]; }
  double polar_angle(std::size_t i) const { return std::acos(cos_polar(i)); }
  double azimuth(std::size_t i) const { return d_->phi[azimuth_index(i)]; }
  double cos_azimuth(std::size_t i) const { return d_->cos_phi[azimuth_index(i)]; }
  double sin_azimuth(std::size_t i) const { return d_->sin_phi[azimuth_index(i)]; }

  /// Unit direction of node i in reduced coordinates: (z, s, 0) with s the
  /// distance from the symmetry axis for axisymmetric grids, (x, y, z) otherwise.
  Vec3 direction(std::size_t i) const {
    const double c = cos_polar(i), s = sin_polar(i);
    if (mode() == GridMode::axisymmetric) return {c, s, 0.0};
    return {s * cos_azimuth(i), s * sin_azimuth(i), c};
  }

  std::span<const double> weights() const { return d_->weights; }

  /// Highest spherical-harmonic degree resolved by the discretization.
  int max_degree() const {
    return mode() == GridMode::axisymmetric ? d_->nlat - 1 : d_->sh.degree;
  }

  /// Largest eigenvalue magnitude of the discrete Laplacian on the unit sphere.
  double laplacian_bound() const {
    const double l = max_degree();
    return l * (l + dimension() - 2.0);
  }

  bool same_layout(const SphereGrid& o) const {
    return d_ == o.d_ || (mode() == o.mode() && dimension() == o.dimension() &&
                          polar_count() == o.polar_count() && azimuth_count() == o.azimuth_count());
  }

  std::string describe() const {
    std::string s = std::string(to_string(mode())) + " n=" + std::to_string(dimension()) +
                    " nodes=" + std::to_string(polar_count());
    if (mode() == GridMode::full) s += "x" + std::to_string(azimuth_count());
    return s;
  }

  /// Quadrature of nodal values against the round measure.
  double integrate(std::span<const double> f) const {
    check_size(f.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += d_->weights[i] * f[i];
    return acc;
  }

  AngularDerivatives derivatives(std::span<const double> f) const {
    check_size(f.size());
    return mode() == GridMode::axisymmetric ? axisymmetric_derivatives(f) : harmonic_derivatives(f, true);
  }

  /// Band-limited representative of f (identity on axisymmetric grids).
  std::vector<double> project(std::span<const double> f) const {
    check_size(f.size());
    if (mode() == GridMode::axisymmetric) return {f.begin(), f.end()};
    return harmonic_derivatives(f, false).values;
  }

 private:
  explicit SphereGrid(std::shared_ptr<const detail::GridData> d) : d_(std::move(d)) {}

  void check_size(std::size_t n) const {
    if (n != size()) throw ParameterError("nodal array size does not match the grid");
  }

  AngularDerivatives axisymmetric_derivatives(std::span<const double> f) const {
    const int n = d_->nlat;
    // differentiate the deviation from the mean so constants map to exactly zero
    Eigen::Map<const Eigen::VectorXd> raw(f.data(), n);
    const Eigen::VectorXd v = raw.array() - raw.mean();
    AngularDerivatives out;
    out.values.assign(f.begin(), f.end());
    out.dx.resize(n);
    out.dxx.resize(n);
    Eigen::Map<Eigen::VectorXd>(out.dx.data(), n) = d_->axi.d1 * v;
    Eigen::Map<Eigen::VectorXd>(out.dxx.data(), n) = d_->axi.d2 * v;
    return out;
  }

  // Spherical-harmonic transform on the Gaussian grid. Legendre sums use the
  // parity P_l^m(-x) = (-1)^{l+m} P_l^m(x); theta derivatives are recovered
  // from the same table through
  //   dP_l/dtheta = (l x P_l - lower_l P_{l-1}) / sin
  //   d2P_l/dtheta2 = -cot dP_l/dtheta - (l(l+1) - m^2 / sin^2) P_l.
  AngularDerivatives harmonic_derivatives(std::span<const double> f, bool with_derivatives) const {
    using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto& t = d_->sh;
    const auto& fft = *d_->fft;
    const int nlat = d_->nlat, nlon = d_->nlon, L = t.degree, nh = fft.half(), h = t.half;
    const std::size_t spec_size = static_cast<std::size_t>(nlat) * nh;

    detail::FourierPlans::ComplexBuffer fourier(spec_size);
    fft.forward(f.data(), fourier);
    Eigen::Map<CMat> C(fourier.data(), nlat, nh);

    const double scale = 2.0 * std::numbers::pi / nlon;
    const auto& w = d_->polar_weights;
    const auto& x = d_->x;
    const auto& sn = d_->sin_theta;
    CMat v0 = CMat::Zero(nlat, nh), vt, vtt;
    if (with_derivatives) {
      vt = CMat::Zero(nlat, nh);
      vtt = CMat::Zero(nlat, nh);
    }
    const int sums = with_derivatives ? 4 : 1;
    // acc[(parity * 4 + k) * 2 + part][j]
    std::vector<std::vector<double>> acc(16, std::vector<double>(h));
    std::vector<double> ge_re(h), ge_im(h), go_re(h), go_im(h);
    std::vector<std::complex<double>> coef(L + 2);

    for (int m = 0; m <= L; ++m) {
      const int K = L - m + 1;
      const double* P = t.p[m].data();
      for (int j = 0; j < h; ++j) {
        const int jj = nlat - 1 - j;
        const std::complex<double> a = C(j, m) * (w[j] * scale);
        const std::complex<double> b = jj != j ? C(jj, m) * (w[jj] * scale) : std::complex<double>(0.0);
        ge_re[j] = a.real() + b.real();
        ge_im[j] = a.imag() + b.imag();
        go_re[j] = a.real() - b.real();
        go_im[j] = a.imag() - b.imag();
      }
      for (int k = 0; k < K; ++k) {
        const bool even = ((k + 2 * m) % 2) == 0;  // parity of l + m with l = m + k
        const double* row = P + static_cast<std::size_t>(k) * h;
        const double* gr = even ? ge_re.data() : go_re.data();
        const double* gi = even ? ge_im.data() : go_im.data();
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < h; ++j) {
          sr += row[j] * gr[j];
          si += row[j] * gi[j];
        }
        coef[k] = {sr, si};
      }
      coef[K] = 0.0;

      for (auto& a : acc) std::fill(a.begin(), a.end(), 0.0);
      for (int k = 0; k < K; ++k) {
        const int l = m + k;
        const int parity = k % 2;
        const std::complex<double> alpha[4] = {coef[k], static_cast<double>(l) * coef[k],
                                               static_cast<double>(l) * (l + 1.0) * coef[k],
                                               k + 1 < K ? t.lower[m][k + 1] * coef[k + 1] : 0.0};
        const double* row = P + static_cast<std::size_t>(k) * h;
        for (int q = 0; q < sums; ++q) {
          double* re = acc[(parity * 4 + q) * 2].data();
          double* im = acc[(parity * 4 + q) * 2 + 1].data();
          const double ar = alpha[q].real(), ai = alpha[q].imag();
          for (int j = 0; j < h; ++j) {
            re[j] += ar * row[j];
            im[j] += ai * row[j];
          }
        }
      }
      const double m2 = static_cast<double>(m) * m;
      for (int j = 0; j < h; ++j) {
        const int jj = nlat - 1 - j;
        for (int side = 0; side < (jj != j ? 2 : 1); ++side) {
          const int node = side == 0 ? j : jj;
          const double sign = side == 0 ? 1.0 : -1.0;
          auto S = [&](int q) {
            return std::complex<double>(acc[q * 2][j] + sign * acc[(4 + q) * 2][j],
                                        acc[q * 2 + 1][j] + sign * acc[(4 + q) * 2 + 1][j]);
          };
          const std::complex<double> s0 = S(0);
          v0(node, m) = s0;
          if (!with_derivatives) continue;
          const double xn = x[node], s = sn[node];
          const std::complex<double> d1 = (xn * S(1) - S(3)) / s;
          vt(node, m) = d1;
          vtt(node, m) = -(xn / s) * d1 - S(2) + (m2 / (s * s)) * s0;
        }
      }
    }

    auto synth = [&](const CMat& spectrum, std::complex<double> (*factor)(int)) {
      detail::FourierPlans::ComplexBuffer buf(spec_size);
      Eigen::Map<CMat> b(buf.data(), nlat, nh);
      b = spectrum;
      if (factor)
        for (int m = 0; m < nh; ++m) b.col(m) *= factor(m);
      return fft.backward(buf);
    };
    AngularDerivatives out;
    out.values = synth(v0, nullptr);
    if (!with_derivatives) return out;
    auto d_phi = [](int m) { return std::complex<double>(0.0, m); };
    auto d_phi2 = [](int m) { return std::complex<double>(-static_cast<double>(m) * m, 0.0); };
    out.dt = synth(vt, nullptr);
    out.dtt = synth(vtt, nullptr);
    out.dp = synth(v0, d_phi);
    out.dtp = synth(vt, d_phi);
    out.dpp = synth(v0, d_phi2);
    return out;
  }

  std::shared_ptr<const detail::GridData> d_;
};

}  // namespace cpl
