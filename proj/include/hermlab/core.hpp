#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermlab {

using Cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecD = Eigen::VectorXd;

constexpr double kHermitianTol = 1e-12;
constexpr double kPivotFloor = 1e-14;
constexpr double kDefaultFdStep = 1e-4;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A point in one holomorphic chart. All tensor computations are chart-local.
struct ChartPoint {
  VecC coords;
  std::string chart_id = "default";

  int dim() const { return static_cast<int>(coords.size()); }
};

inline bool is_finite(const Cplx& c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

inline bool is_finite(const VecC& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!is_finite(v[i])) return false;
  return true;
}

inline bool is_finite(const MatC& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!is_finite(m.data()[i])) return false;
  return true;
}

inline ChartPoint make_point(std::initializer_list<Cplx> cs) {
  ChartPoint p;
  p.coords.resize(static_cast<Eigen::Index>(cs.size()));
  Eigen::Index i = 0;
  for (const auto& c : cs) p.coords[i++] = c;
  if (p.dim() < 1) throw DomainError("ChartPoint needs dimension >= 1");
  if (!is_finite(p.coords)) throw DomainError("ChartPoint coordinates must be finite");
  return p;
}

inline ChartPoint make_point(VecC v, std::string chart = "default") {
  if (v.size() < 1) throw DomainError("ChartPoint needs dimension >= 1");
  if (!is_finite(v)) throw DomainError("ChartPoint coordinates must be finite");
  return ChartPoint{std::move(v), std::move(chart)};
}

// ---------------------------------------------------------------------------
// Wirtinger finite differences.
//
// d/dz_j   = (d/dx_j - i d/dy_j) / 2
// d/dzbar_j = (d/dx_j + i d/dy_j) / 2
// Central stencils in each real coordinate; mixed second derivatives by
// nesting, giving O(h^2) overall.
// ---------------------------------------------------------------------------

template <typename F>
auto fd_wirtinger_d(const F& f, const VecC& z, int j, double h)
    -> decltype(f(z)) {
  // materialize each step: `auto` on an Eigen expression here would keep
  // references to destroyed temporaries when f is matrix-valued
  using R = decltype(f(z));
  VecC zp = z, zm = z;
  zp[j] += h;
  zm[j] -= h;
  R dx = (f(zp) - f(zm)) / (2.0 * h);
  zp = z;
  zm = z;
  zp[j] += Cplx(0, h);
  zm[j] -= Cplx(0, h);
  R dy = (f(zp) - f(zm)) / (2.0 * h);
  return R(0.5 * (dx - Cplx(0, 1) * dy));
}

template <typename F>
auto fd_wirtinger_dbar(const F& f, const VecC& z, int j, double h)
    -> decltype(f(z)) {
  using R = decltype(f(z));
  VecC zp = z, zm = z;
  zp[j] += h;
  zm[j] -= h;
  R dx = (f(zp) - f(zm)) / (2.0 * h);
  zp = z;
  zm = z;
  zp[j] += Cplx(0, h);
  zm[j] -= Cplx(0, h);
  R dy = (f(zp) - f(zm)) / (2.0 * h);
  return R(0.5 * (dx + Cplx(0, 1) * dy));
}

template <typename F>
auto fd_wirtinger_ddbar(const F& f, const VecC& z, int j, int k, double h)
    -> decltype(f(z)) {
  auto dj = [&](const VecC& w) { return fd_wirtinger_d(f, w, j, h); };
  return fd_wirtinger_dbar(dj, z, k, h);
}

// ---------------------------------------------------------------------------
// Deterministic RNG. std::uniform_real_distribution is implementation
// defined, so we draw doubles directly from the engine bits.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  double uniform01() {
    return static_cast<double>(state_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  Cplx complex_in_disc(double radius) {
    // rejection sampling, deterministic given the seed
    for (;;) {
      double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return radius * Cplx(x, y);
    }
  }

  Cplx complex_in_box(double re_lo, double re_hi, double im_lo, double im_hi) {
    return Cplx(uniform(re_lo, re_hi), uniform(im_lo, im_hi));
  }

  /// Uniform on the unit sphere of C^n (real dimension 2n-1).
  VecC unit_vector(int n) {
    VecC v(n);
    for (;;) {
      double norm2 = 0;
      for (int i = 0; i < n; ++i) {
        double x = gaussian(), y = gaussian();
        v[i] = Cplx(x, y);
        norm2 += x * x + y * y;
      }
      if (norm2 > 1e-12) return v / std::sqrt(norm2);
    }
  }

  double gaussian() {
    // Box-Muller; uses two uniforms per call, deterministic order.
    double u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 state_;
};

/// Kahan-compensated accumulator for long quadrature sums. Summation order is
/// the iteration order, which callers keep fixed for reproducibility.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(const Cplx& c) {
    re.add(c.real());
    im.add(c.imag());
  }
  Cplx value() const { return Cplx(re.value(), im.value()); }
};

}  // namespace hermlab
