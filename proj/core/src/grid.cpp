#include "infent/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "infent/weyl.hpp"

namespace infent {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

long long ceil_div(long long num, long long den) {
  // den > 0
  const long long q = num / den;
  return (num % den != 0 && num > 0) ? q + 1 : q;
}

int reduce(long long e, int d) {
  const long long r = e % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place DFTs through FFTW. The planner is not thread-safe, execution is.
// FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
// so repeated runs are bitwise identical.
class Dft {
 public:
  enum class Axis { kBoth, kFirst, kSecond };

  Dft(std::vector<Complex>& data, std::size_t n, Axis axis, int sign) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    const int ni = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (axis == Axis::kBoth) {
      plan_ = fftw_plan_dft_2d(ni, ni, buf, buf, sign, flags);
    } else {
      // First axis: elements i1 * n + i2 with fixed i2 are n apart.
      const int stride = axis == Axis::kFirst ? ni : 1;
      const int dist = axis == Axis::kFirst ? 1 : ni;
      int dims[1] = {ni};
      plan_ = fftw_plan_many_dft(1, dims, ni, buf, nullptr, stride, dist, buf, nullptr, stride, dist, sign, flags);
    }
    if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  ~Dft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  void run() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

void forward(std::vector<Complex>& data, std::size_t n, Dft::Axis axis) {
  Dft(data, n, axis, FFTW_FORWARD).run();
}

void backward(std::vector<Complex>& data, std::size_t n, Dft::Axis axis) {
  Dft(data, n, axis, FFTW_BACKWARD).run();
  const double scale = 1.0 / static_cast<double>(axis == Dft::Axis::kBoth ? n * n : n);
  for (auto& z : data) z *= scale;
}

Dft::Axis axis_of(int mode) {
  if (mode == 1) return Dft::Axis::kFirst;
  if (mode == 2) return Dft::Axis::kSecond;
  throw ArgumentError("grid: mode must be 1 or 2");
}

// Multiplies a per-coordinate factor along one mode.
void scale_along(std::vector<Complex>& data, std::size_t n, int mode, const std::vector<Complex>& f) {
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) data[i1 * n + i2] *= f[mode == 1 ? i1 : i2];
}

double weighted_norm2(const std::vector<Complex>& v, double dx) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc * dx * dx;
}

double normal_tail(double cutoff, double mean, double var) {
  // P(|x| > cutoff) for x ~ N(mean, var)
  const double s = std::sqrt(2.0 * var);
  return 0.5 * std::erfc((cutoff - mean) / s) + 0.5 * std::erfc((cutoff + mean) / s);
}

double analytic_boundary(double extent, double var, double a) {
  const double cut = 0.95 * extent;
  return normal_tail(cut, 0.0, var) + normal_tail(cut, a, var);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

GridSpec GridSpec::make(std::size_t points, double extent) {
  if (points < 8 || !is_power_of_two(points)) throw ArgumentError("GridSpec: L must be a power of two >= 8");
  if (points * points > max_entries()) throw SizeError("GridSpec: L^2 exceeds the configured entry cap");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ArgumentError("GridSpec: extent must be positive");
  return GridSpec{points, extent};
}

std::vector<double> GridSpec::positions() const {
  std::vector<double> x(points);
  for (std::size_t i = 0; i < points; ++i) x[i] = -extent + static_cast<double>(i) * dx();
  return x;
}

std::vector<long long> GridSpec::wavenumbers() const {
  std::vector<long long> j(points);
  const auto l = static_cast<long long>(points);
  for (long long i = 0; i < l; ++i) j[static_cast<std::size_t>(i)] = i < l / 2 ? i : i - l;
  return j;
}

std::vector<double> GridSpec::momenta() const {
  const auto j = wavenumbers();
  std::vector<double> p(points);
  const double scale = 2.0 * kPi / (static_cast<double>(points) * dx());
  for (std::size_t i = 0; i < points; ++i) p[i] = scale * static_cast<double>(j[i]);
  return p;
}

WeylGrid choose_weyl_grid(std::size_t points, double extent, int d) {
  if (d < 2) throw ArgumentError("choose_weyl_grid: d must be at least 2");
  const GridSpec requested = GridSpec::make(points, extent);
  const double s_real = (2.0 * kPi / d) / requested.dx();
  const auto l = static_cast<long long>(points);

  WeylGrid out;
  out.requested_extent = extent;
  // X(s) = pi L / (d s)
  auto extent_for = [&](long long s) { return kPi * static_cast<double>(l) / (static_cast<double>(d) * static_cast<double>(s)); };

  long long best = 0;
  for (long long s = 1; s * d <= l; ++s) {
    if (l % (s * d) != 0) continue;
    if (best == 0) {
      best = s;
      continue;
    }
    const double cand = std::abs(extent_for(s) - extent);
    const double prev = std::abs(extent_for(best) - extent);
    // Ties go to the larger extent, i.e. the smaller s.
    if (cand < prev - 1e-12 * extent) best = s;
  }
  if (best != 0) {
    out.exact_weyl = true;
  } else {
    best = std::max<long long>(1, std::llround(s_real));
    out.exact_weyl = false;
  }
  out.steps = static_cast<std::size_t>(best);
  const double x = extent_for(best);
  out.adjusted = std::abs(x - extent) > 1e-12 * extent;
  out.spec = GridSpec::make(points, out.adjusted ? x : extent);
  return out;
}

Complex GridOps::zeta() const { return root_of_unity(1, d); }

GridOps build_ops(const GridSpec& spec_in, int d, double a) {
  if (d < 2) throw ArgumentError("build_ops: d must be at least 2");
  const GridSpec spec = GridSpec::make(spec_in.points, spec_in.extent);
  const double xi = 2.0 * kPi / d;
  const double s_real = xi / spec.dx();
  const long long s = std::llround(s_real);
  if (s < 1 || std::abs(s_real - static_cast<double>(s)) > 1e-9 * s_real) {
    throw ArgumentError("build_ops: xi = 2 pi / d is not a whole number of grid steps (xi / dx = " + fmt(s_real) + ")");
  }
  const auto l = static_cast<long long>(spec.points);
  const std::size_t n = spec.points;

  GridOps ops;
  ops.spec = spec;
  ops.d = d;
  ops.steps = static_cast<std::size_t>(s);
  ops.a = a;
  ops.exact_weyl = l % (s * d) == 0;

  const auto x = spec.positions();
  const auto j = spec.wavenumbers();
  ops.u1.resize(n);
  ops.u2.resize(n);
  ops.v.resize(n);
  ops.utilde1.resize(n);
  ops.utilde2.resize(n);
  ops.uhat1.resize(n);
  ops.uhat2.resize(n);
  ops.vtilde.resize(n);
  ops.vhat.resize(n);

  // a on the grid keeps the cell boundaries in exact integer arithmetic.
  const double a_steps = a / spec.dx();
  const bool a_on_grid = std::abs(a_steps - std::round(a_steps)) <= 1e-9 * std::max(1.0, std::abs(a_steps));
  const long long a_off = a_on_grid ? std::llround(a_steps) : 0;

  for (std::size_t i = 0; i < n; ++i) {
    const long long off = static_cast<long long>(i) - l / 2;  // x_i = off * dx
    // k = ceil(x / xi - 1/2) = ceil((2 off - s) / (2 s))
    const long long k1 = ceil_div(2 * off - s, 2 * s);
    const long long k2 = a_on_grid ? ceil_div(2 * (off - a_off) - s, 2 * s)
                                   : static_cast<long long>(std::ceil((x[i] - a) / xi - 0.5));
    ops.u1[i] = reduce(k1, d);
    ops.u2[i] = reduce(k2, d);
    ops.utilde1[i] = std::polar(1.0, x[i]);
    ops.utilde2[i] = std::polar(1.0, x[i] - a);
    // Principal roots of Utilde^d: the residual phase x - xi k lies in (-xi/2, xi/2],
    // so the tie on the cut lands on +pi / d.
    ops.uhat1[i] = std::polar(1.0, x[i] - xi * static_cast<double>(k1));
    ops.uhat2[i] = std::polar(1.0, x[i] - a - xi * static_cast<double>(k2));

    // p_j = j d s / L; n = ceil(p - 1/2) = ceil((2 j d s - L) / (2 L))
    const long long nj = ceil_div(2 * j[i] * d * s - l, 2 * l);
    ops.v[i] = reduce(nj, d);
    const double phase = 2.0 * kPi * static_cast<double>(j[i] * s) / static_cast<double>(l);
    ops.vtilde[i] = std::polar(1.0, phase);
    ops.vhat[i] = std::polar(1.0, 2.0 * kPi * static_cast<double>(j[i] * d * s - nj * l) / static_cast<double>(d * l));
  }
  return ops;
}

std::vector<int> power_exponents(const std::vector<int>& e, int p, int d) {
  std::vector<int> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = reduce(static_cast<long long>(e[i]) * p, d);
  return out;
}

std::vector<Complex> exponent_values(const std::vector<int>& e, int d) {
  std::vector<Complex> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = root_of_unity(e[i], d);
  return out;
}

GridState::GridState(GridSpec spec, std::vector<Complex> values) : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.points * spec_.points) throw ArgumentError("GridState: expected L*L values");
}

double GridState::norm() const { return std::sqrt(weighted_norm2(values_, spec_.dx())); }

GridState GridState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ArgumentError("GridState: zero wavefunction");
  std::vector<Complex> v = values_;
  for (auto& z : v) z /= n;
  return GridState(spec_, std::move(v));
}

Complex grid_inner(const GridState& a, const GridState& b) {
  if (a.points() != b.points() || a.spec().extent != b.spec().extent) {
    throw ArgumentError("grid_inner: states live on different grids");
  }
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) acc += std::conj(a.values()[i]) * b.values()[i];
  const double dx = a.spec().dx();
  return acc * dx * dx;
}

double boundary_mass(const GridState& s, double fraction) {
  const auto x = s.spec().positions();
  const double cut = (1.0 - fraction) * s.spec().extent;
  const std::size_t n = s.points();
  double edge = 0.0;
  double total = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double w = std::norm(s.values()[i1 * n + i2]);
      total += w;
      if (std::abs(x[i1]) > cut || std::abs(x[i2]) > cut) edge += w;
    }
  return edge / total;
}

double momentum_boundary_mass(const GridState& s, double fraction) {
  const std::size_t n = s.points();
  std::vector<Complex> f = s.values();
  forward(f, n, Dft::Axis::kBoth);
  const auto j = s.spec().wavenumbers();
  const double cut = (1.0 - fraction) * static_cast<double>(n / 2);
  double edge = 0.0;
  double total = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double w = std::norm(f[i1 * n + i2]);
      total += w;
      if (std::abs(static_cast<double>(j[i1])) > cut || std::abs(static_cast<double>(j[i2])) > cut) edge += w;
    }
  return edge / total;
}

GridMoments grid_position_moments(const GridState& s) {
  const auto x = s.spec().positions();
  const std::size_t n = s.points();
  double total = 0.0;
  double m1 = 0.0, m2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double w = std::norm(s.values()[i1 * n + i2]);
      total += w;
      m1 += w * x[i1];
      m2 += w * x[i2];
      s11 += w * x[i1] * x[i1];
      s22 += w * x[i2] * x[i2];
      s12 += w * x[i1] * x[i2];
    }
  GridMoments out;
  out.mean_q1 = m1 / total;
  out.mean_q2 = m2 / total;
  out.var_q1 = s11 / total - out.mean_q1 * out.mean_q1;
  out.var_q2 = s22 / total - out.mean_q2 * out.mean_q2;
  const double cov = s12 / total - out.mean_q1 * out.mean_q2;
  out.var_qdiff = out.var_q1 + out.var_q2 - 2.0 * cov;
  out.var_qsum = out.var_q1 + out.var_q2 + 2.0 * cov;
  return out;
}

GridNopa grid_nopa(const GridSpec& spec_in, double lambda, double a, SqueezeConvention convention,
                   double boundary_threshold) {
  if (!(lambda >= 0.0) || !(lambda < 1.0)) throw ArgumentError("grid_nopa: lambda must lie in [0, 1)");
  const GridSpec spec = GridSpec::make(spec_in.points, spec_in.extent);
  const double r = std::atanh(lambda);
  const double var_marginal = 0.5 * std::cosh(2.0 * r);

  const double analytic = analytic_boundary(spec.extent, var_marginal, a);
  if (analytic > kExtentErrorThreshold) {
    double lo = spec.extent;
    double hi = spec.extent;
    while (analytic_boundary(hi, var_marginal, a) > boundary_threshold) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (analytic_boundary(mid, var_marginal, a) > boundary_threshold ? lo : hi) = mid;
    }
    throw ArgumentError("grid_nopa: extent too small (boundary mass " + fmt(analytic) + "); need X >= " + fmt(hi));
  }

  const double v_sq = std::exp(-2.0 * r);  // squeezed combination variance
  const double v_an = std::exp(2.0 * r);   // anti-squeezed
  const auto x = spec.positions();
  const std::size_t n = spec.points;
  std::vector<Complex> psi(n * n);
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double y2 = x[i2] - a;
      const double diff = x[i1] - y2;
      const double sum = x[i1] + y2;
      const double e = convention == SqueezeConvention::kFock
                           ? diff * diff / (4.0 * v_sq) + sum * sum / (4.0 * v_an)
                           : sum * sum / (4.0 * v_sq) + diff * diff / (4.0 * v_an);
      psi[i1 * n + i2] = std::exp(-e);
    }

  GridNopa out{GridState(spec, std::move(psi)).normalized()};
  out.analytic_boundary_mass = analytic;
  out.boundary_mass = boundary_mass(out.state);
  out.momentum_boundary_mass = momentum_boundary_mass(out.state);
  const GridMoments m = grid_position_moments(out.state);
  out.var_qdiff = convention == SqueezeConvention::kFock ? m.var_qdiff : m.var_qsum;
  out.moment_error = std::abs(out.var_qdiff - v_sq);
  out.resolved = out.moment_error <= 1e-6;
  out.boundary_flagged = out.boundary_mass > boundary_threshold;
  return out;
}

GridState fock_to_grid(const GridSpec& spec, const FockVector& psi) {
  const std::size_t levels = psi.trunc();
  const auto x = spec.positions();
  const std::size_t n = spec.points;
  // h_0 = pi^{-1/4} e^{-x^2/2}, h_k = sqrt(2/k) x h_{k-1} - sqrt((k-1)/k) h_{k-2}
  Eigen::MatrixXd h(static_cast<Eigen::Index>(levels), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h(0, ii) = std::pow(kPi, -0.25) * std::exp(-0.5 * x[i] * x[i]);
    if (levels > 1) h(1, ii) = std::sqrt(2.0) * x[i] * h(0, ii);
    for (std::size_t k = 2; k < levels; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const double kd = static_cast<double>(k);
      h(kk, ii) = std::sqrt(2.0 / kd) * x[i] * h(kk - 1, ii) - std::sqrt((kd - 1.0) / kd) * h(kk - 2, ii);
    }
  }
  const Matrix hc = h.cast<Complex>();
  const Matrix phi = hc.transpose() * psi.coefficients() * hc;
  std::vector<Complex> values(n * n);
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2)
      values[i1 * n + i2] = phi(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2));
  return GridState(spec, std::move(values)).normalized();
}

std::vector<Complex> apply_u(const GridOps& ops, const std::vector<Complex>& psi, int mode) {
  axis_of(mode);
  std::vector<Complex> out = psi;
  scale_along(out, ops.spec.points, mode, exponent_values(mode == 1 ? ops.u1 : ops.u2, ops.d));
  return out;
}

std::vector<Complex> apply_v(const GridOps& ops, const std::vector<Complex>& psi, int mode) {
  const Dft::Axis axis = axis_of(mode);
  std::vector<Complex> out = psi;
  forward(out, ops.spec.points, axis);
  scale_along(out, ops.spec.points, mode, exponent_values(ops.v, ops.d));
  backward(out, ops.spec.points, axis);
  return out;
}

std::vector<Complex> apply_vtilde(const GridOps& ops, const std::vector<Complex>& psi, int mode) {
  axis_of(mode);
  const std::size_t n = ops.spec.points;
  const std::size_t s = ops.steps;
  std::vector<Complex> out(psi.size());
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const std::size_t src = mode == 1 ? ((i1 + s) % n) * n + i2 : i1 * n + (i2 + s) % n;
      out[i1 * n + i2] = psi[src];
    }
  return out;
}

double commutation_residual(const GridOps& ops, const GridState& s, int mode) {
  if (s.points() != ops.spec.points) throw ArgumentError("commutation_residual: grid mismatch");
  const auto lhs = apply_v(ops, apply_u(ops, s.values(), mode), mode);
  auto rhs = apply_u(ops, apply_v(ops, s.values(), mode), mode);
  const Complex z = ops.zeta();
  double acc = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) acc += std::norm(lhs[i] - z * rhs[i]);
  const double dx = ops.spec.dx();
  return std::sqrt(acc * dx * dx);
}

Complex grid_weyl_fidelity(const GridOps& ops, const GridState& s) {
  if (s.points() != ops.spec.points) throw ArgumentError("grid_weyl_fidelity: grid mismatch");
  const std::size_t n = ops.spec.points;
  const int d = ops.d;
  const auto& psi = s.values();

  std::vector<Complex> spec_psi = psi;
  forward(spec_psi, n, Dft::Axis::kBoth);

  // phi_m = (V1 V2)^m psi for every m, each a diagonal phase in momentum.
  std::vector<std::vector<Complex>> phi(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) {
    std::vector<Complex> f = spec_psi;
    for (std::size_t j1 = 0; j1 < n; ++j1)
      for (std::size_t j2 = 0; j2 < n; ++j2)
        f[j1 * n + j2] *= root_of_unity(static_cast<long long>(m) * (ops.v[j1] + ops.v[j2]), d);
    backward(f, n, Dft::Axis::kBoth);
    phi[static_cast<std::size_t>(m)] = std::move(f);
  }

  const double dx = ops.spec.dx();
  return weyl_fidelity(d, [&](int nn, int m) {
    const auto& f = phi[static_cast<std::size_t>(m)];
    Complex acc = 0.0;
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        const Complex u = root_of_unity(static_cast<long long>(nn) * (ops.u1[i1] - ops.u2[i2]), d);
        acc += std::conj(psi[i1 * n + i2]) * u * f[i1 * n + i2];
      }
    return acc * dx * dx;
  });
}

GridFidelity grid_extraction_fidelity(const GridSpec& spec, double lambda, int d, double a) {
  const GridOps ops = build_ops(spec, d, a);
  const GridNopa st = grid_nopa(ops.spec, lambda, a);
  const Complex f = grid_weyl_fidelity(ops, st.state);
  GridFidelity out;
  out.fidelity = f.real();
  out.imag = f.imag();
  out.commutation_residual =
      std::max(commutation_residual(ops, st.state, 1), commutation_residual(ops, st.state, 2));
  out.boundary_mass = st.boundary_mass;
  out.moment_error = st.moment_error;
  out.exact_weyl = ops.exact_weyl;
  return out;
}

DoublesShadow doubles_shadow(const GridOps& ops, const GridState& s) {
  if (s.points() != ops.spec.points) throw ArgumentError("doubles_shadow: grid mismatch");
  const std::size_t n = ops.spec.points;
  DoublesShadow out;
  double total = 0.0;
  double acc = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double w = std::norm(s.values()[i1 * n + i2]);
      total += w;
      acc += w * std::norm(ops.uhat1[i1] - ops.uhat2[i2]);
    }
  out.u_defect = acc / total;

  std::vector<Complex> f = s.values();
  forward(f, n, Dft::Axis::kBoth);
  total = 0.0;
  acc = 0.0;
  for (std::size_t j1 = 0; j1 < n; ++j1)
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      const double w = std::norm(f[j1 * n + j2]);
      total += w;
      acc += w * std::norm(ops.vhat[j1] - std::conj(ops.vhat[j2]));
    }
  out.v_defect = acc / total;
  return out;
}

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

constexpr char kMagic[4] = {'E', 'P', 'R', 'G'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8;

}  // namespace

void write_grid_state(const std::filesystem::path& path, const GridState& s) {
  std::string buf;
  buf.reserve(kHeaderBytes + s.values().size() * 8);
  buf.append(kMagic, 4);
  put_u32(buf, kFormatVersion);
  put_u32(buf, static_cast<std::uint32_t>(s.points()));
  put_u64(buf, std::bit_cast<std::uint64_t>(s.spec().extent));
  for (const auto& z : s.values()) {
    put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(z.real())));
    put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(z.imag())));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_grid_state: cannot open " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write_grid_state: write failed for " + path.string());
}

GridState read_grid_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_grid_state: cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw ArgumentError("read_grid_state: not an EPRG file");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  const auto version = static_cast<std::uint32_t>(get_le(p + 4, 4));
  if (version != kFormatVersion) throw ArgumentError("read_grid_state: unsupported version " + std::to_string(version));
  const auto l = static_cast<std::size_t>(get_le(p + 8, 4));
  const double extent = std::bit_cast<double>(get_le(p + 12, 8));
  const GridSpec spec = GridSpec::make(l, extent);
  if (buf.size() != kHeaderBytes + l * l * 8) throw ArgumentError("read_grid_state: payload size does not match L");
  std::vector<Complex> values(l * l);
  const unsigned char* q = p + kHeaderBytes;
  for (std::size_t i = 0; i < l * l; ++i) {
    const float re = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(q + 8 * i, 4)));
    const float im = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(q + 8 * i + 4, 4)));
    values[i] = Complex(re, im);
  }
  return GridState(spec, std::move(values));
}

}  // namespace infent
