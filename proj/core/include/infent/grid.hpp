#pragma once

// Two-mode wavefunctions on an L x L position grid and the branch-cut
// construction of exactly periodic qudit Weyl operators from e^{iQ} and
// translations by xi = 2 pi / d.
//
// Grid: x_i = -X + i dx, dx = 2X / L, i < L. Momenta follow DFT wavenumber
// order j = 0..L/2-1, -L/2..-1 with p_j = 2 pi j / (L dx).
//
// With s = xi / dx grid steps per translation, the Weyl pair is stored as
// integer exponents of zeta = e^{2 pi i / d}:
//   U = zeta^{k(x)},  k(x) = ceil(x / xi - 1/2)   (position diagonal)
//   V = zeta^{n(p)},  n(p) = ceil(p - 1/2)         (momentum diagonal)
// which is U = Uhat^{-1} Utilde and V = Vhat^{-1} Vtilde with the roots
// taken on the principal branch. V U = zeta U V holds exactly when d s | L.

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <vector>

#include "infent/nopa.hpp"
#include "infent/operator.hpp"

namespace infent {

inline constexpr std::size_t kDefaultGridPoints = 512;
inline constexpr double kDefaultGridExtent = 12.0 * std::numbers::pi;

struct GridSpec {
  std::size_t points = kDefaultGridPoints;
  double extent = kDefaultGridExtent;

  /// L a power of two >= 8 with L^2 within the entry cap, X > 0.
  static GridSpec make(std::size_t points, double extent);

  [[nodiscard]] double dx() const { return 2.0 * extent / static_cast<double>(points); }
  [[nodiscard]] double dp() const { return std::numbers::pi / extent; }
  [[nodiscard]] std::vector<double> positions() const;
  /// Signed wavenumbers j in DFT order.
  [[nodiscard]] std::vector<long long> wavenumbers() const;
  [[nodiscard]] std::vector<double> momenta() const;
};

/// Result of fitting X so that xi = 2 pi / d is a whole number of steps.
struct WeylGrid {
  GridSpec spec;
  double requested_extent = 0.0;
  std::size_t steps = 0;     ///< s = xi / dx
  bool adjusted = false;
  bool exact_weyl = false;   ///< d s divides L
};

/// Prefers the X closest to the request among those with d s | L (ties to the
/// larger X); if none exists falls back to the nearest integer s.
WeylGrid choose_weyl_grid(std::size_t points, double extent, int d);

struct GridOps {
  GridSpec spec;
  int d = 2;
  std::size_t steps = 0;
  double a = 0.0;
  bool exact_weyl = false;

  std::vector<int> u1;  ///< exponents of U1 on x_i
  std::vector<int> u2;  ///< exponents of U2 on x_i (argument x - a)
  std::vector<int> v;   ///< exponents of V on p_j (both modes)

  std::vector<Complex> utilde1, utilde2;  ///< e^{i x}, e^{i (x - a)}
  std::vector<Complex> uhat1, uhat2;      ///< principal d-th roots of Utilde^d
  std::vector<Complex> vtilde;            ///< e^{i xi p}: the index roll by s in momentum
  std::vector<Complex> vhat;              ///< principal d-th root of Vtilde^d

  [[nodiscard]] Complex zeta() const;
};

/// Throws ArgumentError unless xi = 2 pi / d is a whole number of grid steps.
GridOps build_ops(const GridSpec& spec, int d, double a = 0.0);

/// Exponent table of the p-th power, reduced mod d.
std::vector<int> power_exponents(const std::vector<int>& e, int p, int d);
/// zeta^e elementwise; exponent 0 maps to exactly 1.
std::vector<Complex> exponent_values(const std::vector<int>& e, int d);

/// psi(x1, x2) at index i1 * L + i2, normalized with the dx^2 measure.
class GridState {
 public:
  GridState(GridSpec spec, std::vector<Complex> values);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] const std::vector<Complex>& values() const { return values_; }
  [[nodiscard]] std::size_t points() const { return spec_.points; }
  [[nodiscard]] double norm() const;
  [[nodiscard]] GridState normalized() const;

 private:
  GridSpec spec_;
  std::vector<Complex> values_;
};

/// <a|b> with the dx^2 measure.
Complex grid_inner(const GridState& a, const GridState& b);

/// Mass with |x1| or |x2| beyond (1 - fraction) X.
double boundary_mass(const GridState& s, double fraction = 0.05);
/// Same in momentum, relative to the Nyquist momentum pi / dx.
double momentum_boundary_mass(const GridState& s, double fraction = 0.05);

struct GridMoments {
  double mean_q1 = 0.0;
  double mean_q2 = 0.0;
  double var_q1 = 0.0;
  double var_q2 = 0.0;
  double var_qdiff = 0.0;
  double var_qsum = 0.0;
};

GridMoments grid_position_moments(const GridState& s);

/// Which quadrature combination the Gaussian squeezes: the Fock form squeezes
/// Q1 - Q2; the literal alternative squeezes Q1 + Q2 (lambda -> -lambda).
enum class SqueezeConvention { kFock, kLiteral };

struct GridNopa {
  GridState state;
  double boundary_mass = 0.0;
  double analytic_boundary_mass = 0.0;
  double momentum_boundary_mass = 0.0;
  double var_qdiff = 0.0;
  double moment_error = 0.0;  ///< |grid Var(Q1 - Q2) - e^{-2r}|
  bool resolved = false;      ///< moment_error <= 1e-6
  bool boundary_flagged = false;
};

inline constexpr double kBoundaryThreshold = 1e-8;
inline constexpr double kExtentErrorThreshold = 1e-3;

/// Gaussian two-mode squeezed state, mode 2 displaced by a. Throws
/// ArgumentError ("extent too small", with the required X) when the analytic
/// boundary mass exceeds 1e-3.
GridNopa grid_nopa(const GridSpec& spec, double lambda, double a = 0.0,
                   SqueezeConvention convention = SqueezeConvention::kFock,
                   double boundary_threshold = kBoundaryThreshold);

/// Sum_{n1,n2} C(n1, n2) h_{n1}(x1) h_{n2}(x2) with Hermite functions of unit frequency.
GridState fock_to_grid(const GridSpec& spec, const FockVector& psi);

/// Applies U or V of one mode (1 or 2).
std::vector<Complex> apply_u(const GridOps& ops, const std::vector<Complex>& psi, int mode);
std::vector<Complex> apply_v(const GridOps& ops, const std::vector<Complex>& psi, int mode);
/// Translation by xi on one mode: psi(x + xi), an exact index roll.
std::vector<Complex> apply_vtilde(const GridOps& ops, const std::vector<Complex>& psi, int mode);

/// ||V U psi - zeta U V psi|| (dx^2 norm) on the given mode.
double commutation_residual(const GridOps& ops, const GridState& s, int mode);

/// (1/d^2) sum_{n,m} <psi| (U1 U2^{-1})^n (V1 V2)^m |psi>.
Complex grid_weyl_fidelity(const GridOps& ops, const GridState& s);

struct GridFidelity {
  double fidelity = 0.0;
  double imag = 0.0;
  double commutation_residual = 0.0;
  double boundary_mass = 0.0;
  double moment_error = 0.0;
  bool exact_weyl = false;
};

GridFidelity grid_extraction_fidelity(const GridSpec& spec, double lambda, int d, double a = 0.0);

/// <(Uhat1 - Uhat2)^dagger (Uhat1 - Uhat2)> and the same for Vhat1 - Vhat2^dagger.
struct DoublesShadow {
  double u_defect = 0.0;
  double v_defect = 0.0;
};

DoublesShadow doubles_shadow(const GridOps& ops, const GridState& s);

/// Binary layout: "EPRG", u32 version (1), u32 L, f64 X, then L*L pairs of
/// float32 (re, im), row-major, little-endian.
void write_grid_state(const std::filesystem::path& path, const GridState& s);
GridState read_grid_state(const std::filesystem::path& path);

}  // namespace infent
