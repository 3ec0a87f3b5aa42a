#pragma once

#include <utility>
#include <vector>

#include "bspc/types.hpp"

namespace bspc {

/// Electrostatic sphere spectrum: eigenvalue -l/(2l+1) with multiplicity
/// 2l+1, for l = 1..L_max.
struct MieLevel {
  int l;
  double eigenvalue;
  int multiplicity;
};
std::vector<MieLevel> static_spectrum(int l_max);

/// Riemann zeta by direct summation with an Euler-Maclaurin tail; accurate
/// to ~1e-15 for s >= 2.
double zeta(double s);

struct SeriesConstants {
  double c3_closed;   // sum 1/(2l+1)^3 = 7 zeta(3)/8 - 1
  double c5_closed;   // sum l^2/(2l+1)^5 = 7 zeta(3)/32 + 31 zeta(5)/128 - pi^4/192
  double c3_partial;  // partial sum at L = 10^6
  double c5_partial;
};
SeriesConstants series_constants();

/// Real solid harmonic U_{lm}(p) of degree l (m in [-l, l]; m >= 0 carries
/// the cosine azimuthal factor, m < 0 the sine one) and its exact gradient.
/// Orthonormal over the unit sphere. Degree capped at 40 (polynomial
/// coefficients stay within double precision there).
double real_solid_harmonic(int l, int m, const Vec3& p);
Vec3 real_solid_harmonic_gradient(int l, int m, const Vec3& p);

/// Sphere eigenmode f_{lm}(r) = (l R^{2l+1})^{-1/2} grad(|r|^l Y_{lm}),
/// evaluated at points inside the closed ball of radius R.
std::vector<CVec3> f_mode_eval(int l, int m, double R, const std::vector<Vec3>& points);

/// Closed form of the harmonic kernel g = G_D + G_N - 1/(2 pi |r-r'|) for
/// the ball of radius R. Diverges logarithmically for coincident boundary
/// points (error).
double sphere_g_closed(const Vec3& r, const Vec3& rp, double R);

/// Truncated spherical-harmonic series of the Dirichlet and (symmetrized)
/// Neumann Green functions of the ball.
struct SphereGreenPair {
  double g_dirichlet;
  double g_neumann;
};
SphereGreenPair gdgn_series(const Vec3& r, const Vec3& rp, double R, int L);

/// Legendre series of the boundary kernel (n . grad) G on the sphere:
///   (1 / 4 pi R^2) sum_{l=1}^{L} P_l(cos gamma) / (2l+1).
double normal_G_series(double cos_gamma, double R, long L);

/// P_0..P_L at a single argument (upward recurrence).
std::vector<double> legendre_sequence(double x, int L);

}  // namespace bspc
