#pragma once

#include "bspc/types.hpp"

namespace bspc {

/// Angular wavenumber k = omega / c; k = 0 is the admitted static limit.
struct WaveParams {
  double k = 0.0;
};

/// Off-diagonal Schwartz kernel of the electrostatic induction operator:
/// (3 rr^T - 1) / (4 pi d^3). Exactly traceless and symmetric.
Mat3 static_dipole_kernel(const Vec3& r, const Vec3& rp);

/// Depolarization self block of a symmetric (cubic or spherical) cell.
Mat3 static_self_term();

/// Dynamic-correction kernel, smooth part:
///   k^2/(4 pi d) [ e^{-ikd} 1 + (1 - e^{-ikd}) rr^T ].
CMat3 gamma_sharp_kernel(const Vec3& r, const Vec3& rp, WaveParams w);

/// Dynamic-correction kernel, dipole-like remainder:
///   [1 - e^{-ikd}(1 + ikd)] / (4 pi d^3) [ 1 - 3 rr^T ].
CMat3 gamma_sharpsharp_kernel(const Vec3& r, const Vec3& rp, WaveParams w);

/// Full dynamic correction: gamma_sharp + gamma_sharpsharp. Vanishes at k=0.
CMat3 gamma_kernel(const Vec3& r, const Vec3& rp, WaveParams w);

/// Self block of the dynamic correction over the equivalent-volume ball of
/// the cell: isotropic c * 1 with
///   c = int_0^a k^2 d [ e^{-ikd} + (1 - e^{-ikd})/3 ] dd,  a = (3 V / 4pi)^{1/3}.
/// The traceless part averages to zero over angles and contributes nothing.
CMat3 gamma_self_term(WaveParams w, double cell_volume);

/// Scalar acoustic kernel k^2 e^{-ikd} / (4 pi d); requires k > 0.
Complex acoustic_kernel(const Vec3& r, const Vec3& rp, WaveParams w);

/// Acoustic self term: integral of the scalar kernel over the
/// equivalent-volume ball (same radial quadrature as gamma_self_term).
Complex acoustic_self_term(WaveParams w, double cell_volume);

}  // namespace bspc
