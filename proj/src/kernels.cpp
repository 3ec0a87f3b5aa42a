#include "bspc/kernels.hpp"

#include <cmath>
#include <functional>

namespace bspc {

namespace {

constexpr Complex kImag{0.0, 1.0};

void require_distinct(const Vec3& r, const Vec3& rp, const char* who) {
  if ((r - rp).squaredNorm() == 0.0)
    throw ValidationError(std::string(who) + ": coincident points; self-term handled separately");
}

// Adaptive Simpson on [a, b] for a smooth complex integrand.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         Complex fa, Complex fm, Complex fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  Complex flm = f(lm), frm = f(rm);
  Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  Complex delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

Complex integrate_radial(const std::function<Complex(double)>& f, double a, double b) {
  Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double scale = std::max({std::abs(fa), std::abs(fm), std::abs(fb), 1e-30}) * (b - a);
  return adaptive_simpson(f, a, b, fa, fm, fb, 1e-13 * scale, 40);
}

double equivalent_ball_radius(double cell_volume) {
  return std::cbrt(3.0 * cell_volume / (4.0 * kPi));
}

}  // namespace

Mat3 static_dipole_kernel(const Vec3& r, const Vec3& rp) {
  require_distinct(r, rp, "static_dipole_kernel");
  Vec3 d = r - rp;
  double dist = d.norm();
  Vec3 u = d / dist;
  Mat3 proj = u * u.transpose();
  return (3.0 * proj - Mat3::Identity()) / (4.0 * kPi * dist * dist * dist);
}

Mat3 static_self_term() { return -Mat3::Identity() / 3.0; }

CMat3 gamma_sharp_kernel(const Vec3& r, const Vec3& rp, WaveParams w) {
  require_distinct(r, rp, "gamma_sharp_kernel");
  Vec3 d = r - rp;
  double dist = d.norm();
  Vec3 u = d / dist;
  Complex phase = std::exp(-kImag * w.k * dist);
  Mat3 proj = u * u.transpose();
  CMat3 out = phase * CMat3::Identity() + (1.0 - phase) * proj.cast<Complex>();
  return (w.k * w.k / (4.0 * kPi * dist)) * out;
}

CMat3 gamma_sharpsharp_kernel(const Vec3& r, const Vec3& rp, WaveParams w) {
  require_distinct(r, rp, "gamma_sharpsharp_kernel");
  Vec3 d = r - rp;
  double dist = d.norm();
  Vec3 u = d / dist;
  Complex phase = std::exp(-kImag * w.k * dist);
  Complex amp = 1.0 - phase * (1.0 + kImag * w.k * dist);
  Mat3 proj = u * u.transpose();
  CMat3 out = CMat3::Identity() - 3.0 * proj.cast<Complex>();
  return (amp / (4.0 * kPi * dist * dist * dist)) * out;
}

CMat3 gamma_kernel(const Vec3& r, const Vec3& rp, WaveParams w) {
  return gamma_sharp_kernel(r, rp, w) + gamma_sharpsharp_kernel(r, rp, w);
}

CMat3 gamma_self_term(WaveParams w, double cell_volume) {
  if (!(cell_volume > 0.0)) throw ValidationError("gamma_self_term: cell volume must be positive");
  if (w.k == 0.0) return CMat3::Zero();
  double a = equivalent_ball_radius(cell_volume);
  double k = w.k;
  Complex c = integrate_radial(
      [k](double d) {
        Complex phase = std::exp(-kImag * k * d);
        return k * k * d * (phase + (1.0 - phase) / 3.0);
      },
      0.0, a);
  return c * CMat3::Identity();
}

Complex acoustic_kernel(const Vec3& r, const Vec3& rp, WaveParams w) {
  require_distinct(r, rp, "acoustic_kernel");
  if (!(w.k > 0.0)) throw ValidationError("acoustic_kernel: requires k > 0");
  double dist = (r - rp).norm();
  return w.k * w.k * std::exp(-kImag * w.k * dist) / (4.0 * kPi * dist);
}

Complex acoustic_self_term(WaveParams w, double cell_volume) {
  if (!(cell_volume > 0.0))
    throw ValidationError("acoustic_self_term: cell volume must be positive");
  if (w.k == 0.0) return Complex{0.0, 0.0};
  double a = equivalent_ball_radius(cell_volume);
  double k = w.k;
  return integrate_radial(
      [k](double d) { return k * k * d * std::exp(-kImag * k * d); }, 0.0, a);
}

}  // namespace bspc
