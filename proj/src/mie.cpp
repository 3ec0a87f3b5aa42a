#include "bspc/mie.hpp"

#include <algorithm>
#include <cmath>

namespace bspc {

std::vector<MieLevel> static_spectrum(int l_max) {
  if (l_max < 1) throw ValidationError("static_spectrum: L_max must be >= 1");
  std::vector<MieLevel> levels;
  levels.reserve(l_max);
  for (int l = 1; l <= l_max; ++l)
    levels.push_back({l, -static_cast<double>(l) / (2 * l + 1), 2 * l + 1});
  return levels;
}

double zeta(double s) {
  if (!(s > 1.0)) throw ValidationError("zeta: requires s > 1");
  const int n = 10000;
  double sum = 0.0;
  for (int i = n - 1; i >= 1; --i) sum += std::pow(static_cast<double>(i), -s);
  // Euler-Maclaurin tail from n upward.
  double ns = std::pow(static_cast<double>(n), -s);
  sum += ns * n / (s - 1.0) + 0.5 * ns + s * ns / n / 12.0 -
         s * (s + 1.0) * (s + 2.0) * ns / (static_cast<double>(n) * n * n) / 720.0;
  return sum;
}

SeriesConstants series_constants() {
  SeriesConstants c;
  double z3 = zeta(3.0), z5 = zeta(5.0);
  c.c3_closed = 7.0 * z3 / 8.0 - 1.0;
  c.c5_closed = 7.0 * z3 / 32.0 + 31.0 * z5 / 128.0 - kPi * kPi * kPi * kPi / 192.0;
  c.c3_partial = 0.0;
  c.c5_partial = 0.0;
  for (long l = 1000000; l >= 1; --l) {
    double q = 2.0 * l + 1.0;
    c.c3_partial += 1.0 / (q * q * q);
    c.c5_partial += static_cast<double>(l) * l / (q * q * q * q * q);
  }
  return c;
}

namespace {

constexpr int kMaxDegree = 40;

// Coefficients of r^l P_l^m(z/r) (1-t^2)^{-m/2}-stripped polynomial:
//   Lambda_{lm}(z, r^2) = sum_j c_j z^{l-m-2j} (r^2)^j,
//   c_j = 2^{-l} (-1)^j C(l,j) C(2l-2j,l) (l-2j)!/(l-2j-m)!.
std::vector<double> lambda_coefficients(int l, int m) {
  std::vector<double> c;
  for (int j = 0; 2 * j <= l - m; ++j) {
    double v = std::exp(std::lgamma(l + 1) - std::lgamma(j + 1) - std::lgamma(l - j + 1) +
                        std::lgamma(2 * (l - j) + 1) - std::lgamma(l + 1) -
                        std::lgamma(l - 2 * j + 1) + std::lgamma(l - 2 * j + 1) -
                        std::lgamma(l - 2 * j - m + 1) - l * std::log(2.0));
    c.push_back(((j % 2) ? -1.0 : 1.0) * v);
  }
  return c;
}

double sh_normalization(int l, int m) {
  // sqrt((2l+1)/(4pi) (l-m)!/(l+m)!), for m >= 0.
  double ratio = 1.0;
  for (int i = l - m + 1; i <= l + m; ++i) ratio /= static_cast<double>(i);
  return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
}

struct AzimuthalPair {
  double c;  // Re (x+iy)^m
  double s;  // Im (x+iy)^m
};

std::vector<AzimuthalPair> azimuthal_powers(double x, double y, int m) {
  std::vector<AzimuthalPair> cs(m + 1);
  cs[0] = {1.0, 0.0};
  for (int i = 1; i <= m; ++i)
    cs[i] = {cs[i - 1].c * x - cs[i - 1].s * y, cs[i - 1].c * y + cs[i - 1].s * x};
  return cs;
}

void check_degree(int l, int m) {
  if (l < 1 || std::abs(m) > l)
    throw ValidationError("solid harmonic: requires l >= 1 and |m| <= l");
  if (l > kMaxDegree) throw ValidationError("solid harmonic: degree capped at 40");
}

}  // namespace

double real_solid_harmonic(int l, int m, const Vec3& p) {
  check_degree(l, m);
  const int ma = std::abs(m);
  auto coeff = lambda_coefficients(l, ma);
  auto cs = azimuthal_powers(p.x(), p.y(), ma);
  const double r2 = p.squaredNorm();
  double lambda = 0.0;
  for (int j = 0; j < static_cast<int>(coeff.size()); ++j)
    lambda += coeff[j] * std::pow(p.z(), l - ma - 2 * j) * std::pow(r2, j);
  double azim = (m >= 0) ? cs[ma].c : cs[ma].s;
  double scale = sh_normalization(l, ma) * ((ma % 2) ? -1.0 : 1.0) * (ma > 0 ? std::sqrt(2.0) : 1.0);
  return scale * azim * lambda;
}

Vec3 real_solid_harmonic_gradient(int l, int m, const Vec3& p) {
  check_degree(l, m);
  const int ma = std::abs(m);
  auto coeff = lambda_coefficients(l, ma);
  auto cs = azimuthal_powers(p.x(), p.y(), ma);
  const double x = p.x(), y = p.y(), z = p.z();
  const double r2 = p.squaredNorm();

  auto zpow = [&](int e) { return e < 0 ? 0.0 : std::pow(z, e); };
  auto rpow = [&](int e) { return e < 0 ? 0.0 : std::pow(r2, e); };

  double lambda = 0.0, dlambda_dz = 0.0, dlambda_dr2 = 0.0;
  for (int j = 0; j < static_cast<int>(coeff.size()); ++j) {
    int a = l - ma - 2 * j;
    lambda += coeff[j] * zpow(a) * rpow(j);
    if (a > 0) dlambda_dz += coeff[j] * a * zpow(a - 1) * rpow(j);
    if (j > 0) dlambda_dr2 += coeff[j] * j * zpow(a) * rpow(j - 1);
  }

  double azim = (m >= 0) ? cs[ma].c : cs[ma].s;
  // d/dx (x+iy)^m = m (x+iy)^{m-1}; real/imag parts give the azimuthal
  // derivatives of the cosine and sine families.
  double dazim_dx = 0.0, dazim_dy = 0.0;
  if (ma > 0) {
    dazim_dx = (m >= 0) ? ma * cs[ma - 1].c : ma * cs[ma - 1].s;
    dazim_dy = (m >= 0) ? -ma * cs[ma - 1].s : ma * cs[ma - 1].c;
  }

  Vec3 grad;
  grad.x() = dazim_dx * lambda + azim * dlambda_dr2 * 2.0 * x;
  grad.y() = dazim_dy * lambda + azim * dlambda_dr2 * 2.0 * y;
  grad.z() = azim * (dlambda_dz + dlambda_dr2 * 2.0 * z);

  double scale = sh_normalization(l, ma) * ((ma % 2) ? -1.0 : 1.0) * (ma > 0 ? std::sqrt(2.0) : 1.0);
  return scale * grad;
}

std::vector<CVec3> f_mode_eval(int l, int m, double R, const std::vector<Vec3>& points) {
  check_degree(l, m);
  if (!(R > 0.0)) throw ValidationError("f_mode_eval: radius must be positive");
  const double norm = 1.0 / std::sqrt(l * std::pow(R, 2 * l + 1));
  const Complex i{0.0, 1.0};
  const int ma = std::abs(m);

  std::vector<CVec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points) {
    if (p.norm() > R * (1.0 + 1e-12))
      throw ValidationError("f_mode_eval: point outside the ball");
    CVec3 g;
    if (m == 0) {
      g = real_solid_harmonic_gradient(l, 0, p).cast<Complex>();
    } else {
      // r^l Y_{l,+ma} = (U_{l,ma} + i U_{l,-ma}) / sqrt(2); conjugate (with
      // Condon-Shortley sign) for negative m.
      Vec3 gc = real_solid_harmonic_gradient(l, ma, p);
      Vec3 gs = real_solid_harmonic_gradient(l, -ma, p);
      if (m > 0)
        g = (gc.cast<Complex>() + i * gs.cast<Complex>()) / std::sqrt(2.0);
      else
        g = ((ma % 2) ? -1.0 : 1.0) * (gc.cast<Complex>() - i * gs.cast<Complex>()) / std::sqrt(2.0);
    }
    out.push_back(norm * g);
  }
  return out;
}

double sphere_g_closed(const Vec3& r, const Vec3& rp, double R) {
  if (!(R > 0.0)) throw ValidationError("sphere_g_closed: radius must be positive");
  const double a = r.norm(), b = rp.norm();
  if (a > R * (1.0 + 1e-12) || b > R * (1.0 + 1e-12))
    throw ValidationError("sphere_g_closed: points must lie in the closed ball");

  // |r_hat - (|r||r'|/R^2) r'_hat| degenerates gracefully to 1 when either
  // point sits at the origin.
  double cross;
  if (a == 0.0 || b == 0.0) {
    cross = 1.0;
  } else {
    Vec3 u = r / a, v = (a * b / (R * R)) * (rp / b);
    cross = (u - v).norm();
  }
  double arg = 1.0 - r.dot(rp) / (R * R) + cross;
  if (!(arg > 1e-300))
    throw ValidationError("sphere_g_closed: logarithmic divergence at coincident boundary points");
  return (std::log(2.0 / arg) - 1.0) / (4.0 * kPi * R);
}

SphereGreenPair gdgn_series(const Vec3& r, const Vec3& rp, double R, int L) {
  if (!(R > 0.0) || L < 1) throw ValidationError("gdgn_series: bad radius or truncation");
  const double a = r.norm(), b = rp.norm();
  if (a > R * (1.0 + 1e-12) || b > R * (1.0 + 1e-12))
    throw ValidationError("gdgn_series: points must lie in the closed ball");
  if ((r - rp).squaredNorm() == 0.0)
    throw ValidationError("gdgn_series: coincident points");

  const double mx = std::max(a, b), mn = std::min(a, b);
  SphereGreenPair out{0.0, 0.0};
  if (mx == 0.0) throw ValidationError("gdgn_series: coincident points at the origin");
  out.g_dirichlet = 1.0 / (4.0 * kPi * mx) - 1.0 / (4.0 * kPi * R);
  out.g_neumann = 1.0 / (4.0 * kPi * mx);
  if (mn == 0.0) return out;  // all l >= 1 terms vanish

  const double cosg = std::clamp(r.dot(rp) / (a * b), -1.0, 1.0);
  double p_prev = 1.0, p_curr = cosg;      // P_0, P_1
  double ratio = mn / mx;                  // (mn/mx)^l accumulator
  double rad = ratio / mx;                 // mn^l / mx^{l+1}
  double img = a * b / (R * R * R);        // (|r||r'|)^l / R^{2l+1}
  const double img_step = a * b / (R * R);
  for (int l = 1; l <= L; ++l) {
    out.g_dirichlet += (rad - img) * p_curr / (4.0 * kPi);
    out.g_neumann += (rad + (l + 1.0) / l * img) * p_curr / (4.0 * kPi);
    rad *= ratio;
    img *= img_step;
    double p_next = ((2.0 * l + 1.0) * cosg * p_curr - l * p_prev) / (l + 1.0);
    p_prev = p_curr;
    p_curr = p_next;
  }
  return out;
}

double normal_G_series(double cos_gamma, double R, long L) {
  if (std::abs(cos_gamma) > 1.0 + 1e-12)
    throw ValidationError("normal_G_series: |cos gamma| must be <= 1");
  if (L < 1 || L > 1000000) throw ValidationError("normal_G_series: L must be in [1, 1e6]");
  cos_gamma = std::clamp(cos_gamma, -1.0, 1.0);
  double p_prev = 1.0, p_curr = cos_gamma;
  double sum = 0.0;
  for (long l = 1; l <= L; ++l) {
    sum += p_curr / (2.0 * l + 1.0);
    double p_next = ((2.0 * l + 1.0) * cos_gamma * p_curr - l * p_prev) / (l + 1.0);
    p_prev = p_curr;
    p_curr = p_next;
  }
  return sum / (4.0 * kPi * R * R);
}

std::vector<double> legendre_sequence(double x, int L) {
  if (L < 0) throw ValidationError("legendre_sequence: L must be >= 0");
  std::vector<double> p(L + 1);
  p[0] = 1.0;
  if (L >= 1) p[1] = x;
  for (int l = 1; l < L; ++l)
    p[l + 1] = ((2.0 * l + 1.0) * x * p[l] - l * p[l - 1]) / (l + 1.0);
  return p;
}

}  // namespace bspc
