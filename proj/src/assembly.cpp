#include "bspc/assembly.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>

namespace bspc {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Static: return "static";
    case KernelKind::Gamma: return "gamma";
    case KernelKind::Green: return "green";
    case KernelKind::Acoustic: return "acoustic";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "static") return KernelKind::Static;
  if (s == "gamma") return KernelKind::Gamma;
  if (s == "green") return KernelKind::Green;
  if (s == "acoustic") return KernelKind::Acoustic;
  throw ValidationError("unknown kernel kind: " + s);
}

std::uint64_t effective_memory_cap(std::optional<std::uint64_t> explicit_cap) {
  if (explicit_cap) return *explicit_cap;
  if (const char* env = std::getenv("BSPC_MEMORY_CAP_BYTES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultMemoryCapBytes;
}

namespace {

void check_memory(Eigen::Index dim, std::size_t scalar_bytes, std::optional<std::uint64_t> cap) {
  std::uint64_t need = static_cast<std::uint64_t>(dim) * static_cast<std::uint64_t>(dim) * scalar_bytes;
  std::uint64_t limit = effective_memory_cap(cap);
  if (need > limit) {
    throw MemoryCapError("assemble: dense matrix needs " + std::to_string(need) +
                         " bytes, exceeding the cap of " + std::to_string(limit) + " bytes");
  }
}

template <typename Scalar, typename OffDiag, typename SelfTerm>
void fill_blocks(DenseMatrix<Scalar>& m, const std::vector<Vec3>& centers, double weight,
                 OffDiag&& off, SelfTerm&& self) {
  const int n = static_cast<int>(centers.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j)
        m.template block<3, 3>(3 * i, 3 * j) = self();
      else
        m.template block<3, 3>(3 * i, 3 * j) = weight * off(centers[i], centers[j]);
    }
  }
}

}  // namespace

OperatorMatrix<Real> assemble_static(const Geometry& geom, std::optional<std::uint64_t> cap) {
  if (geom.voxel_count() == 0) throw ValidationError("assemble_static: empty geometry");
  const Eigen::Index dim = 3 * static_cast<Eigen::Index>(geom.voxel_count());
  check_memory(dim, sizeof(Real), cap);

  OperatorMatrix<Real> out;
  out.entries.resize(dim, dim);
  out.block_size = 3;
  out.geometry_id = geom.id();
  out.kernel_tag = KernelKind::Static;
  out.k = 0.0;
  fill_blocks<Real>(out.entries, geom.voxel_centers, geom.voxel_volume(),
                    [](const Vec3& a, const Vec3& b) { return static_dipole_kernel(a, b); },
                    []() { return static_self_term(); });
  return out;
}

OperatorMatrix<Complex> assemble(const Geometry& geom, WaveParams w, KernelKind kind,
                                 std::optional<std::uint64_t> cap) {
  if (geom.voxel_count() == 0) throw ValidationError("assemble: empty geometry");
  if (kind == KernelKind::Acoustic && !(w.k > 0.0))
    throw ValidationError("assemble: acoustic kernel requires k > 0");

  const auto n = static_cast<Eigen::Index>(geom.voxel_count());
  const double h3 = geom.voxel_volume();

  OperatorMatrix<Complex> out;
  out.geometry_id = geom.id();
  out.kernel_tag = kind;
  out.k = w.k;

  if (kind == KernelKind::Acoustic) {
    out.block_size = 1;
    check_memory(n, sizeof(Complex), cap);
    out.entries.resize(n, n);
    const auto& c = geom.voxel_centers;
    const Complex self = acoustic_self_term(w, h3);
#pragma omp parallel for schedule(dynamic, 32)
    for (int i = 0; i < static_cast<int>(n); ++i)
      for (int j = 0; j < static_cast<int>(n); ++j)
        out.entries(i, j) = (i == j) ? self : h3 * acoustic_kernel(c[i], c[j], w);
    return out;
  }

  out.block_size = 3;
  check_memory(3 * n, sizeof(Complex), cap);
  out.entries.resize(3 * n, 3 * n);

  const CMat3 gamma_self = gamma_self_term(w, h3);
  const CMat3 static_self = static_self_term().cast<Complex>();
  switch (kind) {
    case KernelKind::Static:
      fill_blocks<Complex>(out.entries, geom.voxel_centers, h3,
                           [](const Vec3& a, const Vec3& b) {
                             return static_dipole_kernel(a, b).cast<Complex>().eval();
                           },
                           [&]() { return static_self; });
      break;
    case KernelKind::Gamma:
      fill_blocks<Complex>(out.entries, geom.voxel_centers, h3,
                           [&](const Vec3& a, const Vec3& b) { return gamma_kernel(a, b, w); },
                           [&]() { return gamma_self; });
      break;
    case KernelKind::Green:
      fill_blocks<Complex>(out.entries, geom.voxel_centers, h3,
                           [&](const Vec3& a, const Vec3& b) {
                             return (static_dipole_kernel(a, b).cast<Complex>() +
                                     gamma_kernel(a, b, w))
                                 .eval();
                           },
                           [&]() { return (static_self + gamma_self).eval(); });
      break;
    default:
      break;
  }
  return out;
}

namespace {

template <typename Scalar>
double opnorm_impl(const DenseMatrix<Scalar>& a, OpNormOptions opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("opnorm_estimate: tol must be positive");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;

  std::mt19937 rng(0x90b5u);
  std::normal_distribution<double> gauss;
  DenseVector<Scalar> v(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Scalar(gauss(rng));
  v.normalize();

  double sigma = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    DenseVector<Scalar> av = a * v;
    double next = av.norm();
    if (next == 0.0) return 0.0;
    v.noalias() = a.adjoint() * av;
    double vn = v.norm();
    if (vn == 0.0) return next;
    v /= vn;
    if (std::abs(next - sigma) <= opts.tol * next) return next;
    sigma = next;
  }
  throw NumericalError("opnorm_estimate: power iteration did not converge; last iterate " +
                       std::to_string(sigma));
}

}  // namespace

double opnorm_estimate(const MatrixXc& a, OpNormOptions opts) { return opnorm_impl(a, opts); }
double opnorm_estimate(const MatrixXr& a, OpNormOptions opts) { return opnorm_impl(a, opts); }

BornProblem make_born_problem(const Geometry& geom, WaveParams w, Complex chi,
                              const PlaneWaveSpec& wave) {
  Vec3 u = wave.direction;
  if (u.norm() == 0.0) throw ValidationError("plane wave: zero direction");
  u.normalize();
  Vec3 p = wave.polarization;
  if (p.norm() == 0.0) throw ValidationError("plane wave: zero polarization");
  if (std::abs(p.normalized().dot(u)) > 1e-12)
    throw ValidationError("plane wave: polarization must be orthogonal to direction");

  BornProblem prob;
  prob.chi = chi;
  prob.k = w.k;
  const auto n = static_cast<Eigen::Index>(geom.voxel_count());
  prob.incident_field.resize(3 * n);
  const Complex minus_i{0.0, -1.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex phase = wave.amplitude * std::exp(minus_i * w.k * u.dot(geom.voxel_centers[i]));
    prob.incident_field.segment<3>(3 * i) = phase * p.cast<Complex>();
  }
  return prob;
}

BornSolution born_solve(const OperatorMatrix<Complex>& green, Complex chi,
                        const VectorXc& incident) {
  if (green.entries.rows() != incident.size())
    throw ValidationError("born_solve: matrix/field dimension mismatch");

  MatrixXc system = -chi * green.entries;
  system.diagonal().array() += 1.0;

  Eigen::PartialPivLU<MatrixXc> lu(system);
  double rcond = lu.rcond();
  double cond = (rcond > 0.0) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > 1e-15)) {
    throw NumericalError("born_solve: system singular to working precision, condition estimate " +
                         std::to_string(cond));
  }

  BornSolution sol;
  sol.field = lu.solve(incident);
  sol.condition_estimate = cond;
  double inc_norm = incident.norm();
  sol.residual = inc_norm > 0.0 ? (system * sol.field - incident).norm() / inc_norm : 0.0;
  double inc2 = incident.squaredNorm();
  sol.amplification_ratio = inc2 > 0.0 ? sol.field.squaredNorm() / inc2 : 0.0;
  if (sol.residual > 1e-10) {
    throw NumericalError("born_solve: residual " + std::to_string(sol.residual) +
                         " exceeds 1e-10; condition estimate " + std::to_string(cond));
  }
  return sol;
}

BornSolution born_solve(const Geometry& geom, WaveParams w, Complex chi, const PlaneWaveSpec& wave,
                        std::optional<std::uint64_t> cap) {
  OperatorMatrix<Complex> green = assemble(geom, w, KernelKind::Green, cap);
  BornProblem prob = make_born_problem(geom, w, chi, wave);
  return born_solve(green, chi, prob.incident_field);
}

void write_matrix_dump(const std::string& path, const OperatorMatrix<Complex>& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_matrix_dump: cannot open " + path);
  const char magic[4] = {'B', 'S', 'P', 'C'};
  out.write(magic, 4);
  std::uint32_t dim = static_cast<std::uint32_t>(m.entries.rows());
  std::uint32_t block = static_cast<std::uint32_t>(m.block_size);
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&block), 4);
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) {
      double re = m.entries(i, j).real(), im = m.entries(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
  if (!out) throw NumericalError("write_matrix_dump: short write to " + path);
}

OperatorMatrix<Complex> read_matrix_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_matrix_dump: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "BSPC", 4) != 0)
    throw ValidationError("read_matrix_dump: bad magic in " + path);
  std::uint32_t dim = 0, block = 0;
  in.read(reinterpret_cast<char*>(&dim), 4);
  in.read(reinterpret_cast<char*>(&block), 4);
  OperatorMatrix<Complex> m;
  m.block_size = static_cast<int>(block);
  m.entries.resize(dim, dim);
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      m.entries(i, j) = Complex(re, im);
    }
  }
  if (!in) throw ValidationError("read_matrix_dump: truncated file " + path);
  return m;
}

}  // namespace bspc
