#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bspc/geometry.hpp"
#include "bspc/kernels.hpp"
#include "bspc/types.hpp"

namespace bspc {

enum class KernelKind { Static, Gamma, Green, Acoustic };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& s);

/// Dense collocation discretization of an integral operator on the voxel
/// grid: 3N x 3N for the vector kernels, N x N for the acoustic scalar one.
/// Off-diagonal blocks are kernel(r_i, r_j) * h^3, diagonal blocks the cell
/// self terms. Complex-symmetric by kernel reciprocity.
template <typename Scalar>
struct OperatorMatrix {
  DenseMatrix<Scalar> entries;
  int block_size = 3;
  std::string geometry_id;
  KernelKind kernel_tag = KernelKind::Static;
  double k = 0.0;

  Eigen::Index dimension() const { return entries.rows(); }
};

/// Default ceiling for a single dense allocation (overridable per call and
/// via the BSPC_MEMORY_CAP_BYTES environment variable).
inline constexpr std::uint64_t kDefaultMemoryCapBytes = 8ull << 30;

/// Effective cap: explicit argument if set, else environment, else default.
std::uint64_t effective_memory_cap(std::optional<std::uint64_t> explicit_cap = std::nullopt);

/// Electrostatic induction operator (real symmetric), the k -> 0 limit.
OperatorMatrix<Real> assemble_static(const Geometry& geom,
                                     std::optional<std::uint64_t> memory_cap = std::nullopt);

/// Any kernel as a complex matrix. kind == Green assembles static + gamma
/// blockwise, so Green - Gamma - Static vanishes exactly.
OperatorMatrix<Complex> assemble(const Geometry& geom, WaveParams w, KernelKind kind,
                                 std::optional<std::uint64_t> memory_cap = std::nullopt);

/// Matrix polynomial sum c_p A^p by Horner's rule; p = 0 is the identity.
template <typename Scalar>
DenseMatrix<Scalar> matrix_poly(const DenseMatrix<Scalar>& a, const std::vector<Scalar>& coefficients) {
  if (coefficients.empty()) throw ValidationError("matrix_poly: empty coefficient list");
  if (a.rows() != a.cols()) throw ValidationError("matrix_poly: matrix must be square");
  const Eigen::Index n = a.rows();
  DenseMatrix<Scalar> acc =
      coefficients.back() * DenseMatrix<Scalar>::Identity(n, n);
  for (auto it = coefficients.rbegin() + 1; it != coefficients.rend(); ++it) {
    DenseMatrix<Scalar> next = acc * a;
    next.diagonal().array() += *it;
    acc.swap(next);
  }
  return acc;
}

template <typename Scalar>
OperatorMatrix<Scalar> matrix_poly(const OperatorMatrix<Scalar>& a,
                                   const std::vector<Scalar>& coefficients) {
  OperatorMatrix<Scalar> out = a;
  out.entries = matrix_poly(a.entries, coefficients);
  return out;
}

/// Largest singular value by power iteration on A^* A; the returned value is
/// a lower bound converging to the operator norm. Deterministic start vector.
struct OpNormOptions {
  double tol = 1e-8;
  int max_iterations = 5000;
};
double opnorm_estimate(const MatrixXc& a, OpNormOptions opts = {});
double opnorm_estimate(const MatrixXr& a, OpNormOptions opts = {});

template <typename Scalar>
double opnorm_estimate(const OperatorMatrix<Scalar>& a, OpNormOptions opts = {}) {
  return opnorm_estimate(a.entries, opts);
}

/// Incident plane wave E_inc(r) = amplitude * polarization * e^{-i k u . r}.
struct PlaneWaveSpec {
  Vec3 direction = Vec3::UnitZ();
  Vec3 polarization = Vec3::UnitX();
  Complex amplitude = 1.0;
};

struct BornProblem {
  Complex chi;
  VectorXc incident_field;  // 3N, voxel-major blocks
  double k = 0.0;
};

BornProblem make_born_problem(const Geometry& geom, WaveParams w, Complex chi,
                              const PlaneWaveSpec& wave);

struct BornSolution {
  VectorXc field;             // total field per voxel (3N)
  double amplification_ratio; // sum |E|^2 / sum |E_inc|^2
  double residual;            // ||(I - chi G) E - E_inc|| / ||E_inc||
  double condition_estimate;  // 1-norm condition estimate of (I - chi G)
};

/// Dense LU solve of (I - chi G) E = E_inc on a pre-assembled Green matrix.
BornSolution born_solve(const OperatorMatrix<Complex>& green, Complex chi,
                        const VectorXc& incident);

/// Convenience wrapper: assembles the Green operator and solves.
BornSolution born_solve(const Geometry& geom, WaveParams w, Complex chi,
                        const PlaneWaveSpec& wave,
                        std::optional<std::uint64_t> memory_cap = std::nullopt);

/// Binary dump: little-endian header {magic "BSPC", u32 dim, u32 block},
/// then row-major interleaved (re, im) 64-bit floats.
void write_matrix_dump(const std::string& path, const OperatorMatrix<Complex>& m);
OperatorMatrix<Complex> read_matrix_dump(const std::string& path);

}  // namespace bspc
