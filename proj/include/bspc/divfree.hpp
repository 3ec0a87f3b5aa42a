#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bspc/assembly.hpp"
#include "bspc/geometry.hpp"
#include "bspc/types.hpp"

namespace bspc {

/// Orthonormal basis of the discrete divergence-free subspace: the null
/// space of the interior central-difference divergence operator. Boundary
/// voxels carry no divergence row.
struct DivFreeBasis {
  MatrixXr basis_matrix;       // 3N x M, orthonormal columns
  MatrixXr divergence_operator;  // N_int x 3N (central differences, rows 1/2h)
  Eigen::Index interior_voxel_count = 0;
  Eigen::Index rank = 0;  // rank of the divergence operator
  double spacing = 0.0;

  Eigen::Index dim() const { return basis_matrix.cols(); }
};

DivFreeBasis build_divfree_basis(const Geometry& geom);

/// Projection of a grid operator onto the divergence-free subspace: B* A B.
template <typename Scalar>
DenseMatrix<Scalar> compress(const DenseMatrix<Scalar>& a, const DivFreeBasis& basis) {
  if (a.rows() != basis.basis_matrix.rows() || a.cols() != basis.basis_matrix.rows())
    throw ValidationError("compress: operator/basis dimension mismatch");
  if constexpr (std::is_same_v<Scalar, Real>) {
    DenseMatrix<Scalar> ab = a * basis.basis_matrix;
    return basis.basis_matrix.transpose() * ab;
  } else {
    DenseMatrix<Scalar> b = basis.basis_matrix.cast<Scalar>();
    DenseMatrix<Scalar> ab = a * b;
    return b.transpose() * ab;
  }
}

template <typename Scalar>
DenseMatrix<Scalar> compress(const OperatorMatrix<Scalar>& a, const DivFreeBasis& basis) {
  return compress(a.entries, basis);
}

struct EigenDecomposition {
  VectorXc eigenvalues;
  MatrixXc eigenvectors;  // empty unless requested
};

/// All eigenvalues of a dense complex matrix (Hessenberg reduction followed
/// by shifted QR, as provided by Eigen's ComplexEigenSolver).
EigenDecomposition eig_dense(const MatrixXc& m, bool with_vectors = false);

/// Fast path for real symmetric matrices (static compressed operators).
EigenDecomposition eig_selfadjoint(const MatrixXr& m, bool with_vectors = false);

enum class ModeLabel { Physical, Longitudinal, NumericalNull };
std::string to_string(ModeLabel label);

struct ClassifyThresholds {
  double tau0_rel = 1e-8;       // numerical-null radius, relative to ||A||
  double tau_div = 0.1;         // dimensionless divergence-ratio threshold
  double tau_im = 1e-6;         // Im-positivity tolerance used in reports
  double long_radius = 0.05;    // |lambda + 1| radius marking longitudinal modes
};

struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::vector<ModeLabel> labels;
  std::vector<double> divergence_ratios;
  double k = 0.0;
  std::string geometry_id;

  std::size_t count(ModeLabel l) const;
};

/// Labels each mode. `grid_vectors` holds the modes in the 3N grid frame
/// (pass B * v for compressed spectra); when absent the divergence ratios
/// are zero by construction, which is exact for compressed spectra since
/// D B = 0.
Spectrum classify_modes(const VectorXc& eigenvalues, const std::optional<MatrixXc>& grid_vectors,
                        const DivFreeBasis& basis, double operator_scale,
                        ClassifyThresholds thresholds = {});

struct SeriesReport {
  double series_value = 0.0;    // sum |l|^2 |1+2l|^4 over physical modes
  double contrast_value = 0.0;  // sum |l|^2 |1+2l|^2 over physical modes
  double frob_G1 = 0.0;         // ||A||_F
  double frob_G12 = 0.0;        // ||A (I + 2A)||_F
  double frob_G122 = 0.0;       // ||A (I + 2A)^2||_F
  double schur_margin = 0.0;    // frob_G122^2 - series_value
};

/// Spectral series and Frobenius norms of the compressed polynomials.
SeriesReport spectral_series(const MatrixXc& compressed, const Spectrum& spectrum);
SeriesReport spectral_series(const MatrixXr& compressed, const Spectrum& spectrum);

struct AccumulationReport {
  std::size_t count_near_0 = 0;
  std::size_t count_near_minus_half = 0;
  std::vector<Complex> outliers;
};

/// Eigenvalue aggregation near the two admissible accumulation points.
AccumulationReport accumulation_report(const Spectrum& spectrum, double epsilon);

}  // namespace bspc
