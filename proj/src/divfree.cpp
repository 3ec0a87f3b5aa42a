#include "bspc/divfree.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace bspc {

DivFreeBasis build_divfree_basis(const Geometry& geom) {
  const auto n = static_cast<Eigen::Index>(geom.voxel_count());
  if (n == 0) throw ValidationError("build_divfree_basis: empty geometry");

  DivFreeBasis basis;
  basis.spacing = geom.spacing;

  VoxelLattice lattice(geom);
  std::vector<int> interior;
  for (int v = 0; v < lattice.voxel_count(); ++v)
    if (lattice.is_interior(v)) interior.push_back(v);
  basis.interior_voxel_count = static_cast<Eigen::Index>(interior.size());

  basis.divergence_operator = MatrixXr::Zero(basis.interior_voxel_count, 3 * n);
  const double inv2h = 1.0 / (2.0 * geom.spacing);
  for (Eigen::Index row = 0; row < basis.interior_voxel_count; ++row) {
    int v = interior[row];
    for (int axis = 0; axis < 3; ++axis) {
      int plus = lattice.neighbor(v, axis, +1);
      int minus = lattice.neighbor(v, axis, -1);
      basis.divergence_operator(row, 3 * plus + axis) += inv2h;
      basis.divergence_operator(row, 3 * minus + axis) -= inv2h;
    }
  }

  if (basis.interior_voxel_count == 0) {
    basis.rank = 0;
    basis.basis_matrix = MatrixXr::Identity(3 * n, 3 * n);
    return basis;
  }

  // Null space from a rank-revealing pivoted QR of D^T: the trailing columns
  // of Q span ker(D). Rank cutoff 1e-10 relative to the leading diagonal of R
  // (the usual singular-value cutoff transferred to the QR diagonal).
  Eigen::ColPivHouseholderQR<MatrixXr> qr(basis.divergence_operator.transpose());
  const auto& rdiag = qr.matrixR().diagonal();
  double rmax = rdiag.size() > 0 ? std::abs(rdiag(0)) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < rdiag.size(); ++i)
    if (std::abs(rdiag(i)) > 1e-10 * rmax) ++rank;
  basis.rank = rank;

  // Trailing columns of Q only; never materialize the full 3N x 3N factor.
  MatrixXr b = MatrixXr::Zero(3 * n, 3 * n - rank);
  b.bottomRows(3 * n - rank).setIdentity();
  b.applyOnTheLeft(qr.householderQ());
  basis.basis_matrix = std::move(b);
  return basis;
}

EigenDecomposition eig_dense(const MatrixXc& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw ValidationError("eig_dense: matrix must be square");
  if (!m.allFinite()) throw ValidationError("eig_dense: matrix has non-finite entries");
  Eigen::ComplexEigenSolver<MatrixXc> solver(m, with_vectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_dense: QR iteration failed to converge for dimension " +
                         std::to_string(m.rows()));
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  if (with_vectors) out.eigenvectors = solver.eigenvectors();
  return out;
}

EigenDecomposition eig_selfadjoint(const MatrixXr& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw ValidationError("eig_selfadjoint: matrix must be square");
  Eigen::SelfAdjointEigenSolver<MatrixXr> solver(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_selfadjoint: iteration failed to converge for dimension " +
                         std::to_string(m.rows()));
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().cast<Complex>();
  if (with_vectors) out.eigenvectors = solver.eigenvectors().cast<Complex>();
  return out;
}

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::Physical: return "physical";
    case ModeLabel::Longitudinal: return "longitudinal";
    case ModeLabel::NumericalNull: return "numerical_null";
  }
  return "?";
}

std::size_t Spectrum::count(ModeLabel l) const {
  std::size_t c = 0;
  for (auto lab : labels)
    if (lab == l) ++c;
  return c;
}

Spectrum classify_modes(const VectorXc& eigenvalues, const std::optional<MatrixXc>& grid_vectors,
                        const DivFreeBasis& basis, double operator_scale,
                        ClassifyThresholds thresholds) {
  Spectrum spec;
  const auto m = eigenvalues.size();
  spec.eigenvalues.assign(eigenvalues.data(), eigenvalues.data() + m);
  spec.labels.resize(m);
  spec.divergence_ratios.assign(m, 0.0);

  if (grid_vectors && grid_vectors->cols() != m)
    throw ValidationError("classify_modes: eigenvector/eigenvalue count mismatch");

  const double tau0 = thresholds.tau0_rel * operator_scale;
  for (Eigen::Index i = 0; i < m; ++i) {
    double rho = 0.0;
    if (grid_vectors && basis.interior_voxel_count > 0) {
      VectorXc v = grid_vectors->col(i);
      double vn = v.norm();
      if (vn > 0.0)
        rho = (basis.divergence_operator * v).norm() * basis.spacing / vn;
    }
    spec.divergence_ratios[i] = rho;

    Complex lam = eigenvalues(i);
    if (std::abs(lam) < tau0)
      spec.labels[i] = ModeLabel::NumericalNull;
    else if (std::abs(lam + 1.0) < thresholds.long_radius || rho > thresholds.tau_div)
      spec.labels[i] = ModeLabel::Longitudinal;
    else
      spec.labels[i] = ModeLabel::Physical;
  }
  return spec;
}

namespace {

template <typename Scalar>
SeriesReport series_impl(const DenseMatrix<Scalar>& a, const Spectrum& spectrum) {
  SeriesReport rep;
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    if (spectrum.labels[i] != ModeLabel::Physical) continue;
    double l2 = std::norm(spectrum.eigenvalues[i]);
    double w2 = std::norm(1.0 + 2.0 * spectrum.eigenvalues[i]);
    rep.series_value += l2 * w2 * w2;
    rep.contrast_value += l2 * w2;
  }

  const Eigen::Index n = a.rows();
  DenseMatrix<Scalar> a2 = a * a;
  DenseMatrix<Scalar> g12 = a + Scalar(2) * a2;          // A (I + 2A)
  DenseMatrix<Scalar> g122 = g12 + Scalar(2) * (a2 * (DenseMatrix<Scalar>::Identity(n, n) + Scalar(2) * a));
  // A (I + 2A)^2 = A + 4 A^2 + 4 A^3 assembled with one extra product.
  rep.frob_G1 = frobenius_norm(a);
  rep.frob_G12 = frobenius_norm(g12);
  rep.frob_G122 = frobenius_norm(g122);
  rep.schur_margin = rep.frob_G122 * rep.frob_G122 - rep.series_value;
  return rep;
}

}  // namespace

SeriesReport spectral_series(const MatrixXc& compressed, const Spectrum& spectrum) {
  return series_impl(compressed, spectrum);
}
SeriesReport spectral_series(const MatrixXr& compressed, const Spectrum& spectrum) {
  return series_impl(compressed, spectrum);
}

AccumulationReport accumulation_report(const Spectrum& spectrum, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.25))
    throw ValidationError("accumulation_report: epsilon must lie in (0, 1/4)");
  AccumulationReport rep;
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    if (spectrum.labels[i] != ModeLabel::Physical) continue;
    Complex lam = spectrum.eigenvalues[i];
    if (std::abs(lam) <= epsilon)
      ++rep.count_near_0;
    else if (std::abs(lam + 0.5) <= epsilon)
      ++rep.count_near_minus_half;
    else
      rep.outliers.push_back(lam);
  }
  return rep;
}

}  // namespace bspc
