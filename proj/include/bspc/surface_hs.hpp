#pragma once

#include <string>

#include "bspc/geometry.hpp"
#include "bspc/types.hpp"

namespace bspc {

/// Geometric boundary kernel of the compactness construction:
///   K(a, b) = n_a . (r_a - r_b) / (2 pi |r_a - r_b|^3) - 1 / total_area.
double surface_kernel(const SurfacePanel& a, const SurfacePanel& b, double total_area);

/// Collocation matrix M(a,b) = K(a,b) w_b with an analytic local-disc rule
/// on the diagonal (weakly singular 1/|r-r'| part integrated over the
/// equivalent-area disc of curvature radius R_loc).
struct SurfaceKernelMatrix {
  MatrixXr entries;
  std::string self_term_policy;
};
SurfaceKernelMatrix assemble_surface_matrix(const SurfaceMesh& mesh);

struct SurfaceHSReport {
  double trace4_value = 0.0;  // tr(M^4), the quadruple-integral value
  Eigen::Index panel_count = 0;
  std::string self_term_policy;
};
SurfaceHSReport hs_trace4(const SurfaceKernelMatrix& m);

/// Least-squares sphere fit through a panel's vertices and those of its
/// edge neighbors; returns +inf for (near-)planar patches. The sign is
/// positive when the panel normal points away from the fitted center.
double local_curvature_radius(const SurfaceMesh& mesh, int face);

}  // namespace bspc
