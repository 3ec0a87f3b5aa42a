#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bspc/types.hpp"

namespace bspc {

/// Voxelized dielectric volume: cubic cells of pitch `spacing`, collocated
/// at their centers. Immutable after construction.
struct Geometry {
  std::vector<Vec3> voxel_centers;
  double spacing = 0.0;                 // lattice pitch h
  Vec3 enclosing_center = Vec3::Zero(); // center of the min enclosing sphere
  double r_v = 0.0;                     // min enclosing sphere radius
  std::string shape_tag;

  std::size_t voxel_count() const { return voxel_centers.size(); }
  double voxel_volume() const { return spacing * spacing * spacing; }
  double total_volume() const { return voxel_count() * voxel_volume(); }

  /// Short identifier used to tag derived matrices and reports.
  std::string id() const;
};

struct SurfacePanel {
  Vec3 centroid = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  // outward unit normal
  double area = 0.0;
};

/// Triangulated closed boundary mesh. Vertices/faces are kept alongside the
/// panel quadrature data so local curvature can be estimated later.
struct SurfaceMesh {
  std::vector<SurfacePanel> panels;
  double total_area = 0.0;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;  // indices into vertices, outward winding
};

struct SphereSpec {
  double radius;
};
struct EllipsoidSpec {
  double a, b, c;
};
struct BoxSpec {
  double lx, ly, lz;
};
struct VoxelFileSpec {
  std::string path;
};

using ShapeSpec = std::variant<SphereSpec, EllipsoidSpec, BoxSpec, VoxelFileSpec>;

/// Lattice pitch h; returns all cells whose centers fall inside the shape.
/// Sphere/ellipsoid lattices are symmetric about the origin, boxes align to
/// the corner at the origin. Throws ValidationError on empty voxelization.
Geometry voxelize(const ShapeSpec& shape, double h);

/// Exact minimum enclosing ball of a point set (Welzl's move-to-front
/// recursion over support sets of at most 4 points).
struct EnclosingSphere {
  Vec3 center;
  double radius;
};
EnclosingSphere min_enclosing_sphere(const std::vector<Vec3>& points);

/// Icosahedron subdivided `subdivisions` times, vertices projected onto the
/// sphere of radius R. Panel centroids are re-projected onto the sphere and
/// carry the exact outward (radial) normal; areas are the flat triangle
/// areas, so total_area increases monotonically toward 4 pi R^2.
SurfaceMesh icosphere_mesh(double R, int subdivisions);

/// Integer lattice coordinates of the voxel centers (pitch h, common offset),
/// plus neighbor lookup. Used for the discrete divergence operator.
class VoxelLattice {
 public:
  explicit VoxelLattice(const Geometry& geom);

  /// Index of the neighbor one pitch away along `axis` (+1/-1), or -1.
  int neighbor(int voxel, int axis, int direction) const;

  /// True when all six lattice neighbors are present.
  bool is_interior(int voxel) const;

  int voxel_count() const { return static_cast<int>(coords_.size()); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::array<std::int64_t, 3>& k) const noexcept;
  };
  std::vector<std::array<std::int64_t, 3>> coords_;
  std::unordered_map<std::array<std::int64_t, 3>, int, KeyHash> index_;
};

}  // namespace bspc
