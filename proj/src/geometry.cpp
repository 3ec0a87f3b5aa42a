#include "bspc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace bspc {

std::string Geometry::id() const {
  std::ostringstream os;
  os << shape_tag << "_h" << spacing << "_n" << voxel_count();
  return os.str();
}

namespace {

// Circumsphere of 1..4 affinely independent support points. Returns radius < 0
// when the support set is degenerate.
EnclosingSphere circumsphere(const std::vector<Vec3>& s) {
  switch (s.size()) {
    case 0:
      return {Vec3::Zero(), 0.0};
    case 1:
      return {s[0], 0.0};
    case 2: {
      Vec3 c = 0.5 * (s[0] + s[1]);
      return {c, (s[0] - c).norm()};
    }
    case 3: {
      // Circumcenter within the plane of the triangle.
      Vec3 a = s[1] - s[0], b = s[2] - s[0];
      Vec3 n = a.cross(b);
      double n2 = n.squaredNorm();
      if (n2 <= 0.0) return {Vec3::Zero(), -1.0};
      Vec3 rel = (a.squaredNorm() * b - b.squaredNorm() * a).cross(n) / (2.0 * n2);
      Vec3 c = s[0] - rel;
      return {c, (s[0] - c).norm()};
    }
    default: {
      // Solve |x - s0|^2 = |x - si|^2, i=1..3 (linear system).
      Mat3 m;
      Vec3 rhs;
      for (int i = 0; i < 3; ++i) {
        Vec3 d = s[i + 1] - s[0];
        m.row(i) = 2.0 * d.transpose();
        rhs(i) = s[i + 1].squaredNorm() - s[0].squaredNorm();
      }
      Eigen::FullPivLU<Mat3> lu(m);
      if (!lu.isInvertible()) return {Vec3::Zero(), -1.0};
      Vec3 c = lu.solve(rhs);
      return {c, (s[0] - c).norm()};
    }
  }
}

bool sphere_contains(const EnclosingSphere& b, const Vec3& p) {
  return (p - b.center).norm() <= b.radius * (1.0 + 1e-12) + 1e-300;
}

EnclosingSphere welzl(std::vector<Vec3>& pts, std::size_t n, std::vector<Vec3>& support) {
  if (n == 0 || support.size() == 4) {
    EnclosingSphere b = circumsphere(support);
    if (b.radius < 0.0) b = {support.empty() ? Vec3::Zero() : support[0], 0.0};
    return b;
  }
  EnclosingSphere b = welzl(pts, n - 1, support);
  if (sphere_contains(b, pts[n - 1])) return b;
  support.push_back(pts[n - 1]);
  b = welzl(pts, n - 1, support);
  support.pop_back();
  // Move-to-front keeps the expected recursion depth shallow.
  Vec3 p = pts[n - 1];
  for (std::size_t i = n - 1; i > 0; --i) pts[i] = pts[i - 1];
  pts[0] = p;
  return b;
}

bool inside(const SphereSpec& s, const Vec3& p) { return p.norm() < s.radius; }
bool inside(const EllipsoidSpec& e, const Vec3& p) {
  double x = p.x() / e.a, y = p.y() / e.b, z = p.z() / e.c;
  return x * x + y * y + z * z < 1.0;
}
bool inside(const BoxSpec& b, const Vec3& p) {
  return p.x() > 0 && p.x() < b.lx && p.y() > 0 && p.y() < b.ly && p.z() > 0 && p.z() < b.lz;
}

template <typename Spec, typename Pred>
std::vector<Vec3> lattice_scan(double h, const Vec3& lo, const Vec3& hi, Pred&& pred) {
  std::vector<Vec3> centers;
  // Symmetric lattice: centers at (i + 1/2) h covering [lo, hi].
  auto first = [&](double l) { return static_cast<long>(std::floor(l / h - 0.5)) - 1; };
  auto last = [&](double u) { return static_cast<long>(std::ceil(u / h - 0.5)) + 1; };
  for (long i = first(lo.x()); i <= last(hi.x()); ++i)
    for (long j = first(lo.y()); j <= last(hi.y()); ++j)
      for (long l = first(lo.z()); l <= last(hi.z()); ++l) {
        Vec3 c((i + 0.5) * h, (j + 0.5) * h, (l + 0.5) * h);
        if (pred(c)) centers.push_back(c);
      }
  return centers;
}

std::vector<Vec3> load_voxel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open voxel file: " + path);
  std::vector<Vec3> centers;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x)) continue;  // blank or comment-only line
    if (!(ls >> y >> z)) {
      throw ValidationError("voxel file " + path + ": malformed coordinates at line " +
                            std::to_string(line_no));
    }
    double extra;
    if (ls >> extra) {
      throw ValidationError("voxel file " + path + ": trailing fields at line " +
                            std::to_string(line_no));
    }
    centers.emplace_back(x, y, z);
  }
  return centers;
}

void check_pairwise_spacing(const std::vector<Vec3>& centers, double h, const std::string& what) {
  double min2 = h * h * (1.0 - 1e-12) * (1.0 - 1e-12);
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if ((centers[i] - centers[j]).squaredNorm() < min2)
        throw ValidationError(what + ": voxel centers closer than the lattice pitch");
}

}  // namespace

EnclosingSphere min_enclosing_sphere(const std::vector<Vec3>& points) {
  if (points.empty()) throw ValidationError("min_enclosing_sphere: empty point list");
  std::vector<Vec3> pts = points;
  std::mt19937 rng(0x5eedu);
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<Vec3> support;
  support.reserve(4);
  EnclosingSphere b = welzl(pts, pts.size(), support);
  // Tiny inflation so that all inputs verify containment exactly.
  for (const Vec3& p : points) b.radius = std::max(b.radius, (p - b.center).norm());
  return b;
}

Geometry voxelize(const ShapeSpec& shape, double h) {
  if (!(h > 0.0)) throw ValidationError("voxelize: lattice pitch must be positive");

  Geometry g;
  g.spacing = h;
  if (const auto* s = std::get_if<SphereSpec>(&shape)) {
    if (!(s->radius > 0.0)) throw ValidationError("voxelize: sphere radius must be positive");
    Vec3 e(s->radius, s->radius, s->radius);
    g.voxel_centers = lattice_scan<SphereSpec>(h, -e, e, [&](const Vec3& c) { return inside(*s, c); });
    g.shape_tag = "sphere";
  } else if (const auto* e = std::get_if<EllipsoidSpec>(&shape)) {
    if (!(e->a > 0.0 && e->b > 0.0 && e->c > 0.0))
      throw ValidationError("voxelize: ellipsoid semi-axes must be positive");
    Vec3 ext(e->a, e->b, e->c);
    g.voxel_centers =
        lattice_scan<EllipsoidSpec>(h, -ext, ext, [&](const Vec3& c) { return inside(*e, c); });
    g.shape_tag = "ellipsoid";
  } else if (const auto* b = std::get_if<BoxSpec>(&shape)) {
    if (!(b->lx > 0.0 && b->ly > 0.0 && b->lz > 0.0))
      throw ValidationError("voxelize: box edges must be positive");
    g.voxel_centers = lattice_scan<BoxSpec>(h, Vec3::Zero(), Vec3(b->lx, b->ly, b->lz),
                                            [&](const Vec3& c) { return inside(*b, c); });
    g.shape_tag = "box";
  } else {
    const auto& f = std::get<VoxelFileSpec>(shape);
    g.voxel_centers = load_voxel_file(f.path);
    g.shape_tag = "file:" + f.path;
    check_pairwise_spacing(g.voxel_centers, h, "voxelize(" + f.path + ")");
  }

  if (g.voxel_centers.empty())
    throw ValidationError("voxelize: empty voxelization (pitch h too large for the shape)");

  EnclosingSphere mes = min_enclosing_sphere(g.voxel_centers);
  g.enclosing_center = mes.center;
  g.r_v = mes.radius;
  return g;
}

SurfaceMesh icosphere_mesh(double R, int subdivisions) {
  if (!(R > 0.0)) throw ValidationError("icosphere_mesh: radius must be positive");
  if (subdivisions < 0) throw ValidationError("icosphere_mesh: subdivisions must be >= 0");

  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& v : verts) v = R * v.normalized();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int iter = 0; iter < subdivisions; ++iter) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = R * (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  SurfaceMesh mesh;
  mesh.vertices = verts;
  mesh.panels.reserve(faces.size());
  for (auto& f : faces) {
    Vec3 a = verts[f[0]], b = verts[f[1]], c = verts[f[2]];
    Vec3 flat_n = (b - a).cross(c - a);
    Vec3 centroid = (a + b + c) / 3.0;
    if (flat_n.dot(centroid) < 0.0) {  // enforce outward winding
      std::swap(f[1], f[2]);
      flat_n = -flat_n;
    }
    SurfacePanel p;
    p.area = 0.5 * flat_n.norm();
    p.centroid = R * centroid.normalized();
    p.normal = centroid.normalized();
    mesh.panels.push_back(p);
    mesh.total_area += p.area;
  }
  mesh.faces = faces;
  return mesh;
}

std::size_t VoxelLattice::KeyHash::operator()(const std::array<std::int64_t, 3>& k) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : k) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

VoxelLattice::VoxelLattice(const Geometry& geom) {
  const double h = geom.spacing;
  const Vec3 origin = geom.voxel_centers.empty() ? Vec3::Zero() : geom.voxel_centers[0];
  coords_.reserve(geom.voxel_count());
  for (int i = 0; i < static_cast<int>(geom.voxel_count()); ++i) {
    Vec3 rel = (geom.voxel_centers[i] - origin) / h;
    std::array<std::int64_t, 3> key = {llround(rel.x()), llround(rel.y()), llround(rel.z())};
    for (int a = 0; a < 3; ++a) {
      if (std::abs(rel(a) - static_cast<double>(key[a])) > 1e-6)
        throw ValidationError("VoxelLattice: centers are not on a lattice of pitch h");
    }
    coords_.push_back(key);
    index_.emplace(key, i);
  }
}

int VoxelLattice::neighbor(int voxel, int axis, int direction) const {
  auto key = coords_[voxel];
  key[axis] += direction;
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

bool VoxelLattice::is_interior(int voxel) const {
  for (int a = 0; a < 3; ++a)
    for (int d : {-1, +1})
      if (neighbor(voxel, a, d) < 0) return false;
  return true;
}

}  // namespace bspc
