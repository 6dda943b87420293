#include "mhdflow/geometry.hpp"

#include <cmath>

#include "mhdflow/error.hpp"

namespace mhdflow {

std::string_view name_of(LineKind kind) { return kind == LineKind::streamline ? "streamline" : "magnetic"; }

std::string_view name_of(Regime r) {
  switch (r) {
    case Regime::sub_alfvenic: return "sub";
    case Regime::alfvenic: return "alfvenic";
    case Regime::super_alfvenic: return "super";
  }
  return "?";
}

namespace {

double sample_s(SRange s, std::size_t i, std::size_t n) {
  if (n <= 1) return s.lo;
  return s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Streamlines move along a + b, magnetic lines along b - a.
double k1_direction(LineKind kind) { return kind == LineKind::streamline ? 0.5 : -0.5; }

KPoint on_line(const KPoint& seed, LineKind kind, double s) {
  return KPoint(seed.k1() + k1_direction(kind) * s, seed.k2() + 0.5 * s, seed.k3());
}

Polyline parametric_line(const FlowMap& m, LineKind kind, const KPoint& seed, SRange s, std::size_t samples) {
  Polyline line;
  line.kind = kind;
  line.seed = seed;
  line.s.reserve(samples);
  line.points.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double si = sample_s(s, i, samples);
    const KPoint k = on_line(seed, kind, si);
    if (!m.domain().contains(k)) {
      line.truncated = true;
      break;
    }
    line.s.push_back(si);
    line.points.push_back(m.position(k));
  }
  return line;
}

Vec3 line_field(const MapJet& j, LineKind kind) {
  return kind == LineKind::streamline ? 0.5 * (j.d1[1] + j.d1[0]) : 0.5 * (j.d1[1] - j.d1[0]);
}

}  // namespace

Polyline streamline(const FlowMap& m, const KPoint& seed, SRange s, std::size_t samples) {
  return parametric_line(m, LineKind::streamline, seed, s, samples);
}

Polyline magnetic_line(const FlowMap& m, const KPoint& seed, SRange s, std::size_t samples) {
  return parametric_line(m, LineKind::magnetic, seed, s, samples);
}

Polyline trace_rk4(const FlowMap& m, LineKind kind, const KPoint& seed, SRange s, std::size_t samples) {
  struct State {
    Vec3 x;
    Vec3 k;
  };
  auto rhs = [&](const Vec3& k) {
    const MapJet j = m.jet_unchecked(KPoint(k[0], k[1], k[2]));
    const Mat3 J = j.jacobian();
    if (!(std::fabs(J.det()) > 1e-12)) throw NumericalError("trace_rk4: singular Jacobian at " + to_string(KPoint(k[0], k[1], k[2])));
    const Vec3 f = line_field(j, kind);
    return State{f, J.inverse() * f};
  };

  Polyline line;
  line.kind = kind;
  line.seed = seed;
  const KPoint k0 = on_line(seed, kind, s.lo);
  State y{m.position(k0), Vec3(k0[0], k0[1], k0[2])};
  line.s.push_back(s.lo);
  line.points.push_back(y.x);
  const double h = samples > 1 ? (s.hi - s.lo) / static_cast<double>(samples - 1) : 0.0;
  for (std::size_t i = 1; i < samples; ++i) {
    const State a = rhs(y.k);
    const State b = rhs(y.k + 0.5 * h * a.k);
    const State c = rhs(y.k + 0.5 * h * b.k);
    const State d = rhs(y.k + h * c.k);
    y.x += (h / 6.0) * (a.x + 2.0 * b.x + 2.0 * c.x + d.x);
    y.k += (h / 6.0) * (a.k + 2.0 * b.k + 2.0 * c.k + d.k);
    line.s.push_back(sample_s(s, i, samples));
    line.points.push_back(y.x);
  }
  return line;
}

SurfaceMesh tessellate_surface(const FlowMap& m, double c, const Interval& k1, const Interval& k2,
                               const TessellationOptions& options) {
  if (!m.domain()[2].contains(c)) throw DomainError("surface level k3 = " + std::to_string(c) + " outside the k3 range");
  if (!m.domain()[0].covers(k1) || !m.domain()[1].covers(k2))
    throw DomainError("surface parameter ranges leave the k-domain");
  if (options.n1 < 2 || options.n2 < 2) throw Error("surface mesh needs at least 2 x 2 vertices");

  SurfaceMesh mesh;
  mesh.k3 = c;
  mesh.n1 = options.n1;
  mesh.n2 = options.n2;
  const std::size_t nv = options.n1 * options.n2;
  mesh.vertices.reserve(nv);
  mesh.params.reserve(nv);
  std::vector<double> alfven, bmag, p;
  for (std::size_t i2 = 0; i2 < options.n2; ++i2) {
    for (std::size_t i1 = 0; i1 < options.n1; ++i1) {
      const double a = k1.node(i1, options.n1);
      const double b = k2.node(i2, options.n2);
      const MapJet j = m.jet(KPoint(a, b, c));
      mesh.vertices.push_back(j.x);
      mesh.params.push_back({a, b});
      if (options.scalars) {
        const PlasmaState s = plasma_from_basis({j.d1[0], j.d1[1]}, m.total_pressure());
        alfven.push_back(dot(j.d1[0], j.d1[1]));
        bmag.push_back(norm(s.B));
        p.push_back(s.p);
      }
    }
  }
  if (options.scalars) {
    mesh.scalars["alfven_discriminant"] = std::move(alfven);
    mesh.scalars["B_magnitude"] = std::move(bmag);
    mesh.scalars["p"] = std::move(p);
  }

  auto index = [&](std::size_t i1, std::size_t i2) { return i2 * options.n1 + i1; };
  std::size_t columns = options.n2;
  if (options.weld_seam) {
    double gap = 0.0;
    for (std::size_t i1 = 0; i1 < options.n1; ++i1)
      gap = std::fmax(gap, norm(mesh.vertices[index(i1, options.n2 - 1)] - mesh.vertices[index(i1, 0)]));
    if (gap > options.weld_tolerance)
      throw Error("cannot weld seam: last k2 column is " + std::to_string(gap) + " away from the first");
    columns = options.n2 - 1;
    mesh.vertices.resize(options.n1 * columns);
    mesh.params.resize(options.n1 * columns);
    for (auto& [name, values] : mesh.scalars) values.resize(options.n1 * columns);
    mesh.n2 = columns;
    mesh.welded = true;
  }
  for (std::size_t i2 = 0; i2 + 1 < options.n2; ++i2) {
    const std::size_t next = (i2 + 1) % columns;
    for (std::size_t i1 = 0; i1 + 1 < options.n1; ++i1) {
      const std::array<std::size_t, 4> q{index(i1, i2), index(i1 + 1, i2), index(i1 + 1, next), index(i1, next)};
      const Vec3 d1 = mesh.vertices[q[2]] - mesh.vertices[q[0]];
      const Vec3 d2 = mesh.vertices[q[3]] - mesh.vertices[q[1]];
      if (0.5 * norm(cross(d1, d2)) < 1e-12) mesh.degenerate_quads.push_back(mesh.quads.size());
      mesh.quads.push_back(q);
    }
  }
  return mesh;
}

Regime classify(double discriminant, double dead_band) {
  if (std::fabs(discriminant) < dead_band) return Regime::alfvenic;
  return discriminant > 0.0 ? Regime::super_alfvenic : Regime::sub_alfvenic;
}

std::vector<ClassifiedPoint> classify_grid(const FlowMap& m, const GridSpec& grid, double dead_band) {
  std::vector<ClassifiedPoint> out;
  out.reserve(grid.size());
  for (const KPoint& k : grid_points(m.domain(), grid)) {
    const double d = m.alfven_discriminant(k);
    out.push_back({k, d, classify(d, dead_band)});
  }
  return out;
}

std::vector<FieldSample> sample_fields(const FlowMap& m, const GridSpec& grid) {
  std::vector<FieldSample> out;
  out.reserve(grid.size());
  for (const KPoint& k : grid_points(m.domain(), grid)) {
    const MapJet j = m.jet(k);
    out.push_back({k, j.x, plasma_from_basis({j.d1[0], j.d1[1]}, m.total_pressure())});
  }
  return out;
}

}  // namespace mhdflow
