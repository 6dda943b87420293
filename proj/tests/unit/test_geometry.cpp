#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mhdflow/error.hpp"
#include "mhdflow/export.hpp"
#include "mhdflow/families.hpp"
#include "mhdflow/geometry.hpp"
#include "support.hpp"

using namespace mhdflow;
using testing::box;
using testing::pi;
using testing::plane;

namespace {

const KBox kFig1Box = box(0, 2 * pi, 0, 2 * pi, 0.2, 1.5);

FlowMap fig1() {
  return build_s2(parse("sin(k1)"), parse("cos(2*t3)"), circular(plane(0, 2 * pi, 0.2, 1.5)), 0.0, kFig1Box);
}

FlowMap cylinder() { return build_s1(parse("0"), circular(plane(0, 2 * pi, 0.2, 1.5)), 0.0, kFig1Box); }

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

/// Max over interior samples of |central-difference tangent - field|.
double tangent_error(const FlowMap& m, const Polyline& l) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < l.size(); ++i) {
    const double ds = l.s[i + 1] - l.s[i - 1];
    const Vec3 t = (l.points[i + 1] - l.points[i - 1]) / ds;
    const double s = l.s[i];
    const KPoint k = l.kind == LineKind::streamline ? KPoint(l.seed.k1() + 0.5 * s, l.seed.k2() + 0.5 * s, l.seed.k3())
                                                    : KPoint(l.seed.k1() - 0.5 * s, l.seed.k2() + 0.5 * s, l.seed.k3());
    const PlasmaState f = m.fields_at(k);
    worst = std::fmax(worst, norm(t - (l.kind == LineKind::streamline ? f.v : f.B)));
  }
  return worst;
}

}  // namespace

TEST_CASE("lines on the identity map are straight") {
  const FlowMap m = identity_map(box(-1, 3, -1, 3, -1, 1));
  const Polyline sl = streamline(m, KPoint(0, 0, 0), {0, 2}, 21);
  REQUIRE(sl.size() == 21);
  CHECK_FALSE(sl.truncated);
  for (std::size_t i = 0; i < sl.size(); ++i) CHECK(testing::dist(sl.points[i], sl.s[i] * Vec3(0.5, 0.5, 0)) < 1e-15);
  const Polyline ml = magnetic_line(m, KPoint(0, 0, 0), {0, 2}, 21);
  for (std::size_t i = 0; i < ml.size(); ++i) CHECK(testing::dist(ml.points[i], ml.s[i] * Vec3(-0.5, 0.5, 0)) < 1e-15);
}

TEST_CASE("lines leaving the domain are truncated and flagged") {
  const FlowMap m = identity_map(box(-1, 1, -1, 1, -1, 1));
  const Polyline l = streamline(m, KPoint(0, 0, 0), {0, 4}, 41);
  CHECK(l.truncated);
  CHECK(l.size() == 21);
}

TEST_CASE("streamlines wind on the cylinder") {
  const FlowMap m = cylinder();
  const Polyline l = streamline(m, KPoint(1.0, 1.0, 0.8), {-1.5, 1.5}, 101);
  for (const Vec3& x : l.points) CHECK(std::hypot(x[1], x[2]) == doctest::Approx(std::sqrt(1.6)).epsilon(1e-14));
}

TEST_CASE("tangents converge to v and B at second order") {
  const FlowMap m = fig1();
  for (LineKind kind : {LineKind::streamline, LineKind::magnetic}) {
    const KPoint seed(3.0, 3.0, 0.9);
    const SRange s{-1.0, 1.0};
    const double e1 = tangent_error(m, kind == LineKind::streamline ? streamline(m, seed, s, 41) : magnetic_line(m, seed, s, 41));
    const double e2 = tangent_error(m, kind == LineKind::streamline ? streamline(m, seed, s, 81) : magnetic_line(m, seed, s, 81));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("RK4 tracing agrees with the exact parametric lines") {
  const FlowMap m = fig1();
  const KPoint seed(3.0, 3.0, 0.9);
  for (LineKind kind : {LineKind::streamline, LineKind::magnetic}) {
    const Polyline exact = kind == LineKind::streamline ? streamline(m, seed, {0, 1}, 201) : magnetic_line(m, seed, {0, 1}, 201);
    const Polyline rk = trace_rk4(m, kind, seed, {0, 1}, 201);
    REQUIRE(exact.size() == rk.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) worst = std::fmax(worst, testing::dist(exact.points[i], rk.points[i]));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("surface meshes") {
  const FlowMap id = identity_map(box(0, 1, 0, 1, -1, 1));
  TessellationOptions o;
  o.n1 = 3;
  o.n2 = 3;
  const SurfaceMesh plane_mesh = tessellate_surface(id, 0.25, {0, 1}, {0, 1}, o);
  CHECK(plane_mesh.vertices.size() == 9);
  CHECK(plane_mesh.quads.size() == 4);
  for (const Vec3& v : plane_mesh.vertices) CHECK(v[2] == 0.25);
  CHECK(plane_mesh.vertices[4] == Vec3(0.5, 0.5, 0.25));

  TessellationOptions with_scalars;
  with_scalars.scalars = true;
  const SurfaceMesh cyl = tessellate_surface(cylinder(), 0.5, kFig1Box[0], kFig1Box[1], with_scalars);
  CHECK(cyl.vertices.size() == 1024);
  CHECK(cyl.quads.size() == 31 * 31);
  CHECK(cyl.degenerate_quads.empty());
  for (const Vec3& v : cyl.vertices) CHECK(std::hypot(v[1], v[2]) == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& q : cyl.quads)
    for (std::size_t i : q) CHECK(i < cyl.vertices.size());
  CHECK(cyl.scalars.at("alfven_discriminant").size() == 1024);

  TessellationOptions welded;
  welded.weld_seam = true;
  const SurfaceMesh closed = tessellate_surface(cylinder(), 0.5, kFig1Box[0], kFig1Box[1], welded);
  CHECK(closed.vertices.size() == 32 * 31);
  CHECK(closed.quads.size() == 31 * 31);
  for (const auto& q : closed.quads)
    for (std::size_t i : q) CHECK(i < closed.vertices.size());

  CHECK_THROWS_AS(tessellate_surface(cylinder(), 2.0, kFig1Box[0], kFig1Box[1], {}), DomainError);
  CHECK_THROWS_AS(tessellate_surface(fig1(), 1.0, kFig1Box[0], {0, 1}, welded), Error);
}

TEST_CASE("lines lie on the surface of their level") {
  const FlowMap m = fig1();
  TessellationOptions o;
  o.n1 = o.n2 = 129;
  const SurfaceMesh mesh = tessellate_surface(m, 1.0, kFig1Box[0], kFig1Box[1], o);
  // Bound: half a cell diagonal times the largest edge stretch.
  double edge = 0.0;
  for (const auto& q : mesh.quads)
    for (int i = 0; i < 4; ++i) edge = std::fmax(edge, testing::dist(mesh.vertices[q[i]], mesh.vertices[q[(i + 1) % 4]]));
  const Polyline l = streamline(m, KPoint(2.0, 2.0, 1.0), {-2, 2}, 50);
  for (const Vec3& x : l.points) {
    double best = 1e300;
    for (const Vec3& v : mesh.vertices) best = std::fmin(best, testing::dist(x, v));
    CHECK(best <= edge);
  }
}

TEST_CASE("classification of s1 scenes") {
  const AreaMap circ = circular(plane(0, 2 * pi, 0.2, 1.5));
  const std::pair<const char*, Regime> cases[] = {
      {"0", Regime::alfvenic}, {"k2", Regime::super_alfvenic}, {"-k2", Regime::sub_alfvenic}};
  for (const auto& [t1, regime] : cases) {
    const auto pts = classify_grid(build_s1(parse(t1), circ, 0.0, kFig1Box), GridSpec{});
    CHECK(pts.size() == 9261);
    for (const auto& p : pts) CHECK(p.regime == regime);
  }
  CHECK(name_of(Regime::sub_alfvenic) == "sub");
}

TEST_CASE("field samples carry the plasma state") {
  const auto s = sample_fields(identity_map(box(0, 1, 0, 1, 0, 1)), GridSpec{{2, 2, 2}});
  REQUIRE(s.size() == 8);
  CHECK(s[1].k[0] == 1.0);
  CHECK(s[1].state.v == Vec3(0.5, 0.5, 0));
}

TEST_CASE("export formats") {
  TessellationOptions o;
  o.scalars = true;
  const SurfaceMesh cyl = tessellate_surface(cylinder(), 0.5, kFig1Box[0], kFig1Box[1], o);
  std::ostringstream obj, vtk, csv;
  write_mesh(obj, cyl, ExportFormat::obj);
  CHECK(count_prefix(obj.str(), "v ") == 1024);
  CHECK(count_prefix(obj.str(), "f ") == 961);
  write_mesh(vtk, cyl, ExportFormat::vtk);
  CHECK(vtk.str().rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(vtk.str().find("POINTS 1024 double") != std::string::npos);
  CHECK(vtk.str().find("POLYGONS 961 4805") != std::string::npos);
  CHECK(vtk.str().find("SCALARS alfven_discriminant double 1") != std::string::npos);
  write_mesh(csv, cyl, ExportFormat::csv);
  CHECK(csv.str().rfind("i1,i2,k1,k2,x1,x2,x3,B_magnitude,alfven_discriminant,p\n", 0) == 0);

  const FlowMap m = fig1();
  std::vector<Polyline> lines{streamline(m, KPoint(1, 1, 1), {0, 1}, 5), magnetic_line(m, KPoint(1, 1, 1), {0, 1}, 5)};
  std::ostringstream lobj, lvtk, lcsv;
  write_polylines(lobj, lines, ExportFormat::obj);
  CHECK(count_prefix(lobj.str(), "v ") == 10);
  CHECK(count_prefix(lobj.str(), "l ") == 2);
  write_polylines(lvtk, lines, ExportFormat::vtk);
  CHECK(lvtk.str().find("LINES 2 12") != std::string::npos);
  write_polylines(lcsv, lines, ExportFormat::csv);
  CHECK(count_prefix(lcsv.str(), "1,magnetic,") == 5);

  std::ostringstream ccsv;
  write_classification(ccsv, classify_grid(m, GridSpec{{2, 2, 2}}), ExportFormat::csv);
  CHECK(ccsv.str().rfind("k1,k2,k3,discriminant,label\n", 0) == 0);
  CHECK(count_prefix(ccsv.str(), "0,0,0.20000000000000001,") == 1);

  std::ostringstream bad;
  CHECK_THROWS_AS(write_classification(bad, classify_grid(m, GridSpec{{2, 2, 2}}), ExportFormat::obj), Error);
  CHECK_THROWS_AS(parse_export_format("ply"), Error);
}

TEST_CASE("empty exports and unwritable paths") {
  std::ostringstream os;
  const std::vector<Polyline> none{Polyline{}};
  try {
    write_polylines(os, none, ExportFormat::obj);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "nothing to export");
  }
  TessellationOptions with_scalars;
  with_scalars.scalars = true;
  const SurfaceMesh cyl = tessellate_surface(cylinder(), 0.5, kFig1Box[0], kFig1Box[1], with_scalars);
  try {
    export_mesh(cyl, ExportFormat::obj, "/nonexistent-dir/mesh.obj");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/mesh.obj") != std::string::npos);
  }
  const auto path = std::filesystem::temp_directory_path() / "mhdflow_test_mesh.obj";
  export_mesh(cyl, ExportFormat::obj, path);
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
}
