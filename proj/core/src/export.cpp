#include "mhdflow/export.hpp"

#include <fstream>
#include <functional>
#include <iomanip>

#include "mhdflow/error.hpp"

namespace mhdflow {

ExportFormat parse_export_format(std::string_view text) {
  if (text == "obj") return ExportFormat::obj;
  if (text == "vtk") return ExportFormat::vtk;
  if (text == "csv") return ExportFormat::csv;
  throw Error("unknown export format '" + std::string(text) + "' (expected obj, vtk or csv)");
}

namespace {

void require_nonempty(bool empty) {
  if (empty) throw Error("nothing to export");
}

void unsupported(ExportFormat f, const char* what) {
  const char* name = f == ExportFormat::obj ? "obj" : f == ExportFormat::vtk ? "vtk" : "csv";
  throw Error(std::string("format ") + name + " is not available for " + what);
}

void vtk_header(std::ostream& os, const std::string& title) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
}

void vtk_points(std::ostream& os, std::size_t n, const std::function<Vec3(std::size_t)>& at) {
  os << "POINTS " << n << " double\n";
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = at(i);
    os << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  }
}

void vtk_vertices(std::ostream& os, std::size_t n) {
  os << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (std::size_t i = 0; i < n; ++i) os << "1 " << i << '\n';
}

void vtk_scalars(std::ostream& os, const std::string& name, const std::vector<double>& values) {
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) os << v << '\n';
}

void vtk_vectors(std::ostream& os, const std::string& name, const std::vector<Vec3>& values) {
  os << "VECTORS " << name << " double\n";
  for (const auto& v : values) os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
}

template <typename Writer>
void to_file(const std::filesystem::path& path, Writer&& write) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  write(os);
  os.flush();
  if (!os) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace

void write_mesh(std::ostream& os, const SurfaceMesh& mesh, ExportFormat format) {
  require_nonempty(mesh.vertices.empty());
  os << std::setprecision(17);
  switch (format) {
    case ExportFormat::obj:
      os << "# mhdflow contact surface k3 = " << mesh.k3 << '\n';
      for (const auto& v : mesh.vertices) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
      for (const auto& q : mesh.quads) os << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
      return;
    case ExportFormat::vtk: {
      std::ostringstream title;
      title << std::setprecision(17) << "mhdflow contact surface k3 = " << mesh.k3;
      vtk_header(os, title.str());
      vtk_points(os, mesh.vertices.size(), [&](std::size_t i) { return mesh.vertices[i]; });
      os << "POLYGONS " << mesh.quads.size() << ' ' << 5 * mesh.quads.size() << '\n';
      for (const auto& q : mesh.quads) os << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
      if (!mesh.scalars.empty()) {
        os << "POINT_DATA " << mesh.vertices.size() << '\n';
        for (const auto& [name, values] : mesh.scalars) vtk_scalars(os, name, values);
      }
      return;
    }
    case ExportFormat::csv: {
      os << "i1,i2,k1,k2,x1,x2,x3";
      for (const auto& [name, values] : mesh.scalars) os << ',' << name;
      os << '\n';
      for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto& v = mesh.vertices[i];
        os << i % mesh.n1 << ',' << i / mesh.n1 << ',' << mesh.params[i][0] << ',' << mesh.params[i][1] << ',' << v[0]
           << ',' << v[1] << ',' << v[2];
        for (const auto& [name, values] : mesh.scalars) os << ',' << values[i];
        os << '\n';
      }
      return;
    }
  }
}

void write_polylines(std::ostream& os, std::span<const Polyline> lines, ExportFormat format) {
  std::size_t total = 0;
  for (const auto& l : lines) total += l.size();
  require_nonempty(total == 0);
  os << std::setprecision(17);
  switch (format) {
    case ExportFormat::obj: {
      os << "# mhdflow field lines\n";
      for (const auto& l : lines)
        for (const auto& p : l.points) os << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
      std::size_t base = 1;
      for (const auto& l : lines) {
        if (l.size() >= 2) {
          os << 'l';
          for (std::size_t i = 0; i < l.size(); ++i) os << ' ' << base + i;
          os << '\n';
        }
        base += l.size();
      }
      return;
    }
    case ExportFormat::vtk: {
      vtk_header(os, "mhdflow field lines");
      std::vector<Vec3> pts;
      std::vector<double> s, kind;
      for (const auto& l : lines) {
        pts.insert(pts.end(), l.points.begin(), l.points.end());
        s.insert(s.end(), l.s.begin(), l.s.end());
        kind.insert(kind.end(), l.size(), l.kind == LineKind::streamline ? 0.0 : 1.0);
      }
      vtk_points(os, pts.size(), [&](std::size_t i) { return pts[i]; });
      std::size_t nonempty = 0, size = 0;
      for (const auto& l : lines)
        if (!l.empty()) {
          ++nonempty;
          size += l.size() + 1;
        }
      os << "LINES " << nonempty << ' ' << size << '\n';
      std::size_t base = 0;
      for (const auto& l : lines) {
        if (l.empty()) continue;
        os << l.size();
        for (std::size_t i = 0; i < l.size(); ++i) os << ' ' << base + i;
        os << '\n';
        base += l.size();
      }
      os << "POINT_DATA " << pts.size() << '\n';
      vtk_scalars(os, "s", s);
      vtk_scalars(os, "kind", kind);
      return;
    }
    case ExportFormat::csv:
      os << "line,kind,s,x1,x2,x3\n";
      for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& l = lines[li];
        for (std::size_t i = 0; i < l.size(); ++i)
          os << li << ',' << name_of(l.kind) << ',' << l.s[i] << ',' << l.points[i][0] << ',' << l.points[i][1] << ','
             << l.points[i][2] << '\n';
      }
      return;
  }
}

void write_classification(std::ostream& os, std::span<const ClassifiedPoint> points, ExportFormat format) {
  require_nonempty(points.empty());
  os << std::setprecision(17);
  switch (format) {
    case ExportFormat::csv:
      os << "k1,k2,k3,discriminant,label\n";
      for (const auto& p : points)
        os << p.k[0] << ',' << p.k[1] << ',' << p.k[2] << ',' << p.discriminant << ',' << name_of(p.regime) << '\n';
      return;
    case ExportFormat::vtk: {
      // Points are placed in parameter space (k1, k2, k3).
      vtk_header(os, "mhdflow alfven classification (k-space)");
      vtk_points(os, points.size(), [&](std::size_t i) { return Vec3(points[i].k[0], points[i].k[1], points[i].k[2]); });
      vtk_vertices(os, points.size());
      std::vector<double> d, label;
      for (const auto& p : points) {
        d.push_back(p.discriminant);
        label.push_back(p.regime == Regime::sub_alfvenic ? -1.0 : p.regime == Regime::alfvenic ? 0.0 : 1.0);
      }
      os << "POINT_DATA " << points.size() << '\n';
      vtk_scalars(os, "discriminant", d);
      vtk_scalars(os, "regime", label);
      return;
    }
    case ExportFormat::obj:
      unsupported(format, "classification grids");
  }
}

void write_fields(std::ostream& os, std::span<const FieldSample> samples, ExportFormat format) {
  require_nonempty(samples.empty());
  os << std::setprecision(17);
  switch (format) {
    case ExportFormat::csv:
      os << "k1,k2,k3,x1,x2,x3,v1,v2,v3,B1,B2,B3,p,P\n";
      for (const auto& f : samples) {
        os << f.k[0] << ',' << f.k[1] << ',' << f.k[2] << ',' << f.x[0] << ',' << f.x[1] << ',' << f.x[2];
        for (double c : f.state.v.c) os << ',' << c;
        for (double c : f.state.B.c) os << ',' << c;
        os << ',' << f.state.p << ',' << f.state.P << '\n';
      }
      return;
    case ExportFormat::vtk: {
      vtk_header(os, "mhdflow sampled fields");
      vtk_points(os, samples.size(), [&](std::size_t i) { return samples[i].x; });
      vtk_vertices(os, samples.size());
      std::vector<Vec3> v, B;
      std::vector<double> p;
      for (const auto& f : samples) {
        v.push_back(f.state.v);
        B.push_back(f.state.B);
        p.push_back(f.state.p);
      }
      os << "POINT_DATA " << samples.size() << '\n';
      vtk_vectors(os, "v", v);
      vtk_vectors(os, "B", B);
      vtk_scalars(os, "p", p);
      return;
    }
    case ExportFormat::obj:
      unsupported(format, "field samples");
  }
}

void write_current_sheet(std::ostream& os, std::span<const SheetSample> samples) {
  require_nonempty(samples.empty());
  os << std::setprecision(17) << "k1,k2,x1,x2,x3,n1,n2,n3,J1,J2,J3\n";
  for (const auto& s : samples) {
    os << s.k1 << ',' << s.k2;
    for (double c : s.x.c) os << ',' << c;
    for (double c : s.n.c) os << ',' << c;
    for (double c : s.J.c) os << ',' << c;
    os << '\n';
  }
}

void export_mesh(const SurfaceMesh& mesh, ExportFormat format, const std::filesystem::path& path) {
  require_nonempty(mesh.vertices.empty());
  to_file(path, [&](std::ostream& os) { write_mesh(os, mesh, format); });
}

void export_polylines(std::span<const Polyline> lines, ExportFormat format, const std::filesystem::path& path) {
  std::size_t total = 0;
  for (const auto& l : lines) total += l.size();
  require_nonempty(total == 0);
  to_file(path, [&](std::ostream& os) { write_polylines(os, lines, format); });
}

void export_classification(std::span<const ClassifiedPoint> points, ExportFormat format,
                           const std::filesystem::path& path) {
  require_nonempty(points.empty());
  to_file(path, [&](std::ostream& os) { write_classification(os, points, format); });
}

void export_fields(std::span<const FieldSample> samples, ExportFormat format, const std::filesystem::path& path) {
  require_nonempty(samples.empty());
  to_file(path, [&](std::ostream& os) { write_fields(os, samples, format); });
}

}  // namespace mhdflow
