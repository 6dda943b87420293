#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string_view>

#include "mhdflow/geometry.hpp"
#include "mhdflow/transforms.hpp"

namespace mhdflow {

enum class ExportFormat { obj, vtk, csv };

ExportFormat parse_export_format(std::string_view text);

// Stream writers. Empty inputs throw Error("nothing to export").
//
// Column orders:
//   mesh csv      i1,i2,k1,k2,x1,x2,x3[,scalar...]
//   polyline csv  line,kind,s,x1,x2,x3
//   classify csv  k1,k2,k3,discriminant,label
//   fields csv    k1,k2,k3,x1,x2,x3,v1,v2,v3,B1,B2,B3,p,P
//   sheet csv     k1,k2,x1,x2,x3,n1,n2,n3,J1,J2,J3
void write_mesh(std::ostream& os, const SurfaceMesh& mesh, ExportFormat format);
void write_polylines(std::ostream& os, std::span<const Polyline> lines, ExportFormat format);
void write_classification(std::ostream& os, std::span<const ClassifiedPoint> points, ExportFormat format);
void write_fields(std::ostream& os, std::span<const FieldSample> samples, ExportFormat format);
void write_current_sheet(std::ostream& os, std::span<const SheetSample> samples);

/// File variants; I/O failures throw Error naming the path.
void export_mesh(const SurfaceMesh& mesh, ExportFormat format, const std::filesystem::path& path);
void export_polylines(std::span<const Polyline> lines, ExportFormat format, const std::filesystem::path& path);
void export_classification(std::span<const ClassifiedPoint> points, ExportFormat format,
                           const std::filesystem::path& path);
void export_fields(std::span<const FieldSample> samples, ExportFormat format, const std::filesystem::path& path);

}  // namespace mhdflow
