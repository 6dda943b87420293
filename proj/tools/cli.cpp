#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhdflow/error.hpp"
#include "mhdflow/export.hpp"
#include "mhdflow/geometry.hpp"
#include "mhdflow/scene.hpp"
#include "mhdflow/transforms.hpp"
#include "mhdflow/verify.hpp"

namespace mhdflow::cli {
namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
    throw UsageError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

/// "N" or "N1xN2[xN3...]" with exactly `dims` factors when more than one is given.
std::vector<std::size_t> parse_dims(const std::string& text, std::size_t dims) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t x = text.find('x', start);
    out.push_back(parse_count(std::string_view(text).substr(start, x == std::string::npos ? x : x - start), "grid"));
    if (x == std::string::npos) break;
    start = x + 1;
  }
  if (out.size() == 1) out.assign(dims, out[0]);
  if (out.size() != dims)
    throw UsageError("grid '" + text + "' needs 1 or " + std::to_string(dims) + " factors");
  return out;
}

GridSpec parse_grid(const std::string& text) {
  const auto d = parse_dims(text, 3);
  return GridSpec{{d[0], d[1], d[2]}};
}

/// Output goes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot open '" + path + "' for writing");
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }
  void close() {
    os_->flush();
    if (!*os_) throw Error("write to '" + (path_.empty() ? std::string("stdout") : path_) + "' failed");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::string sci(double v, int digits = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << v;
  return os.str();
}

struct Common {
  std::string scene;
  std::string grid;
  std::string out;
  std::string format;
};

void add_scene(CLI::App* cmd, Common& c) {
  cmd->add_option("--scene", c.scene, "scene JSON file")->required();
}

void add_out(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output path (default: stdout)");
}

void add_format(CLI::App* cmd, Common& c, std::vector<std::string> allowed, std::string fallback) {
  c.format = std::move(fallback);
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(std::move(allowed)))->capture_default_str();
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  Common c;
  double tol = 1e-8;
  double fd_step = 0.0;
  double fd_tol = 1e-5;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const SceneFile scene = load_scene(a.c.scene);
  const FlowMap m = build_scene(scene);
  VerifyOptions o;
  o.grid = parse_grid(a.c.grid);
  o.tolerance = a.tol;
  o.keep_points = a.c.format == "csv";

  std::vector<ResidualReport> reports{verify_reduced(m, o), verify_physical(m, o)};
  if (a.fd_step > 0.0) {
    VerifyOptions fo = o;
    fo.tolerance = a.fd_tol;
    reports.push_back(fd_crosscheck(m, a.fd_step, fo));
  }
  const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });

  Sink sink(a.c.out, out);
  if (a.c.format == "json") {
    nlohmann::ordered_json j;
    j["scene"] = scene.name;
    j["family"] = m.family();
    j["pass"] = pass;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) j["reports"].push_back(nlohmann::ordered_json::parse(to_json(r)));
    sink.stream() << j.dump(2) << '\n';
  } else {
    for (const auto& r : reports) sink.stream() << "# " << r.check << '\n' << to_csv(r);
  }
  sink.close();
  for (const auto& r : reports) err << to_text(r);
  return pass ? ok : verification_failed;
}

struct SurfaceArgs {
  Common c;
  std::vector<double> k3;
  bool weld = false;
};

std::string numbered(const std::string& path, std::size_t i) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_" + std::to_string(i) + p.extension().string())).string();
}

int cmd_export_surface(const SurfaceArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k3.size() > 1 && a.c.out.empty()) throw UsageError("several --k3 levels need --out");
  const FlowMap m = build_scene(load_scene(a.c.scene));
  const auto d = parse_dims(a.c.grid, 2);
  TessellationOptions t;
  t.n1 = d[0];
  t.n2 = d[1];
  t.weld_seam = a.weld;
  const ExportFormat f = parse_export_format(a.c.format);
  t.scalars = f != ExportFormat::obj;
  for (std::size_t i = 0; i < a.k3.size(); ++i) {
    const SurfaceMesh mesh = tessellate_surface(m, a.k3[i], m.domain()[0], m.domain()[1], t);
    const std::string path = a.k3.size() > 1 ? numbered(a.c.out, i) : a.c.out;
    Sink sink(path, out);
    write_mesh(sink.stream(), mesh, f);
    sink.close();
    err << "k3 = " << a.k3[i] << ": " << mesh.vertices.size() << " vertices, " << mesh.quads.size() << " quads, "
        << mesh.degenerate_quads.size() << " degenerate" << (path.empty() ? "" : " -> " + path) << '\n';
  }
  return ok;
}

struct TraceArgs {
  Common c;
  std::string seeds;
  std::string kind = "both";
  std::vector<double> s_range{-1.0, 1.0};
  std::size_t samples = 201;
  std::string method = "exact";
};

std::vector<KPoint> read_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open seeds file '" + path + "'");
  std::vector<KPoint> seeds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double k[3];
    std::size_t n = 0;
    double v;
    while (n < 3 && ls >> v) k[n++] = v;
    if (n == 0 && ls.eof()) continue;
    std::string rest;
    if (n != 3 || (ls >> rest))
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected three numbers k1 k2 k3");
    seeds.emplace_back(k[0], k[1], k[2]);
  }
  if (seeds.empty()) throw UsageError("seeds file '" + path + "' has no seeds");
  return seeds;
}

int cmd_trace(const TraceArgs& a, std::ostream& out, std::ostream& err) {
  if (a.s_range.size() != 2 || !(a.s_range[0] < a.s_range[1])) throw UsageError("--s-range needs lo,hi with lo < hi");
  const FlowMap m = build_scene(load_scene(a.c.scene));
  const auto seeds = read_seeds(a.seeds);
  const SRange s{a.s_range[0], a.s_range[1]};
  std::vector<LineKind> kinds;
  if (a.kind != "magnetic") kinds.push_back(LineKind::streamline);
  if (a.kind != "streamline") kinds.push_back(LineKind::magnetic);

  std::vector<Polyline> lines;
  std::size_t truncated = 0;
  for (const auto& seed : seeds) {
    if (!m.domain().contains(seed)) throw DomainError("seed " + to_string(seed) + " outside the k-domain");
    for (LineKind k : kinds) {
      Polyline l;
      if (a.method == "rk4")
        l = trace_rk4(m, k, seed, s, a.samples);
      else
        l = k == LineKind::streamline ? streamline(m, seed, s, a.samples) : magnetic_line(m, seed, s, a.samples);
      truncated += l.truncated;
      lines.push_back(std::move(l));
    }
  }
  Sink sink(a.c.out, out);
  write_polylines(sink.stream(), lines, parse_export_format(a.c.format));
  sink.close();
  err << lines.size() << " lines from " << seeds.size() << " seeds";
  if (truncated) err << ", " << truncated << " truncated at the domain boundary";
  err << '\n';
  return ok;
}

struct TransformArgs {
  Common c;
  std::string phi, psi, chi;
};

int cmd_transform(const TransformArgs& a, std::ostream& out, std::ostream& err) {
  if (a.phi.empty() && a.psi.empty() && a.chi.empty()) throw UsageError("transform needs --phi and/or --psi/--chi");
  SceneFile scene = load_scene(a.c.scene);
  try {
    if (!a.phi.empty()) scene.transforms.push_back(BogoyavlenskijStep{parse(a.phi).str()});
    if (!a.psi.empty() || !a.chi.empty())
      scene.transforms.push_back(TranslateStep{parse(a.psi.empty() ? "0" : a.psi).str(),
                                               parse(a.chi.empty() ? "0" : a.chi).str()});
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
  const FlowMap m = build_scene(scene);  // rejects vanishing or sign-changing phi
  Sink sink(a.c.out, out);
  sink.stream() << to_json(scene);
  sink.close();
  err << "scene family " << m.family() << ", " << scene.transforms.size() << " transform(s)\n";
  return ok;
}

struct SheetArgs {
  Common c;
  double cval = 0.0, phi_minus = 1.0, phi_plus = 1.0;
  double tol = 1e-12;
  bool has_c = false, has_minus = false, has_plus = false;
};

int cmd_current_sheet(const SheetArgs& a, std::ostream& out, std::ostream& err) {
  const SceneFile scene = load_scene(a.c.scene);
  const FlowMap m = build_scene(scene);
  const SheetDefaults def = scene.current_sheet.value_or(SheetDefaults{m.domain()[2].mid(), 1.0, 1.0});
  CurrentSheetSpec spec;
  spec.c = a.has_c ? a.cval : def.c;
  spec.phi_minus = a.has_minus ? a.phi_minus : def.phi_minus;
  spec.phi_plus = a.has_plus ? a.phi_plus : def.phi_plus;
  spec.k1 = m.domain()[0];
  spec.k2 = m.domain()[1];
  const auto d = parse_dims(a.c.grid, 2);
  spec.n1 = d[0];
  spec.n2 = d[1];

  const auto samples = current_sheet(m, spec);
  const auto oracle = current_sheet_oracle(m, spec);
  double agreement = 0.0, normal = 0.0, jmax = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    agreement = std::fmax(agreement, max_abs(samples[i].J - oracle[i]));
    normal = std::fmax(normal, std::fabs(dot(samples[i].J, samples[i].n)));
    jmax = std::fmax(jmax, norm(samples[i].J));
  }
  Sink sink(a.c.out, out);
  write_current_sheet(sink.stream(), samples);
  sink.close();
  const bool pass = agreement <= a.tol && normal <= a.tol;
  err << "current sheet at k3 = " << spec.c << " (phi- = " << spec.phi_minus << ", phi+ = " << spec.phi_plus << "), "
      << samples.size() << " samples\n"
      << "  oracle agreement " << sci(agreement) << "  max |J.n| " << sci(normal) << "  max |J| " << sci(jmax) << "  "
      << (pass ? "PASS" : "FAIL") << " at tolerance " << sci(a.tol, 1) << '\n';
  return pass ? ok : verification_failed;
}

struct ClassifyArgs {
  Common c;
  double dead_band = 1e-12;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  const FlowMap m = build_scene(load_scene(a.c.scene));
  const auto points = classify_grid(m, parse_grid(a.c.grid), a.dead_band);
  Sink sink(a.c.out, out);
  write_classification(sink.stream(), points, parse_export_format(a.c.format));
  sink.close();
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& p : points) ++counts[static_cast<int>(p.regime)];
  err << "sub " << counts[static_cast<int>(Regime::sub_alfvenic)] << ", alfvenic "
      << counts[static_cast<int>(Regime::alfvenic)] << ", super " << counts[static_cast<int>(Regime::super_alfvenic)]
      << '\n';
  return ok;
}

int cmd_sample_fields(const Common& c, std::ostream& out, std::ostream& err) {
  const FlowMap m = build_scene(load_scene(c.scene));
  const auto samples = sample_fields(m, parse_grid(c.grid));
  Sink sink(c.out, out);
  write_fields(sink.stream(), samples, parse_export_format(c.format));
  sink.close();
  err << samples.size() << " samples\n";
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact constant-total-pressure MHD flows: build, verify, transform, export"};
  app.name("mhdflow");
  app.require_subcommand(1);

  std::function<int()> action;

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "residuals of the reduced and full MHD equations");
  add_scene(v, verify.c);
  verify.c.grid = "21";
  v->add_option("--grid", verify.c.grid, "N or N1xN2xN3")->capture_default_str();
  v->add_option("--tol", verify.tol, "residual tolerance")->capture_default_str();
  v->add_option("--fd-step", verify.fd_step, "also cross-check derivatives by central differences");
  v->add_option("--fd-tol", verify.fd_tol, "relative tolerance of the difference check")->capture_default_str();
  add_out(v, verify.c);
  add_format(v, verify.c, {"json", "csv"}, "json");
  v->footer("CSV: one block per check, each headed '# <check>' then k1,k2,k3,<residual columns>.\n"
            "reduced: momentum_k1,momentum_k2,momentum_k3,jacobian_det; "
            "physical: momentum,induction,div_v,div_B; fd_crosscheck: first_partials,second_partials");
  v->callback([&] { action = [&] { return cmd_verify(verify, out, err); }; });

  SurfaceArgs surface;
  auto* s = app.add_subcommand("export-surface", "tessellate contact surfaces k3 = c");
  add_scene(s, surface.c);
  s->add_option("--k3", surface.k3, "comma-separated k3 levels")->required()->delimiter(',');
  surface.c.grid = "64";
  s->add_option("--grid", surface.c.grid, "N or N1xN2 vertices")->capture_default_str();
  s->add_flag("--weld", surface.weld, "merge the closing k2 column into the first");
  add_out(s, surface.c);
  add_format(s, surface.c, {"obj", "vtk", "csv"}, "obj");
  s->footer("CSV columns: i1,i2,k1,k2,x1,x2,x3,B_magnitude,alfven_discriminant,p");
  s->callback([&] { action = [&] { return cmd_export_surface(surface, out, err); }; });

  TraceArgs trace;
  auto* t = app.add_subcommand("trace", "streamlines and magnetic field lines");
  add_scene(t, trace.c);
  t->add_option("--seeds", trace.seeds, "file with one 'k1 k2 k3' seed per line")->required();
  t->add_option("--kind", trace.kind)->check(CLI::IsMember({"streamline", "magnetic", "both"}))->capture_default_str();
  t->add_option("--s-range", trace.s_range, "lo,hi")->delimiter(',')->expected(2)->capture_default_str();
  t->add_option("--samples", trace.samples)->check(CLI::Range(2, 1000000))->capture_default_str();
  t->add_option("--method", trace.method)->check(CLI::IsMember({"exact", "rk4"}))->capture_default_str();
  add_out(t, trace.c);
  add_format(t, trace.c, {"obj", "vtk", "csv"}, "obj");
  t->footer("CSV columns: line,kind,s,x1,x2,x3");
  t->callback([&] { action = [&] { return cmd_trace(trace, out, err); }; });

  TransformArgs transform;
  auto* tr = app.add_subcommand("transform", "append a scaling and/or shift to the scene's transform chain");
  add_scene(tr, transform.c);
  tr->add_option("--phi", transform.phi, "scaling factor phi(k3)");
  tr->add_option("--psi", transform.psi, "k1 shift psi(k3)");
  tr->add_option("--chi", transform.chi, "k2 shift chi(k3)");
  add_out(tr, transform.c);
  add_format(tr, transform.c, {"json"}, "json");
  tr->callback([&] { action = [&] { return cmd_transform(transform, out, err); }; });

  SheetArgs sheet;
  auto* cs = app.add_subcommand("current-sheet", "surface current from a jump in the scaling factor");
  add_scene(cs, sheet.c);
  auto* oc = cs->add_option("--c", sheet.cval, "k3 level of the jump");
  auto* om = cs->add_option("--phi-minus", sheet.phi_minus, "scaling factor below the jump");
  auto* op = cs->add_option("--phi-plus", sheet.phi_plus, "scaling factor above the jump");
  sheet.c.grid = "32";
  cs->add_option("--grid", sheet.c.grid, "N or N1xN2 samples over (k1, k2)")->capture_default_str();
  cs->add_option("--tol", sheet.tol, "oracle agreement tolerance")->capture_default_str();
  add_out(cs, sheet.c);
  add_format(cs, sheet.c, {"csv"}, "csv");
  cs->footer("CSV columns: k1,k2,x1,x2,x3,n1,n2,n3,J1,J2,J3");
  cs->callback([&] {
    sheet.has_c = oc->count() > 0;
    sheet.has_minus = om->count() > 0;
    sheet.has_plus = op->count() > 0;
    action = [&] { return cmd_current_sheet(sheet, out, err); };
  });

  ClassifyArgs classify;
  auto* cl = app.add_subcommand("classify", "sub-/super-alfvenic regime on a grid");
  add_scene(cl, classify.c);
  classify.c.grid = "21";
  cl->add_option("--grid", classify.c.grid, "N or N1xN2xN3")->capture_default_str();
  cl->add_option("--dead-band", classify.dead_band, "|a.b| below this is alfvenic")->capture_default_str();
  add_out(cl, classify.c);
  add_format(cl, classify.c, {"csv", "vtk"}, "csv");
  cl->footer("CSV columns: k1,k2,k3,discriminant,label");
  cl->callback([&] { action = [&] { return cmd_classify(classify, out, err); }; });

  Common fields;
  auto* sf = app.add_subcommand("sample-fields", "v, B, p on a grid");
  add_scene(sf, fields);
  fields.grid = "21";
  sf->add_option("--grid", fields.grid, "N or N1xN2xN3")->capture_default_str();
  add_out(sf, fields);
  add_format(sf, fields, {"csv", "vtk"}, "csv");
  sf->footer("CSV columns: k1,k2,k3,x1,x2,x3,v1,v2,v3,B1,B2,B3,p,P");
  sf->callback([&] { action = [&] { return cmd_sample_fields(fields, out, err); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    return action();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const EvalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
}

}  // namespace mhdflow::cli
