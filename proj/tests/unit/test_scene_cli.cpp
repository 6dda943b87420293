#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "mhdflow/error.hpp"
#include "mhdflow/scene.hpp"
#include "support.hpp"

using namespace mhdflow;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scene(const char* name) { return testing::scene_path(name).string(); }

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kMinimal = R"({"family": "s1", "t1": "0", "areamap": {"mode": "pair", "t2": "k2", "t3": "k3"},
  "domain": {"k1": [-1, 1], "k2": [-1, 1], "k3": [-1, 1]}})";

}  // namespace

TEST_CASE("scene parsing") {
  const SceneFile s = parse_scene(kMinimal);
  CHECK(s.spec.family == Family::s1);
  CHECK(s.spec.total_pressure == 0.0);
  CHECK(s.spec.areamap->mode == AreaMapMode::pair);

  const SceneFile back = parse_scene(to_json(s));
  CHECK(to_json(back) == to_json(s));

  const SceneFile fig1 = load_scene(scene("fig1.json"));
  CHECK(fig1.spec.beta == "sin(k1)");
  CHECK(fig1.spec.domain[2].lo == 0.2);
  const SceneFile t = load_scene(scene("transformed_fig1.json"));
  REQUIRE(t.transforms.size() == 2);
  CHECK(std::get<BogoyavlenskijStep>(t.transforms[0]).phi == "1 + k3");
  CHECK(load_scene(scene("current_sheet.json")).current_sheet->phi_plus == 2.0);
}

TEST_CASE("scene schema violations") {
  auto rejects = [](const std::string& text, const std::string& fragment) {
    CAPTURE(text);
    try {
      parse_scene(text);
      FAIL("expected a schema error");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };
  rejects("{", "not valid JSON");
  rejects("[]", "must be an object");
  rejects(R"({"family": "s1", "t1": "0", "areamap": {"mode": "circular"}, "colour": 1,
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}})", "unknown key 'colour'");
  rejects(R"({"family": "s1", "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}})", "requires 't1'");
  rejects(R"({"family": "s1", "t1": "0", "beta": "k1", "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}})", "does not take 'beta'");
  rejects(R"({"family": "s1", "t1": "sin(", "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}})", "t1: syntax error at position 4");
  rejects(R"({"family": "s1", "t1": "0", "areamap": {"mode": "circular"},
    "domain": {"k1": [1, 0], "k2": [0, 1], "k3": [1, 2]}})", "inverted");
  rejects(R"({"family": "s4", "domain": {}})", "family");
  rejects(R"({"family": "s1", "t1": "0", "areamap": {"mode": "circular", "shear": [{"axis": 4, "g": "u"}]},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}})", "axis");
  rejects(R"({"family": "s1", "t1": "0", "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}, "transforms": [{"rotate": "1"}]})", "unknown key 'rotate'");
  rejects(R"({"family": "s1", "t1": "0", "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1]}})", "missing 'k3'");
}

TEST_CASE("cli verify") {
  const Run id = run({"verify", "--scene", scene("identity.json")});
  CHECK(id.code == 0);
  const auto j = nlohmann::json::parse(id.out);
  CHECK(j["pass"] == true);
  for (const auto& r : j["reports"])
    for (const auto& e : r["residuals"]) CHECK(e["max_abs"] == 0.0);

  const Run f = run({"verify", "--scene", scene("fig1.json"), "--grid", "11x13x7"});
  CHECK(f.code == 0);
  CHECK(nlohmann::json::parse(f.out)["reports"][0]["points"] == 11 * 13 * 7);

  // Byte-identical across runs.
  CHECK(run({"verify", "--scene", scene("fig1.json")}).out == run({"verify", "--scene", scene("fig1.json")}).out);

  const Run tight = run({"verify", "--scene", scene("fig1.json"), "--tol", "1e-30"});
  CHECK(tight.code == 1);

  const Run csv = run({"verify", "--scene", scene("identity.json"), "--grid", "2", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("# reduced\nk1,k2,k3,momentum_k1", 0) == 0);

  const Run fd = run({"verify", "--scene", scene("potential_circular.json"), "--grid", "5", "--fd-step", "1e-5"});
  CHECK(fd.code == 0);
  CHECK(nlohmann::json::parse(fd.out)["reports"].size() == 3);
}

TEST_CASE("cli exit codes for bad input") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "--scene", "/no/such/scene.json"}).code == 2);
  CHECK(run({"verify", "--scene", scene("identity.json"), "--grid", "0"}).code == 2);
  CHECK(run({"verify", "--scene", scene("identity.json"), "--format", "obj"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const auto bad = temp("mhdflow_bad_scene.json");
  write(bad, R"({"family": "s1", "t1": "0", "extra": true, "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [1, 2]}})");
  const Run r = run({"verify", "--scene", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown key 'extra'") != std::string::npos);

  // The circular map is singular at k3 = 0.
  const auto singular = temp("mhdflow_singular_scene.json");
  write(singular, R"({"family": "s1", "t1": "0", "areamap": {"mode": "circular"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [0, 1]}})");
  CHECK(run({"verify", "--scene", singular.string()}).code == 3);

  // Broken determinant: rejected when the area map is built.
  const auto broken = temp("mhdflow_broken_scene.json");
  write(broken, R"({"family": "s1", "t1": "0", "areamap": {"mode": "pair", "t2": "k2", "t3": "2*k3"},
    "domain": {"k1": [0, 1], "k2": [0, 1], "k3": [0, 1]}})");
  CHECK(run({"verify", "--scene", broken.string()}).code == 2);

  // General mode is not checked at construction, so verify fails instead.
  const auto general = temp("mhdflow_general_scene.json");
  write(general, R"({"family": "general", "sigma": ["k1", "0", "k3*k1"], "tau": ["0", "k2", "k3"],
    "domain": {"k1": [-1, 1], "k2": [-1, 1], "k3": [-1, 1]}})");
  CHECK(run({"verify", "--scene", general.string()}).code == 1);
  for (const auto& p : {bad, singular, broken, general}) std::filesystem::remove(p);
}

TEST_CASE("cli transform then verify") {
  const auto out = temp("mhdflow_transformed.json");
  const Run t = run({"transform", "--scene", scene("fig1.json"), "--phi", "1 + k3", "--psi", "sin(k3)", "--out",
                     out.string()});
  REQUIRE(t.code == 0);
  const SceneFile s = load_scene(out);
  CHECK(s.transforms.size() == 2);
  CHECK(run({"verify", "--scene", out.string()}).code == 0);
  CHECK(run({"transform", "--scene", scene("fig1.json"), "--phi", "k3 - 1"}).code == 2);
  CHECK(run({"transform", "--scene", scene("fig1.json")}).code == 2);
  std::filesystem::remove(out);
}

TEST_CASE("cli export-surface, trace, classify, sample-fields") {
  const Run obj = run({"export-surface", "--scene", scene("circular_cylinder.json"), "--k3", "0.5", "--grid", "32"});
  CHECK(obj.code == 0);
  CHECK(std::count(obj.out.begin(), obj.out.end(), '\n') == 1 + 1024 + 961);

  const auto base = temp("mhdflow_surface.vtk");
  const Run multi = run({"export-surface", "--scene", scene("fig1.json"), "--k3", "0.5,1.0", "--format", "vtk",
                         "--out", base.string()});
  CHECK(multi.code == 0);
  for (int i = 0; i < 2; ++i) {
    const auto p = temp("mhdflow_surface_" + std::to_string(i) + ".vtk");
    CHECK(std::filesystem::exists(p));
    std::filesystem::remove(p);
  }
  CHECK(run({"export-surface", "--scene", scene("fig1.json"), "--k3", "0.5,1.0"}).code == 2);
  CHECK(run({"export-surface", "--scene", scene("fig1.json"), "--k3", "5"}).code == 2);

  const auto seeds = temp("mhdflow_seeds.txt");
  write(seeds, "# k1 k2 k3\n1 1 1\n2, 2, 0.5\n\n");
  const Run tr = run({"trace", "--scene", scene("fig1.json"), "--seeds", seeds.string(), "--format", "csv",
                      "--samples", "11"});
  CHECK(tr.code == 0);
  CHECK(std::count(tr.out.begin(), tr.out.end(), '\n') == 1 + 4 * 11);
  write(seeds, "1 1\n");
  CHECK(run({"trace", "--scene", scene("fig1.json"), "--seeds", seeds.string()}).code == 2);
  std::filesystem::remove(seeds);

  const Run cl = run({"classify", "--scene", scene("potential_circular.json"), "--grid", "3"});
  CHECK(cl.code == 0);
  CHECK(std::count(cl.out.begin(), cl.out.end(), '\n') == 28);
  CHECK(cl.err.find("super 27") != std::string::npos);

  const Run sf = run({"sample-fields", "--scene", scene("identity.json"), "--grid", "2"});
  CHECK(sf.code == 0);
  CHECK(sf.out.rfind("k1,k2,k3,x1,x2,x3,v1,v2,v3,B1,B2,B3,p,P\n", 0) == 0);
}

TEST_CASE("cli current-sheet") {
  const Run r = run({"current-sheet", "--scene", scene("current_sheet.json")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("k1,k2,x1,x2,x3,n1,n2,n3,J1,J2,J3\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 1024);
  CHECK(r.err.find("PASS") != std::string::npos);

  const Run flat = run({"current-sheet", "--scene", scene("current_sheet.json"), "--phi-plus", "1", "--grid", "4"});
  CHECK(flat.code == 0);
  CHECK(flat.err.find("max |J| 0.000e+00") != std::string::npos);
  CHECK(flat.err.find("oracle agreement 0.000e+00") != std::string::npos);

  CHECK(run({"current-sheet", "--scene", scene("current_sheet.json"), "--c", "0.2"}).code == 2);
}
