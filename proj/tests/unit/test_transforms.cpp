#include <doctest.h>

#include <cmath>

#include "mhdflow/error.hpp"
#include "mhdflow/families.hpp"
#include "mhdflow/transforms.hpp"
#include "mhdflow/verify.hpp"
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

CurrentSheetSpec sheet(double phi_minus, double phi_plus) {
  CurrentSheetSpec s;
  s.c = 0.5;
  s.phi_minus = phi_minus;
  s.phi_plus = phi_plus;
  s.k1 = kFig1Box[0];
  s.k2 = kFig1Box[1];
  return s;
}

}  // namespace

TEST_CASE("unit scaling is the identity") {
  const FlowMap m = fig1();
  const FlowMap t = bogoyavlenskij(m, parse("1"));
  for (const KPoint& k : grid_points(kFig1Box, GridSpec{{6, 6, 6}})) {
    const MapJet a = m.jet(k), b = t.jet(k);
    CHECK(norm(a.x - b.x) <= 1e-15);
    for (int i = 0; i < 3; ++i) CHECK(norm(a.d1[i] - b.d1[i]) <= 1e-15);
  }
}

TEST_CASE("constant scaling on the identity map") {
  const FlowMap t = bogoyavlenskij(identity_map(box(-1, 1, -1, 1, -1, 1)), parse("2"));
  const Basis ab = t.basis_at(KPoint(0.1, 0.2, 0.3));
  CHECK(ab.a == Vec3(2, 0, 0));
  CHECK(ab.b == Vec3(0, 0.5, 0));
  CHECK(dot(ab.a, ab.b) == 0.0);
}

TEST_CASE("scaling by 1 + k3 keeps fig1 a solution and preserves a.b and P") {
  const FlowMap m = fig1();
  const FlowMap t = bogoyavlenskij(m, parse("1 + k3"));
  CHECK(t.total_pressure() == m.total_pressure());
  CHECK(verify_reduced(t, {}).max_residual() < 1e-9);
  CHECK(verify_physical(t, {}).max_residual() < 1e-8);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    // Corresponding points: t at k matches m at (phi k1, k2 / phi, k3).
    const KPoint k = testing::random_point(rng, box(0, 2 * pi / 2.5, 0, 2 * pi, 0.2, 1.5));
    const double phi = 1 + k.k3();
    const KPoint K(phi * k.k1(), k.k2() / phi, k.k3());
    CHECK(t.alfven_discriminant(k) == doctest::Approx(m.alfven_discriminant(K)).epsilon(1e-12));
    CHECK(testing::dist(t.position(k), m.position(K)) < 1e-14);
    const Basis tb = t.basis_at(k), mb = m.basis_at(K);
    CHECK(testing::dist(tb.a, phi * mb.a) < 1e-13);
    CHECK(testing::dist(tb.b, mb.b / phi) < 1e-13);
  }
}

TEST_CASE("vanishing or sign-changing scaling factors are rejected") {
  const FlowMap m = identity_map(box(-1, 1, -1, 1, -1, 1));
  CHECK_THROWS_AS(bogoyavlenskij(m, parse("k3")), ConstructionError);
  CHECK_THROWS_AS(bogoyavlenskij(m, parse("k3 + 0.5")), ConstructionError);
  CHECK_THROWS_AS(bogoyavlenskij(m, parse("0")), ConstructionError);
  CHECK_NOTHROW(bogoyavlenskij(m, parse("-2 - k3^2")));
  CHECK_THROWS_AS(bogoyavlenskij(m, parse("log(k3)")), NumericalError);
}

TEST_CASE("translation") {
  const KBox b = box(-1, 1, -1, 1, -1, 1);
  const FlowMap id = identity_map(b);
  const FlowMap zero = translate(id, parse("0"), parse("0"));
  const FlowMap shifted = translate(id, parse("k3"), parse("0"));
  for (const KPoint& k : grid_points(b, GridSpec{{5, 5, 5}})) {
    CHECK(zero.position(k) == id.position(k));
    CHECK(shifted.position(k) == Vec3(k.k1() + k.k3(), k.k2(), k.k3()));
    CHECK(shifted.jacobian_det(k) == 1.0);
  }
  const FlowMap m = fig1();
  const FlowMap t = translate(m, parse("sin(k3)"), parse("cos(k3)"));
  CHECK(verify_reduced(t, {}).max_residual() < 1e-9);
  CHECK(verify_physical(t, {}).max_residual() < 1e-8);
}

TEST_CASE("contact surfaces are unchanged by scaling") {
  const FlowMap m = fig1();
  const FlowMap t = bogoyavlenskij(m, parse("1 + k3"));
  for (double c : {0.3, 1.0, 1.4}) {
    const double phi = 1 + c;
    for (int i = 0; i < 50; ++i) {
      const double k1 = 0.02 * i, k2 = 0.1 * i;
      CHECK(testing::dist(t.position(KPoint(k1, k2, c)), m.position(KPoint(phi * k1, k2 / phi, c))) == 0.0);
    }
  }
}

TEST_CASE("current sheet without a jump carries no current") {
  for (const auto& s : current_sheet(cylinder(), sheet(1.0, 1.0))) CHECK(norm(s.J) == 0.0);
  for (const auto& J : current_sheet_oracle(cylinder(), sheet(1.0, 1.0))) CHECK(norm(J) == 0.0);
}

TEST_CASE("current sheet matches the jump oracle and is tangent") {
  const auto samples = current_sheet(cylinder(), sheet(1.0, 2.0));
  const auto oracle = current_sheet_oracle(cylinder(), sheet(1.0, 2.0));
  REQUIRE(samples.size() == 1024);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(max_abs(samples[i].J - oracle[i]) < 1e-12);
    CHECK(std::fabs(dot(samples[i].J, samples[i].n)) < 1e-12);
    CHECK(norm(samples[i].n) == doctest::Approx(1.0).epsilon(1e-15));
  }
  // On the cylinder n is radial: (0, sin k2, cos k2).
  const auto& s0 = samples.front();
  CHECK(testing::dist(s0.n, Vec3(0, std::sin(s0.k2), std::cos(s0.k2))) < 1e-14);
}

TEST_CASE("swapping the sides flips the current") {
  const auto forward = current_sheet(cylinder(), sheet(1.0, 2.0));
  const auto backward = current_sheet(cylinder(), sheet(2.0, 1.0));
  for (std::size_t i = 0; i < forward.size(); ++i) CHECK(norm(forward[i].J + backward[i].J) < 1e-15);
}

TEST_CASE("current magnitude is linear in a small jump") {
  double prev = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double jmax = 0.0;
    for (const auto& s : current_sheet(cylinder(), sheet(1.0, 1.0 + eps))) jmax = std::fmax(jmax, norm(s.J));
    if (prev > 0.0 && eps < 1e-2) CHECK(prev / jmax == doctest::Approx(10.0).epsilon(2e-2));
    prev = jmax;
  }
}

TEST_CASE("current sheet placement is validated") {
  CurrentSheetSpec s = sheet(1.0, 2.0);
  s.c = 0.2;
  CHECK_THROWS_AS(current_sheet(cylinder(), s), ConstructionError);
  s = sheet(0.0, 2.0);
  CHECK_THROWS_AS(current_sheet(cylinder(), s), ConstructionError);
  s = sheet(1.0, 2.0);
  s.k1 = {-1, 1};
  CHECK_THROWS_AS(current_sheet(cylinder(), s), DomainError);
}
