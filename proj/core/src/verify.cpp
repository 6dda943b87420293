#include "mhdflow/verify.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "mhdflow/error.hpp"

namespace mhdflow {

double ResidualReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::fmax(m, e.max_abs);
  return m;
}

const ResidualEntry& ResidualReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw Error("no residual entry named '" + name + "'");
}

namespace {

/// Accumulates per-equation max/mean over grid points.
class Accumulator {
 public:
  Accumulator(ResidualReport& report, std::vector<std::string> names, bool keep)
      : report_(report), keep_(keep) {
    for (auto& n : names) report_.entries.push_back({std::move(n), 0.0, 0.0, {}});
    sums_.assign(report_.entries.size(), 0.0);
    report_.min_p = std::numeric_limits<double>::infinity();
  }

  void add(const KPoint& k, const std::vector<double>& values) {
    if (report_.points == 0)
      for (auto& e : report_.entries) e.argmax = k;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double v = std::fabs(values[i]);
      auto& e = report_.entries[i];
      // NaN compares false; treat it as the worst value.
      if (!(v <= e.max_abs)) {
        e.max_abs = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
        e.argmax = k;
      }
      sums_[i] += v;
    }
    ++report_.points;
    if (keep_) report_.per_point.push_back({k, values});
  }

  void pressure(const KPoint& k, double p) {
    if (p < report_.min_p) {
      report_.min_p = p;
      report_.argmin_p = k;
    }
  }

  void finish() {
    for (std::size_t i = 0; i < sums_.size(); ++i)
      report_.entries[i].mean_abs = report_.points ? sums_[i] / static_cast<double>(report_.points) : 0.0;
    if (report_.points == 0) report_.min_p = 0.0;
    report_.pass = report_.points > 0;
    for (const auto& e : report_.entries) report_.pass = report_.pass && e.max_abs <= report_.tolerance;
  }

 private:
  ResidualReport& report_;
  bool keep_;
  std::vector<double> sums_;
};

ResidualReport start(const std::string& check, const FlowMap& m, const VerifyOptions& o) {
  ResidualReport r;
  r.check = check;
  r.box = m.domain();
  r.grid = o.grid;
  r.tolerance = o.tolerance;
  return r;
}

double hydro_pressure(const MapJet& j, double total_pressure) {
  return plasma_from_basis({j.d1[0], j.d1[1]}, total_pressure).p;
}

}  // namespace

ResidualReport verify_reduced(const FlowMap& m, const VerifyOptions& options) {
  ResidualReport report = start("reduced", m, options);
  Accumulator acc(report, {"momentum_k1", "momentum_k2", "momentum_k3", "jacobian_det"}, options.keep_points);
  // P is constant over the scene, so its k-gradient vanishes.
  const std::array<double, 3> gradP{0.0, 0.0, 0.0};
  for (const KPoint& k : grid_points(m.domain(), options.grid)) {
    const MapJet j = m.jet(k);
    const Vec3& x12 = j.d2[0][1];
    acc.add(k, {dot(j.d1[0], x12) + gradP[0], dot(j.d1[1], x12) + gradP[1], dot(j.d1[2], x12) + gradP[2],
                j.jacobian().det() - 1.0});
    acc.pressure(k, hydro_pressure(j, m.total_pressure()));
  }
  acc.finish();
  return report;
}

ResidualReport verify_physical(const FlowMap& m, const VerifyOptions& options) {
  ResidualReport report = start("physical", m, options);
  Accumulator acc(report, {"momentum", "induction", "div_v", "div_B"}, options.keep_points);
  const Vec3 gradP{0.0, 0.0, 0.0};
  for (const KPoint& k : grid_points(m.domain(), options.grid)) {
    const MapJet j = m.jet(k);
    const Mat3 J = j.jacobian();
    if (!(std::fabs(J.det()) > options.singular_det)) {
      report.skipped.push_back(k);
      continue;
    }
    const Mat3 Jinv = J.inverse();
    const PlasmaState s = plasma_from_basis({j.d1[0], j.d1[1]}, m.total_pressure());

    // Columns: d/dk_l of v and B; the x-gradient is (d/dk) J^-1.
    Mat3 dv_dk, dB_dk;
    for (std::size_t l = 0; l < 3; ++l) {
      dv_dk.col[l] = 0.5 * (j.d2[1][l] + j.d2[0][l]);
      dB_dk.col[l] = 0.5 * (j.d2[1][l] - j.d2[0][l]);
    }
    const Mat3 grad_v = dv_dk * Jinv;
    const Mat3 grad_B = dB_dk * Jinv;

    const Vec3 momentum = grad_v * s.v - grad_B * s.B + gradP;
    const Vec3 induction = grad_v * s.B - grad_B * s.v;
    acc.add(k, {norm(momentum), norm(induction), grad_v.trace(), grad_B.trace()});
    acc.pressure(k, s.p);
  }
  acc.finish();
  return report;
}

ResidualReport fd_crosscheck(const FlowMap& m, double h, const VerifyOptions& options) {
  if (!(h > 0.0)) throw Error("fd_crosscheck: step must be positive");
  ResidualReport report = start("fd_crosscheck", m, options);
  KBox box = m.domain().inset(2.0 * h);
  for (std::size_t a = 0; a < 3; ++a)
    if (box[a].lo > box[a].hi) box[a].lo = box[a].hi = m.domain()[a].mid();
  report.box = box;

  Accumulator acc(report, {"first_partials", "second_partials"}, options.keep_points);
  auto rel = [](double analytic, double fd) { return std::fabs(analytic - fd) / (1.0 + std::fabs(analytic)); };

  for (const KPoint& k : grid_points(box, options.grid)) {
    const MapJet j = m.jet(k);
    double first = 0.0, second = 0.0;
    for (std::size_t l = 0; l < 3; ++l) {
      KPoint kp = k, km = k;
      kp[l] += h;
      km[l] -= h;
      const MapJet jp = m.jet_unchecked(kp);
      const MapJet jm = m.jet_unchecked(km);
      for (std::size_t c = 0; c < 3; ++c) {
        first = std::fmax(first, rel(j.d1[l][c], (jp.x[c] - jm.x[c]) / (2.0 * h)));
        for (std::size_t i = 0; i < 3; ++i)
          second = std::fmax(second, rel(j.d2[i][l][c], (jp.d1[i][c] - jm.d1[i][c]) / (2.0 * h)));
      }
    }
    acc.add(k, {first, second});
    acc.pressure(k, hydro_pressure(j, m.total_pressure()));
  }
  acc.finish();
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::ordered_json point_json(const KPoint& k) { return nlohmann::ordered_json::array({k[0], k[1], k[2]}); }

}  // namespace

std::string to_json(const ResidualReport& r, int indent) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  j["grid"] = nlohmann::ordered_json::array({r.grid.n[0], r.grid.n[1], r.grid.n[2]});
  j["box"] = {{"k1", {r.box[0].lo, r.box[0].hi}}, {"k2", {r.box[1].lo, r.box[1].hi}}, {"k3", {r.box[2].lo, r.box[2].hi}}};
  j["points"] = r.points;
  auto& entries = j["residuals"] = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json je;
    je["name"] = e.name;
    je["max_abs"] = e.max_abs;
    je["mean_abs"] = e.mean_abs;
    je["argmax"] = point_json(e.argmax);
    entries.push_back(je);
  }
  j["min_p"] = r.min_p;
  j["argmin_p"] = point_json(r.argmin_p);
  auto& skipped = j["skipped"] = nlohmann::ordered_json::array();
  for (const auto& k : r.skipped) skipped.push_back(point_json(k));
  return j.dump(indent);
}

std::string to_text(const ResidualReport& r) {
  std::ostringstream os;
  os << r.check << " check on " << r.grid.str() << " grid (" << r.points << " points): " << (r.pass ? "PASS" : "FAIL")
     << " at tolerance " << std::scientific << std::setprecision(1) << r.tolerance << '\n';
  for (const auto& e : r.entries) {
    os << "  " << std::left << std::setw(16) << e.name << std::right << " max " << std::setprecision(3) << e.max_abs
       << "  mean " << e.mean_abs << "  at " << to_string(e.argmax) << '\n';
  }
  os << "  min p " << std::setprecision(6) << r.min_p << " at " << to_string(r.argmin_p) << '\n';
  if (!r.skipped.empty()) os << "  skipped " << r.skipped.size() << " near-singular points\n";
  return os.str();
}

std::string to_csv(const ResidualReport& r) {
  std::ostringstream os;
  os << "k1,k2,k3";
  for (const auto& e : r.entries) os << ',' << e.name;
  os << '\n' << std::setprecision(17);
  for (const auto& p : r.per_point) {
    os << p.k[0] << ',' << p.k[1] << ',' << p.k[2];
    for (double v : p.values) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace mhdflow
