#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mhdflow/areamap.hpp"
#include "mhdflow/domain.hpp"
#include "mhdflow/expr.hpp"
#include "mhdflow/flowmap.hpp"

namespace mhdflow {

// Constant-total-pressure solutions x = sigma(k1, k3) + tau(k2, k3). The k1
// part and the k2 part never mix, so d2x/dk1dk2 is exactly zero and the
// momentum equations hold with grad P = 0.

/// x = (k1 + tau1(k2, k3), tau2, tau3).
FlowMap build_s1(const Expr& tau1, const AreaMap& am, double total_pressure, const KBox& domain);

/// x = (k1 + F(tau3), beta(k1) + tau2, tau3).
FlowMap build_s2(const Expr& beta, const Expr& F, const AreaMap& am, double total_pressure, const KBox& domain);

/// x = (k1, beta(k1) + tau2, gamma(k1) + tau3).
FlowMap build_s3(const Expr& beta, const Expr& gamma, const AreaMap& am, double total_pressure, const KBox& domain);

/// x = sigma(k1, k3) + tau(k2, k3). The determinant constraint is not
/// enforced here; verify_reduced reports it.
FlowMap build_translational(const std::array<Expr, 3>& sigma, const std::array<Expr, 3>& tau,
                            double total_pressure, const KBox& domain);

enum class Family { s1, s2, s3, general };

std::string_view name_of(Family f);

struct ShearSpec {
  ShearAxis axis = ShearAxis::tau2;
  std::string g;
};

/// Declarative area-map description (expressions kept as text).
struct AreaMapSpec {
  AreaMapMode mode = AreaMapMode::circular;
  std::string t2, t3;   ///< pair mode
  std::string phi;      ///< potential mode
  std::optional<std::array<double, 2>> bracket;
  std::vector<ShearSpec> shear;
};

/// Family selection plus the functions it needs. Only the fields of the
/// chosen family are populated.
struct SceneSpec {
  Family family = Family::s1;
  std::string tau1;                   ///< s1
  std::string beta;                   ///< s2, s3
  std::string F;                      ///< s2
  std::string gamma;                  ///< s3
  std::array<std::string, 3> sigma;   ///< general, over (k1, k3)
  std::array<std::string, 3> tau;     ///< general, over (k2, k3)
  std::optional<AreaMapSpec> areamap; ///< s1, s2, s3
  double total_pressure = 0.0;
  KBox domain{};
};

/// Throws ConstructionError when fields do not match the family tag.
void validate(const SceneSpec& spec);

AreaMap build_areamap(const AreaMapSpec& spec, const PlaneBox& domain);

FlowMap build(const SceneSpec& spec);

}  // namespace mhdflow
