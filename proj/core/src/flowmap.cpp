#include "mhdflow/flowmap.hpp"

#include "mhdflow/error.hpp"
#include "mhdflow/function.hpp"

namespace mhdflow {

FlowMap::FlowMap(std::shared_ptr<const detail::FlowMapImpl> impl, KBox domain, std::string family,
                 double total_pressure)
    : impl_(std::move(impl)), domain_(domain), family_(std::move(family)), total_pressure_(total_pressure) {}

void FlowMap::require_inside(const KPoint& k) const {
  if (!domain_.contains(k)) throw DomainError("point " + to_string(k) + " outside the k-domain of '" + family_ + "'");
}

MapJet FlowMap::jet(const KPoint& k) const {
  require_inside(k);
  return impl_->jet(k);
}

Basis FlowMap::basis_at(const KPoint& k) const {
  const MapJet j = jet(k);
  return {j.d1[0], j.d1[1]};
}

PlasmaState FlowMap::fields_at(const KPoint& k) const { return plasma_from_basis(basis_at(k), total_pressure_); }

double FlowMap::jacobian_det(const KPoint& k) const { return jet(k).jacobian().det(); }

double FlowMap::alfven_discriminant(const KPoint& k) const {
  const Basis b = basis_at(k);
  return dot(b.a, b.b);
}

FlowMap FlowMap::with_domain(const KBox& box) const { return FlowMap(impl_, box, family_, total_pressure_); }

namespace {

class ExpressionMap final : public detail::FlowMapImpl {
 public:
  explicit ExpressionMap(const std::array<Expr, 3>& components) {
    for (std::size_t i = 0; i < 3; ++i) comps_[i] = SmoothFunction<3>(components[i], {"k1", "k2", "k3"});
  }

  MapJet jet(const KPoint& k) const override {
    MapJet out;
    for (std::size_t c = 0; c < 3; ++c) {
      const Jet<3> j = comps_[c].jet(k.k);
      out.x[c] = j.value;
      for (std::size_t i = 0; i < 3; ++i) {
        out.d1[i][c] = j.d1[i];
        for (std::size_t l = 0; l < 3; ++l) out.d2[i][l][c] = j.d2[i][l];
      }
    }
    return out;
  }

 private:
  std::array<SmoothFunction<3>, 3> comps_;
};

}  // namespace

FlowMap from_expressions(const std::array<Expr, 3>& components, const KBox& domain, double total_pressure,
                         std::string family) {
  return FlowMap(std::make_shared<ExpressionMap>(components), domain, std::move(family), total_pressure);
}

FlowMap identity_map(const KBox& domain, double total_pressure) {
  return from_expressions({Expr::variable("k1"), Expr::variable("k2"), Expr::variable("k3")}, domain, total_pressure,
                          "identity");
}

}  // namespace mhdflow
