#include "hgbc/quadrature.hpp"

#include <stdexcept>

namespace hgbc {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({a, a, b});
  rule.points.push_back({a, b, a});
  rule.points.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.push_back({a, b, c});
  rule.points.push_back({a, c, b});
  rule.points.push_back({b, a, c});
  rule.points.push_back({b, c, a});
  rule.points.push_back({c, a, b});
  rule.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

std::vector<QuadratureRule> make_rules() {
  std::vector<QuadratureRule> rules;

  QuadratureRule centroid{"centroid-1", 1, {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}, {1.0}};
  rules.push_back(centroid);

  QuadratureRule strang2{"strang-fix-3", 2, {}, {}};
  add_orbit3(strang2, 1.0 / 6.0, 1.0 / 3.0);
  rules.push_back(strang2);

  // Dunavant (1985) rules.
  QuadratureRule dunavant4{"dunavant-6", 4, {}, {}};
  add_orbit3(dunavant4, 0.445948490915965, 0.223381589678011);
  add_orbit3(dunavant4, 0.091576213509771, 0.109951743655322);
  rules.push_back(dunavant4);

  QuadratureRule dunavant6{"dunavant-12", 6, {}, {}};
  add_orbit3(dunavant6, 0.249286745170910, 0.116786275726379);
  add_orbit3(dunavant6, 0.063089014491502, 0.050844906370207);
  add_orbit6(dunavant6, 0.053145049844817, 0.310352451033784, 0.082851075618374);
  rules.push_back(dunavant6);
  return rules;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  static const std::vector<QuadratureRule> rules = make_rules();
  for (const auto& rule : rules) {
    if (rule.degree >= degree) return rule;
  }
  throw std::invalid_argument("no built-in quadrature rule of degree " + std::to_string(degree));
}

}  // namespace hgbc
