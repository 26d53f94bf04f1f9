#include "homog/fixtures.hpp"

#include <stdexcept>

namespace homog
{

AlgebraSpec heisenberg1_spec() { return {{2, 1}, {{1, 2, 3, 1.0}}}; }

AlgebraSpec heisenberg2_spec() { return {{4, 1}, {{1, 3, 5, 1.0}, {2, 4, 5, 1.0}}}; }

AlgebraSpec engel_spec() { return {{2, 1, 1}, {{1, 2, 3, 1.0}, {1, 3, 4, 1.0}}}; }

GradedAlgebra heisenberg1()
{
  static const GradedAlgebra g = GradedAlgebra::from_spec(heisenberg1_spec());
  return g;
}

GradedAlgebra heisenberg2()
{
  static const GradedAlgebra g = GradedAlgebra::from_spec(heisenberg2_spec());
  return g;
}

GradedAlgebra engel()
{
  static const GradedAlgebra g = GradedAlgebra::from_spec(engel_spec());
  return g;
}

AlgebraSpec fixture_spec(const std::string & name)
{
  if (name == "heisenberg1") return heisenberg1_spec();
  if (name == "heisenberg2") return heisenberg2_spec();
  if (name == "engel") return engel_spec();
  throw std::invalid_argument("unknown group fixture '" + name + "'");
}

std::vector<std::string> fixture_names() { return {"heisenberg1", "heisenberg2", "engel"}; }

namespace
{
bool same_constants(const GradedAlgebra & g, const AlgebraSpec & spec)
{
  if (g.layer_dims() != spec.layers) {
    return false;
  }
  const GradedAlgebra h = GradedAlgebra::from_spec(spec);
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(g.dim(), i);
      const Eigen::VectorXd ej = Eigen::VectorXd::Unit(g.dim(), j);
      if ((g.bracket(ei, ej) - h.bracket(ei, ej)).cwiseAbs().maxCoeff() > 0.0) {
        return false;
      }
    }
  }
  return true;
}
} // namespace

bool is_heisenberg(const GradedAlgebra & g)
{
  return same_constants(g, heisenberg1_spec()) || same_constants(g, heisenberg2_spec());
}

} // namespace homog
