#ifndef HOMOG_FIXTURES_HPP
#define HOMOG_FIXTURES_HPP

#include <string>
#include <vector>

#include "homog/algebra.hpp"

namespace homog
{

/// First Heisenberg group, layers [2,1], [e1,e2] = e3.
AlgebraSpec heisenberg1_spec();
/// Second Heisenberg group, layers [4,1], [e1,e3] = [e2,e4] = e5.
AlgebraSpec heisenberg2_spec();
/// Engel group, layers [2,1,1], [e1,e2] = e3, [e1,e3] = e4.
AlgebraSpec engel_spec();

GradedAlgebra heisenberg1();
GradedAlgebra heisenberg2();
GradedAlgebra engel();

/// Looks up a built-in group by name; throws std::invalid_argument otherwise.
AlgebraSpec fixture_spec(const std::string & name);
std::vector<std::string> fixture_names();

/// True for the two Heisenberg fixtures (the only groups with Cygan-Koranyi).
bool is_heisenberg(const GradedAlgebra & g);

} // namespace homog

#endif
