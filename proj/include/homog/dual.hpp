#ifndef HOMOG_DUAL_HPP
#define HOMOG_DUAL_HPP

#include <Eigen/Core>
#include <cmath>

namespace homog
{

/// Forward-mode dual number a + b*eps with eps^2 = 0.
///
/// The group law, dilations and projections are polynomial in exponential
/// coordinates, so pushing a Dual through them yields exact directional
/// derivatives (no truncation error). This is how left-invariant fields and
/// projected vector fields are differentiated.
struct Dual
{
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}
  constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

  Dual & operator+=(const Dual & o) { v += o.v; d += o.d; return *this; }
  Dual & operator-=(const Dual & o) { v -= o.v; d -= o.d; return *this; }
  Dual & operator*=(const Dual & o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual & operator/=(const Dual & o)
  {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual & b) { return a += b; }
inline Dual operator-(Dual a, const Dual & b) { return a -= b; }
inline Dual operator*(Dual a, const Dual & b) { return a *= b; }
inline Dual operator/(Dual a, const Dual & b) { return a /= b; }
inline Dual operator-(const Dual & a) { return {-a.v, -a.d}; }
inline Dual operator+(const Dual & a) { return a; }

inline bool operator==(const Dual & a, const Dual & b) { return a.v == b.v && a.d == b.d; }
inline bool operator!=(const Dual & a, const Dual & b) { return !(a == b); }
inline bool operator<(const Dual & a, const Dual & b) { return a.v < b.v; }
inline bool operator>(const Dual & a, const Dual & b) { return a.v > b.v; }
inline bool operator<=(const Dual & a, const Dual & b) { return a.v <= b.v; }
inline bool operator>=(const Dual & a, const Dual & b) { return a.v >= b.v; }

inline Dual abs(const Dual & a) { return a.v < 0 ? -a : a; }
inline Dual sqrt(const Dual & a)
{
  const double s = std::sqrt(a.v);
  return {s, s > 0 ? a.d / (2 * s) : 0.0};
}

/// Value part, overloaded so templated code can extract doubles uniformly.
inline double value_of(double x) { return x; }
inline double value_of(const Dual & x) { return x.v; }

} // namespace homog

namespace Eigen
{
template <>
struct NumTraits<homog::Dual> : GenericNumTraits<homog::Dual>
{
  typedef homog::Dual Real;
  typedef homog::Dual NonInteger;
  typedef homog::Dual Nested;
  enum
  {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 3
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};
} // namespace Eigen

#endif
