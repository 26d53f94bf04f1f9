#ifndef HOMOG_SPEC_IO_HPP
#define HOMOG_SPEC_IO_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "homog/algebra.hpp"

namespace homog
{

/// JSON syntax error with a 1-based position in the input text.
class SpecParseError : public std::runtime_error
{
public:
  SpecParseError(const std::string & what, int line, int column)
    : std::runtime_error(what), m_line(line), m_column(column)
  {
  }
  int line() const { return m_line; }
  int column() const { return m_column; }

private:
  int m_line;
  int m_column;
};

struct DistanceEntry
{
  std::string kind = "d_inf";
  std::vector<double> weights;
  double exponent = 2.0;
};

/// Contents of a group file:
///   {"layers": [2,1], "brackets": [{"i":1,"j":2,"k":3,"c":1}],
///    "distance": {"kind": "d_inf", "weights": [1,1]},
///    "subgroups": {"name": [[1,0,0], [0,0,1]]}}
/// Only "layers" is required.
struct GroupFile
{
  std::string source; ///< fixture name or file path
  AlgebraSpec spec;
  std::optional<DistanceEntry> distance;
  std::map<std::string, std::vector<Point>> subgroups;
};

/// Throws SpecParseError on malformed JSON and std::invalid_argument when
/// fields have the wrong shape.
GroupFile parse_group_file(const std::string & text);

/// A fixture name (heisenberg1, heisenberg2, engel) or a path to a group file.
/// Throws std::invalid_argument when neither resolves.
GroupFile load_group(const std::string & name_or_path);

} // namespace homog

#endif
