#include "homog/spec_io.hpp"

#include <fstream>
#include "json.hpp"
#include <sstream>

#include "homog/fixtures.hpp"

namespace homog
{

namespace
{

using nlohmann::json;

/// 1-based line and column of the byte offset `pos` (1-based, as reported by the parser).
std::pair<int, int> line_column(const std::string & text, std::size_t pos)
{
  int line = 1;
  int column = 1;
  const std::size_t end = std::min(pos > 0 ? pos - 1 : 0, text.size());
  for (std::size_t k = 0; k < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw std::invalid_argument("group file: " + what);
  }
}

std::vector<double> number_array(const json & j, const std::string & what)
{
  require(j.is_array(), what + " must be an array of numbers");
  std::vector<double> out;
  for (const json & x : j) {
    require(x.is_number(), what + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

} // namespace

GroupFile parse_group_file(const std::string & text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    const auto [line, column] = line_column(text, e.byte);
    throw SpecParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column), line,
                         column);
  }
  require(doc.is_object(), "top level must be an object");
  require(doc.contains("layers"), "missing \"layers\"");

  GroupFile out;
  for (double n : number_array(doc["layers"], "\"layers\"")) {
    require(n >= 1 && n == static_cast<int>(n), "\"layers\" entries must be positive integers");
    out.spec.layers.push_back(static_cast<int>(n));
  }
  if (doc.contains("brackets")) {
    require(doc["brackets"].is_array(), "\"brackets\" must be an array");
    for (const json & b : doc["brackets"]) {
      require(b.is_object() && b.contains("i") && b.contains("j") && b.contains("k") && b.contains("c"),
              "each bracket needs fields i, j, k, c");
      require(b["i"].is_number_integer() && b["j"].is_number_integer() && b["k"].is_number_integer() &&
                b["c"].is_number(),
              "bracket indices must be integers and c a number");
      out.spec.brackets.push_back({b["i"].get<int>(), b["j"].get<int>(), b["k"].get<int>(), b["c"].get<double>()});
    }
  }
  if (doc.contains("distance")) {
    const json & d = doc["distance"];
    require(d.is_object() && d.contains("kind") && d["kind"].is_string(), "\"distance\" needs a string \"kind\"");
    DistanceEntry e;
    e.kind = d["kind"].get<std::string>();
    if (d.contains("weights")) {
      e.weights = number_array(d["weights"], "\"distance.weights\"");
    }
    if (d.contains("exponent")) {
      require(d["exponent"].is_number(), "\"distance.exponent\" must be a number");
      e.exponent = d["exponent"].get<double>();
    }
    out.distance = e;
  }
  if (doc.contains("subgroups")) {
    require(doc["subgroups"].is_object(), "\"subgroups\" must map names to vector lists");
    for (const auto & [name, vectors] : doc["subgroups"].items()) {
      require(vectors.is_array(), "subgroup \"" + name + "\" must be a list of vectors");
      std::vector<Point> list;
      for (const json & v : vectors) {
        const std::vector<double> xs = number_array(v, "subgroup \"" + name + "\" vectors");
        list.push_back(Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())));
      }
      out.subgroups[name] = list;
    }
  }
  return out;
}

GroupFile load_group(const std::string & name_or_path)
{
  for (const std::string & f : fixture_names()) {
    if (f == name_or_path) {
      GroupFile out;
      out.source = f;
      out.spec = fixture_spec(f);
      return out;
    }
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw std::invalid_argument("'" + name_or_path + "' is neither a fixture name nor a readable group file");
  }
  std::ostringstream text;
  text << in.rdbuf();
  GroupFile out = parse_group_file(text.str());
  out.source = name_or_path;
  return out;
}

} // namespace homog
