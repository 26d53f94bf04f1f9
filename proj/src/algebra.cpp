#include "homog/algebra.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <tuple>

#include "homog/bch_table.hpp"

namespace homog
{

std::string ValidationReport::summary() const
{
  std::ostringstream os;
  for (const auto & v : violations) {
    os << v.axiom;
    if (!v.indices.empty()) {
      os << " at (";
      for (std::size_t n = 0; n < v.indices.size(); ++n) {
        os << (n ? "," : "") << v.indices[n];
      }
      os << ")";
    }
    if (!v.message.empty()) {
      os << ": " << v.message;
    }
    os << "\n";
  }
  return os.str();
}

namespace
{

struct Completed
{
  std::vector<int> offsets;
  std::vector<int> layer_of;
  int dim = 0;
  // dense c[i][j][k], antisymmetric by construction
  std::vector<double> c;
  double at(int i, int j, int k) const { return c[(i * dim + j) * dim + k]; }
};

// Layer bookkeeping and antisymmetric completion. Appends violations for
// malformed input; the returned tables are only meaningful when none were added.
Completed complete(const AlgebraSpec & spec, ValidationReport & report)
{
  Completed out;
  bool layers_ok = !spec.layers.empty();
  for (int n : spec.layers) {
    layers_ok = layers_ok && n > 0;
  }
  if (!layers_ok) {
    report.violations.push_back({"layers", {}, 0.0, "layer dimensions must be a non-empty list of positive integers"});
    return out;
  }
  if (static_cast<int>(spec.layers.size()) > GradedAlgebra::kMaxStep) {
    report.violations.push_back({"step", {}, 0.0, "step " + std::to_string(spec.layers.size()) + " exceeds the supported maximum of 6"});
  }
  int offset = 0;
  for (std::size_t s = 0; s < spec.layers.size(); ++s) {
    out.offsets.push_back(offset);
    for (int n = 0; n < spec.layers[s]; ++n) {
      out.layer_of.push_back(static_cast<int>(s) + 1);
    }
    offset += spec.layers[s];
  }
  out.offsets.push_back(offset);
  out.dim = offset;
  const int q = out.dim;
  out.c.assign(static_cast<std::size_t>(q) * q * q, 0.0);

  // Collect the supplied ordered triples, detecting duplicates with different values.
  std::map<std::tuple<int, int, int>, double> given;
  for (const auto & e : spec.brackets) {
    if (e.i < 1 || e.i > q || e.j < 1 || e.j > q || e.k < 1 || e.k > q) {
      report.violations.push_back({"index", {e.i, e.j, e.k}, 0.0, "basis index outside 1.." + std::to_string(q)});
      continue;
    }
    const auto key = std::make_tuple(e.i - 1, e.j - 1, e.k - 1);
    auto [it, inserted] = given.emplace(key, e.c);
    if (!inserted && std::abs(it->second - e.c) > GradedAlgebra::kValidationTol) {
      report.violations.push_back({"antisymmetry", {e.i, e.j, e.k}, std::abs(it->second - e.c), "conflicting duplicate entries"});
    }
  }
  for (const auto & [key, value] : given) {
    const auto [i, j, k] = key;
    if (i == j) {
      if (std::abs(value) > GradedAlgebra::kValidationTol) {
        report.violations.push_back({"antisymmetry", {i + 1, j + 1, k + 1}, std::abs(value), "[e_i, e_i] must vanish"});
      }
      continue;
    }
    const auto mirror = given.find(std::make_tuple(j, i, k));
    if (mirror != given.end()) {
      const double residual = std::abs(value + mirror->second);
      if (residual > GradedAlgebra::kValidationTol) {
        if (i < j) {
          report.violations.push_back({"antisymmetry", {i + 1, j + 1, k + 1}, residual, "c_ij^k != -c_ji^k"});
        }
        continue;
      }
    }
    out.c[(i * q + j) * q + k] = value;
    out.c[(j * q + i) * q + k] = -value;
  }
  return out;
}

} // namespace

ValidationReport validate_spec(const AlgebraSpec & spec)
{
  ValidationReport report;
  const Completed tab = complete(spec, report);
  if (!report.ok()) {
    return report;
  }
  const int q = tab.dim;
  const int step = static_cast<int>(spec.layers.size());

  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      for (int k = 0; k < q; ++k) {
        const double c = tab.at(i, j, k);
        if (c == 0.0) {
          continue;
        }
        const int target = tab.layer_of[i] + tab.layer_of[j];
        if (target > step || tab.layer_of[k] != target) {
          report.violations.push_back({"grading", {i + 1, j + 1, k + 1}, std::abs(c),
                                       "[V_a, V_b] must land in V_{a+b}"});
        }
      }
    }
  }

  // Jacobi on basis triples: [e_i,[e_j,e_l]] + [e_j,[e_l,e_i]] + [e_l,[e_i,e_j]] = 0.
  auto br = [&](const Eigen::VectorXd & x, const Eigen::VectorXd & y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(q);
    for (int a = 0; a < q; ++a) {
      if (x[a] == 0.0) continue;
      for (int b = 0; b < q; ++b) {
        if (y[b] == 0.0) continue;
        for (int k = 0; k < q; ++k) {
          out[k] += tab.at(a, b, k) * x[a] * y[b];
        }
      }
    }
    return out;
  };
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      for (int l = j + 1; l < q; ++l) {
        const Eigen::VectorXd ei = Eigen::VectorXd::Unit(q, i);
        const Eigen::VectorXd ej = Eigen::VectorXd::Unit(q, j);
        const Eigen::VectorXd el = Eigen::VectorXd::Unit(q, l);
        const Eigen::VectorXd jac = br(ei, br(ej, el)) + br(ej, br(el, ei)) + br(el, br(ei, ej));
        const double r = jac.cwiseAbs().maxCoeff();
        if (r > GradedAlgebra::kValidationTol) {
          report.violations.push_back({"jacobi", {i + 1, j + 1, l + 1}, r, "Jacobi identity fails"});
        }
      }
    }
  }
  return report;
}

GradedAlgebra GradedAlgebra::from_spec(const AlgebraSpec & spec)
{
  const ValidationReport report = validate_spec(spec);
  if (!report.ok()) {
    throw std::invalid_argument("invalid graded algebra spec:\n" + report.summary());
  }
  ValidationReport scratch;
  const Completed tab = complete(spec, scratch);

  auto data = std::make_shared<Data>();
  data->spec = spec;
  data->layers = spec.layers;
  data->offsets = tab.offsets;
  data->layer_of = tab.layer_of;
  data->dim = tab.dim;
  const int q = tab.dim;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      for (int k = 0; k < q; ++k) {
        if (tab.at(i, j, k) != 0.0) {
          data->constants.push_back({i, j, k, tab.at(i, j, k)});
        }
      }
    }
  }

  // Suffix trie of the BCH words, truncated at the step: a bracket of n
  // letters lands in layers >= n and vanishes beyond the step.
  const int step = static_cast<int>(spec.layers.size());
  std::map<std::string, int> index;
  for (const auto & entry : detail::kBchWords) {
    const std::string_view word(entry.word);
    if (static_cast<int>(word.size()) > step) {
      continue;
    }
    int parent = -1;
    for (std::size_t len = 1; len <= word.size(); ++len) {
      const std::string suffix(word.substr(word.size() - len));
      auto it = index.find(suffix);
      if (it == index.end()) {
        data->bch_nodes.push_back({parent, suffix.front() == 'y', 0.0});
        it = index.emplace(suffix, static_cast<int>(data->bch_nodes.size()) - 1).first;
      }
      parent = it->second;
    }
    data->bch_nodes[parent].coeff = static_cast<double>(entry.num) / static_cast<double>(entry.den);
  }
  return GradedAlgebra(std::move(data));
}

int GradedAlgebra::homogeneous_dim() const
{
  int Q = 0;
  for (int s = 1; s <= step(); ++s) {
    Q += s * layer_size(s);
  }
  return Q;
}

namespace
{
void check_dim(const GradedAlgebra & g, const Eigen::VectorXd & x)
{
  if (x.size() != g.dim()) {
    throw std::invalid_argument("vector of length " + std::to_string(x.size()) + " in a group of dimension " +
                                std::to_string(g.dim()));
  }
}
} // namespace

Eigen::VectorXd bracket(const GradedAlgebra & g, const Eigen::VectorXd & x, const Eigen::VectorXd & y)
{
  check_dim(g, x);
  check_dim(g, y);
  return g.bracket(x, y);
}

Point bch_multiply(const GradedAlgebra & g, const Point & v, const Point & w)
{
  check_dim(g, v);
  check_dim(g, w);
  return g.multiply(v, w);
}

Point inverse(const GradedAlgebra & g, const Point & x)
{
  check_dim(g, x);
  return g.inverse(x);
}

Point dilate(const GradedAlgebra & g, double t, const Point & x)
{
  check_dim(g, x);
  if (!(t > 0.0)) {
    throw std::domain_error("dilation factor must be positive");
  }
  return g.dilate(t, x);
}

Point layer_project(const GradedAlgebra & g, int j, const Point & x)
{
  check_dim(g, x);
  if (j < 1 || j > g.step()) {
    throw std::out_of_range("layer index " + std::to_string(j) + " outside 1.." + std::to_string(g.step()));
  }
  return g.layer_project(j, x);
}

TangentVector left_invariant_field(const GradedAlgebra & g, int j, const Point & base)
{
  check_dim(g, base);
  if (j < 1 || j > g.dim()) {
    throw std::out_of_range("basis index " + std::to_string(j) + " outside 1.." + std::to_string(g.dim()));
  }
  const VectorX<Dual> x = base.cast<Dual>();
  VectorX<Dual> e = VectorX<Dual>::Zero(g.dim());
  e[j - 1] = Dual(0.0, 1.0);
  const VectorX<Dual> z = g.multiply(x, e);
  Eigen::VectorXd comps(g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    comps[k] = z[k].d;
  }
  return {base, comps};
}

Point basis_vector(const GradedAlgebra & g, int j)
{
  if (j < 1 || j > g.dim()) {
    throw std::out_of_range("basis index out of range");
  }
  return Point::Unit(g.dim(), j - 1);
}

} // namespace homog
