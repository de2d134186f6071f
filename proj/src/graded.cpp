#include "ncmech/graded.hpp"

#include <string>

#include "ncmech/bracket.hpp"
#include "ncmech/error.hpp"

namespace ncmech {

GradedPolynomial::GradedPolynomial(std::size_t nvars, ScalarMode mode, unsigned max_order)
    : nvars_(nvars), mode_(mode), parts_(max_order + 1, Polynomial(nvars, mode)) {}

GradedPolynomial GradedPolynomial::homogeneous(const Polynomial& p, unsigned order, unsigned max_order) {
  GradedPolynomial g(p.nvars(), p.mode(), max_order);
  if (order <= max_order) g.parts_[order] = p;
  return g;
}

const Polynomial& GradedPolynomial::part(unsigned k) const {
  if (k >= parts_.size()) {
    throw RangeError("GradedPolynomial: grade " + std::to_string(k) + " above truncation order " +
                     std::to_string(max_order()));
  }
  return parts_[k];
}

void GradedPolynomial::add_to_part(unsigned k, const Polynomial& p) {
  if (k < parts_.size()) parts_[k] += p;
}

Polynomial GradedPolynomial::total() const {
  Polynomial sum(nvars_, mode_);
  for (const auto& p : parts_) sum += p;
  return sum;
}

bool GradedPolynomial::vanishes_through(unsigned order) const {
  for (unsigned k = 0; k <= order && k < parts_.size(); ++k) {
    if (!parts_[k].is_zero()) return false;
  }
  return true;
}

std::optional<unsigned> GradedPolynomial::lowest_order() const {
  for (unsigned k = 0; k < parts_.size(); ++k) {
    if (!parts_[k].is_zero()) return k;
  }
  return std::nullopt;
}

GradedPolynomial GradedPolynomial::truncated(unsigned max_order) const {
  GradedPolynomial g(nvars_, mode_, max_order);
  for (unsigned k = 0; k <= max_order && k < parts_.size(); ++k) g.parts_[k] = parts_[k];
  return g;
}

GradedPolynomial GradedPolynomial::diff(std::size_t var) const {
  GradedPolynomial g(nvars_, mode_, max_order());
  for (unsigned k = 0; k < parts_.size(); ++k) g.parts_[k] = parts_[k].diff(var);
  return g;
}

GradedPolynomial GradedPolynomial::operator-() const {
  GradedPolynomial g(*this);
  for (auto& p : g.parts_) p = -p;
  return g;
}

GradedPolynomial& GradedPolynomial::operator+=(const GradedPolynomial& o) {
  for (unsigned k = 0; k < parts_.size() && k < o.parts_.size(); ++k) parts_[k] += o.parts_[k];
  return *this;
}

GradedPolynomial& GradedPolynomial::operator-=(const GradedPolynomial& o) {
  for (unsigned k = 0; k < parts_.size() && k < o.parts_.size(); ++k) parts_[k] -= o.parts_[k];
  return *this;
}

GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b) {
  const unsigned top = std::min(a.max_order(), b.max_order());
  GradedPolynomial r(a.nvars_, a.mode_, top);
  for (unsigned i = 0; i <= top; ++i) {
    if (a.parts_[i].is_zero()) continue;
    for (unsigned j = 0; i + j <= top; ++j) {
      if (b.parts_[j].is_zero()) continue;
      r.parts_[i + j] += a.parts_[i] * b.parts_[j];
    }
  }
  return r;
}

GradedPolynomial operator*(GradedPolynomial a, const Scalar& c) {
  for (auto& p : a.parts_) p *= c;
  return a;
}

GradedPolynomial poisson_bracket_config(const GradedPolynomial& F, const GradedPolynomial& G, const ThetaMatrix& theta) {
  const unsigned top = std::min(F.max_order(), G.max_order());
  GradedPolynomial r(F.nvars(), F.mode(), top);
  for (unsigned i = 0; i + 1 <= top; ++i) {
    if (F.part(i).is_zero()) continue;
    for (unsigned j = 0; i + j + 1 <= top; ++j) {
      if (G.part(j).is_zero()) continue;
      r.add_to_part(i + j + 1, poisson_bracket_config(F.part(i), G.part(j), theta));
    }
  }
  return r;
}

GradedPolynomial substitute(const Polynomial& p, std::span<const GradedPolynomial> args) {
  if (args.empty()) throw DimensionError("substitute: no graded arguments");
  const auto& a0 = args.front();
  const GradedPolynomial one =
      GradedPolynomial::homogeneous(Polynomial::constant(a0.nvars(), Scalar::one(a0.mode())), 0, a0.max_order());
  return substitute<GradedPolynomial>(p, args, one);
}

GradedPolynomial substitute(const GradedPolynomial& p, std::span<const GradedPolynomial> args) {
  if (args.empty()) throw DimensionError("substitute: no graded arguments");
  const auto& a0 = args.front();
  GradedPolynomial r(a0.nvars(), a0.mode(), std::min(p.max_order(), a0.max_order()));
  for (unsigned k = 0; k <= r.max_order(); ++k) {
    if (p.part(k).is_zero()) continue;
    GradedPolynomial s = substitute(p.part(k), args);
    for (unsigned j = 0; j + k <= r.max_order(); ++j) r.add_to_part(j + k, s.part(j));
  }
  return r;
}

std::vector<GradedPolynomial> shifted_coordinates(std::size_t nvars, ScalarMode mode, unsigned max_order,
                                                  std::span<const GradedPolynomial> shift) {
  if (!shift.empty() && shift.size() != nvars) throw DimensionError("shifted_coordinates: shift has wrong length");
  std::vector<GradedPolynomial> out;
  out.reserve(nvars);
  for (std::size_t i = 0; i < nvars; ++i) {
    GradedPolynomial g = GradedPolynomial::homogeneous(Polynomial::variable(nvars, i, mode), 0, max_order);
    if (!shift.empty()) g += shift[i];
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace ncmech
