#include "ncmech/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncmech {

namespace {

void check_exponent(unsigned e) {
  if (e > Polynomial::max_degree) {
    throw DegreeOverflow("exponent " + std::to_string(e) + " exceeds the per-variable cap of " +
                         std::to_string(Polynomial::max_degree));
  }
}

}  // namespace

Polynomial::Polynomial(std::size_t nvars, ScalarMode mode) : nvars_(nvars), mode_(mode) {}

Polynomial Polynomial::constant(std::size_t nvars, const Scalar& c) {
  Polynomial p(nvars, c.mode());
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index, ScalarMode mode) {
  if (index >= nvars) {
    throw RangeError("variable index " + std::to_string(index) + " out of range for " + std::to_string(nvars) +
                     " variables");
  }
  Exponents e(nvars, 0);
  e[index] = 1;
  return monomial(nvars, Scalar::one(mode), e);
}

Polynomial Polynomial::monomial(std::size_t nvars, const Scalar& c, const Exponents& exps) {
  Polynomial p(nvars, c.mode());
  p.add_term(exps, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0));
}

unsigned Polynomial::total_degree() const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) {
    unsigned d = 0;
    for (auto k : e) d += k;
    best = std::max(best, d);
  }
  return best;
}

unsigned Polynomial::degree_in(std::size_t var) const {
  if (var >= nvars_) throw RangeError("degree_in: variable index out of range");
  unsigned best = 0;
  for (const auto& [e, c] : terms_) best = std::max<unsigned>(best, e[var]);
  return best;
}

Scalar Polynomial::coefficient(const Exponents& exps) const {
  if (exps.size() != nvars_) throw DimensionError("coefficient: exponent tuple has wrong length");
  auto it = terms_.find(exps);
  return it == terms_.end() ? Scalar::zero(mode_) : it->second;
}

void Polynomial::add_term(const Exponents& exps, const Scalar& c) {
  if (exps.size() != nvars_) {
    throw DimensionError("add_term: exponent tuple of length " + std::to_string(exps.size()) + " for " +
                         std::to_string(nvars_) + " variables");
  }
  require_same_mode(mode_, c.mode(), "Polynomial term");
  for (auto e : exps) check_exponent(e);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::check_compatible(const Polynomial& o, const char* op) const {
  if (nvars_ != o.nvars_) {
    throw DimensionError(std::string("Polynomial ") + op + ": " + std::to_string(nvars_) + " vs " +
                         std::to_string(o.nvars_) + " variables");
  }
  require_same_mode(mode_, o.mode_, std::string("Polynomial ") + op);
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o, "addition");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o, "subtraction");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Scalar& c) {
  require_same_mode(mode_, c.mode(), "Polynomial scaling");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b, "multiplication");
  Polynomial r(a.nvars_, a.mode_);
  Polynomial::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) {
        const unsigned s = unsigned(ea[i]) + eb[i];
        check_exponent(s);
        e[i] = static_cast<std::uint8_t>(s);
      }
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b, "comparison");
  return a.terms_ == b.terms_;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(nvars_, Scalar::one(mode_));
  Polynomial base = *this;
  while (k) {
    if (k & 1u) r = r * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return r;
}

Polynomial Polynomial::diff(std::size_t var) const {
  if (var >= nvars_) {
    throw RangeError("diff: variable index " + std::to_string(var) + " out of range for " + std::to_string(nvars_) +
                     " variables");
  }
  Polynomial r(nvars_, mode_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    --d[var];
    r.add_term(d, c * Scalar::from_int(e[var], mode_));
  }
  return r;
}

Polynomial Polynomial::integrate(std::size_t var) const {
  if (var >= nvars_) throw RangeError("integrate: variable index out of range");
  Polynomial r(nvars_, mode_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    check_exponent(unsigned(d[var]) + 1);
    ++d[var];
    r.add_term(d, c / Scalar::from_int(d[var], mode_));
  }
  return r;
}

Scalar Polynomial::eval(std::span<const Scalar> point) const {
  if (point.size() != nvars_) {
    throw DimensionError("eval: point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                         std::to_string(nvars_) + " variables");
  }
  for (const auto& x : point) require_same_mode(mode_, x.mode(), "Polynomial evaluation");
  Scalar sum = Scalar::zero(mode_);
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

double Polynomial::eval(std::span<const double> point) const {
  if (mode_ != ScalarMode::floating) {
    throw ModeError("eval(double): polynomial is exact; convert it with converted(ScalarMode::floating)");
  }
  return FloatEvaluator(*this)(point);
}

Polynomial Polynomial::converted(ScalarMode mode) const {
  Polynomial r(nvars_, mode);
  for (const auto& [e, c] : terms_) r.add_term(e, c.converted(mode));
  return r;
}

Polynomial Polynomial::embedded(std::size_t new_nvars, std::size_t offset) const {
  if (offset + nvars_ > new_nvars) throw DimensionError("embedded: target has too few variables");
  Polynomial r(new_nvars, mode_);
  for (const auto& [e, c] : terms_) {
    Exponents d(new_nvars, 0);
    std::copy(e.begin(), e.end(), d.begin() + static_cast<std::ptrdiff_t>(offset));
    r.terms_.emplace(std::move(d), c);
  }
  return r;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c.to_double()));
  return m;
}

Polynomial Polynomial::chopped(double tol) const {
  if (mode_ == ScalarMode::exact) return *this;
  Polynomial r(nvars_, mode_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c.to_double()) > tol) r.terms_.emplace(e, c);
  }
  return r;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  // Highest exponent tuples first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string coeff = c.to_string();
    bool negative = !coeff.empty() && coeff[0] == '-';
    if (negative) coeff.erase(0, 1);
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i < names.size() ? names[i] : "x" + std::to_string(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += coeff;
    } else if (coeff == "1") {
      out += mono;
    } else {
      out += coeff + "*" + mono;
    }
  }
  return out;
}

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> args) {
  if (args.empty()) {
    if (p.nvars() != 0) throw DimensionError("substitute: no arguments supplied");
    return p;
  }
  const Polynomial one = Polynomial::constant(args.front().nvars(), Scalar::one(p.mode()));
  return substitute<Polynomial>(p, args, one);
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) g.push_back(p.diff(i));
  return g;
}

FloatEvaluator::FloatEvaluator(const Polynomial& p) : nvars_(p.nvars()) {
  coeffs_.reserve(p.size());
  exps_.reserve(p.size() * nvars_);
  for (const auto& [e, c] : p.terms()) {
    coeffs_.push_back(c.to_double());
    exps_.insert(exps_.end(), e.begin(), e.end());
  }
}

double FloatEvaluator::operator()(std::span<const double> point) const {
  if (point.size() != nvars_) throw DimensionError("FloatEvaluator: wrong point dimension");
  double sum = 0.0;
  const std::uint8_t* e = exps_.data();
  for (double c : coeffs_) {
    double t = c;
    for (std::size_t i = 0; i < nvars_; ++i, ++e) {
      for (unsigned k = 0; k < *e; ++k) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

}  // namespace ncmech
