#include "toa/symbolic.hpp"

#include <cmath>
#include <stdexcept>

#include "toa/errors.hpp"

namespace toa {

void PhysParams::validate() const {
  auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(hbar) || !ok(c) || !ok(m0)) {
    throw ConfigError("physical constants hbar, c, m0 must be finite and positive");
  }
}

double Monomial::evaluate(const PhysParams& params) const {
  return std::pow(params.hbar, hbar) * std::pow(params.c, c) * std::pow(params.m0, m0);
}

std::string Monomial::to_string() const {
  std::string out;
  auto factor = [&](const char* name, int power) {
    if (power == 0) return;
    if (!out.empty()) out += "*";
    out += name;
    if (power != 1) out += "^" + std::to_string(power);
  };
  factor("hbar", hbar);
  factor("c", c);
  factor("m0", m0);
  return out;
}

void SymPoly::add(const QComplex& coeff, const Monomial& exps) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SymScalar SymPoly::as_monomial() const {
  if (!is_monomial()) throw std::logic_error("SymPoly is not a single monomial: " + to_string());
  const auto& [exps, coeff] = *terms_.begin();
  return {coeff, exps};
}

SymPoly SymPoly::conj() const {
  SymPoly out;
  for (const auto& [exps, coeff] : terms_) out.terms_.emplace(exps, coeff.conj());
  return out;
}

std::complex<double> SymPoly::evaluate(const PhysParams& params) const {
  std::complex<double> sum{};
  for (const auto& [exps, coeff] : terms_) sum += coeff.to_complex() * exps.evaluate(params);
  return sum;
}

std::string SymPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [exps, coeff] : terms_) {
    if (!out.empty()) out += " + ";
    const std::string sym = exps.to_string();
    if (sym.empty()) {
      out += coeff.to_string();
    } else if (coeff == QComplex(1)) {
      out += sym;
    } else {
      out += coeff.to_string() + "*" + sym;
    }
  }
  return out;
}

SymPoly& SymPoly::operator+=(const SymPoly& o) {
  for (const auto& [exps, coeff] : o.terms_) add(coeff, exps);
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
  for (const auto& [exps, coeff] : o.terms_) add(-coeff, exps);
  return *this;
}

SymPoly& SymPoly::operator*=(const SymPoly& o) {
  SymPoly out;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) out.add(ca * cb, ea * eb);
  }
  terms_ = std::move(out.terms_);
  return *this;
}

SymMatrix2 to_symbolic(const ExactMatrix2& m) {
  return SymMatrix2(SymPoly(m(0, 0)), SymPoly(m(0, 1)), SymPoly(m(1, 0)), SymPoly(m(1, 1)));
}

Matrix2d evaluate(const SymMatrix2& m, const PhysParams& params) {
  return Matrix2d(m(0, 0).evaluate(params), m(0, 1).evaluate(params), m(1, 0).evaluate(params),
                  m(1, 1).evaluate(params));
}

}  // namespace toa
