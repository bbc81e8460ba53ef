#include "toa/exact.hpp"

#include <cctype>
#include <stdexcept>

namespace toa {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) fail();

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) fail();
    mpz_class d{std::string(den)};
    if (d == 0) fail();
    value = Rational(mpz_class{std::string(num)}, d);
    value.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_part = s.substr(e + 1);
      bool exp_neg = false;
      if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
        exp_neg = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      if (!all_digits(exp_part) || exp_part.size() > 6) fail();
      exponent = std::stol(std::string(exp_part));
      if (exp_neg) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      auto whole = s.substr(0, dot);
      auto frac = s.substr(dot + 1);
      if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
          (whole.empty() && frac.empty())) {
        fail();
      }
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!all_digits(s)) fail();
      digits = std::string(s);
    }
    value = Rational(mpz_class(digits)) * pow10(exponent);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(); }

QComplex& QComplex::operator+=(const QComplex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

QComplex& QComplex::operator-=(const QComplex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

QComplex& QComplex::operator*=(const QComplex& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

QComplex& QComplex::operator/=(const QComplex& o) {
  Rational den = o.norm_squared();
  if (sgn(den) == 0) throw std::domain_error("QComplex: division by zero");
  Rational re = (re_ * o.re_ + im_ * o.im_) / den;
  Rational im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string QComplex::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string im_part = (im_ == 1) ? "i" : (im_ == -1) ? "-i" : im_.get_str() + "*i";
  if (sgn(re_) == 0) return im_part;
  std::string out = "(" + re_.get_str();
  if (sgn(im_) > 0) out += "+";
  return out + im_part + ")";
}

}  // namespace toa
