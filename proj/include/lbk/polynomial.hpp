#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lbk/rational.hpp"

namespace lbk {

// Monomial: (variable id, exponent) pairs, sorted by id, exponents > 0.
using Monomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Sparse multivariate polynomial over the rationals. Variable ids are
// assigned by the caller; printing takes a naming function so the ring stays
// independent of what the variables index.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Rat constant);
  static Poly variable(std::uint32_t var);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rat>& terms() const { return terms_; }

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Rat& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator*(const Poly& rhs) const;
  friend Poly operator*(const Rat& c, Poly p) { return p *= c; }
  bool operator==(const Poly&) const = default;

  void add_term(Monomial m, const Rat& c);

  // Substitutes a rational for every variable.
  Rat eval(const std::function<Rat(std::uint32_t)>& assign) const;

  // Deterministic: monomials in map order, variables by id.
  std::string str(const std::function<std::string(std::uint32_t)>& name) const;

 private:
  std::map<Monomial, Rat> terms_;
};

}  // namespace lbk
