#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toral/int_matrix.hpp"

namespace toral {

/// Integer polynomial with coefficients stored in ascending degree.
/// The zero polynomial has degree -1 and no stored coefficients.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> ascending);
    IntPoly(std::initializer_list<long> ascending);

    static IntPoly monomial(int degree, const BigInt& coeff = 1);
    static IntPoly x() { return monomial(1); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    const BigInt& leading() const;
    BigInt coeff(int i) const;
    const std::vector<BigInt>& coeffs() const noexcept { return c_; }

    BigInt evaluate(const BigInt& x) const;
    Rational evaluate(const Rational& x) const;
    IntMatrix evaluate(const IntMatrix& a) const;

    IntPoly derivative() const;
    BigInt content() const;
    IntPoly primitive_part() const;
    /// x^deg * p(1/x).
    IntPoly reversed() const;
    /// p(x^m).
    IntPoly compose_power(int m) const;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const BigInt& s, const IntPoly& a);
    friend IntPoly operator-(const IntPoly& a);
    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    /// Human-readable form, highest degree first, e.g. "x^2 - 3x + 1".
    std::string to_string() const;

private:
    void trim();
    std::vector<BigInt> c_;
};

/// Polynomial with rational coefficients (ascending); used for gcds and Sturm chains.
using RatPoly = std::vector<Rational>;

RatPoly to_rational(const IntPoly& p);
int degree(const RatPoly& p);
void trim(RatPoly& p);
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly gcd(RatPoly a, RatPoly b);  // monic result (zero if both zero)
/// Scale a rational polynomial to a primitive integer polynomial with positive leading coefficient.
IntPoly to_primitive_int(const RatPoly& p);

/// Quotient a / b when b divides a exactly over Z; std::nullopt otherwise.
std::optional<IntPoly> exact_divide(const IntPoly& a, const IntPoly& b);
/// Quotient and remainder by a monic divisor (exact over Z).
std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& monic_divisor);
/// Monic gcd over Q of two monic integer polynomials (integral by Gauss' lemma).
IntPoly monic_gcd(const IntPoly& a, const IntPoly& b);

/// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier recursion (exact divisions).
IntPoly char_poly(const IntMatrix& a);
/// Companion matrix whose characteristic polynomial is the monic p.
IntMatrix companion(const IntPoly& monic);

/// Cyclotomic polynomial Phi_m.
IntPoly cyclotomic(unsigned m);
unsigned euler_phi(unsigned m);
/// True iff no cyclotomic polynomial divides p.
bool cyclotomic_free(const IntPoly& p);

/// Palindromic coefficient sequence.
bool is_reciprocal(const IntPoly& p);
/// Smallest m > 1 with p(x) = q(x^m), i.e. the gcd of the exponents carrying nonzero coefficients.
std::optional<int> is_poly_in_xm(const IntPoly& p);

}  // namespace toral
