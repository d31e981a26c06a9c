#pragma once

#include "toral/int_poly.hpp"

namespace toral {

/// Number of distinct real roots of q in the open interval (a, b), by Sturm
/// sequences. Endpoints that are roots are excluded.
int sturm_count(const RatPoly& q, const Rational& a, const Rational& b);

/// Real roots of p in (a, b) counted with multiplicity.
int count_real_roots(const IntPoly& p, const Rational& a, const Rational& b);

/// Monic gcd(p, x^deg p(1/x)): the divisor of p that holds all roots whose
/// inverse is also a root, in particular every root of modulus one.
/// Throws when p(1) = 0 or p(-1) = 0.
IntPoly reciprocal_part(const IntPoly& p);

/// The trace polynomial q of a palindromic r of even degree 2m, defined by
/// r(x) = x^m q(x + 1/x).
IntPoly trace_polynomial(const IntPoly& r);

/// Number of roots of modulus one, with multiplicity. Throws when p(1) = 0
/// or p(-1) = 0.
int count_unitary_roots(const IntPoly& p);

/// Number of roots strictly inside the unit disk of a polynomial with no
/// roots on the unit circle and no pair of roots whose product is one, via
/// the inertia of its Schur-Cohn form.
int schur_cohn_inside(const IntPoly& p);

/// Exact location of all roots relative to the unit circle, with multiplicity.
struct RootCensus {
    int inside = 0;
    int on = 0;
    int outside = 0;
    int plus_minus_one = 0;  // roots equal to 1 or -1 (included in `on`)
};

RootCensus root_census(const IntPoly& p);

/// (positive, zero) eigenvalue counts of a symmetric integer matrix, from
/// the sign pattern of its characteristic polynomial.
std::pair<int, int> symmetric_inertia(const IntMatrix& m);

}  // namespace toral
