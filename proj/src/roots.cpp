#include "toral/roots.hpp"

#include <algorithm>

#include "toral/error.hpp"
#include "toral/factor.hpp"

namespace toral {
namespace {

Rational evaluate(const RatPoly& p, const Rational& x) {
    Rational v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

RatPoly derivative(const RatPoly& p) {
    RatPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    return d;
}

int sign_changes(const std::vector<RatPoly>& chain, const Rational& x) {
    int changes = 0;
    int last = 0;
    for (const auto& p : chain) {
        const int s = sgn(evaluate(p, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

// Remove every factor (x - a) from p.
RatPoly deflate_at(RatPoly p, const Rational& a) {
    while (degree(p) >= 1 && evaluate(p, a) == 0) p = divmod(p, RatPoly{-a, Rational(1)}).first;
    return p;
}

void require_no_plus_minus_one(const IntPoly& p, const char* what) {
    if (p.evaluate(BigInt(1)) == 0 || p.evaluate(BigInt(-1)) == 0)
        throw Error("exact-core", ErrorKind::hypothesis, std::string(what) + ": polynomial has root 1 or -1 (not ergodic)");
}

}  // namespace

int sturm_count(const RatPoly& q, const Rational& a, const Rational& b) {
    if (!(a < b)) return 0;
    RatPoly f = q;
    trim(f);
    if (f.empty()) throw Error("exact-core", ErrorKind::input, "sturm_count of zero polynomial");
    f = deflate_at(deflate_at(f, a), b);
    if (degree(f) < 1) return 0;
    std::vector<RatPoly> chain{f, derivative(f)};
    while (degree(chain.back()) >= 1) {
        RatPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return sign_changes(chain, a) - sign_changes(chain, b);
}

int count_real_roots(const IntPoly& p, const Rational& a, const Rational& b) {
    const auto parts = squarefree_decomposition(p);
    int total = 0;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (parts[i].degree() >= 1) total += static_cast<int>(i + 1) * sturm_count(to_rational(parts[i]), a, b);
    return total;
}

IntPoly reciprocal_part(const IntPoly& p) {
    if (p.is_zero()) throw Error("exact-core", ErrorKind::input, "reciprocal_part of zero polynomial");
    require_no_plus_minus_one(p, "reciprocal_part");
    RatPoly g = gcd(to_rational(p), to_rational(p.reversed()));
    if (degree(g) < 1) return IntPoly{1};
    return to_primitive_int(g);
}

IntPoly trace_polynomial(const IntPoly& r) {
    if (r.degree() < 0 || r.degree() % 2 != 0 || !is_reciprocal(r))
        throw Error("exact-core", ErrorKind::input, "trace polynomial needs a palindromic polynomial of even degree");
    const int m = r.degree() / 2;
    IntPoly q(std::vector<BigInt>{r.coeff(m)});
    IntPoly prev{2};
    IntPoly cur = IntPoly::x();
    const IntPoly t = IntPoly::x();
    for (int j = 1; j <= m; ++j) {
        q = q + r.coeff(m + j) * cur;
        IntPoly next = t * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return q;
}

int count_unitary_roots(const IntPoly& p) {
    const IntPoly r = reciprocal_part(p);
    if (r.degree() < 1) return 0;
    return 2 * count_real_roots(trace_polynomial(r), Rational(-2), Rational(2));
}

std::pair<int, int> symmetric_inertia(const IntMatrix& m) {
    const IntPoly chi = char_poly(m);
    int zeros = 0;
    while (chi.coeff(zeros) == 0) ++zeros;
    int changes = 0;
    int last = 0;
    for (int i = zeros; i <= chi.degree(); ++i) {
        const int s = sgn(chi.coeff(i));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return {changes, zeros};
}

int schur_cohn_inside(const IntPoly& p) {
    const int n = p.degree();
    if (n < 1) return 0;
    IntMatrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            BigInt s = 0;
            for (int k = 1; k <= std::min(i, j); ++k)
                s += p.coeff(n - i + k) * p.coeff(n - j + k) - p.coeff(i - k) * p.coeff(j - k);
            c(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = s;
        }
    const auto [positive, zeros] = symmetric_inertia(c);
    if (zeros != 0)
        throw Error("exact-core", ErrorKind::invariant, "singular Schur-Cohn form (unitary or reciprocal root pair)");
    return positive;
}

RootCensus root_census(const IntPoly& p) {
    if (p.is_zero()) throw Error("exact-core", ErrorKind::input, "root census of zero polynomial");
    RootCensus out;
    std::vector<BigInt> c = p.coeffs();
    int zero_roots = 0;
    while (c[static_cast<std::size_t>(zero_roots)] == 0) ++zero_roots;
    c.erase(c.begin(), c.begin() + zero_roots);
    IntPoly rest(std::move(c));
    out.inside += zero_roots;
    for (const IntPoly& lin : {IntPoly{-1, 1}, IntPoly{1, 1}}) {
        while (rest.degree() >= 1) {
            auto q = exact_divide(rest, lin);
            if (!q) break;
            rest = *q;
            ++out.on;
            ++out.plus_minus_one;
        }
    }
    if (rest.degree() < 1) return out;
    const IntPoly r = reciprocal_part(rest);
    int unitary = 0;
    if (r.degree() >= 1) unitary = 2 * count_real_roots(trace_polynomial(r), Rational(-2), Rational(2));
    out.on += unitary;
    out.inside += (r.degree() - unitary) / 2;
    out.outside += (r.degree() - unitary) / 2;
    auto cofactor = exact_divide(rest.primitive_part(), r);
    if (!cofactor) throw Error("exact-core", ErrorKind::invariant, "reciprocal part does not divide polynomial");
    const int inside = schur_cohn_inside(*cofactor);
    out.inside += inside;
    out.outside += cofactor->degree() - inside;
    return out;
}

}  // namespace toral
