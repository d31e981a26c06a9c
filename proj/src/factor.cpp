#include "toral/factor.hpp"

#include <algorithm>

#include "toral/error.hpp"

namespace toral {
namespace {

// Dense polynomials over Z/P, ascending coefficients in [0, P), trimmed.
class ModRing {
public:
    explicit ModRing(BigInt p) : p_(std::move(p)), rng_(gmp_randinit_default) { rng_.seed(0x5eed); }

    using Poly = std::vector<BigInt>;

    const BigInt& modulus() const { return p_; }

    Poly reduce(const IntPoly& f) const {
        Poly r;
        r.reserve(f.coeffs().size());
        for (const auto& c : f.coeffs()) r.push_back(mod(c));
        trim(r);
        return r;
    }

    BigInt mod(const BigInt& a) const {
        BigInt r;
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t());
        return r;
    }

    static void trim(Poly& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    static int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

    BigInt inverse(const BigInt& a) const {
        BigInt r;
        if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t()) == 0)
            throw Error("exact-core", ErrorKind::invariant, "non-invertible element modulo P");
        return r;
    }

    Poly sub(const Poly& a, const Poly& b) const {
        Poly r(std::max(a.size(), b.size()), BigInt(0));
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] - b[i]);
        trim(r);
        return r;
    }

    Poly mul(const Poly& a, const Poly& b) const {
        if (a.empty() || b.empty()) return {};
        Poly r(a.size() + b.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        for (auto& c : r) c = mod(c);
        trim(r);
        return r;
    }

    Poly monic(Poly a) const {
        if (a.empty()) return a;
        BigInt inv = inverse(a.back());
        for (auto& c : a) c = mod(c * inv);
        return a;
    }

    std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) const {
        if (b.empty()) throw Error("exact-core", ErrorKind::invariant, "division by zero modulo P");
        Poly r = a;
        if (deg(r) < deg(b)) return {Poly{}, r};
        Poly q(static_cast<std::size_t>(deg(r) - deg(b)) + 1, BigInt(0));
        BigInt inv = inverse(b.back());
        while (!r.empty() && deg(r) >= deg(b)) {
            const auto shift = static_cast<std::size_t>(deg(r) - deg(b));
            BigInt f = mod(r.back() * inv);
            q[shift] = f;
            for (std::size_t i = 0; i < b.size(); ++i) {
                mpz_submul(r[i + shift].get_mpz_t(), f.get_mpz_t(), b[i].get_mpz_t());
                r[i + shift] = mod(r[i + shift]);
            }
            trim(r);
        }
        trim(q);
        return {q, r};
    }

    Poly rem(const Poly& a, const Poly& b) const { return divmod(a, b).second; }

    Poly gcd(Poly a, Poly b) const {
        while (!b.empty()) {
            Poly r = rem(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(std::move(a));
    }

    Poly powmod(Poly base, const BigInt& e, const Poly& m) const {
        Poly result{BigInt(1)};
        base = rem(base, m);
        const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (std::size_t i = bits; i-- > 0;) {
            result = rem(mul(result, result), m);
            if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, base), m);
        }
        return result;
    }

    Poly random_below(int degree_bound) {
        Poly a(static_cast<std::size_t>(degree_bound));
        for (auto& c : a) c = rng_.get_z_range(p_);
        trim(a);
        return a;
    }

private:
    BigInt p_;
    gmp_randclass rng_;
};

using ModPoly = ModRing::Poly;

std::vector<std::pair<ModPoly, int>> distinct_degree(ModRing& ring, ModPoly f) {
    std::vector<std::pair<ModPoly, int>> out;
    const ModPoly x{BigInt(0), BigInt(1)};
    ModPoly h = x;
    for (int i = 1; ModRing::deg(f) >= 2 * i; ++i) {
        h = ring.powmod(h, ring.modulus(), f);
        ModPoly g = ring.gcd(f, ring.sub(h, x));
        if (ModRing::deg(g) > 0) {
            out.emplace_back(g, i);
            f = ring.divmod(f, g).first;
            h = ring.rem(h, f);
        }
    }
    if (ModRing::deg(f) > 0) out.emplace_back(ring.monic(f), ModRing::deg(f));
    return out;
}

void equal_degree(ModRing& ring, const ModPoly& g, int d, std::vector<ModPoly>& out) {
    if (ModRing::deg(g) == d) {
        out.push_back(g);
        return;
    }
    BigInt e;
    mpz_pow_ui(e.get_mpz_t(), ring.modulus().get_mpz_t(), static_cast<unsigned long>(d));
    e = (e - 1) / 2;
    for (;;) {
        ModPoly a = ring.random_below(ModRing::deg(g));
        if (ModRing::deg(a) < 1) continue;
        ModPoly b = ring.sub(ring.powmod(a, e, g), ModPoly{BigInt(1)});
        ModPoly h = ring.gcd(g, b);
        if (ModRing::deg(h) > 0 && ModRing::deg(h) < ModRing::deg(g)) {
            equal_degree(ring, h, d, out);
            equal_degree(ring, ring.divmod(g, h).first, d, out);
            return;
        }
    }
}

IntPoly symmetric_lift(const ModPoly& a, const BigInt& p) {
    const BigInt half = p / 2;
    std::vector<BigInt> c;
    c.reserve(a.size());
    for (const auto& x : a) c.push_back(x > half ? x - p : x);
    return IntPoly(std::move(c));
}

BigInt factor_coefficient_bound(const IntPoly& f) {
    // Every factor g of f satisfies ||g||_inf <= 2^deg(f) * ||f||_2; the
    // candidate is scaled by lc(f) before lifting.
    BigInt norm2 = 0;
    for (const auto& c : f.coeffs()) norm2 += c * c;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
    root += 1;
    BigInt bound = root * abs(f.leading());
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(f.degree()));
    return bound;
}

bool squarefree_mod(ModRing& ring, const IntPoly& f) {
    ModPoly fm = ring.reduce(f);
    if (ModRing::deg(fm) != f.degree()) return false;
    ModPoly d = ring.reduce(f.derivative());
    return ModRing::deg(ring.gcd(fm, d)) == 0;
}

// f primitive, squarefree, positive leading coefficient, degree >= 1.
std::vector<IntPoly> zassenhaus(IntPoly f) {
    if (f.degree() <= 1) return {f};
    BigInt p = 2 * factor_coefficient_bound(f) + 1;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    for (;;) {
        ModRing probe(p);
        if (squarefree_mod(probe, f)) break;
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    ModRing ring(p);
    std::vector<ModPoly> modular;
    for (auto& [g, d] : distinct_degree(ring, ring.monic(ring.reduce(f)))) equal_degree(ring, g, d, modular);
    if (modular.size() == 1) return {f};
    std::sort(modular.begin(), modular.end(), [](const ModPoly& a, const ModPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });

    std::vector<IntPoly> found;
    std::size_t subset = 1;
    while (2 * subset <= modular.size()) {
        bool split = false;
        std::vector<std::size_t> idx(subset);
        for (std::size_t i = 0; i < subset; ++i) idx[i] = i;
        for (;;) {
            ModPoly prod{ring.mod(f.leading())};
            for (auto i : idx) prod = ring.mul(prod, modular[i]);
            IntPoly candidate = symmetric_lift(prod, p).primitive_part();
            if (auto q = exact_divide(f, candidate)) {
                found.push_back(candidate);
                f = q->primitive_part();
                for (std::size_t k = idx.size(); k-- > 0;) modular.erase(modular.begin() + static_cast<std::ptrdiff_t>(idx[k]));
                split = true;
                break;
            }
            // next combination in lexicographic order
            std::size_t k = subset;
            while (k > 0 && idx[k - 1] == modular.size() - subset + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < subset; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!split) ++subset;
    }
    if (f.degree() >= 1) found.push_back(f);
    return found;
}

bool poly_less(const IntPoly& a, const IntPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
    }
    return false;
}

}  // namespace

std::vector<IntPoly> squarefree_decomposition(const IntPoly& p) {
    if (p.is_zero()) throw Error("exact-core", ErrorKind::input, "squarefree decomposition of zero polynomial");
    std::vector<IntPoly> out;
    if (p.degree() < 1) return out;
    auto derivative = [](const RatPoly& a) {
        RatPoly d;
        for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * Rational(static_cast<long>(i)));
        return d;
    };
    auto sub = [](RatPoly a, const RatPoly& b) {
        if (a.size() < b.size()) a.resize(b.size(), Rational(0));
        for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
        trim(a);
        return a;
    };
    const RatPoly f = to_rational(p);
    const RatPoly fp = derivative(f);
    RatPoly b = gcd(f, fp);
    RatPoly c = divmod(f, b).first;
    RatPoly d = sub(divmod(fp, b).first, derivative(c));
    while (degree(c) >= 1) {
        RatPoly a = gcd(c, d);
        out.push_back(to_primitive_int(a));
        c = divmod(c, a).first;
        d = sub(divmod(d, a).first, derivative(c));
    }
    return out;
}

std::vector<PolyFactor> factor_Z(const IntPoly& p) {
    if (p.is_zero()) throw Error("exact-core", ErrorKind::input, "factorization of zero polynomial");
    std::vector<PolyFactor> out;
    const auto parts = squarefree_decomposition(p.primitive_part());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].degree() < 1) continue;
        for (auto& g : zassenhaus(parts[i])) out.push_back({g, static_cast<int>(i + 1)});
    }
    std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
        if (poly_less(a.poly, b.poly)) return true;
        if (poly_less(b.poly, a.poly)) return false;
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

bool is_irreducible_Z(const IntPoly& p) {
    if (p.is_zero() || p.degree() < 1) throw Error("exact-core", ErrorKind::input, "irreducibility needs positive degree");
    if (p.content() != 1) return false;
    const auto f = factor_Z(p);
    return f.size() == 1 && f.front().multiplicity == 1;
}

}  // namespace toral
