#include "toral/int_poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "toral/error.hpp"

namespace toral {

IntPoly::IntPoly(std::vector<BigInt> ascending) : c_(std::move(ascending)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> ascending) {
    for (long v : ascending) c_.emplace_back(v);
    trim();
}

IntPoly IntPoly::monomial(int degree, const BigInt& coeff) {
    std::vector<BigInt> c(static_cast<std::size_t>(degree) + 1, BigInt(0));
    c.back() = coeff;
    return IntPoly(std::move(c));
}

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const BigInt& IntPoly::leading() const {
    if (c_.empty()) throw Error("exact-core", ErrorKind::input, "leading coefficient of zero polynomial");
    return c_.back();
}

BigInt IntPoly::coeff(int i) const {
    if (i < 0 || i > degree()) return 0;
    return c_[static_cast<std::size_t>(i)];
}

BigInt IntPoly::evaluate(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rational IntPoly::evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rational(*it);
    return acc;
}

IntMatrix IntPoly::evaluate(const IntMatrix& a) const {
    const std::size_t n = a.rows();
    IntMatrix acc(n, n);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * a;
        for (std::size_t i = 0; i < n; ++i) acc(i, i) += *it;
    }
    return acc;
}

IntPoly IntPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigInt> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(d));
}

BigInt IntPoly::content() const {
    BigInt g = 0;
    for (const auto& x : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntPoly IntPoly::primitive_part() const {
    if (c_.empty()) return {};
    BigInt g = content();
    if (c_.back() < 0) g = -g;
    std::vector<BigInt> c = c_;
    for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return IntPoly(std::move(c));
}

IntPoly IntPoly::reversed() const {
    std::vector<BigInt> c(c_.rbegin(), c_.rend());
    return IntPoly(std::move(c));
}

IntPoly IntPoly::compose_power(int m) const {
    if (c_.empty()) return {};
    std::vector<BigInt> c(static_cast<std::size_t>(degree() * m) + 1, BigInt(0));
    for (std::size_t i = 0; i < c_.size(); ++i) c[i * static_cast<std::size_t>(m)] = c_[i];
    return IntPoly(std::move(c));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), BigInt(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a) {
    std::vector<BigInt> c = a.c_;
    for (auto& x : c) x = -x;
    return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            mpz_addmul(c[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
    return IntPoly(std::move(c));
}

IntPoly operator*(const BigInt& s, const IntPoly& a) {
    std::vector<BigInt> c = a.c_;
    for (auto& x : c) x *= s;
    return IntPoly(std::move(c));
}

std::string IntPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const BigInt& a = c_[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        BigInt mag = abs(a);
        if (first) {
            if (a < 0) os << '-';
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        if (mag != 1 || i == 0) os << mag.get_str();
        if (i >= 1) os << 'x';
        if (i >= 2) os << '^' << i;
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------- rational polys

RatPoly to_rational(const IntPoly& p) {
    RatPoly r;
    r.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) r.emplace_back(c);
    return r;
}

int degree(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
    if (b.empty()) throw Error("exact-core", ErrorKind::input, "division by zero polynomial");
    RatPoly r = a;
    trim(r);
    if (degree(r) < degree(b)) return {RatPoly{}, r};
    RatPoly q(static_cast<std::size_t>(degree(r) - degree(b)) + 1, Rational(0));
    const Rational lead_inv = 1 / b.back();
    while (!r.empty() && degree(r) >= degree(b)) {
        const std::size_t shift = static_cast<std::size_t>(degree(r) - degree(b));
        Rational f = r.back() * lead_inv;
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) r[i + shift] -= f * b[i];
        r.pop_back();
        trim(r);
    }
    trim(q);
    return {q, r};
}

RatPoly gcd(RatPoly a, RatPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        RatPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    Rational inv = 1 / a.back();
    for (auto& x : a) x *= inv;
    return a;
}

IntPoly to_primitive_int(const RatPoly& p) {
    BigInt l = 1;
    for (const auto& x : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<BigInt> c;
    c.reserve(p.size());
    for (const auto& x : p) {
        Rational s = x * Rational(l);
        c.push_back(s.get_num());
    }
    return IntPoly(std::move(c)).primitive_part();
}

std::optional<IntPoly> exact_divide(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw Error("exact-core", ErrorKind::input, "division by zero polynomial");
    if (a.is_zero()) return IntPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<BigInt> r = a.coeffs();
    const auto& bc = b.coeffs();
    const BigInt& lb = bc.back();
    const std::size_t db = bc.size() - 1;
    std::vector<BigInt> q(r.size() - db, BigInt(0));
    for (std::size_t k = q.size(); k-- > 0;) {
        BigInt& top = r[k + db];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return std::nullopt;
        BigInt f;
        mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
        q[k] = f;
        for (std::size_t i = 0; i <= db; ++i) mpz_submul(r[k + i].get_mpz_t(), f.get_mpz_t(), bc[i].get_mpz_t());
    }
    for (std::size_t i = 0; i < db; ++i)
        if (r[i] != 0) return std::nullopt;
    return IntPoly(std::move(q));
}

std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& a, const IntPoly& d) {
    if (!d.is_monic()) throw Error("exact-core", ErrorKind::input, "divmod_monic needs a monic divisor");
    if (a.degree() < d.degree()) return {IntPoly{}, a};
    std::vector<BigInt> r = a.coeffs();
    const auto& dc = d.coeffs();
    const std::size_t dd = dc.size() - 1;
    std::vector<BigInt> q(r.size() - dd, BigInt(0));
    for (std::size_t k = q.size(); k-- > 0;) {
        BigInt f = r[k + dd];
        q[k] = f;
        if (f == 0) continue;
        for (std::size_t i = 0; i <= dd; ++i) mpz_submul(r[k + i].get_mpz_t(), f.get_mpz_t(), dc[i].get_mpz_t());
    }
    r.resize(dd);
    return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

IntPoly monic_gcd(const IntPoly& a, const IntPoly& b) {
    RatPoly g = gcd(to_rational(a), to_rational(b));
    std::vector<BigInt> c;
    for (const auto& x : g) {
        if (x.get_den() != 1) throw Error("exact-core", ErrorKind::invariant, "non-integral monic gcd");
        c.push_back(x.get_num());
    }
    return IntPoly(std::move(c));
}

// ---------------------------------------------------------------- characteristic polynomial

IntPoly char_poly(const IntMatrix& a) {
    if (!a.is_square()) throw Error("exact-core", ErrorKind::input, "char_poly of non-square matrix");
    const std::size_t n = a.rows();
    std::vector<BigInt> c(n + 1, BigInt(0));
    c[n] = 1;
    IntMatrix m(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
        BigInt t = (a * m).trace();
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(k));
        c[n - k] = -t;
    }
    return IntPoly(std::move(c));
}

IntMatrix companion(const IntPoly& p) {
    if (!p.is_monic() || p.degree() < 1) throw Error("exact-core", ErrorKind::input, "companion needs monic degree >= 1");
    const auto n = static_cast<std::size_t>(p.degree());
    IntMatrix m(n, n);
    for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = -p.coeff(static_cast<int>(i));
    return m;
}

// ---------------------------------------------------------------- cyclotomic test

unsigned euler_phi(unsigned m) {
    unsigned result = m;
    unsigned n = m;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

IntPoly build_cyclotomic(unsigned m, const std::vector<IntPoly>& known) {
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d
    IntPoly p = IntPoly::monomial(static_cast<int>(m)) - IntPoly{1};
    for (unsigned d = 1; d < m; ++d) {
        if (m % d) continue;
        p = divmod_monic(p, d < known.size() ? known[d] : build_cyclotomic(d, known)).first;
    }
    return p;
}

constexpr unsigned kCyclotomicTable = 128;

const std::vector<IntPoly>& cyclotomic_table() {
    static const std::vector<IntPoly> table = [] {
        std::vector<IntPoly> t(1);
        for (unsigned m = 1; m <= kCyclotomicTable; ++m) t.push_back(build_cyclotomic(m, t));
        return t;
    }();
    return table;
}

}  // namespace

IntPoly cyclotomic(unsigned m) {
    if (m == 0) throw Error("exact-core", ErrorKind::input, "cyclotomic index must be positive");
    if (m <= kCyclotomicTable) return cyclotomic_table()[m];
    return build_cyclotomic(m, cyclotomic_table());
}

bool cyclotomic_free(const IntPoly& p) {
    if (p.is_zero()) throw Error("exact-core", ErrorKind::input, "cyclotomic_free of zero polynomial");
    const int deg = p.degree();
    if (deg < 1) return true;
    // phi(m) >= sqrt(m / 2), so every m with phi(m) <= deg satisfies m <= 2 deg^2.
    const auto bound = static_cast<unsigned>(2 * deg * deg + 2);
    for (unsigned m = 1; m <= bound; ++m) {
        if (euler_phi(m) > static_cast<unsigned>(deg)) continue;
        if (divmod_monic(p, cyclotomic(m)).second.is_zero()) return false;
    }
    return true;
}

bool is_reciprocal(const IntPoly& p) {
    const auto& c = p.coeffs();
    for (std::size_t i = 0, j = c.size(); i < j--; ++i)
        if (c[i] != c[j]) return false;
    return true;
}

std::optional<int> is_poly_in_xm(const IntPoly& p) {
    if (p.is_zero()) throw Error("exact-core", ErrorKind::input, "is_poly_in_xm of zero polynomial");
    int g = 0;
    for (int i = 1; i <= p.degree(); ++i)
        if (p.coeff(i) != 0) g = std::gcd(g, i);
    if (g > 1) return g;
    return std::nullopt;
}

}  // namespace toral
