#include "toral/splitting.hpp"

#include <algorithm>
#include <cmath>

#include "toral/error.hpp"
#include "toral/factor.hpp"
#include "toral/pseudo_anosov.hpp"
#include "toral/roots.hpp"

namespace toral {
namespace {

using Complex = std::complex<double>;

Complex evaluate(const IntPoly& p, Complex z) {
    Complex v = 0;
    for (int i = p.degree(); i >= 0; --i) v = v * z + p.coeff(i).get_d();
    return v;
}

Complex polish_root(const IntPoly& p, Complex z) {
    const IntPoly dp = p.derivative();
    for (int it = 0; it < 4; ++it) {
        const Complex d = evaluate(dp, z);
        if (std::abs(d) == 0) break;
        const Complex step = evaluate(p, z) / d;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        z -= step;
    }
    return z;
}

// Real matrix c(A) with c = prod (x - lambda) over the given eigenvalues.
Eigen::MatrixXd eval_product(const Eigen::MatrixXd& a, const std::vector<Complex>& roots) {
    std::vector<Complex> coef{1.0};
    for (const auto& r : roots) {
        std::vector<Complex> next(coef.size() + 1, 0.0);
        for (std::size_t i = 0; i < coef.size(); ++i) {
            next[i + 1] += coef[i];
            next[i] -= r * coef[i];
        }
        coef = std::move(next);
    }
    const auto n = a.rows();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = coef.size(); i-- > 0;) m = m * a + coef[i].real() * Eigen::MatrixXd::Identity(n, n);
    return m;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, int dim) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

Eigen::MatrixXd induced_block(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (b.cols() == 0) return Eigen::MatrixXd(0, 0);
    return b.colPivHouseholderQr().solve(a * b);
}

struct GramResult {
    Eigen::MatrixXd gram;
    double norm = 0;
    int terms = 0;
};

// G = sum_{j=0}^{K} theta^{-2j} (M^j)^T M^j with K the first index where
// theta^{-(K+1)} ||M^{K+1}|| <= 1; then ||M||_G <= theta.
GramResult iterate_gram(const Eigen::MatrixXd& m, double theta) {
    GramResult out;
    const auto n = m.rows();
    if (n == 0) return out;
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    out.gram = p;
    const Eigen::MatrixXd scaled = m / theta;
    constexpr int kMaxTerms = 200000;
    for (;;) {
        Eigen::MatrixXd next = p * scaled;
        if (next.operatorNorm() <= 1.0) break;
        p = std::move(next);
        out.gram += p.transpose() * p;
        if (++out.terms > kMaxTerms) throw Error("spectral-splitting", ErrorKind::budget, "adapted norm truncation exceeded");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(m.transpose() * out.gram * m, out.gram);
    out.norm = std::sqrt(std::max(0.0, ges.eigenvalues().maxCoeff()));
    return out;
}

}  // namespace

std::string to_string(ModulusClass c) {
    switch (c) {
        case ModulusClass::stable: return "stable";
        case ModulusClass::center: return "center";
        case ModulusClass::unstable: return "unstable";
    }
    return "?";
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
    return out;
}

Eigen::VectorXd to_eigen(const IntVector& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get_d();
    return out;
}

const Eigen::MatrixXd& Splitting::basis_of(ModulusClass c) const {
    return c == ModulusClass::stable ? basis_s : c == ModulusClass::center ? basis_c : basis_u;
}

const Eigen::MatrixXd& Splitting::block_of(ModulusClass c) const {
    return c == ModulusClass::stable ? block_s : c == ModulusClass::center ? block_c : block_u;
}

int Splitting::dim_of(ModulusClass c) const {
    return c == ModulusClass::stable ? dim_s : c == ModulusClass::center ? dim_c : dim_u;
}

int Splitting::offset_of(ModulusClass c) const {
    return c == ModulusClass::stable ? 0 : c == ModulusClass::center ? dim_s : dim_s + dim_c;
}

Eigen::VectorXd Splitting::component_coordinates(const Eigen::VectorXd& v, ModulusClass c) const {
    return basis_inverse.middleRows(offset_of(c), dim_of(c)) * v;
}

Eigen::VectorXd Splitting::component(const Eigen::VectorXd& v, ModulusClass c) const {
    return basis_of(c) * component_coordinates(v, c);
}

double Splitting::invariance_residual() const {
    double worst = 0;
    for (auto c : {ModulusClass::stable, ModulusClass::center, ModulusClass::unstable}) {
        const auto& b = basis_of(c);
        if (b.cols() == 0) continue;
        worst = std::max(worst, (a * b - b * block_of(c)).norm() / b.norm());
    }
    return worst;
}

Splitting compute_splitting(const IntMatrix& a, const SplittingOptions& options) {
    if (!a.is_square() || a.rows() == 0) throw Error("spectral-splitting", ErrorKind::input, "matrix must be square");
    const IntPoly p = char_poly(a);
    if (p.coeff(0) == 0) throw Error("spectral-splitting", ErrorKind::input, "matrix is singular");
    if (options.require_ergodic && !cyclotomic_free(p))
        throw Error("spectral-splitting", ErrorKind::hypothesis, "not ergodic: an eigenvalue is a root of unity");
    const RootCensus census = root_census(p);

    Splitting s;
    s.a = to_eigen(a);
    s.dim_s = census.inside;
    s.dim_c = census.on;
    s.dim_u = census.outside;

    Eigen::EigenSolver<Eigen::MatrixXd> es(s.a, false);
    std::vector<Complex> ev;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(polish_root(p, es.eigenvalues()(i)));
    std::stable_sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
        return std::arg(x) < std::arg(y);
    });
    std::vector<Complex> stable(ev.begin(), ev.begin() + s.dim_s);
    std::vector<Complex> center(ev.begin() + s.dim_s, ev.begin() + s.dim_s + s.dim_c);
    std::vector<Complex> unstable(ev.begin() + s.dim_s + s.dim_c, ev.end());
    if ((!stable.empty() && std::abs(stable.back()) >= 1.0 + 1e-9) ||
        (!unstable.empty() && std::abs(unstable.front()) <= 1.0 - 1e-9))
        throw Error("spectral-splitting", ErrorKind::invariant, "numerical eigenvalues disagree with the exact root census");
    for (const auto& z : center)
        if (std::abs(std::abs(z) - 1.0) > 1e-6)
            throw Error("spectral-splitting", ErrorKind::invariant, "center eigenvalue off the unit circle");

    for (std::size_t i = 0; i < ev.size(); ++i) {
        const ModulusClass c = i < stable.size()                   ? ModulusClass::stable
                               : i < stable.size() + center.size() ? ModulusClass::center
                                                                   : ModulusClass::unstable;
        if (!s.eigendata.empty() && std::abs(s.eigendata.back().value - ev[i]) < 1e-6 && s.eigendata.back().cls == c) {
            ++s.eigendata.back().multiplicity;
            continue;
        }
        s.eigendata.push_back({ev[i], 1, c});
    }

    const auto n = s.a.rows();
    s.basis_s = stable.empty() ? Eigen::MatrixXd(n, 0) : null_space(eval_product(s.a, stable), s.dim_s);
    s.basis_u = unstable.empty() ? Eigen::MatrixXd(n, 0) : null_space(eval_product(s.a, unstable), s.dim_u);
    s.block_s = induced_block(s.a, s.basis_s);
    s.block_u = induced_block(s.a, s.basis_u);

    s.basis_c = Eigen::MatrixXd(n, s.dim_c);
    s.block_c = Eigen::MatrixXd::Zero(s.dim_c, s.dim_c);
    int col = 0;
    std::vector<Complex> upper;
    for (const auto& z : center) {
        if (std::abs(z.imag()) < 1e-9) {
            // real root +-1, only possible when ergodicity is not required
            const double r = z.real() > 0 ? 1.0 : -1.0;
            Eigen::MatrixXd k = null_space(s.a - r * Eigen::MatrixXd::Identity(n, n), 1);
            s.basis_c.col(col) = k.col(0);
            s.block_c(col, col) = r;
            ++col;
        } else if (z.imag() > 0) {
            upper.push_back(z);
        }
    }
    for (std::size_t i = 0; i + 1 < upper.size(); ++i)
        if (std::abs(upper[i] - upper[i + 1]) < 1e-7)
            throw Error("spectral-splitting", ErrorKind::hypothesis, "repeated unit-modulus eigenvalue");
    for (const auto& z : upper) {
        const double theta = std::arg(z);
        const double c = std::cos(theta), sn = std::sin(theta);
        const Eigen::MatrixXd q = s.a * s.a - 2.0 * c * s.a + Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd k = null_space(q, 2);
        Eigen::VectorXd u = k.col(0).normalized();
        Eigen::VectorXd w = (s.a * u - c * u) / sn;
        s.basis_c.col(col) = u;
        s.basis_c.col(col + 1) = w;
        s.block_c(col, col) = c;
        s.block_c(col, col + 1) = -sn;
        s.block_c(col + 1, col) = sn;
        s.block_c(col + 1, col + 1) = c;
        s.center_angles.push_back(theta);
        col += 2;
    }
    if (col != s.dim_c) throw Error("spectral-splitting", ErrorKind::invariant, "center basis size mismatch");

    s.basis = Eigen::MatrixXd(n, n);
    s.basis << s.basis_s, s.basis_c, s.basis_u;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s.basis);
    if (!lu.isInvertible()) throw Error("spectral-splitting", ErrorKind::invariant, "splitting bases are dependent");
    s.basis_inverse = lu.inverse();
    return s;
}

double stable_radius(const Splitting& s) {
    double r = 0;
    for (const auto& e : s.eigendata)
        if (e.cls == ModulusClass::stable) r = std::max(r, std::abs(e.value));
    return r;
}

double unstable_inverse_radius(const Splitting& s) {
    double r = 0;
    for (const auto& e : s.eigendata)
        if (e.cls == ModulusClass::unstable) r = std::max(r, 1.0 / std::abs(e.value));
    return r;
}

AdaptedNorm adapted_norm(const Splitting& s, double theta_s, double theta_u) {
    if (s.dim_s > 0 && !(theta_s > stable_radius(s) && theta_s < 1))
        throw Error("spectral-splitting", ErrorKind::input, "stable margin outside (spectral radius, 1)");
    if (s.dim_u > 0 && !(theta_u > unstable_inverse_radius(s) && theta_u < 1))
        throw Error("spectral-splitting", ErrorKind::input, "unstable margin outside (spectral radius, 1)");
    AdaptedNorm an;
    an.theta_s = theta_s;
    an.theta_u = theta_u;
    const GramResult gs = iterate_gram(s.block_s, theta_s);
    an.gram_s = gs.gram;
    an.lambda_s = gs.norm;
    an.terms_s = gs.terms;
    const GramResult gu = iterate_gram(s.dim_u > 0 ? Eigen::MatrixXd(s.block_u.inverse()) : s.block_u, theta_u);
    an.gram_u = gu.gram;
    an.mu_u = gu.norm > 0 ? 1.0 / gu.norm : 0.0;
    an.terms_u = gu.terms;
    an.gram_c = Eigen::MatrixXd::Identity(s.dim_c, s.dim_c);
    return an;
}

AdaptedNorm adapted_norm(const Splitting& s, double theta) { return adapted_norm(s, theta, theta); }

AdaptedNorm adapted_norm(const Splitting& s) {
    auto margin = [](double rho) { return rho > 0 ? std::min(1.04 * rho, 0.5 * (1.0 + rho)) : 0.5; };
    return adapted_norm(s, margin(stable_radius(s)), margin(unstable_inverse_radius(s)));
}

double AdaptedNorm::part(const Splitting& s, const Eigen::VectorXd& v, ModulusClass c) const {
    if (s.dim_of(c) == 0) return 0.0;
    const Eigen::VectorXd x = s.component_coordinates(v, c);
    const Eigen::MatrixXd& g = c == ModulusClass::stable ? gram_s : c == ModulusClass::center ? gram_c : gram_u;
    return std::sqrt(std::max(0.0, x.dot(g * x)));
}

double AdaptedNorm::operator()(const Splitting& s, const Eigen::VectorXd& v) const {
    return part(s, v, ModulusClass::stable) + part(s, v, ModulusClass::center) + part(s, v, ModulusClass::unstable);
}

bool is_salem(const IntPoly& p) {
    if (p.degree() < 2 || p.content() != 1 || !is_reciprocal(p) || !is_irreducible_Z(p)) return false;
    const RootCensus c = root_census(p);
    return c.outside == 1 && c.on >= 1;
}

ClassificationReport classify_polynomial(const IntPoly& p) {
    if (p.degree() < 1) throw Error("spectral-splitting", ErrorKind::input, "characteristic polynomial of positive degree required");
    ClassificationReport r;
    r.char_poly = p;
    r.ergodic = cyclotomic_free(p);
    const RootCensus census = root_census(p);
    r.dim_stable = census.inside;
    r.dim_center = census.on;
    r.dim_unstable = census.outside;
    r.anosov = census.on == 0;
    for (const auto& f : factor_Z(p)) {
        FactorReport fr;
        fr.poly = f.poly;
        fr.multiplicity = f.multiplicity;
        fr.reciprocal = is_reciprocal(f.poly);
        fr.cyclotomic = !cyclotomic_free(f.poly);
        const RootCensus c = root_census(f.poly);
        fr.inside = c.inside;
        fr.unitary = c.on;
        fr.outside = c.outside;
        fr.salem = !fr.cyclotomic && fr.reciprocal && c.outside == 1 && c.on >= 1;
        if (!fr.cyclotomic && fr.unitary > 0 && (f.poly.degree() % 2 != 0 || f.poly.degree() < 4))
            r.unitary_factors_even = false;
        r.factors.push_back(std::move(fr));
    }
    r.char_poly_irreducible = r.factors.size() == 1 && r.factors.front().multiplicity == 1;
    r.pseudo_anosov = r.ergodic && r.char_poly_irreducible && pa_condition3(p);
    return r;
}

ClassificationReport classify(const IntMatrix& a) {
    if (!a.is_square() || a.rows() == 0) throw Error("spectral-splitting", ErrorKind::input, "matrix must be square");
    if (!a.is_unimodular()) throw Error("spectral-splitting", ErrorKind::input, "matrix is not in GL(N, Z)");
    return classify_polynomial(char_poly(a));
}

}  // namespace toral
