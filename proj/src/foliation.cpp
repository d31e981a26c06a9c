#include "toral/foliation.hpp"

#include <cmath>
#include <random>

#include "toral/error.hpp"
#include "toral/experiment.hpp"

namespace toral {
namespace {

const char* kModule = "perturbed-dynamics";

int index_of(Flavor f) { return static_cast<int>(f); }

bool uses_forward_map(Flavor f) { return f == Flavor::s || f == Flavor::cs; }

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Splitting-coordinate permutation putting the parameter block first.
struct Layout {
    int p = 0;
    std::vector<int> perm;
};

Layout layout(int offset, int p, int n) {
    Layout l;
    l.p = p;
    for (int i = offset; i < offset + p; ++i) l.perm.push_back(i);
    for (int i = 0; i < n; ++i)
        if (i < offset || i >= offset + p) l.perm.push_back(i);
    return l;
}

Eigen::MatrixXd gram_root(const Eigen::MatrixXd& g) {
    if (g.rows() == 0) return g;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    return llt.matrixU();
}

}  // namespace

std::string to_string(Flavor f) {
    switch (f) {
    case Flavor::s: return "s";
    case Flavor::u: return "u";
    case Flavor::c: return "c";
    case Flavor::cs: return "cs";
    case Flavor::cu: return "cu";
    }
    return "?";
}

Flavor flavor_from_string(const std::string& name) {
    for (Flavor f : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu})
        if (to_string(f) == name) return f;
    throw Error(kModule, ErrorKind::input, "unknown flavor " + name);
}

Foliations::Foliations(PerturbedMap f, Splitting s, AdaptedNorm an, LeafOptions options)
    : f_(std::move(f)), s_(std::move(s)), an_(std::move(an)), options_(options) {
    if (f_.dim() != s_.dim()) throw Error(kModule, ErrorKind::input, "map and splitting dimensions differ");
    if (s_.dim_s == 0 || s_.dim_u == 0) throw Error(kModule, ErrorKind::hypothesis, "need nontrivial stable and unstable directions");
    abar_ = s_.basis_inverse * s_.a * s_.basis;
    abar_inv_ = abar_.inverse();

    // adapted coordinates: Euclidean there is (up to a factor sqrt 3) the adapted norm
    const int n = s_.dim();
    Eigen::MatrixXd root = Eigen::MatrixXd::Zero(n, n);
    root.block(0, 0, s_.dim_s, s_.dim_s) = gram_root(an_.gram_s);
    root.block(s_.dim_s, s_.dim_s, s_.dim_c, s_.dim_c) = gram_root(an_.gram_c);
    root.block(s_.dim_s + s_.dim_c, s_.dim_s + s_.dim_c, s_.dim_u, s_.dim_u) = gram_root(an_.gram_u);
    const Eigen::MatrixXd t = root * s_.basis_inverse;
    const Eigen::MatrixXd t_inv = s_.basis * root.inverse();
    if (!f_.is_linear()) {
        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> unit(0, 1);
        for (int k = 0; k < 512; ++k) {
            Eigen::VectorXd x(n);
            for (int i = 0; i < n; ++i) x(i) = unit(rng);
            const Eigen::MatrixXd d = t * (f_.jacobian(x) - s_.a) * t_inv;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
            delta_ = std::max(delta_, svd.singularValues()(0));
        }
    }

    const double ls = an_.lambda_s, mu = an_.mu_u;
    const bool center = s_.dim_c > 0;
    // (dominated rate, dominating rate) for each flavor; u-type flavors use F^{-1}
    auto rates = [&](Flavor fl) -> std::pair<double, double> {
        switch (fl) {
        case Flavor::s: return {ls, center ? 1.0 : mu};
        case Flavor::cs: return {center ? 1.0 : ls, mu};
        case Flavor::u: return {1 / mu, center ? 1.0 : 1 / ls};
        case Flavor::cu: return {center ? 1.0 : 1 / mu, 1 / ls};
        case Flavor::c: break;
        }
        return {1.0, std::min(mu, 1 / ls)};
    };
    for (Flavor fl : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu}) {
        const auto [p, q] = rates(fl);
        const int i = index_of(fl);
        gap_[i] = q - p;
        // worst-case rate ratio, floored at the square root of the linear one
        const double eff = std::max((q - delta_) / (p + delta_), std::sqrt(q / p));
        if (options_.horizon > 0) horizon_[i] = options_.horizon;
        else horizon_[i] = std::clamp(static_cast<int>(std::ceil(std::log(1e16) / std::log(eff))) + 5, 10, 3000);
    }
}

int Foliations::param_dim(Flavor f) const {
    switch (f) {
    case Flavor::s: return s_.dim_s;
    case Flavor::u: return s_.dim_u;
    case Flavor::c: return s_.dim_c;
    case Flavor::cs: return s_.dim_s + s_.dim_c;
    case Flavor::cu: return s_.dim_c + s_.dim_u;
    }
    return 0;
}

int Foliations::param_offset(Flavor f) const {
    switch (f) {
    case Flavor::s:
    case Flavor::cs: return 0;
    case Flavor::c:
    case Flavor::cu: return s_.dim_s;
    case Flavor::u: return s_.dim_s + s_.dim_c;
    }
    return 0;
}

Eigen::MatrixXd Foliations::param_basis(Flavor f) const { return s_.basis.middleCols(param_offset(f), param_dim(f)); }

Eigen::VectorXd Foliations::param_of(Flavor f, const Eigen::VectorXd& ambient) const {
    return (s_.basis_inverse * ambient).segment(param_offset(f), param_dim(f));
}

Eigen::VectorXd Foliations::embed(Flavor f, const Eigen::VectorXd& v) const { return param_basis(f) * v; }

int Foliations::horizon(Flavor f) const { return horizon_[index_of(f)]; }

double Foliations::contraction_factor(Flavor f) const {
    if (f == Flavor::c) return std::max(contraction_factor(Flavor::cs), contraction_factor(Flavor::cu));
    return delta_ / gap_[index_of(f)];
}

Eigen::VectorXd Foliations::solve(Flavor fl, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    const int n = dim();
    const int offset = param_offset(fl), p = param_dim(fl), q = n - p;
    if (v.size() != p) throw Error(kModule, ErrorKind::input, "leaf parameter has the wrong dimension");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    out.segment(offset, p) = v;
    if (f_.is_linear() || q == 0) return out;
    if (contraction_factor(fl) >= 1)
        throw Error(kModule, ErrorKind::hypothesis, "perturbation too large for the " + to_string(fl) + " leaves");

    const bool forward = uses_forward_map(fl);
    const Layout lay = layout(offset, p, n);
    Eigen::MatrixXd bp(n, n), bp_inv(n, n);
    for (int i = 0; i < n; ++i) {
        bp.col(i) = s_.basis.col(lay.perm[static_cast<std::size_t>(i)]);
        bp_inv.row(i) = s_.basis_inverse.row(lay.perm[static_cast<std::size_t>(i)]);
    }
    const int full = horizon(fl);
    using Index = std::size_t;
    auto at = [](int k) { return static_cast<Index>(k); };

    std::vector<Eigen::VectorXd> r(at(full) + 1);
    r[0] = reduce_mod_one(x);
    for (int k = 0; k < full; ++k) r[at(k) + 1] = reduce_mod_one(forward ? f_(r[at(k)]) : f_.inverse(r[at(k)]));
    auto step_map = [&](int k, const Eigen::VectorXd& e) -> Eigen::VectorXd {
        const Eigen::VectorXd d = bp * e;
        return bp_inv * (forward ? f_.forward_difference(r[at(k)], d) : f_.inverse_difference(r[at(k)], d));
    };
    // residual tolerance relative to the largest orbit difference
    auto scale_of = [&](const std::vector<Eigen::VectorXd>& ee, int steps) {
        double m = 0;
        for (int k = 0; k <= steps; ++k) m = std::max(m, sup_norm(ee[at(k)]));
        return 1 + m;
    };
    auto residuals = [&](const std::vector<Eigen::VectorXd>& ee, std::vector<Eigen::VectorXd>& res, int steps) {
        double worst = 0;
        for (int k = 0; k < steps; ++k) {
            res[at(k)] = step_map(k, ee[at(k)]) - ee[at(k) + 1];
            worst = std::max(worst, sup_norm(res[at(k)]));
        }
        return worst / scale_of(ee, steps);
    };

    std::vector<Eigen::VectorXd> e(at(full) + 1, Eigen::VectorXd::Zero(n));
    std::vector<Eigen::VectorXd> res(at(full)), trial_res(at(full));
    std::vector<Eigen::MatrixXd> sk(at(full) + 1), jac(at(full));
    std::vector<Eigen::VectorXd> tk(at(full) + 1), de(at(full) + 1), trial(at(full) + 1);
    e[0].head(p) = v;

    // continuation in the horizon: each stage extends the previous solution by
    // following the map with the dominating part reset to zero
    int solved = 0;
    for (int steps = std::min(full, 10);; steps = std::min(full, 2 * steps)) {
        for (int k = solved; k < steps; ++k) {
            e[at(k) + 1] = step_map(k, e[at(k)]);
            e[at(k) + 1].tail(q).setZero();
        }
        double worst = residuals(e, res, steps);
        int iterations = 0;
        while (worst > options_.tol) {
            if (++iterations > options_.max_newton)
                throw Error(kModule, ErrorKind::budget, "leaf Newton iteration did not converge (" + to_string(fl) + " leaf)");
            for (int k = 0; k < steps; ++k) {
                const Eigen::VectorXd pt = r[at(k)] + bp * e[at(k)];
                jac[at(k)] = bp_inv * (forward ? f_.jacobian(pt) : f_.inverse_jacobian(pt)) * bp;
            }
            // backward sweep for de_k^Q = S_k de_k^P + t_k
            sk[at(steps)] = Eigen::MatrixXd::Zero(q, p);
            tk[at(steps)] = Eigen::VectorXd::Zero(q);
            for (int k = steps - 1; k >= 0; --k) {
                const auto& m = jac[at(k)];
                const auto a = m.topLeftCorner(p, p);
                const auto b = m.topRightCorner(p, q);
                const auto c = m.bottomLeftCorner(q, p);
                const auto d = m.bottomRightCorner(q, q);
                const auto& s1 = sk[at(k) + 1];
                const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd(d - s1 * b));
                sk[at(k)] = lu.solve(s1 * a - c);
                const auto& rr = res[at(k)];
                tk[at(k)] = lu.solve(s1 * rr.head(p) + tk[at(k) + 1] - rr.tail(q));
            }
            de[0] = Eigen::VectorXd::Zero(n);
            de[0].tail(q) = tk[0];
            for (int k = 0; k < steps; ++k) {
                Eigen::VectorXd next(n);
                next.head(p) = jac[at(k)].topRows(p) * de[at(k)] + res[at(k)].head(p);
                next.tail(q) = sk[at(k) + 1] * next.head(p) + tk[at(k) + 1];
                de[at(k) + 1] = std::move(next);
            }
            // damped update: halve the step until the residual drops
            double lambda = 1;
            double trial_worst = 0;
            for (int halvings = 0;; ++halvings) {
                for (int k = 0; k <= steps; ++k) trial[at(k)] = e[at(k)] + lambda * de[at(k)];
                trial_worst = residuals(trial, trial_res, steps);
                if (trial_worst < worst || halvings >= 30) break;
                lambda /= 2;
            }
            if (!(trial_worst < worst) && trial_worst > options_.tol)
                throw Error(kModule, ErrorKind::budget, "leaf Newton iteration stalled (" + to_string(fl) + " leaf)");
            for (int k = 0; k <= steps; ++k) std::swap(e[at(k)], trial[at(k)]);
            for (int k = 0; k < steps; ++k) std::swap(res[at(k)], trial_res[at(k)]);
            worst = trial_worst;
        }
        solved = steps;
        if (steps == full) break;
    }
    for (int i = 0; i < n; ++i) out(lay.perm[static_cast<std::size_t>(i)]) = e[0](i);
    return out;
}

Eigen::VectorXd Foliations::solve_center(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    const int ds = s_.dim_s, dc = s_.dim_c, du = s_.dim_u;
    if (v.size() != dc) throw Error(kModule, ErrorKind::input, "center parameter has the wrong dimension");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    out.segment(ds, dc) = v;
    if (f_.is_linear() || dc == 0) return out;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(ds), b = Eigen::VectorXd::Zero(du);
    const double scale = 1 + sup_norm(v);
    for (int it = 0;; ++it) {
        if (it >= 100) throw Error(kModule, ErrorKind::budget, "center leaf alternation did not converge");
        Eigen::VectorXd pcu(dc + du), pcs(ds + dc);
        pcu << v, b;
        const Eigen::VectorXd a_new = solve(Flavor::cu, x, pcu).head(ds);
        pcs << a_new, v;
        const Eigen::VectorXd b_new = solve(Flavor::cs, x, pcs).tail(du);
        const double change = std::max(sup_norm(a_new - a), sup_norm(b_new - b));
        a = a_new;
        b = b_new;
        if (change <= 10 * options_.tol * scale) break;
    }
    out.head(ds) = a;
    out.tail(du) = b;
    return out;
}

Eigen::VectorXd Foliations::sigma(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    const Eigen::VectorXd e = f == Flavor::c ? solve_center(x, v) : solve(f, x, v);
    return x + s_.basis * e;
}

Eigen::VectorXd Foliations::graph(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    Eigen::VectorXd e = f == Flavor::c ? solve_center(x, v) : solve(f, x, v);
    e.segment(param_offset(f), param_dim(f)).setZero();
    return s_.basis * e;
}

double Foliations::leaf_residual(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& p) const {
    return length(p - sigma(f, x, param_of(f, p - x)));
}

Eigen::VectorXd unique_intersection(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                    IntersectionPair pair, int starts) {
    const Flavor first = pair == IntersectionPair::s_cu ? Flavor::s : Flavor::u;
    const Flavor second = pair == IntersectionPair::s_cu ? Flavor::cu : Flavor::cs;
    const int off1 = fol.param_offset(first), d1 = fol.param_dim(first);
    const int off2 = fol.param_offset(second);
    const Splitting& s = fol.splitting();
    if (starts <= 0) starts = fol.options().starts;

    // H(v) = 0 iff sigma^first_x(v) lies on the second leaf through y
    auto h = [&](const Eigen::VectorXd& v, Eigen::VectorXd* z_out) {
        const Eigen::VectorXd z = fol.sigma(first, x, v);
        const Eigen::VectorXd xi = s.basis_inverse * (z - y);
        const Eigen::VectorXd leaf = s.basis_inverse * fol.graph(second, y, xi.segment(off2, fol.param_dim(second)));
        if (z_out) *z_out = z;
        return Eigen::VectorXd(xi.segment(off1, d1) - leaf.segment(off1, d1));
    };

    const Eigen::VectorXd v0 = fol.param_of(first, y - x);
    std::mt19937_64 rng(0x1a7e);
    std::normal_distribution<double> gauss;
    std::vector<Eigen::VectorXd> found;
    for (int start = 0; start < starts; ++start) {
        Eigen::VectorXd v = v0;
        if (start > 0) {
            Eigen::VectorXd dir(d1);
            for (int i = 0; i < d1; ++i) dir(i) = gauss(rng);
            v += 0.5 * (1 + sup_norm(v0)) * dir / std::max(1e-300, dir.norm());
        }
        Eigen::VectorXd z;
        Eigen::VectorXd hv = h(v, &z);
        int it = 0;
        const double scale = 1 + sup_norm(v0) + sup_norm(s.basis_inverse * (y - x));
        while (sup_norm(hv) > 1e-12 * scale) {
            if (++it > 50) throw Error(kModule, ErrorKind::budget, "intersection Newton did not converge");
            Eigen::MatrixXd j(d1, d1);
            const double step = 1e-7 * (1 + sup_norm(v));
            for (int i = 0; i < d1; ++i) {
                Eigen::VectorXd vp = v;
                vp(i) += step;
                j.col(i) = (h(vp, nullptr) - hv) / step;
            }
            const Eigen::VectorXd dv = j.partialPivLu().solve(hv);
            double lambda = 1;
            Eigen::VectorXd vn, hn, zn;
            for (int halvings = 0;; ++halvings) {
                vn = v - lambda * dv;
                hn = h(vn, &zn);
                if (sup_norm(hn) < sup_norm(hv) || halvings >= 30) break;
                lambda /= 2;
            }
            if (!(sup_norm(hn) < sup_norm(hv)) && sup_norm(hn) > 1e-12 * scale)
                throw Error(kModule, ErrorKind::budget, "intersection Newton stalled");
            v = vn;
            hv = hn;
            z = zn;
        }
        found.push_back(z);
    }
    for (std::size_t i = 1; i < found.size(); ++i) {
        const double gap = sup_norm(found[i] - found[0]);
        if (gap > fol.options().agreement * std::max(1.0, sup_norm(found[0])))
            throw Error(kModule, ErrorKind::invariant,
                        "multi-start disagreement " + std::to_string(gap) + ": radius too small or perturbation too large");
    }
    return found[0];
}

Eigen::VectorXd GraphPatch::node(std::size_t index) const {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
        v(i) = -radius + step * static_cast<double>(index % static_cast<std::size_t>(per_axis));
        index /= static_cast<std::size_t>(per_axis);
    }
    return v;
}

Eigen::VectorXd GraphPatch::operator()(const Eigen::VectorXd& v) const {
    std::vector<int> lo(static_cast<std::size_t>(dim));
    std::vector<double> frac(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const double t = std::clamp((v(i) + radius) / step, 0.0, static_cast<double>(per_axis - 1));
        const int l = std::min(static_cast<int>(std::floor(t)), per_axis - 2);
        lo[static_cast<std::size_t>(i)] = l;
        frac[static_cast<std::size_t>(i)] = t - l;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(values.front().size());
    for (std::size_t corner = 0; corner < (std::size_t{1} << dim); ++corner) {
        std::size_t index = 0, stride = 1;
        double w = 1;
        for (int i = 0; i < dim; ++i) {
            const bool up = (corner >> i) & 1U;
            index += stride * static_cast<std::size_t>(lo[static_cast<std::size_t>(i)] + (up ? 1 : 0));
            w *= up ? frac[static_cast<std::size_t>(i)] : 1 - frac[static_cast<std::size_t>(i)];
            stride *= static_cast<std::size_t>(per_axis);
        }
        if (w != 0) out += w * values[index];
    }
    return out;
}

GraphPatch graph_transform(const Foliations& fol, Flavor flavor, const Eigen::VectorXd& x, const PatchOptions& options) {
    if (!(options.radius > 0) || !(options.step > 0)) throw Error(kModule, ErrorKind::input, "patch radius and step must be positive");
    if (fol.contraction_factor(flavor) >= 1)
        throw Error(kModule, ErrorKind::hypothesis,
                    "graph transform contraction factor " + std::to_string(fol.contraction_factor(flavor)) + " >= 1");
    GraphPatch patch;
    patch.flavor = flavor;
    patch.base = x;
    patch.radius = options.radius;
    patch.dim = fol.param_dim(flavor);
    if (patch.dim == 0) throw Error(kModule, ErrorKind::hypothesis, "empty " + to_string(flavor) + " direction");
    int per_axis = 2 * static_cast<int>(std::ceil(options.radius / options.step)) + 1;
    auto nodes = [&](int m) { return std::pow(static_cast<double>(m), patch.dim); };
    while (per_axis > 3 && nodes(per_axis) > static_cast<double>(options.node_budget)) per_axis -= 2;
    patch.per_axis = per_axis;
    patch.step = 2 * options.radius / (per_axis - 1);
    const std::size_t count = static_cast<std::size_t>(nodes(per_axis));
    patch.values.resize(count);
    parallel_for(count, [&](std::size_t i) { patch.values[i] = fol.graph(flavor, x, patch.node(i)); });

    for (std::size_t i = 0; i < count; ++i) {
        const Eigen::VectorXd v = patch.node(i);
        const double len = fol.param_length(flavor, v);
        if (len > 0 && len <= options.radius * (1 + 1e-12))
            patch.kappa_emp = std::max(patch.kappa_emp, fol.length(patch.values[i]) / len);
        std::size_t stride = 1, rest = i;
        for (int a = 0; a < patch.dim; ++a) {
            const std::size_t coord = rest % static_cast<std::size_t>(per_axis);
            rest /= static_cast<std::size_t>(per_axis);
            if (coord + 1 < static_cast<std::size_t>(per_axis)) {
                const double h = fol.param_length(flavor, Eigen::VectorXd::Unit(patch.dim, a) * patch.step);
                patch.lipschitz_emp = std::max(patch.lipschitz_emp, fol.length(patch.values[i + stride] - patch.values[i]) / h);
            }
            stride *= static_cast<std::size_t>(per_axis);
        }
    }

    const std::size_t samples = static_cast<std::size_t>(std::max(0, options.residual_samples));
    std::vector<double> inv(samples, 0), interp(samples, 0);
    const Eigen::VectorXd fx = fol.map()(x);
    parallel_for(samples, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(options.seed, k));
        std::uniform_real_distribution<double> box(-options.radius, options.radius);
        Eigen::VectorXd v(patch.dim);
        do {
            for (int i = 0; i < patch.dim; ++i) v(i) = box(rng);
        } while (fol.param_length(flavor, v) > options.radius);
        const Eigen::VectorXd g = fol.graph(flavor, x, v);
        const Eigen::VectorXd p = x + fol.embed(flavor, v) + g;
        const Eigen::VectorXd fp = fol.map()(p);
        const Eigen::VectorXd v2 = fol.param_of(flavor, fp - fx);
        inv[k] = fol.length(fp - fol.sigma(flavor, fx, v2));
        interp[k] = fol.length(patch(v) - g);
    });
    for (std::size_t k = 0; k < samples; ++k) {
        patch.invariance_residual = std::max(patch.invariance_residual, inv[k]);
        patch.interpolation_error = std::max(patch.interpolation_error, interp[k]);
    }
    if (patch.invariance_residual > 10 * options.tol)
        throw Error(kModule, ErrorKind::invariant, "graph invariance residual " + std::to_string(patch.invariance_residual));
    return patch;
}

KappaEstimate estimate_kappa(const Foliations& fol, std::size_t samples, double radius, std::uint64_t seed) {
    std::vector<Flavor> flavors;
    for (Flavor f : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu})
        if (fol.param_dim(f) > 0) flavors.push_back(f);
    std::vector<double> ratio(samples, 0);
    parallel_for(samples, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        std::uniform_real_distribution<double> unit(0, 1);
        std::normal_distribution<double> gauss;
        const Flavor f = flavors[k % flavors.size()];
        Eigen::VectorXd x(fol.dim());
        for (int i = 0; i < fol.dim(); ++i) x(i) = unit(rng);
        Eigen::VectorXd v(fol.param_dim(f));
        for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
        v *= radius * std::max(1e-3, unit(rng)) / fol.param_length(f, v);
        ratio[k] = fol.length(fol.graph(f, x, v)) / fol.param_length(f, v);
    });
    KappaEstimate out;
    out.samples = samples;
    for (std::size_t k = 0; k < samples; ++k)
        if (ratio[k] > out.kappa) {
            out.kappa = ratio[k];
            out.worst = flavors[k % flavors.size()];
        }
    return out;
}

}  // namespace toral
