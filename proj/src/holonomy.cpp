#include "toral/holonomy.hpp"

#include <cmath>
#include <random>
#include <set>

#include "toral/error.hpp"
#include "toral/experiment.hpp"

namespace toral {
namespace {

const char* kModule = "perturbed-dynamics";

Eigen::VectorXd random_box(std::mt19937_64& rng, int dim, double half) {
    std::uniform_real_distribution<double> box(-half, half);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = box(rng);
    return v;
}

Eigen::VectorXd random_direction(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(dim);
    do {
        for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

double log_plus(double t) { return t > 1 ? std::log(t) : 0.0; }

/// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 2) return 0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0;
}

void require_center(const Foliations& fol) {
    if (fol.param_dim(Flavor::c) == 0) throw Error(kModule, ErrorKind::hypothesis, "no center direction");
}

/// Holonomy along one leg from W^c(a) to W^c(b), b on the s or u leaf of a.
Eigen::VectorXd leg_holonomy(const Foliations& fol, Flavor leg, const Eigen::VectorXd& q, const Eigen::VectorXd& b) {
    return unique_intersection(fol, q, b, leg == Flavor::s ? IntersectionPair::s_cu : IntersectionPair::u_cs, 1);
}

}  // namespace

Eigen::VectorXd pi_u(const Foliations& fol, const Eigen::VectorXd& z, int starts) {
    return unique_intersection(fol, z, Eigen::VectorXd::Zero(fol.dim()), IntersectionPair::u_cs, starts);
}

Eigen::VectorXd pi_s(const Foliations& fol, const Eigen::VectorXd& z, int starts) {
    return unique_intersection(fol, z, Eigen::VectorXd::Zero(fol.dim()), IntersectionPair::s_cu, starts);
}

Eigen::VectorXd pi_su(const Foliations& fol, const Eigen::VectorXd& z, int starts) {
    return pi_s(fol, pi_u(fol, z, starts), starts);
}

Eigen::VectorXd center_chart(const Foliations& fol, const Eigen::VectorXd& x) {
    return fol.sigma(Flavor::c, Eigen::VectorXd::Zero(fol.dim()), x);
}

Eigen::VectorXd center_coordinates(const Foliations& fol, const Eigen::VectorXd& p) { return fol.param_of(Flavor::c, p); }

Eigen::VectorXd t_hat(const Foliations& fol, const Eigen::VectorXd& n, const Eigen::VectorXd& p, int starts) {
    return pi_su(fol, p + n, starts);
}

Eigen::VectorXd t_n(const Foliations& fol, const Eigen::VectorXd& n, const Eigen::VectorXd& x, int starts) {
    require_center(fol);
    if (fol.map().is_linear()) return x + fol.param_of(Flavor::c, n);
    return center_coordinates(fol, t_hat(fol, n, center_chart(fol, x), starts));
}

Eigen::VectorXd t_n(const Foliations& fol, const IntVector& n, const Eigen::VectorXd& x, int starts) {
    return t_n(fol, to_eigen(n), x, starts);
}

double commutation_defect(const Foliations& fol, const IntVector& n, const IntVector& m, std::size_t samples,
                          std::uint64_t seed) {
    require_center(fol);
    const Eigen::VectorXd nv = to_eigen(n), mv = to_eigen(m);
    std::vector<double> defect(samples, 0);
    parallel_for(samples, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        const Eigen::VectorXd x = random_box(rng, fol.param_dim(Flavor::c), 1);
        defect[k] = (t_n(fol, nv, t_n(fol, mv, x)) - t_n(fol, nv + mv, x)).norm();
    });
    double worst = 0;
    for (double d : defect) worst = std::max(worst, d);
    return worst;
}

TnDeviation tn_deviation(const Foliations& fol, const IntVector& n, std::size_t samples, std::uint64_t seed) {
    require_center(fol);
    const Eigen::VectorXd nv = to_eigen(n);
    const Eigen::VectorXd nc = fol.param_of(Flavor::c, nv);
    std::vector<double> dev(samples, 0);
    parallel_for(samples, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        const Eigen::VectorXd x = random_box(rng, fol.param_dim(Flavor::c), 1);
        dev[k] = (t_n(fol, nv, x) - x - nc).norm();
    });
    TnDeviation out;
    out.n = n;
    out.norm = fol.length(nv);
    for (double d : dev) out.deviation = std::max(out.deviation, d);
    return out;
}

TnLogFit tn_log_fit(const Foliations& fol, const std::vector<IntVector>& ns, std::size_t samples, std::uint64_t seed) {
    TnLogFit fit;
    for (std::size_t i = 0; i < ns.size(); ++i) fit.rows.push_back(tn_deviation(fol, ns[i], samples, derive_seed(seed, i)));
    std::vector<double> xs, ys;
    for (const auto& r : fit.rows) {
        fit.c = std::max(fit.c, r.deviation / (log_plus(r.norm) + 1));
        if (r.norm >= 2 && r.deviation > 0) {
            xs.push_back(std::log(1 + log_plus(r.norm)));
            ys.push_back(std::log(r.deviation));
        }
    }
    fit.exponent = slope(xs, ys);
    return fit;
}

std::vector<IntVector> sample_lattice_vectors(const Splitting& s, const AdaptedNorm& an, double max_norm, std::size_t count,
                                              std::uint64_t seed) {
    if (!(max_norm >= 1)) throw Error(kModule, ErrorKind::input, "max_norm must be at least 1");
    std::mt19937_64 rng(seed);
    std::vector<IntVector> out;
    std::set<std::vector<long>> seen;
    const int n = s.dim();
    for (std::size_t attempt = 0; out.size() < count && attempt < 100 * count + 100; ++attempt) {
        const double t = count > 1 ? static_cast<double>(out.size()) / static_cast<double>(count - 1) : 1.0;
        const double target = std::exp(t * std::log(max_norm));
        const Eigen::VectorXd d = random_direction(rng, n);
        const Eigen::VectorXd v = d * (target / an(s, d));
        std::vector<long> key(static_cast<std::size_t>(n));
        IntVector iv(static_cast<std::size_t>(n));
        Eigen::VectorXd rounded(n);
        for (int i = 0; i < n; ++i) {
            key[static_cast<std::size_t>(i)] = std::lround(v(i));
            iv[static_cast<std::size_t>(i)] = key[static_cast<std::size_t>(i)];
            rounded(i) = static_cast<double>(key[static_cast<std::size_t>(i)]);
        }
        const double norm = an(s, rounded);
        if (norm < 1 || norm > max_norm || !seen.insert(key).second) continue;
        out.push_back(iv);
    }
    return out;
}

HolonomyProbe holonomy_lipschitz_probe(const Foliations& fol, int max_legs, double max_length, std::size_t shapes,
                                       std::uint64_t seed) {
    require_center(fol);
    if (max_legs < 1 || !(max_length > 0)) throw Error(kModule, ErrorKind::input, "need at least one leg and positive length");
    constexpr double kShortest = 0.25;
    constexpr double kStep = 1e-3;
    std::vector<double> lengths;
    for (double l = max_length; l >= kShortest; l /= 2) lengths.push_back(l);
    if (lengths.empty()) lengths.push_back(max_length);
    const int dc = fol.param_dim(Flavor::c);

    std::vector<std::vector<PathLipschitz>> per_shape(shapes);
    parallel_for(shapes, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        std::uniform_int_distribution<int> leg_count(1, max_legs);
        std::uniform_real_distribution<double> unit(0, 1);
        const int legs = leg_count(rng);
        const bool stable_first = unit(rng) < 0.5;
        std::vector<Flavor> kinds;
        std::vector<Eigen::VectorXd> dirs;
        std::vector<double> shares;
        double total = 0;
        for (int j = 0; j < legs; ++j) {
            const Flavor f = (j % 2 == 0) == stable_first ? Flavor::s : Flavor::u;
            kinds.push_back(f);
            const Eigen::VectorXd d = random_direction(rng, fol.param_dim(f));
            dirs.push_back(d / fol.param_length(f, d));
            shares.push_back(0.1 + unit(rng));
            total += shares.back();
        }
        const Eigen::VectorXd x0 = random_box(rng, fol.dim(), 0.5);
        const Eigen::VectorXd w0 = random_box(rng, dc, 0.5);

        // chart directions: coordinate axes and diagonals of the first two
        std::vector<Eigen::VectorXd> probes;
        for (int i = 0; i < dc; ++i) probes.push_back(Eigen::VectorXd::Unit(dc, i));
        if (dc >= 2) {
            probes.push_back((Eigen::VectorXd::Unit(dc, 0) + Eigen::VectorXd::Unit(dc, 1)) / std::sqrt(2.0));
            probes.push_back((Eigen::VectorXd::Unit(dc, 0) - Eigen::VectorXd::Unit(dc, 1)) / std::sqrt(2.0));
        }

        for (double len : lengths) {
            std::vector<Eigen::VectorXd> corners{x0};
            for (int j = 0; j < legs; ++j)
                corners.push_back(fol.sigma(kinds[static_cast<std::size_t>(j)], corners.back(),
                                            dirs[static_cast<std::size_t>(j)] * (len * shares[static_cast<std::size_t>(j)] / total)));
            auto follow = [&](Eigen::VectorXd q) {
                for (int j = 0; j < legs; ++j)
                    q = leg_holonomy(fol, kinds[static_cast<std::size_t>(j)], q, corners[static_cast<std::size_t>(j) + 1]);
                return q;
            };
            const Eigen::VectorXd q0 = fol.sigma(Flavor::c, x0, w0);
            const Eigen::VectorXd h0 = follow(q0);
            double lip = 0;
            for (const auto& e : probes) {
                const Eigen::VectorXd q1 = fol.sigma(Flavor::c, x0, w0 + kStep * e);
                lip = std::max(lip, fol.length(follow(q1) - h0) / fol.length(q1 - q0));
            }
            per_shape[k].push_back({legs, len, lip});
        }
    });

    HolonomyProbe probe;
    for (const auto& rows : per_shape)
        for (const auto& r : rows) probe.paths.push_back(r);
    // log Lip = K log C + K beta log L: two-parameter least squares through the origin
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (const auto& r : probe.paths) {
        probe.sup_lipschitz = std::max(probe.sup_lipschitz, r.lipschitz);
        const double u = r.legs, w = r.legs * std::log(r.length), y = std::log(r.lipschitz);
        a11 += u * u, a12 += u * w, a22 += w * w, b1 += u * y, b2 += w * y;
    }
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) > 1e-12 * std::max(1.0, a11 * a22)) {
        probe.c_emp = std::exp((b1 * a22 - b2 * a12) / det);
        probe.beta_emp = (a11 * b2 - a12 * b1) / det;
    } else if (a11 > 0) {
        probe.c_emp = std::exp(b1 / a11);
    }
    return probe;
}

double tn_lipschitz(const Foliations& fol, const IntVector& n, const Eigen::VectorXd& x) {
    require_center(fol);
    constexpr double kStep = 1e-3;
    const Eigen::VectorXd nv = to_eigen(n);
    const int dc = fol.param_dim(Flavor::c);
    const Eigen::VectorXd p0 = center_chart(fol, x);
    const Eigen::VectorXd h0 = t_hat(fol, nv, p0);
    double lip = 0;
    for (int i = 0; i < dc; ++i) {
        const Eigen::VectorXd p1 = center_chart(fol, x + kStep * Eigen::VectorXd::Unit(dc, i));
        lip = std::max(lip, fol.length(t_hat(fol, nv, p1) - h0) / fol.length(p1 - p0));
    }
    return lip;
}

TnLipschitzFit tn_lipschitz_fit(const Foliations& fol, const std::vector<IntVector>& ns, std::uint64_t seed) {
    TnLipschitzFit fit;
    fit.rows.resize(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        const Eigen::VectorXd x = random_box(rng, fol.param_dim(Flavor::c), 1);
        fit.rows[i] = {fol.length(to_eigen(ns[i])), tn_lipschitz(fol, ns[i], x)};
    });
    std::vector<double> xs, ys;
    for (const auto& [norm, lip] : fit.rows) {
        xs.push_back(std::log(norm));
        ys.push_back(std::log(lip));
    }
    fit.beta = slope(xs, ys);
    fit.c = 0;
    for (const auto& [norm, lip] : fit.rows) fit.c = std::max(fit.c, lip / std::pow(norm, fit.beta));
    return fit;
}

}  // namespace toral
