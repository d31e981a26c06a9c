#include "toral/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "toral/error.hpp"
#include "toral/experiment.hpp"

namespace toral {
namespace {

// Lattice coordinates a map to y = T a, with the adapted norm equal to
// |y_s| + |y_c| + |y_u| (Euclidean on each block after a Cholesky change of
// variables). Enumeration walks the ellipsoid |y|^2 <= radius^2, which
// contains the ball, and filters.
struct Enumerator {
    std::size_t d = 0;
    int ds = 0, dc = 0, du = 0;
    Eigen::MatrixXd t;
    std::vector<double> q_diag;
    Eigen::MatrixXd mu;
    double radius = 0;

    Enumerator(const Lattice& lambda, const Splitting& split, const AdaptedNorm& norm, double r)
        : d(lambda.rank()), ds(split.dim_s), dc(split.dim_c), du(split.dim_u), radius(r) {
        const int n = split.dim();
        Eigen::MatrixXd b(n, static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) b.col(static_cast<Eigen::Index>(i)) = to_eigen(lambda.basis()[i]);
        Eigen::MatrixXd root = Eigen::MatrixXd::Zero(n, n);
        auto put = [&](int off, int dim, const Eigen::MatrixXd& g) {
            if (dim == 0) return;
            Eigen::LLT<Eigen::MatrixXd> llt(g);
            if (llt.info() != Eigen::Success) throw Error("diophantine", ErrorKind::invariant, "adapted Gram matrix is not definite");
            root.block(off, off, dim, dim) = llt.matrixU();
        };
        put(0, ds, norm.gram_s);
        put(ds, dc, norm.gram_c);
        put(ds + dc, du, norm.gram_u);
        t = root * split.basis_inverse * b;
        Eigen::LLT<Eigen::MatrixXd> llt(t.transpose() * t);
        if (llt.info() != Eigen::Success) throw Error("diophantine", ErrorKind::invariant, "lattice quadratic form is not definite");
        const Eigen::MatrixXd r_upper = llt.matrixU();
        q_diag.resize(d);
        mu = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            q_diag[i] = r_upper(ii, ii) * r_upper(ii, ii);
            for (std::size_t j = i + 1; j < d; ++j) mu(ii, static_cast<Eigen::Index>(j)) = r_upper(ii, static_cast<Eigen::Index>(j)) / r_upper(ii, ii);
        }
    }

    std::pair<long, long> range(std::size_t i, const std::vector<long>& a, double remaining, double& center) const {
        const auto ii = static_cast<Eigen::Index>(i);
        center = 0;
        for (std::size_t j = i + 1; j < d; ++j) center -= mu(ii, static_cast<Eigen::Index>(j)) * static_cast<double>(a[j]);
        const double r = std::sqrt(std::max(0.0, remaining) / q_diag[i]) + 1e-9;
        return {static_cast<long>(std::ceil(center - r)), static_cast<long>(std::floor(center + r))};
    }

    struct Work {
        std::vector<long> a;
        std::vector<Eigen::VectorXd> partial;  // partial[i] = sum_{j >= i} a_j T_j
    };

    Work work() const {
        Work w;
        w.a.assign(d, 0);
        w.partial.assign(d + 1, Eigen::VectorXd::Zero(t.rows()));
        return w;
    }

    // Visits every nonzero point with a_{d-1} = top and adapted norm <= radius.
    template <class Emit>
    void slab(long top, Work& w, Emit& emit) const {
        double center = 0;
        std::fill(w.a.begin(), w.a.end(), 0);
        const auto [lo, hi] = range(d - 1, w.a, radius * radius, center);
        if (top < lo || top > hi) return;
        const double dx = static_cast<double>(top) - center;
        w.a[d - 1] = top;
        w.partial[d - 1].noalias() = static_cast<double>(top) * t.col(static_cast<Eigen::Index>(d - 1));
        recurse(d - 1, w, radius * radius - q_diag[d - 1] * dx * dx, emit);
    }

    template <class Emit>
    void recurse(std::size_t level, Work& w, double remaining, Emit& emit) const {
        // level = index of the last fixed coordinate
        if (level == 0) {
            const Eigen::VectorXd& y = w.partial[0];
            bool zero = true;
            for (long c : w.a) zero = zero && c == 0;
            if (zero) return;
            const double ps = ds ? y.segment(0, ds).norm() : 0.0;
            const double pc = dc ? y.segment(ds, dc).norm() : 0.0;
            const double pu = du ? y.segment(ds + dc, du).norm() : 0.0;
            const double nn = ps + pc + pu;
            if (nn <= radius) emit(w.a, nn, pc);
            return;
        }
        const std::size_t i = level - 1;
        double center = 0;
        const auto [lo, hi] = range(i, w.a, remaining, center);
        for (long x = lo; x <= hi; ++x) {
            const double dx = static_cast<double>(x) - center;
            const double used = q_diag[i] * dx * dx;
            if (used > remaining * (1 + 1e-12) + 1e-12) continue;
            w.a[i] = x;
            w.partial[i].noalias() = w.partial[i + 1] + static_cast<double>(x) * t.col(static_cast<Eigen::Index>(i));
            recurse(i, w, remaining - used, emit);
        }
        w.a[i] = 0;
    }

    std::pair<long, long> top_range() const {
        std::vector<long> a(d, 0);
        double center = 0;
        return range(d - 1, a, radius * radius, center);
    }
};

bool key_less(double n1, const std::int32_t* c1, double n2, const std::int32_t* c2, std::size_t d) {
    if (n1 != n2) return n1 < n2;
    return std::lexicographical_compare(c1, c1 + d, c2, c2 + d);
}

void push_coords(std::vector<std::int32_t>& out, const std::vector<long>& a) {
    for (long c : a) {
        if (c > INT32_MAX || c < INT32_MIN) throw Error("diophantine", ErrorKind::budget, "coordinate overflow");
        out.push_back(static_cast<std::int32_t>(c));
    }
}

// Reorders a scan into (norm, lexicographic coordinates) order.
BallScan sorted(BallScan in) {
    const std::size_t d = in.dim;
    std::vector<std::size_t> order(in.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return key_less(in.norm[x], &in.coords[x * d], in.norm[y], &in.coords[y * d], d);
    });
    BallScan out;
    out.dim = d;
    out.coords.reserve(in.coords.size());
    out.norm.reserve(order.size());
    out.center_norm.reserve(order.size());
    for (std::size_t i : order) {
        out.coords.insert(out.coords.end(), in.coords.begin() + static_cast<std::ptrdiff_t>(i * d),
                          in.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
        out.norm.push_back(in.norm[i]);
        out.center_norm.push_back(in.center_norm[i]);
    }
    return out;
}

void append(BallScan& to, BallScan& from) {
    to.coords.insert(to.coords.end(), from.coords.begin(), from.coords.end());
    to.norm.insert(to.norm.end(), from.norm.begin(), from.norm.end());
    to.center_norm.insert(to.center_norm.end(), from.center_norm.begin(), from.center_norm.end());
    from = BallScan{};
}

void check_args(const Lattice& lambda, double radius) {
    if (lambda.rank() == 0) throw Error("diophantine", ErrorKind::input, "empty lattice");
    if (!(radius > 0)) throw Error("diophantine", ErrorKind::input, "search radius must be positive");
}

IntVector ambient_from_coords(const Lattice& lambda, const IntVector& coords) {
    IntVector n(lambda.ambient_dim(), BigInt(0));
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = 0; j < n.size(); ++j) n[j] += coords[i] * lambda.basis()[i][j];
    return n;
}

}  // namespace

IntVector BallScan::coordinates(std::size_t i) const {
    IntVector c(dim);
    for (std::size_t j = 0; j < dim; ++j) c[j] = static_cast<long>(coords[i * dim + j]);
    return c;
}

IntVector BallScan::ambient(const Lattice& lambda, std::size_t i) const { return ambient_from_coords(lambda, coordinates(i)); }

BallScan scan_ball(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, double radius) {
    check_args(lambda, radius);
    const Enumerator en(lambda, s, an, radius);
    const auto [lo, hi] = en.top_range();
    const std::size_t slabs = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
    std::vector<BallScan> parts(slabs);
    parallel_for(slabs, [&](std::size_t k) {
        BallScan& part = parts[k];
        part.dim = en.d;
        auto w = en.work();
        auto emit = [&](const std::vector<long>& a, double nn, double cn) {
            push_coords(part.coords, a);
            part.norm.push_back(nn);
            part.center_norm.push_back(cn);
        };
        en.slab(lo + static_cast<long>(k), w, emit);
    });
    BallScan all;
    all.dim = en.d;
    for (auto& p : parts) append(all, p);
    return sorted(std::move(all));
}

std::size_t count_ball(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, double radius) {
    check_args(lambda, radius);
    const Enumerator en(lambda, s, an, radius);
    const auto [lo, hi] = en.top_range();
    const std::size_t slabs = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
    std::vector<std::size_t> counts(slabs, 0);
    parallel_for(slabs, [&](std::size_t k) {
        auto w = en.work();
        auto emit = [&](const std::vector<long>&, double, double) { ++counts[k]; };
        en.slab(lo + static_cast<long>(k), w, emit);
    });
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::vector<LatticePoint> enumerate_ball(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, double radius) {
    const BallScan scan = scan_ball(lambda, s, an, radius);
    std::vector<LatticePoint> out;
    out.reserve(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) {
        LatticePoint p;
        p.coords = scan.coordinates(i);
        p.n = ambient_from_coords(lambda, p.coords);
        p.norm = scan.norm[i];
        p.center_norm = scan.center_norm[i];
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<LatticePoint> smallest_points(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, std::size_t count) {
    double radius = 1;
    for (const auto& b : lambda.basis()) radius = std::max(radius, an(s, to_eigen(b)));
    for (int attempt = 0; attempt < 60; ++attempt) {
        auto pts = enumerate_ball(lambda, s, an, radius);
        if (pts.size() >= count) {
            // points of equal norm straddling the cut are kept or dropped together
            while (pts.size() > count && pts[pts.size() - 1].norm != pts[count - 1].norm) pts.pop_back();
            pts.resize(std::min(pts.size(), count));
            return pts;
        }
        radius *= 1.25;
    }
    throw Error("diophantine", ErrorKind::budget, "could not collect enough lattice points");
}

DiophantineReport center_norm_minimum(const PASubspace& pa, const Splitting& s, const AdaptedNorm& an, double radius,
                                      const ScanOptions& options) {
    if (radius < 1) throw Error("diophantine", ErrorKind::input, "search radius must be at least 1");
    DiophantineReport rep;
    rep.r = pa.dim_x / 2;
    rep.search_radius = radius;
    const Enumerator en(pa.lambda, s, an, radius);
    const std::size_t d = en.d;
    const auto [lo, hi] = en.top_range();
    const std::size_t slabs = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;

    std::vector<long> slab_value(slabs);
    std::iota(slab_value.begin(), slab_value.end(), lo);
    std::optional<std::mt19937_64> rng;
    if (options.shuffle_seed) {
        rng.emplace(*options.shuffle_seed);
        std::shuffle(slab_value.begin(), slab_value.end(), *rng);
    }
    std::vector<std::uint64_t> slab_seed(slabs);
    for (auto& x : slab_seed) x = rng ? (*rng)() : 0;

    struct Partial {
        std::size_t count = 0;
        double best = std::numeric_limits<double>::infinity();
        BallScan records, witnesses, kept;
        std::vector<double> witness_ratio;
    };
    std::vector<Partial> parts(slabs);
    const double r = rep.r;
    const std::size_t wc = options.witness_count;
    parallel_for(slabs, [&](std::size_t k) {
        Partial& out = parts[k];
        BallScan local;
        local.dim = d;
        auto w = en.work();
        auto emit = [&](const std::vector<long>& a, double nn, double cn) {
            if (cn <= 1e-13 * nn) {
                IntVector c(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
                throw Error("diophantine", ErrorKind::hypothesis,
                            "lattice vector with vanishing center part " + to_string(ambient_from_coords(pa.lambda, c)));
            }
            push_coords(local.coords, a);
            local.norm.push_back(nn);
            local.center_norm.push_back(cn);
        };
        en.slab(slab_value[k], w, emit);
        if (options.shuffle_seed) {
            // permute before sorting; nothing downstream may depend on emission order
            std::mt19937_64 g(slab_seed[k]);
            BallScan shuffled;
            shuffled.dim = d;
            std::vector<std::size_t> perm(local.size());
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::shuffle(perm.begin(), perm.end(), g);
            for (std::size_t i : perm) {
                shuffled.coords.insert(shuffled.coords.end(), local.coords.begin() + static_cast<std::ptrdiff_t>(i * d),
                                       local.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
                shuffled.norm.push_back(local.norm[i]);
                shuffled.center_norm.push_back(local.center_norm[i]);
            }
            local = std::move(shuffled);
        }
        local = sorted(std::move(local));
        out.count = local.size();
        out.records.dim = out.witnesses.dim = d;
        double running = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, std::size_t>> ratios;
        for (std::size_t i = 0; i < local.size(); ++i) {
            const double q = local.center_norm[i] * std::pow(local.norm[i], r);
            out.best = std::min(out.best, q);
            ratios.emplace_back(q, i);
            if (local.center_norm[i] < running) {
                running = local.center_norm[i];
                out.records.coords.insert(out.records.coords.end(), &local.coords[i * d], &local.coords[i * d] + d);
                out.records.norm.push_back(local.norm[i]);
                out.records.center_norm.push_back(running);
            }
        }
        const std::size_t keep = std::min(wc, ratios.size());
        std::partial_sort(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(keep), ratios.end());
        for (std::size_t j = 0; j < keep; ++j) {
            const std::size_t i = ratios[j].second;
            out.witnesses.coords.insert(out.witnesses.coords.end(), &local.coords[i * d], &local.coords[i * d] + d);
            out.witnesses.norm.push_back(local.norm[i]);
            out.witnesses.center_norm.push_back(local.center_norm[i]);
            out.witness_ratio.push_back(ratios[j].first);
        }
        if (options.keep_points) out.kept = std::move(local);
    });

    BallScan records, witnesses, kept;
    records.dim = witnesses.dim = kept.dim = d;
    std::vector<double> witness_ratio;
    double best = std::numeric_limits<double>::infinity();
    for (auto& p : parts) {
        rep.point_count += p.count;
        best = std::min(best, p.best);
        append(records, p.records);
        witness_ratio.insert(witness_ratio.end(), p.witness_ratio.begin(), p.witness_ratio.end());
        append(witnesses, p.witnesses);
        if (options.keep_points) append(kept, p.kept);
    }
    rep.c_prime_empirical = rep.point_count ? best : 0.0;

    std::vector<std::size_t> by_ratio(witnesses.size());
    std::iota(by_ratio.begin(), by_ratio.end(), std::size_t{0});
    std::sort(by_ratio.begin(), by_ratio.end(), [&](std::size_t x, std::size_t y) {
        if (witness_ratio[x] != witness_ratio[y]) return witness_ratio[x] < witness_ratio[y];
        return key_less(witnesses.norm[x], &witnesses.coords[x * d], witnesses.norm[y], &witnesses.coords[y * d], d);
    });
    for (std::size_t i = 0; i < std::min(wc, by_ratio.size()); ++i) {
        const std::size_t j = by_ratio[i];
        rep.witnesses.push_back({witnesses.ambient(pa.lambda, j), witnesses.norm[j], witnesses.center_norm[j], witness_ratio[j]});
    }

    // running minima of |n^c| in scan order; every global record is a record of its own slab
    records = sorted(std::move(records));
    std::vector<double> xs, ys;
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records.center_norm[i] < running) {
            running = records.center_norm[i];
            if (records.norm[i] >= 2) {
                xs.push_back(std::log(records.norm[i]));
                ys.push_back(std::log(running));
            }
        }
    }
    rep.slope_points = xs.size();
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        rep.slope = sxx > 0 ? sxy / sxx : 0.0;
    }
    if (options.keep_points) rep.scan = sorted(std::move(kept));
    return rep;
}

RMap r_map(const Splitting& s, const Lattice& lambda) {
    if (s.dim_c != 2) throw Error("diophantine", ErrorKind::hypothesis, "R needs a two-dimensional center");
    const std::size_t d = lambda.rank();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            Eigen::Matrix2d e;
            e.col(0) = s.component_coordinates(to_eigen(lambda.basis()[i]), ModulusClass::center);
            e.col(1) = s.component_coordinates(to_eigen(lambda.basis()[j]), ModulusClass::center);
            if (std::abs(e.determinant()) < 1e-9 * e.norm() * e.norm()) continue;
            return RMap{e.inverse(), i, j};
        }
    throw Error("diophantine", ErrorKind::invariant, "no pair of lattice vectors with independent center parts");
}

double torus_distance(const Eigen::Vector2d& x) {
    return std::max(std::abs(x(0) - std::round(x(0))), std::abs(x(1) - std::round(x(1))));
}

double simultaneous_constant(const Eigen::Vector2d& alpha, long k_max, double delta) {
    double best = std::numeric_limits<double>::infinity();
    for (long k = 1; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        best = std::min(best, torus_distance(kd * alpha) * std::pow(kd, 2 + delta));
    }
    return best;
}

double linear_form_constant(const Eigen::Vector2d& alpha1, const Eigen::Vector2d& alpha2, long k_max) {
    double best = std::numeric_limits<double>::infinity();
    auto frac = [](double v) { return std::abs(v - std::round(v)); };
    // half-plane: k and -k give the same value
    for (long k1 = 0; k1 <= k_max; ++k1)
        for (long k2 = -k_max; k2 <= k_max; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            const double a = static_cast<double>(k1), b = static_cast<double>(k2);
            const double size = std::max(std::abs(a), std::abs(b));
            const double v = std::max(frac(a * alpha1(0) + b * alpha1(1)), frac(a * alpha2(0) + b * alpha2(1)));
            best = std::min(best, v * size * size);
        }
    return best;
}

BadlyApproximable badly_approximable_search_dim6(const PASubspace& pa, const Splitting& s, const AdaptedNorm& an,
                                                 std::size_t candidate_count, long k_max, double delta) {
    if (pa.dim_x < 6) throw Error("diophantine", ErrorKind::hypothesis, "dim X < 6: use the dim-4 search");
    const RMap r = r_map(s, pa.lambda);
    const auto cands = smallest_points(pa.lambda, s, an, candidate_count);
    std::vector<double> score(cands.size());
    parallel_for(cands.size(), [&](std::size_t i) {
        score[i] = simultaneous_constant(r(s, to_eigen(cands[i].n)), k_max, delta);
    });
    BadlyApproximable best;
    best.c_emp = -1;
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (score[i] > best.c_emp) {
            best.c_emp = score[i];
            best.n1 = cands[i].n;
            best.alpha1 = r(s, to_eigen(cands[i].n));
        }
    return best;
}

BadlyApproximable badly_approximable_search_dim4(const PASubspace& pa, const Splitting& s, const AdaptedNorm& an,
                                                 std::size_t candidate_count, long k_max) {
    if (pa.dim_x != 4) throw Error("diophantine", ErrorKind::hypothesis, "dim X != 4");
    const RMap r = r_map(s, pa.lambda);
    const auto cands = smallest_points(pa.lambda, s, an, candidate_count);
    std::vector<Eigen::Vector2d> alpha;
    for (const auto& c : cands) alpha.push_back(r(s, to_eigen(c.n)));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = i; j < cands.size(); ++j) pairs.emplace_back(i, j);
    std::vector<double> score(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
        score[p] = linear_form_constant(alpha[pairs[p].first], alpha[pairs[p].second], k_max);
    });
    BadlyApproximable best;
    best.c_emp = -1;
    bool best_independent = false;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const bool independent = pairs[p].first != pairs[p].second;
        if (score[p] > best.c_emp || (score[p] == best.c_emp && independent && !best_independent)) {
            best.c_emp = score[p];
            best_independent = independent;
            best.n1 = cands[pairs[p].first].n;
            best.n2 = cands[pairs[p].second].n;
            best.alpha1 = alpha[pairs[p].first];
            best.alpha2 = alpha[pairs[p].second];
        }
    }
    return best;
}

}  // namespace toral
