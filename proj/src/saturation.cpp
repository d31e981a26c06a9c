#include "toral/saturation.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

#include "toral/diophantine.hpp"
#include "toral/error.hpp"
#include "toral/experiment.hpp"

namespace toral {
namespace {

const char* kModule = "saturation-topology";

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Eigen::MatrixXd upper_root(const Eigen::MatrixXd& g) {
    if (g.rows() == 0) return g;
    return Eigen::LLT<Eigen::MatrixXd>(g).matrixU();
}

/// Coordinates in which each block norm is Euclidean: u = T p, p = T^{-1} u.
struct AdaptedFrame {
    int ds = 0, dc = 0, du = 0;
    std::array<Eigen::MatrixXd, 3> root, root_inv;  // s, c, u
    Eigen::MatrixXd t, t_inv;

    AdaptedFrame(const Splitting& s, const AdaptedNorm& an) : ds(s.dim_s), dc(s.dim_c), du(s.dim_u) {
        const std::array<const Eigen::MatrixXd*, 3> grams{&an.gram_s, &an.gram_c, &an.gram_u};
        const int n = s.dim();
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
        int offset = 0;
        for (std::size_t b = 0; b < 3; ++b) {
            root[b] = upper_root(*grams[b]);
            root_inv[b] = root[b].rows() ? Eigen::MatrixXd(root[b].inverse()) : root[b];
            r.block(offset, offset, root[b].rows(), root[b].rows()) = root[b];
            offset += static_cast<int>(root[b].rows());
        }
        t = r * s.basis_inverse;
        t_inv = s.basis * r.inverse();
    }

    /// Adapted norm from adapted coordinates.
    double norm(const Eigen::VectorXd& u) const {
        return u.segment(0, ds).norm() + u.segment(ds, dc).norm() + u.segment(ds + dc, du).norm();
    }
};

/// Uniform point of the Euclidean ball of the given dimension and radius.
Eigen::VectorXd uniform_ball(std::mt19937_64& rng, int dim, double radius) {
    if (dim == 0) return Eigen::VectorXd(0);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0, 1);
    Eigen::VectorXd v(dim);
    do {
        for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-300);
    return v * (radius * std::pow(unit(rng), 1.0 / dim) / v.norm());
}

Eigen::VectorXd block_coords(const Foliations& fol, Flavor f, const Eigen::VectorXd& v) {
    return fol.param_of(f, v);
}

struct VectorHash {
    std::size_t operator()(const std::vector<long>& v) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (long x : v) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
        return static_cast<std::size_t>(h);
    }
};

using CellMap = std::unordered_map<std::vector<long>, std::vector<std::size_t>, VectorHash>;

std::vector<long> cell_of(const Eigen::VectorXd& u, double h) {
    std::vector<long> key(static_cast<std::size_t>(u.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) key[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(u(i) / h));
    return key;
}

/// Calls visit(j) for every cloud index in the 3^N cells around u.
template <class Visit>
bool any_neighbour(const CellMap& cells, const Eigen::VectorXd& u, double h, Visit visit) {
    const std::vector<long> base = cell_of(u, h);
    const std::size_t n = base.size();
    std::vector<long> key(n);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        for (std::size_t i = 0; i < n; ++i) {
            key[i] = base[i] + static_cast<long>(rest % 3) - 1;
            rest /= 3;
        }
        const auto it = cells.find(key);
        if (it == cells.end()) continue;
        for (std::size_t j : it->second)
            if (visit(j)) return true;
    }
    return false;
}

/// Pairwise size reduction of a lattice basis (Euclidean), a cheap stand-in for LLL.
std::vector<Eigen::VectorXd> reduced_basis(const Lattice& gamma) {
    std::vector<Eigen::VectorXd> b;
    for (const auto& v : gamma.basis()) b.push_back(to_eigen(v));
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (i == j) continue;
                const double q = std::round(b[i].dot(b[j]) / b[j].squaredNorm());
                if (q == 0) continue;
                const Eigen::VectorXd candidate = b[i] - q * b[j];
                if (candidate.squaredNorm() < b[i].squaredNorm() - 0.5) {
                    b[i] = candidate;
                    changed = true;
                }
            }
    }
    return b;
}

IntVector round_to_int(const Eigen::VectorXd& v) {
    IntVector out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = BigInt(std::lround(v(i)));
    return out;
}

/// Angle of b relative to a in (-pi, pi].
double angle_step(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

double accumulate_angle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double tol, int depth) {
    const double step = angle_step(a, b);
    if (std::abs(step) < std::numbers::pi / 2) return step;
    if (depth > 60) throw Error(kModule, ErrorKind::invariant, "winding refinement did not resolve the angle");
    const Eigen::Vector2d mid = (a + b) / 2;
    if (mid.norm() <= tol) throw Error(kModule, ErrorKind::input, "curve passes through the winding center");
    return accumulate_angle(a, mid, tol, depth + 1) + accumulate_angle(mid, b, tol, depth + 1);
}

}  // namespace

Eigen::VectorXd phi_map(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    Eigen::VectorXd p = x;
    if (fol.param_dim(Flavor::c) > 0) p = fol.sigma(Flavor::c, x, block_coords(fol, Flavor::c, v));
    p = fol.sigma(Flavor::s, p, block_coords(fol, Flavor::s, v));
    return fol.sigma(Flavor::u, p, block_coords(fol, Flavor::u, v));
}

Eigen::VectorXd phi_inverse(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int starts) {
    const Eigen::VectorXd w = unique_intersection(fol, y, x, IntersectionPair::u_cs, starts);
    const Eigen::VectorXd p = unique_intersection(fol, w, x, IntersectionPair::s_cu, starts);
    Eigen::VectorXd v = fol.embed(Flavor::s, fol.param_of(Flavor::s, w - p)) + fol.embed(Flavor::u, fol.param_of(Flavor::u, y - w));
    if (fol.param_dim(Flavor::c) > 0) v += fol.embed(Flavor::c, fol.param_of(Flavor::c, p - x));
    const double residual = sup_norm(phi_map(fol, x, v) - y);
    if (!(residual <= 1e-8 * std::max(1.0, sup_norm(y - x))))
        throw Error(kModule, ErrorKind::invariant, "Phi inverse residual " + std::to_string(residual));
    return v;
}

Eigen::VectorXd psi_map(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    const Eigen::VectorXd p = fol.sigma(Flavor::s, x, block_coords(fol, Flavor::s, v));
    Eigen::VectorXd out = fol.sigma(Flavor::u, p, block_coords(fol, Flavor::u, v));
    if (fol.param_dim(Flavor::c) > 0) out += fol.embed(Flavor::c, block_coords(fol, Flavor::c, v));
    return out;
}

Eigen::VectorXd psi_inverse(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    // Psi_x is the identity up to kappa, so the chord iteration v <- v - (Psi(v) - y) contracts
    Eigen::VectorXd v = y - x;
    Eigen::VectorXd r = psi_map(fol, x, v) - y;
    const double scale = 1 + sup_norm(y - x);
    for (int it = 0; sup_norm(r) > 1e-12 * scale; ++it) {
        if (it >= 50) throw Error(kModule, ErrorKind::budget, "Psi inverse did not converge");
        double lambda = 1;
        Eigen::VectorXd vn, rn;
        for (int halvings = 0;; ++halvings) {
            vn = v - lambda * r;
            rn = psi_map(fol, x, vn) - y;
            if (sup_norm(rn) < sup_norm(r) || halvings >= 30) break;
            lambda /= 2;
        }
        if (!(sup_norm(rn) < sup_norm(r))) throw Error(kModule, ErrorKind::budget, "Psi inverse stalled");
        v = vn;
        r = rn;
    }
    return v;
}

Eigen::VectorXd sample_adapted_ball(const Splitting& s, const AdaptedNorm& an, double radius, std::uint64_t seed,
                                    bool on_sphere) {
    const AdaptedFrame frame(s, an);
    std::mt19937_64 rng(seed);
    const int n = s.dim();
    Eigen::VectorXd u(n);
    for (;;) {
        u << uniform_ball(rng, frame.ds, radius), uniform_ball(rng, frame.dc, radius), uniform_ball(rng, frame.du, radius);
        const double norm = frame.norm(u);
        if (norm <= radius && norm > 0) {
            if (on_sphere) u *= radius / norm;
            break;
        }
    }
    return frame.t_inv * u;
}

PhiBounds phi_bounds(const Foliations& fol, const Eigen::VectorXd& x, double kappa, std::size_t samples, double radius,
                     std::uint64_t seed) {
    if (!(kappa > 0 && kappa < 1)) throw Error(kModule, ErrorKind::hypothesis, "kappa must lie in (0, 1)");
    std::vector<double> forward(samples, 0), inverse(samples, 0);
    parallel_for(samples, [&](std::size_t k) {
        const Eigen::VectorXd v = sample_adapted_ball(fol.splitting(), fol.norm(), radius, derive_seed(seed, 2 * k));
        forward[k] = fol.length(phi_map(fol, x, v) - (x + v)) / (kappa * fol.length(v));
        const Eigen::VectorXd d = sample_adapted_ball(fol.splitting(), fol.norm(), radius, derive_seed(seed, 2 * k + 1));
        const Eigen::VectorXd w = x + d;
        inverse[k] = fol.length(phi_inverse(fol, x, w) - d) / (kappa / (1 - kappa) * fol.length(d));
    });
    PhiBounds out;
    out.kappa = kappa;
    out.samples = samples;
    for (std::size_t k = 0; k < samples; ++k) {
        out.forward_ratio = std::max(out.forward_ratio, forward[k]);
        out.inverse_ratio = std::max(out.inverse_ratio, inverse[k]);
    }
    return out;
}

CoverageReport coverage_check(const Foliations& fol, const Eigen::VectorXd& x, const CoverageOptions& options) {
    if (!(options.r > 0)) throw Error(kModule, ErrorKind::input, "coverage radius must be positive");
    const double rho = options.sample_radius > 0 ? options.sample_radius : options.r / 2;
    std::vector<double> ratio(options.samples, 0);
    std::vector<Eigen::VectorXd> points(options.samples), params(options.samples);
    parallel_for(options.samples, [&](std::size_t k) {
        const Eigen::VectorXd y =
            x + sample_adapted_ball(fol.splitting(), fol.norm(), rho, derive_seed(options.seed, k), options.on_sphere);
        points[k] = y;
        try {
            const bool phi = options.kind == CoverageKind::phi;
            const Eigen::VectorXd v = phi ? phi_inverse(fol, x, y) : psi_inverse(fol, x, y);
            params[k] = v;
            double worst = std::max(fol.param_length(Flavor::s, fol.param_of(Flavor::s, v)),
                                    fol.param_length(Flavor::u, fol.param_of(Flavor::u, v)));
            if (phi && fol.param_dim(Flavor::c) > 0)
                worst = std::max(worst, fol.param_length(Flavor::c, fol.param_of(Flavor::c, v)));
            ratio[k] = worst / options.r;
        } catch (const Error&) {
            ratio[k] = std::numeric_limits<double>::infinity();
        }
    });
    CoverageReport report;
    report.samples = options.samples;
    for (std::size_t k = 0; k < options.samples; ++k) {
        if (!(ratio[k] <= 1)) ++report.failures;
        if (k == 0 || ratio[k] > report.worst_ratio) {
            report.worst_ratio = ratio[k];
            report.worst_point = points[k];
            report.worst_params = params[k];
        }
    }
    report.pass = report.failures == 0;
    return report;
}

SaturationSet build_saturation_set(const Foliations& fol, const Eigen::VectorXd& x, double eps, const SaturationOptions& options) {
    if (!(eps > 0)) throw Error(kModule, ErrorKind::input, "eps must be positive");
    SaturationSet set;
    set.base = x;
    set.eps = eps;
    set.length = saturation_length(eps);
    set.radii = options.radii.value_or(std::array<double, 4>{eps, set.length, set.length + eps, eps});
    set.counts = options.samples_per_stage;
    for (int i = 0; i < 4; ++i) {
        if (set.counts[static_cast<std::size_t>(i)] < 1) throw Error(kModule, ErrorKind::input, "each stage needs a sample");
        if (!(set.radii[static_cast<std::size_t>(i)] >= 0)) throw Error(kModule, ErrorKind::input, "stage radii must be >= 0");
        if (set.radii[static_cast<std::size_t>(i)] > options.max_radius)
            throw Error(kModule, ErrorKind::budget,
                        "leaf radius " + std::to_string(set.radii[static_cast<std::size_t>(i)]) + " exceeds the budget " +
                            std::to_string(options.max_radius) + "; use a larger eps");
    }
    const AdaptedFrame frame(fol.splitting(), fol.norm());
    const std::array<Flavor, 4> stages{Flavor::c, Flavor::s, Flavor::u, Flavor::s};
    auto root_inv = [&](Flavor f) -> const Eigen::MatrixXd& { return frame.root_inv[f == Flavor::s ? 0 : (f == Flavor::c ? 1 : 2)]; };

    std::vector<SaturationSample> level(1);
    level[0].point = x;
    for (std::size_t stage = 0; stage < 4; ++stage) {
        const Flavor f = stages[stage];
        const int dim = fol.param_dim(f);
        const std::size_t count = static_cast<std::size_t>(dim > 0 ? set.counts[stage] : 1);
        std::vector<SaturationSample> next(level.size() * count);
        parallel_for(next.size(), [&](std::size_t idx) {
            const std::size_t parent = idx / count, j = idx % count;
            std::mt19937_64 rng(derive_seed(derive_seed(options.seed, stage), idx));
            std::uniform_real_distribution<double> unit(0, 1);
            const double radius = set.radii[stage];
            // stratified in the volume fraction of the ball
            const double fraction = (static_cast<double>(j) + unit(rng)) / static_cast<double>(count);
            Eigen::VectorXd u(dim);
            if (dim == 1) {
                u(0) = radius * (2 * fraction - 1);
            } else if (dim > 1) {
                std::normal_distribution<double> gauss;
                for (int i = 0; i < dim; ++i) u(i) = gauss(rng);
                u *= radius * std::pow(fraction, 1.0 / dim) / u.norm();
            }
            const Eigen::VectorXd param = dim > 0 ? Eigen::VectorXd(root_inv(f) * u) : Eigen::VectorXd(0);
            SaturationSample s = level[parent];
            s.trail[stage] = param;
            s.point = dim > 0 ? fol.sigma(f, level[parent].point, param) : level[parent].point;
            next[idx] = std::move(s);
        });
        level = std::move(next);
    }
    set.samples = std::move(level);
    return set;
}

VolumeEstimate saturation_volume(const Foliations& fol, const Eigen::VectorXd& x, double eps, std::size_t samples,
                                 std::uint64_t seed) {
    if (!(eps > 0) || samples < 2) throw Error(kModule, ErrorKind::input, "need eps > 0 and at least two samples");
    const Splitting& s = fol.splitting();
    const AdaptedFrame frame(s, fol.norm());
    const double len = saturation_length(eps);
    const std::array<double, 3> radii{len, eps, len + eps};  // s, c, u
    const std::array<int, 3> dims{frame.ds, frame.dc, frame.du};
    double box = 1;  // volume of the parameter box in splitting coordinates
    for (std::size_t b = 0; b < 3; ++b) {
        const int d = dims[b];
        if (d == 0) continue;
        const double unit_ball = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1);
        box *= unit_ball * std::pow(radii[b], d) / std::abs(frame.root[b].determinant());
    }
    const int n = s.dim();
    std::vector<double> dets(samples, 0);
    parallel_for(samples, [&](std::size_t k) {
        std::mt19937_64 rng(derive_seed(seed, k));
        Eigen::VectorXd u(n);
        u << uniform_ball(rng, frame.ds, radii[0]), uniform_ball(rng, frame.dc, radii[1]), uniform_ball(rng, frame.du, radii[2]);
        const Eigen::VectorXd coords = s.basis_inverse * (frame.t_inv * u);
        const Eigen::VectorXd base = phi_map(fol, x, s.basis * coords);
        Eigen::MatrixXd j(n, n);
        const double h = 1e-6 * (1 + sup_norm(coords));
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd c = coords + h * Eigen::VectorXd::Unit(n, i);
            j.col(i) = (phi_map(fol, x, s.basis * c) - base) / h;
        }
        dets[k] = std::abs(j.determinant());
    });
    double mean = 0, sq = 0;
    for (double d : dets) mean += d;
    mean /= static_cast<double>(samples);
    for (double d : dets) sq += (d - mean) * (d - mean);
    VolumeEstimate out;
    out.samples = samples;
    out.volume = box * mean;
    out.std_error = box * std::sqrt(sq / static_cast<double>(samples - 1) / static_cast<double>(samples));
    out.linear_volume = box * std::abs(s.basis.determinant());
    return out;
}

AppendixConstants appendix_constants(int dim_x, double beta) {
    AppendixConstants c;
    c.r = dim_x / 2;
    c.s = 2 * c.r + 1;
    c.gamma = 1 - beta * (c.s + 14);
    return c;
}

NEpsilon find_n_epsilon_linear(const Splitting& s, const AdaptedNorm& an, const Lattice& lambda, double eps) {
    if (!(eps > 0)) throw Error(kModule, ErrorKind::input, "eps must be positive");
    const double len = saturation_length(eps);
    NEpsilon out;
    out.bound = 5 * len;
    // grow the scan radius so the common case of a short n stays cheap
    for (double radius = std::min(1.0, out.bound);; radius = std::min(2 * radius, out.bound)) {
        const BallScan scan = scan_ball(lambda, s, an, radius);
        for (std::size_t i = 0; i < scan.size(); ++i) {
            const Eigen::VectorXd n = to_eigen(scan.ambient(lambda, i));
            ++out.candidates;
            if (an.part(s, n, ModulusClass::center) < 2 * eps && an.part(s, n, ModulusClass::stable) < 2 * (len + eps) &&
                an.part(s, n, ModulusClass::unstable) < 2 * (len + eps)) {
                out.n = scan.ambient(lambda, i);
                out.norm = scan.norm[i];
                return out;
            }
        }
        if (radius >= out.bound) break;
        out.candidates = 0;
    }
    throw Error(kModule, ErrorKind::hypothesis, "no n_eps within 5 L: eps is too large for the pigeonhole bound");
}

NEpsilon find_n_epsilon(const Foliations& fol, const SaturationSet& set, const Lattice& lambda, double kappa) {
    if (set.samples.size() < 2) throw Error(kModule, ErrorKind::input, "saturation set needs at least two samples");
    const AdaptedFrame frame(fol.splitting(), fol.norm());
    const std::size_t count = set.samples.size();
    const int n = fol.dim();
    std::vector<Eigen::VectorXd> u(count);
    for (std::size_t i = 0; i < count; ++i) u[i] = frame.t * set.samples[i].point;

    std::vector<double> nearest(count, std::numeric_limits<double>::infinity());
    parallel_for(count, [&](std::size_t i) {
        for (std::size_t j = 0; j < count; ++j)
            if (j != i) nearest[i] = std::min(nearest[i], frame.norm(u[i] - u[j]));
    });
    double mean = 0;
    for (double d : nearest) mean += d;
    mean /= static_cast<double>(count);

    NEpsilon out;
    out.merge_tolerance = 2 * mean;
    out.bound = 5 * (1 + kappa) * set.length;
    const double delta = out.merge_tolerance;

    Eigen::VectorXd lo = u[0], hi = u[0];
    CellMap cells;
    for (std::size_t i = 0; i < count; ++i) {
        lo = lo.cwiseMin(u[i]);
        hi = hi.cwiseMax(u[i]);
        cells[cell_of(u[i], delta)].push_back(i);
    }
    const Eigen::VectorXd extent = (hi - lo).array() + delta;

    const BallScan scan = scan_ball(lambda, fol.splitting(), fol.norm(), out.bound);
    for (std::size_t k = 0; k < scan.size(); ++k) {
        const IntVector iv = scan.ambient(lambda, k);
        const Eigen::VectorXd shift = frame.t * to_eigen(iv);
        bool inside = true;
        for (int i = 0; i < n && inside; ++i) inside = std::abs(shift(i)) <= extent(i);
        if (!inside) continue;
        ++out.candidates;
        std::vector<char> hit(count, 0);
        parallel_for(count, [&](std::size_t i) {
            const Eigen::VectorXd moved = u[i] + shift;
            hit[i] = any_neighbour(cells, moved, delta, [&](std::size_t j) { return frame.norm(moved - u[j]) < delta; });
        });
        for (char h : hit)
            if (h) {
                out.n = iv;
                out.norm = scan.norm[k];
                return out;
            }
    }
    throw Error(kModule, ErrorKind::budget, "no n_eps found within 5 (1 + kappa) L at this sampling density");
}

bool cone_member(const Splitting& s, const AdaptedNorm& an, const Eigen::VectorXd& z, const Eigen::VectorXd& y, double eps) {
    const Eigen::VectorXd d = z - y;
    const double su = an.part(s, d, ModulusClass::stable) + an.part(s, d, ModulusClass::unstable);
    return su < eps * an(s, d);
}

std::vector<Eigen::VectorXd> PLCurve::sample(int per_segment) const {
    if (per_segment < 1) throw Error(kModule, ErrorKind::input, "need at least one point per segment");
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        for (int j = 0; j < per_segment; ++j) {
            const double t = static_cast<double>(j) / per_segment;
            out.push_back((1 - t) * vertices[i] + t * vertices[i + 1]);
        }
    if (!vertices.empty()) out.push_back(vertices.front());
    return out;
}

double lattice_diameter_bound(const Lattice& gamma, const Splitting& s, const AdaptedNorm& an) {
    double total = 0;
    for (const auto& b : reduced_basis(gamma)) total += an(s, b);
    return total / 2;
}

PLCurve winding_curve(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Lattice& gamma, double eps, double radius,
                      const Splitting& s, const AdaptedNorm& an) {
    if (s.dim_c != 2) throw Error(kModule, ErrorKind::hypothesis, "winding curves need a two-dimensional center");
    if (!(eps > 0) || !(radius >= 0)) throw Error(kModule, ErrorKind::input, "need eps > 0 and R >= 0");
    const Eigen::VectorXd d = y - x;
    const double dist = an(s, d);
    if (an.part(s, d, ModulusClass::stable) + an.part(s, d, ModulusClass::unstable) > 1e-9 * (1 + dist))
        throw Error(kModule, ErrorKind::input, "y must lie on E^c(x)");

    const std::vector<Eigen::VectorXd> basis = reduced_basis(gamma);
    const int rank = static_cast<int>(basis.size());
    Eigen::MatrixXd g(s.dim(), rank);
    for (int i = 0; i < rank; ++i) g.col(i) = basis[static_cast<std::size_t>(i)];
    if (rank == 0 || Eigen::FullPivLU<Eigen::MatrixXd>(g).rank() != rank)
        throw Error(kModule, ErrorKind::input, "Gamma is rank-deficient");
    const auto qr = g.colPivHouseholderQr();
    if ((g * qr.solve(s.basis_c) - s.basis_c).norm() > 1e-9 * s.basis_c.norm())
        throw Error(kModule, ErrorKind::hypothesis, "Gamma does not span E^c");

    PLCurve curve;
    curve.base = x;
    curve.d_gamma = lattice_diameter_bound(gamma, s, an);
    const double dg = curve.d_gamma;
    curve.circumradius = 6 * dg / eps;
    std::array<Eigen::VectorXd, 3> v;
    for (;; curve.circumradius *= 2, ++curve.retries) {
        if (curve.retries > 5) throw Error(kModule, ErrorKind::hypothesis, "snapping keeps breaking hull containment; eps too large");
        std::array<Eigen::Vector2d, 3> cc;
        for (int i = 0; i < 3; ++i) {
            const double theta = std::numbers::pi / 2 + 2 * std::numbers::pi * i / 3;
            const Eigen::VectorXd z = s.basis_c * Eigen::Vector2d(std::cos(theta), std::sin(theta)) * curve.circumradius;
            // Babai rounding, then the best of the neighbouring lattice points
            const Eigen::VectorXd k0 = qr.solve(z).array().round();
            Eigen::VectorXd best = g * k0;
            double best_dist = an(s, best - z);
            std::size_t combos = 1;
            for (int r = 0; r < rank; ++r) combos *= 3;
            for (std::size_t c = 0; c < combos; ++c) {
                Eigen::VectorXd k = k0;
                std::size_t rest = c;
                for (int r = 0; r < rank; ++r, rest /= 3) k(r) += static_cast<double>(rest % 3) - 1;
                const Eigen::VectorXd cand = g * k;
                const double dd = an(s, cand - z);
                if (dd < best_dist) best = cand, best_dist = dd;
            }
            if (!(best_dist < dg)) throw Error(kModule, ErrorKind::invariant, "lattice snap is farther than d_Gamma");
            v[static_cast<std::size_t>(i)] = best;
            cc[static_cast<std::size_t>(i)] = (s.basis_inverse * best).segment(s.dim_s, 2);
        }
        // the inscribed ball of the snapped triangle must still have radius >= 2 d / eps
        double inradius = std::numeric_limits<double>::infinity();
        const double orient = angle_step(cc[1] - cc[0], cc[2] - cc[0]) > 0 ? 1 : -1;
        for (int i = 0; i < 3; ++i) {
            const Eigen::Vector2d a = cc[static_cast<std::size_t>(i)], b = cc[static_cast<std::size_t>((i + 1) % 3)];
            const Eigen::Vector2d e = b - a;
            const double signed_dist = orient * (e.x() * (-a.y()) - e.y() * (-a.x())) / e.norm();
            inradius = std::min(inradius, signed_dist);
        }
        if (inradius >= 2 * dg / eps) break;
    }
    for (int i = 0; i < 3; ++i) {
        curve.corners[static_cast<std::size_t>(i)] = round_to_int(v[static_cast<std::size_t>(i)]);
        curve.generators[static_cast<std::size_t>(i)] = round_to_int(v[static_cast<std::size_t>((i + 1) % 3)] - v[static_cast<std::size_t>(i)]);
    }

    // hull containment of y, cone containment and the radius bound, in that order
    const double k_real = std::max({dist * eps / (2 * dg), dist / dg, (radius + dist) * eps / (2 * dg)});
    curve.k = static_cast<long>(std::floor(k_real)) + 1;
    for (int i = 0; i < 3; ++i) {
        const Eigen::VectorXd start = x + static_cast<double>(curve.k) * v[static_cast<std::size_t>(i)];
        const Eigen::VectorXd step = to_eigen(curve.generators[static_cast<std::size_t>(i)]);
        for (long j = 0; j < curve.k; ++j) {
            curve.vertices.push_back(start + static_cast<double>(j) * step);
            curve.generator_index.push_back(i);
        }
    }
    curve.vertices.push_back(curve.vertices.front());
    return curve;
}

int winding_number_2d(const std::vector<Eigen::Vector2d>& closed, const Eigen::Vector2d& center, double tol) {
    if (closed.size() < 2) throw Error(kModule, ErrorKind::input, "need at least two points");
    double total = 0;
    for (std::size_t i = 0; i < closed.size(); ++i) {
        const Eigen::Vector2d a = closed[i] - center, b = closed[(i + 1) % closed.size()] - center;
        if (a.norm() <= tol) throw Error(kModule, ErrorKind::input, "curve passes through the winding center");
        total += accumulate_angle(a, b, tol, 0);
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

int winding_number(const std::vector<Eigen::VectorXd>& closed, const Eigen::VectorXd& y, const Splitting& s, double tol) {
    if (s.dim_c != 2) throw Error(kModule, ErrorKind::hypothesis, "winding numbers need a two-dimensional center");
    std::vector<Eigen::Vector2d> plane;
    plane.reserve(closed.size());
    for (const auto& z : closed) {
        const Eigen::Vector2d c = (s.basis_inverse * (z - y)).segment(s.dim_s, 2);
        if (c.norm() <= tol * (1 + (z - y).norm())) throw Error(kModule, ErrorKind::input, "curve touches E^su(y)");
        plane.push_back(c);
    }
    return winding_number_2d(plane, Eigen::Vector2d::Zero(), 0);
}

std::vector<Eigen::Vector2d> random_free_loop(const std::vector<Rect>& obstacles, const Rect& box, int cells, int steps,
                                              std::uint64_t seed) {
    if (cells < 2 || steps < 1) throw Error(kModule, ErrorKind::input, "need at least two cells and one step");
    const double hx = (box.x1 - box.x0) / cells, hy = (box.y1 - box.y0) / cells;
    auto center = [&](int i, int j) { return Eigen::Vector2d(box.x0 + (i + 0.5) * hx, box.y0 + (j + 0.5) * hy); };
    std::vector<char> free(static_cast<std::size_t>(cells * cells), 1);
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const Rect cell{box.x0 + i * hx, box.x0 + (i + 1) * hx, box.y0 + j * hy, box.y0 + (j + 1) * hy};
            for (const auto& o : obstacles)
                if (o.x0 <= cell.x1 && cell.x0 <= o.x1 && o.y0 <= cell.y1 && cell.y0 <= o.y1) free[static_cast<std::size_t>(i * cells + j)] = 0;
        }
    std::vector<int> open;
    for (int c = 0; c < cells * cells; ++c)
        if (free[static_cast<std::size_t>(c)]) open.push_back(c);
    if (open.empty()) throw Error(kModule, ErrorKind::input, "no free cell");
    std::mt19937_64 rng(seed);
    const int start = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    auto neighbours = [&](int c) {
        std::vector<int> out;
        const int i = c / cells, j = c % cells;
        for (int k = 0; k < 4; ++k) {
            const int a = i + di[k], b = j + dj[k];
            if (a >= 0 && a < cells && b >= 0 && b < cells && free[static_cast<std::size_t>(a * cells + b)]) out.push_back(a * cells + b);
        }
        return out;
    };
    std::vector<int> path{start};
    for (int t = 0; t < steps; ++t) {
        const auto nb = neighbours(path.back());
        if (nb.empty()) break;
        path.push_back(nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)]);
    }
    // breadth-first way back to the start
    std::vector<int> prev(static_cast<std::size_t>(cells * cells), -1);
    std::deque<int> queue{path.back()};
    prev[static_cast<std::size_t>(path.back())] = path.back();
    while (!queue.empty() && prev[static_cast<std::size_t>(start)] < 0) {
        const int c = queue.front();
        queue.pop_front();
        for (int nb : neighbours(c))
            if (prev[static_cast<std::size_t>(nb)] < 0) {
                prev[static_cast<std::size_t>(nb)] = c;
                queue.push_back(nb);
            }
    }
    std::vector<int> back;
    for (int c = start; c != path.back(); c = prev[static_cast<std::size_t>(c)]) back.push_back(c);
    for (auto it = back.rbegin(); it != back.rend(); ++it) path.push_back(*it);
    path.pop_back();  // the start is implied by closing
    std::vector<Eigen::Vector2d> loop;
    for (int c : path) loop.push_back(center(c / cells, c % cells));
    return loop;
}

JordanSuiteReport jordan_suite(std::size_t loops, std::uint64_t seed) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const Rect box{-6, 6, -6, 6};
    const std::vector<Rect> strips{{1, inf, -0.1, 1.1}, {-inf, -2, -3, -1.5}, {-1, 0, 2, inf}, {1.5, 2.5, -inf, -4}, {-inf, -3.5, 3, 3.6}};
    JordanSuiteReport report;

    // obstacle points inside the box
    std::vector<Eigen::Vector2d> probes;
    for (const auto& r : strips)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double lo_x = std::max(r.x0, box.x0), hi_x = std::min(r.x1, box.x1);
                const double lo_y = std::max(r.y0, box.y0), hi_y = std::min(r.y1, box.y1);
                probes.emplace_back(lo_x + (a + 0.5) * (hi_x - lo_x) / 4, lo_y + (b + 0.5) * (hi_y - lo_y) / 4);
            }
    for (std::size_t k = 0; k < loops; ++k) {
        const auto loop = random_free_loop(strips, box, 48, 600, derive_seed(seed, k));
        if (loop.size() < 3) continue;
        ++report.unbounded_loops;
        for (const auto& p : probes)
            if (winding_number_2d(loop, p) != 0) {
                ++report.unbounded_nonzero;
                break;
            }
    }

    // a bounded square and star-shaped loops around it
    const Rect square{-0.5, 0.5, -0.5, 0.5};
    std::mt19937_64 rng(derive_seed(seed, loops + 1));
    std::uniform_real_distribution<double> unit(0, 1);
    for (std::size_t k = 0; k < loops; ++k) {
        const int m = 5 + static_cast<int>(unit(rng) * 20);
        std::vector<double> angles;
        for (int i = 0; i < m; ++i) angles.push_back(2 * std::numbers::pi * unit(rng));
        std::sort(angles.begin(), angles.end());
        std::vector<Eigen::Vector2d> loop;
        for (double a : angles) {
            const double rad = 1 + 3 * unit(rng);
            loop.emplace_back(rad * std::cos(a), rad * std::sin(a));
        }
        // a star polygon only encloses the square if consecutive angles stay below pi
        bool star = true;
        for (int i = 0; i < m; ++i) {
            const double gap = i + 1 < m ? angles[static_cast<std::size_t>(i) + 1] - angles[static_cast<std::size_t>(i)]
                                         : angles.front() + 2 * std::numbers::pi - angles.back();
            star = star && gap < std::numbers::pi * 0.9;
        }
        if (!star) continue;
        ++report.bounded_loops;
        const Eigen::Vector2d p(square.x0 + unit(rng) * (square.x1 - square.x0), square.y0 + unit(rng) * (square.y1 - square.y0));
        if (winding_number_2d(loop, p) == 0) ++report.bounded_zero;
    }
    return report;
}

}  // namespace toral
