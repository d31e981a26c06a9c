#include "toral/pseudo_anosov.hpp"

#include <random>

#include "toral/error.hpp"
#include "toral/factor.hpp"
#include "toral/roots.hpp"
#include "toral/splitting.hpp"

namespace toral {

bool pa_condition3(const IntPoly& p) {
    if (p.degree() < 1) return false;
    return is_irreducible_Z(p) && !is_poly_in_xm(p).has_value();
}

IntMatrix restrict_to_lattice(const IntMatrix& a, const Lattice& l) {
    const std::size_t d = l.rank();
    IntMatrix r(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const IntVector c = l.coordinates(a.apply(l.basis()[i]));
        for (std::size_t j = 0; j < d; ++j) r(j, i) = c[j];
    }
    return r;
}

Condition1Result pa_condition1_sample(const IntMatrix& a, int k_max, int trials, std::uint64_t seed) {
    if (!a.is_square()) throw Error("pseudo-anosov", ErrorKind::input, "matrix must be square");
    const std::size_t n = a.rows();
    Condition1Result out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> box(-10, 10);
    std::uniform_int_distribution<long> small(-3, 3);
    IntMatrix ak = IntMatrix::identity(n);
    for (int k = 1; k <= k_max; ++k) {
        ak = ak * a;
        std::vector<IntVector> candidates;
        const auto factors = factor_Z(char_poly(ak));
        const bool split = factors.size() > 1 || factors.front().multiplicity > 1;
        if (split) {
            for (const auto& f : factors) {
                const Lattice kl = kernel_lattice(f.poly.evaluate(ak));
                if (kl.rank() == 0) continue;
                for (const auto& b : kl.basis()) candidates.push_back(b);
                IntVector mix(n, BigInt(0));
                for (const auto& b : kl.basis()) {
                    const long c = small(rng);
                    for (std::size_t j = 0; j < n; ++j) mix[j] += c * b[j];
                }
                candidates.push_back(mix);
            }
        }
        if (static_cast<int>(candidates.size()) > trials / 2) candidates.resize(static_cast<std::size_t>(trials / 2));
        while (static_cast<int>(candidates.size()) < trials) {
            IntVector v(n);
            for (auto& x : v) x = box(rng);
            candidates.push_back(v);
        }
        for (const auto& v : candidates) {
            bool zero = true;
            for (const auto& x : v) zero = zero && x == 0;
            if (zero) continue;
            ++out.vectors_tested;
            if (!is_cyclic_vector(ak, v)) {
                out.holds = false;
                out.witness = CyclicityWitness{k, v};
                return out;
            }
        }
    }
    return out;
}

Eigen::MatrixXd PASubspace::x_basis() const {
    Eigen::MatrixXd b(static_cast<Eigen::Index>(lambda.ambient_dim()), static_cast<Eigen::Index>(lambda.rank()));
    for (std::size_t i = 0; i < lambda.rank(); ++i) b.col(static_cast<Eigen::Index>(i)) = to_eigen(lambda.basis()[i]);
    return b;
}

UnitaryFactor unitary_factor(const IntMatrix& a, int k) {
    const IntMatrix ak = a.pow(static_cast<unsigned long>(k));
    std::optional<IntPoly> found;
    for (const auto& f : factor_Z(char_poly(ak))) {
        if (count_unitary_roots(f.poly) == 0) continue;
        if (found || f.multiplicity != 1 || count_unitary_roots(f.poly) != 2)
            throw Error("pseudo-anosov", ErrorKind::invariant, "unitary roots are not carried by a single simple factor");
        found = f.poly;
    }
    if (!found) throw Error("pseudo-anosov", ErrorKind::hypothesis, "no unitary-root factor (dim E^c != 2)");
    return {*found, kernel_lattice(found->evaluate(ak))};
}

PASubspace pa_subspace(const IntMatrix& a, const PAOptions& options) {
    if (!a.is_square() || !a.is_unimodular()) throw Error("pseudo-anosov", ErrorKind::input, "matrix is not in GL(N, Z)");
    const IntPoly p = char_poly(a);
    if (!cyclotomic_free(p)) throw Error("pseudo-anosov", ErrorKind::hypothesis, "not ergodic");
    if (count_unitary_roots(p) != 2) throw Error("pseudo-anosov", ErrorKind::hypothesis, "dim E^c != 2");
    if (options.k_max < 1) throw Error("pseudo-anosov", ErrorKind::input, "k_max must be positive");

    PASubspace best;
    int best_d = 0;
    for (int k = 1; k <= options.k_max; ++k) {
        const IntMatrix ak = a.pow(static_cast<unsigned long>(k));
        int d = 0;
        IntPoly pk;
        for (const auto& f : factor_Z(char_poly(ak))) {
            if (count_unitary_roots(f.poly) == 0) continue;
            if (d != 0 || f.multiplicity != 1 || count_unitary_roots(f.poly) != 2)
                throw Error("pseudo-anosov", ErrorKind::invariant, "two unitary-root factors in char(A^k)");
            d = f.poly.degree();
            pk = f.poly;
        }
        best.d_by_k.push_back(d);
        if (best_d == 0 || d < best_d) {
            best_d = d;
            best.k = k;
            best.p_k = pk;
        }
    }
    const IntMatrix ak = a.pow(static_cast<unsigned long>(best.k));
    best.lambda = kernel_lattice(best.p_k.evaluate(ak));
    best.dim_x = static_cast<int>(best.lambda.rank());
    if (!options.verify) return best;

    if (!pa_condition3(best.p_k))
        throw Error("pseudo-anosov", ErrorKind::budget, "k_max exceeded: no k passes condition 3");
    if (best.dim_x != best.p_k.degree())
        throw Error("pseudo-anosov", ErrorKind::invariant, "lattice rank differs from factor degree");
    if (best.dim_x % 2 != 0 || best.dim_x < 4)
        throw Error("pseudo-anosov", ErrorKind::invariant, "dim X is not even and at least 4");
    if (best.lambda.image(ak) != best.lambda) throw Error("pseudo-anosov", ErrorKind::invariant, "A^k does not preserve Lambda");
    if (!best.lambda.is_primitive()) throw Error("pseudo-anosov", ErrorKind::invariant, "Lambda is not primitive");
    for (int l : {2, 3}) {
        const UnitaryFactor u = unitary_factor(a, best.k * l);
        if (u.kernel != best.lambda) throw Error("pseudo-anosov", ErrorKind::invariant, "X_{kl} differs from X_k");
    }
    const Splitting s = compute_splitting(a);
    const Eigen::MatrixXd xb = best.x_basis();
    const Eigen::MatrixXd q = xb.householderQr().householderQ() * Eigen::MatrixXd::Identity(xb.rows(), xb.cols());
    const Eigen::MatrixXd residual = s.basis_c - q * (q.transpose() * s.basis_c);
    best.center_residual = residual.norm() / s.basis_c.norm();
    if (best.center_residual > 1e-9) throw Error("pseudo-anosov", ErrorKind::invariant, "E^c is not contained in X");
    return best;
}

Lattice gamma_from_n(const IntMatrix& a, int k, int l, const IntVector& n, const PASubspace& pa) {
    bool zero = true;
    for (const auto& x : n) zero = zero && x == 0;
    if (zero) throw Error("pseudo-anosov", ErrorKind::input, "n must be nonzero");
    if (!pa.lambda.contains(n)) throw Error("pseudo-anosov", ErrorKind::input, "n is not in Lambda");
    const IntMatrix b = a.pow(static_cast<unsigned long>(k * l));
    const IntMatrix rows = krylov_rows(b, n, static_cast<std::size_t>(pa.dim_x));
    if (rows.rank() != static_cast<std::size_t>(pa.dim_x))
        throw Error("pseudo-anosov", ErrorKind::invariant, "iterates of n are rank deficient");
    return Lattice::generated_by(rows.row_list(), a.rows());
}

}  // namespace toral
