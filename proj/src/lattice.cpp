#include "toral/lattice.hpp"

#include <utility>

#include "toral/error.hpp"

namespace toral {
namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row[dst] -= q * row[src]
void row_submul(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_submul(m(dst, j).get_mpz_t(), q.get_mpz_t(), m(src, j).get_mpz_t());
}

void col_submul(IntMatrix& m, std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t i = 0; i < m.rows(); ++i) mpz_submul(m(i, dst).get_mpz_t(), q.get_mpz_t(), m(i, src).get_mpz_t());
}

void negate_row(IntMatrix& m, std::size_t r) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

HermiteForm hermite_form(const IntMatrix& m) {
    HermiteForm out{m, IntMatrix::identity(m.rows()), 0};
    IntMatrix& h = out.form;
    IntMatrix& u = out.transform;
    std::size_t r = 0;
    for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
        for (;;) {
            std::size_t best = h.rows();
            for (std::size_t i = r; i < h.rows(); ++i) {
                if (h(i, c) == 0) continue;
                if (best == h.rows() || abs(h(i, c)) < abs(h(best, c))) best = i;
            }
            if (best == h.rows()) break;
            swap_rows(h, r, best);
            swap_rows(u, r, best);
            bool done = true;
            for (std::size_t i = r + 1; i < h.rows(); ++i) {
                if (h(i, c) == 0) continue;
                const BigInt q = floor_div(h(i, c), h(r, c));
                row_submul(h, i, r, q);
                row_submul(u, i, r, q);
                if (h(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (r >= h.rows() || h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            negate_row(h, r);
            negate_row(u, r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            const BigInt q = floor_div(h(i, c), h(r, c));
            if (q == 0) continue;
            row_submul(h, i, r, q);
            row_submul(u, i, r, q);
        }
        ++r;
    }
    out.rank = r;
    return out;
}

std::vector<BigInt> SmithForm::invariant_factors() const {
    std::vector<BigInt> f;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
        if (d(i, i) != 0) f.push_back(d(i, i));
    return f;
}

SmithForm snf(const IntMatrix& a) {
    SmithForm s{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols())};
    IntMatrix& d = s.d;
    const std::size_t m = d.rows(), n = d.cols();
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        for (;;) {
            // move the smallest nonzero entry of the trailing block to (t, t)
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (d(i, j) != 0 && (bi == m || abs(d(i, j)) < abs(d(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) return s;
            swap_rows(d, t, bi);
            swap_rows(s.u, t, bi);
            swap_cols(d, t, bj);
            swap_cols(s.v, t, bj);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                const BigInt q = floor_div(d(i, t), d(t, t));
                row_submul(d, i, t, q);
                row_submul(s.u, i, t, q);
                if (d(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                const BigInt q = floor_div(d(t, j), d(t, t));
                col_submul(d, j, t, q);
                col_submul(s.v, j, t, q);
                if (d(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            // fold the offending row into row t and repeat
            row_submul(d, t, bad, BigInt(-1));
            row_submul(s.u, t, bad, BigInt(-1));
        }
        if (d(t, t) < 0) {
            negate_row(d, t);
            negate_row(s.u, t);
        }
    }
    return s;
}

Lattice hnf(const std::vector<IntVector>& vectors, std::size_t ambient_dim) {
    return Lattice::generated_by(vectors, ambient_dim);
}

Lattice Lattice::generated_by(const std::vector<IntVector>& vectors, std::size_t ambient_dim) {
    Lattice l(ambient_dim);
    if (vectors.empty()) return l;
    for (const auto& v : vectors)
        if (v.size() != ambient_dim) throw Error("exact-core", ErrorKind::input, "lattice generator has wrong dimension");
    const HermiteForm h = hermite_form(IntMatrix::from_rows(vectors));
    for (std::size_t i = 0; i < h.rank; ++i) l.basis_.push_back(h.form.row(i));
    return l;
}

Lattice Lattice::standard(std::size_t n) { return generated_by(IntMatrix::identity(n).row_list(), n); }

IntMatrix Lattice::basis_matrix() const {
    if (basis_.empty()) return IntMatrix(0, ambient_);
    return IntMatrix::from_rows(basis_);
}

IntVector Lattice::coordinates(const IntVector& v) const {
    if (v.size() != ambient_) throw Error("exact-core", ErrorKind::input, "vector has wrong dimension");
    // The basis is in echelon form: peel pivots left to right.
    IntVector rest = v;
    IntVector coords(basis_.size(), BigInt(0));
    std::size_t col = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        while (basis_[i][col] == 0) {
            if (rest[col] != 0) throw Error("exact-core", ErrorKind::input, "vector is not in the lattice");
            ++col;
        }
        if (!mpz_divisible_p(rest[col].get_mpz_t(), basis_[i][col].get_mpz_t()))
            throw Error("exact-core", ErrorKind::input, "vector is not in the lattice");
        coords[i] = rest[col] / basis_[i][col];
        for (std::size_t j = col; j < ambient_; ++j) rest[j] -= coords[i] * basis_[i][j];
        ++col;
    }
    for (const auto& x : rest)
        if (x != 0) throw Error("exact-core", ErrorKind::input, "vector is not in the lattice");
    return coords;
}

bool Lattice::contains(const IntVector& v) const {
    try {
        coordinates(v);
        return true;
    } catch (const Error&) {
        return false;
    }
}

bool Lattice::is_primitive() const {
    if (basis_.empty()) return true;
    for (const auto& f : snf(basis_matrix()).invariant_factors())
        if (f != 1) return false;
    return true;
}

Lattice Lattice::image(const IntMatrix& a) const {
    std::vector<IntVector> img;
    img.reserve(basis_.size());
    for (const auto& b : basis_) img.push_back(a.apply(b));
    return generated_by(img, a.rows());
}

Lattice kernel_lattice(const IntMatrix& m) {
    const std::size_t n = m.cols();
    if (m.rows() == 0) return Lattice::standard(n);
    // U * M^T = H; rows of U against zero rows of H span the integer kernel,
    // and since U is unimodular they span a saturated lattice.
    const HermiteForm h = hermite_form(m.transpose());
    std::vector<IntVector> rows;
    for (std::size_t i = h.rank; i < n; ++i) rows.push_back(h.transform.row(i));
    return Lattice::generated_by(rows, n);
}

Lattice saturate(const Lattice& l) {
    if (l.rank() == 0) return l;
    const Lattice annihilator = kernel_lattice(l.basis_matrix());
    if (annihilator.rank() == 0) return Lattice::standard(l.ambient_dim());
    return kernel_lattice(annihilator.basis_matrix());
}

BigInt lattice_index(const Lattice& outer, const Lattice& inner) {
    if (outer.rank() != inner.rank()) throw Error("exact-core", ErrorKind::input, "index needs lattices of equal rank");
    std::vector<IntVector> coords;
    for (const auto& b : inner.basis()) coords.push_back(outer.coordinates(b));
    if (coords.empty()) return 1;
    return abs(IntMatrix::from_rows(coords).determinant());
}

IntMatrix krylov_rows(const IntMatrix& a, const IntVector& v, std::size_t count) {
    std::vector<IntVector> rows;
    IntVector cur = v;
    for (std::size_t i = 0; i < count; ++i) {
        rows.push_back(cur);
        if (i + 1 < count) cur = a.apply(cur);
    }
    return IntMatrix::from_rows(rows);
}

bool is_cyclic_vector(const IntMatrix& a, const IntVector& v) {
    if (!a.is_square() || v.size() != a.rows()) throw Error("exact-core", ErrorKind::input, "cyclic vector dimension mismatch");
    return krylov_rows(a, v, a.rows()).rank() == a.rows();
}

}  // namespace toral
