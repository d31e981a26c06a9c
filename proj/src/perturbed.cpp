#include "toral/perturbed.hpp"

#include <cmath>
#include <numbers>

#include "toral/error.hpp"
#include "toral/splitting.hpp"

namespace toral {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double dot_int(const IntVector& a, const IntVector& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s.get_d();
}

double int_norm(const IntVector& a) { return std::sqrt(dot_int(a, a)); }

}  // namespace

double TrigProfile::value(double t) const {
    double v = 0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m) v += cos_coeffs[m] * (std::cos(kTwoPi * static_cast<double>(m + 1) * t) - 1);
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m) v += sin_coeffs[m] * std::sin(kTwoPi * static_cast<double>(m + 1) * t);
    return v;
}

double TrigProfile::derivative(double t) const {
    double v = 0;
    for (std::size_t m = 0; m < cos_coeffs.size(); ++m) {
        const double w = kTwoPi * static_cast<double>(m + 1);
        v -= cos_coeffs[m] * w * std::sin(w * t);
    }
    for (std::size_t m = 0; m < sin_coeffs.size(); ++m) {
        const double w = kTwoPi * static_cast<double>(m + 1);
        v += sin_coeffs[m] * w * std::cos(w * t);
    }
    return v;
}

double TrigProfile::max_derivative() const {
    const std::size_t harmonics = std::max<std::size_t>(1, std::max(cos_coeffs.size(), sin_coeffs.size()));
    const std::size_t samples = 256 * harmonics;
    const double h = 1.0 / static_cast<double>(samples);
    double best_t = 0, best = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = h * static_cast<double>(i);
        const double v = std::abs(derivative(t));
        if (v > best) best = v, best_t = t;
    }
    // golden-section refinement of |phi'| on the bracketing cell
    const double g = (std::sqrt(5.0) - 1) / 2;
    double lo = best_t - h, hi = best_t + h;
    auto f = [&](double t) { return std::abs(derivative(t)); };
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    for (int it = 0; it < 60; ++it) {
        if (f(c) > f(d)) hi = d;
        else lo = c;
        c = hi - g * (hi - lo);
        d = lo + g * (hi - lo);
    }
    return std::max(best, f((lo + hi) / 2));
}

TrigProfile TrigProfile::unit_sine() { return TrigProfile{{}, {1 / kTwoPi}}; }
TrigProfile TrigProfile::unit_cosine() { return TrigProfile{{1 / kTwoPi}, {}}; }

Shear Shear::coordinate(std::size_t n, std::size_t target_index, std::size_t source_index, TrigProfile profile, double amplitude) {
    if (target_index >= n || source_index >= n || target_index == source_index)
        throw Error("perturbed-dynamics", ErrorKind::input, "shear needs distinct coordinates below N");
    Shear s;
    s.source.assign(n, BigInt(0));
    s.target.assign(n, BigInt(0));
    s.source[source_index] = 1;
    s.target[target_index] = 1;
    s.profile = std::move(profile);
    s.amplitude = amplitude;
    return s;
}

std::pair<int, int> Shear::coordinate_indices() const {
    auto unit = [](const IntVector& v) {
        int idx = -1;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            if (v[i] != 1 || idx >= 0) return -1;
            idx = static_cast<int>(i);
        }
        return idx;
    };
    const int i = unit(target), j = unit(source);
    if (i < 0 || j < 0) return {-1, -1};
    return {i, j};
}

PerturbedMap::PerturbedMap(IntMatrix a, std::vector<Shear> shears) : a_(std::move(a)), shears_(std::move(shears)) {
    if (!a_.is_unimodular()) throw Error("perturbed-dynamics", ErrorKind::input, "matrix is not unimodular");
    ad_ = to_eigen(a_);
    ainv_ = to_eigen(a_.inverse_unimodular());
    const std::size_t n = a_.rows();
    for (const auto& s : shears_) {
        if (s.source.size() != n || s.target.size() != n)
            throw Error("perturbed-dynamics", ErrorKind::input, "shear vectors have the wrong dimension");
        if (dot_int(s.source, s.target) != 0)
            throw Error("perturbed-dynamics", ErrorKind::input, "shear source and target must be orthogonal");
        if (!std::isfinite(s.amplitude)) throw Error("perturbed-dynamics", ErrorKind::input, "shear amplitude is not finite");
        src_.push_back(to_eigen(s.source));
        dst_.push_back(to_eigen(s.target));
        if (s.amplitude != 0 && (!s.profile.cos_coeffs.empty() || !s.profile.sin_coeffs.empty())) linear_ = false;
        c1_ += std::abs(s.amplitude) * s.profile.max_derivative() * int_norm(s.source) * int_norm(s.target);
    }
}

Eigen::VectorXd PerturbedMap::shear_forward(Eigen::VectorXd y) const {
    for (std::size_t k = 0; k < shears_.size(); ++k)
        y += shears_[k].amplitude * shears_[k].profile.value(src_[k].dot(y)) * dst_[k];
    return y;
}

Eigen::VectorXd PerturbedMap::shear_inverse(Eigen::VectorXd y) const {
    for (std::size_t k = shears_.size(); k-- > 0;)
        y -= shears_[k].amplitude * shears_[k].profile.value(src_[k].dot(y)) * dst_[k];
    return y;
}

Eigen::VectorXd PerturbedMap::operator()(const Eigen::VectorXd& x) const { return shear_forward(ad_ * x); }

Eigen::VectorXd PerturbedMap::inverse(const Eigen::VectorXd& y) const { return ainv_ * shear_inverse(y); }

Eigen::MatrixXd PerturbedMap::jacobian(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = ad_ * x;
    Eigen::MatrixXd j = ad_;
    for (std::size_t k = 0; k < shears_.size(); ++k) {
        const double t = src_[k].dot(y);
        const double e = shears_[k].amplitude;
        // (I + e phi' b a^T) J
        j += (e * shears_[k].profile.derivative(t)) * dst_[k] * (src_[k].transpose() * j);
        y += e * shears_[k].profile.value(t) * dst_[k];
    }
    return j;
}

Eigen::MatrixXd PerturbedMap::inverse_jacobian(const Eigen::VectorXd& y) const {
    Eigen::VectorXd z = y;
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(dim(), dim());
    for (std::size_t k = shears_.size(); k-- > 0;) {
        const double t = src_[k].dot(z);
        const double e = shears_[k].amplitude;
        j -= (e * shears_[k].profile.derivative(t)) * dst_[k] * (src_[k].transpose() * j);
        z -= e * shears_[k].profile.value(t) * dst_[k];
    }
    return ainv_ * j;
}

Eigen::VectorXd PerturbedMap::forward_difference(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const {
    Eigen::VectorXd u = ad_ * x;
    Eigen::VectorXd delta = ad_ * d;
    for (std::size_t k = 0; k < shears_.size(); ++k) {
        const double e = shears_[k].amplitude;
        const double t = src_[k].dot(u);
        const double p0 = shears_[k].profile.value(t);
        delta += e * (shears_[k].profile.value(t + src_[k].dot(delta)) - p0) * dst_[k];
        u += e * p0 * dst_[k];
    }
    return delta;
}

Eigen::VectorXd PerturbedMap::inverse_difference(const Eigen::VectorXd& y, const Eigen::VectorXd& d) const {
    Eigen::VectorXd u = y;
    Eigen::VectorXd delta = d;
    for (std::size_t k = shears_.size(); k-- > 0;) {
        const double e = shears_[k].amplitude;
        const double t = src_[k].dot(u);
        const double p0 = shears_[k].profile.value(t);
        delta -= e * (shears_[k].profile.value(t + src_[k].dot(delta)) - p0) * dst_[k];
        u -= e * p0 * dst_[k];
    }
    return ainv_ * delta;
}

Eigen::VectorXd lift_eval(const PerturbedMap& f, const Eigen::VectorXd& x) { return f(x); }

Eigen::VectorXd lift_inverse(const PerturbedMap& f, const Eigen::VectorXd& y) {
    const Eigen::VectorXd x = f.inverse(y);
    const double residual = (f(x) - y).norm();
    if (!(residual <= 1e-12 * (1 + y.norm())))
        throw Error("perturbed-dynamics", ErrorKind::invariant, "inverse residual " + std::to_string(residual));
    return x;
}

PerturbedMap standard_perturbation(const IntMatrix& a, double eps) {
    const std::size_t n = a.rows();
    std::vector<Shear> shears;
    for (std::size_t j = 0; j < n; ++j)
        shears.push_back(Shear::coordinate(n, (j + 1) % n, j, j % 2 == 0 ? TrigProfile::unit_sine() : TrigProfile::unit_cosine(), eps));
    return PerturbedMap(a, std::move(shears));
}

PerturbedMap conjugate_by_shear(const IntMatrix& a, const Shear& h) {
    // h A h^{-1} = h o (A h^{-1} A^{-1}) o A, and A h^{-1} A^{-1} is the shear
    // with source A^{-T} a, target A b and opposite amplitude
    Shear inner = h;
    inner.source = a.inverse_unimodular().transpose().apply(h.source);
    inner.target = a.apply(h.target);
    inner.amplitude = -h.amplitude;
    return PerturbedMap(a, {inner, h});
}

Eigen::VectorXd reduce_mod_one(const Eigen::VectorXd& x) { return x.array() - x.array().floor(); }

}  // namespace toral
