#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "nconvex/errors.hpp"

namespace nconvex {

/// A nonempty open/closed interval [a, b] with a < b.
struct Interval {
    double a;
    double b;

    Interval(double lo, double hi) : a(lo), b(hi) {
        if (!(lo < hi))
            throw precondition_error("Interval requires a < b, got [" +
                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    double length() const noexcept { return b - a; }
    double midpoint() const noexcept { return 0.5 * (a + b); }
    bool contains(double x) const noexcept { return a <= x && x <= b; }
    bool strictly_contains(double x) const noexcept { return a < x && x < b; }
};

/// Dense univariate polynomial with real coefficients in ascending power
/// order: coeffs()[i] multiplies x^i.
///
/// The zero polynomial is canonically the empty coefficient vector and has
/// degree() == -1. Construction strips trailing coefficients that are
/// exactly 0.0; nonzero-but-tiny coefficients are kept as stored (rounding
/// noise is the caller's business, see approx_equal).
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        normalize();
    }

    Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { normalize(); }

    static Polynomial zero() { return Polynomial{}; }

    static Polynomial constant(double c) { return Polynomial{std::vector<double>{c}}; }

    /// c * x^power
    static Polynomial monomial(int power, double c = 1.0) {
        if (power < 0) throw precondition_error("monomial power must be >= 0");
        std::vector<double> v(static_cast<std::size_t>(power) + 1, 0.0);
        v.back() = c;
        return Polynomial{std::move(v)};
    }

    /// Monic product of (x - r) over the given roots.
    static Polynomial from_roots(std::span<const double> roots) {
        Polynomial p = constant(1.0);
        for (double r : roots) p = p * Polynomial{-r, 1.0};
        return p;
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// Degree of the stored representation; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    double leading_coefficient() const noexcept {
        return coeffs_.empty() ? 0.0 : coeffs_.back();
    }

    std::span<const double> coefficients() const noexcept { return coeffs_; }

    double coefficient(int power) const noexcept {
        if (power < 0 || power >= static_cast<int>(coeffs_.size())) return 0.0;
        return coeffs_[static_cast<std::size_t>(power)];
    }

    /// Horner evaluation.
    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return zero();
        std::vector<double> d(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            d[i - 1] = coeffs_[i] * static_cast<double>(i);
        return Polynomial{std::move(d)};
    }

    /// Antiderivative with zero constant term.
    Polynomial antiderivative() const {
        if (coeffs_.empty()) return zero();
        std::vector<double> a(coeffs_.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
        return Polynomial{std::move(a)};
    }

    /// Closed-form definite integral over iv (w == 1).
    double integrate(const Interval& iv) const {
        Polynomial anti = antiderivative();
        return anti(iv.b) - anti(iv.a);
    }

    /// Synthetic division by (x - r); the remainder is discarded, which is
    /// exact when r is a root.
    Polynomial divide_by_root(double r) const {
        if (degree() < 1)
            throw precondition_error("divide_by_root needs degree >= 1");
        std::vector<double> q(coeffs_.size() - 1);
        double carry = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = coeffs_[i] + r * carry;
        }
        return Polynomial{std::move(q)};
    }

    friend Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs) {
        std::vector<double> s(std::max(lhs.coeffs_.size(), rhs.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) s[i] += lhs.coeffs_[i];
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) s[i] += rhs.coeffs_[i];
        return Polynomial{std::move(s)};
    }

    friend Polynomial operator-(const Polynomial& lhs, const Polynomial& rhs) {
        std::vector<double> s(std::max(lhs.coeffs_.size(), rhs.coeffs_.size()), 0.0);
        for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) s[i] += lhs.coeffs_[i];
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) s[i] -= rhs.coeffs_[i];
        return Polynomial{std::move(s)};
    }

    friend Polynomial operator-(const Polynomial& p) { return p * -1.0; }

    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
        if (lhs.is_zero() || rhs.is_zero()) return zero();
        std::vector<double> prod(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
                prod[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
        return Polynomial{std::move(prod)};
    }

    friend Polynomial operator*(const Polynomial& p, double s) {
        std::vector<double> c(p.coeffs_);
        for (double& v : c) v *= s;
        return Polynomial{std::move(c)};
    }

    friend Polynomial operator*(double s, const Polynomial& p) { return p * s; }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            if (coeffs_[i] == 0.0 && coeffs_.size() > 1) continue;
            if (!first) os << (coeffs_[i] < 0 ? " - " : " + ");
            else if (coeffs_[i] < 0) os << "-";
            first = false;
            double mag = std::fabs(coeffs_[i]);
            if (i == 0 || mag != 1.0) os << mag;
            if (i > 0) os << (mag != 1.0 ? "*x" : "x");
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    void normalize() {
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

/// Coefficient-wise comparison at tolerance 1e-10 * (1 + max |coeff|).
inline bool approx_equal(const Polynomial& p, const Polynomial& q, double tol = 1e-10) {
    int d = std::max(p.degree(), q.degree());
    double scale = 0.0;
    for (int i = 0; i <= d; ++i)
        scale = std::max({scale, std::fabs(p.coefficient(i)), std::fabs(q.coefficient(i))});
    double bound = tol * (1.0 + scale);
    for (int i = 0; i <= d; ++i)
        if (std::fabs(p.coefficient(i) - q.coefficient(i)) > bound) return false;
    return true;
}

struct RootOptions {
    double bisect_width = 1e-14;  // scaled by max(1, |a|, |b|)
    int max_bisections = 100;
    int max_newton_steps = 20;
    double distinct_tol = 1e-12;  // scaled likewise
};

namespace detail {

inline double refine_root(const Polynomial& p, const Polynomial& dp, double lo, double hi,
                          double flo, const RootOptions& opt, double scale) {
    // Bisect until the bracket is narrower than the target width, then
    // polish with a bracket-guarded Newton iteration.
    const double width = opt.bisect_width * scale;
    const double lo0 = lo, hi0 = hi;
    int it = 0;
    while (hi - lo > width) {
        if (++it > opt.max_bisections) {
            std::ostringstream os;
            os << "root bisection did not reach width " << width << " in "
               << opt.max_bisections << " steps; bracket [" << lo << ", " << hi << "]";
            throw convergence_error(os.str(), {lo, p(lo)}, {hi, p(hi)});
        }
        double mid = 0.5 * (lo + hi);
        double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int k = 0; k < opt.max_newton_steps; ++k) {
        double fx = p(x);
        double dfx = dp(x);
        if (dfx == 0.0) break;
        double step = fx / dfx;
        double next = x - step;
        if (next < lo0 || next > hi0) break;
        x = next;
        if (std::fabs(step) <= 1e-16 * std::max(1.0, std::fabs(x))) break;
    }
    return x;
}

} // namespace detail

/// All real roots of p inside the open interval (iv.a, iv.b), ascending.
///
/// Brackets come from recursive interlacing: the roots of p' partition iv
/// into monotone pieces, each holding at most one root. The caller asserts
/// that all roots in iv are simple (true for orthogonal polynomials); double
/// roots produce no sign change and are not found.
inline std::vector<double> poly_roots_in(const Polynomial& p, const Interval& iv,
                                         const RootOptions& opt = {}) {
    if (p.is_zero()) throw precondition_error("poly_roots_in: zero polynomial");
    const double scale = std::max({1.0, std::fabs(iv.a), std::fabs(iv.b)});
    if (p.degree() == 0) return {};
    if (p.degree() == 1) {
        double r = -p.coefficient(0) / p.coefficient(1);
        if (iv.strictly_contains(r)) return {r};
        return {};
    }

    const Polynomial dp = p.derivative();
    std::vector<double> cuts = poly_roots_in(dp, iv, opt);
    std::vector<double> pts;
    pts.reserve(cuts.size() + 2);
    pts.push_back(iv.a);
    for (double c : cuts) pts.push_back(c);
    pts.push_back(iv.b);

    std::vector<double> roots;
    const double nudge = opt.bisect_width * scale;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double lo = pts[i], hi = pts[i + 1];
        if (!(lo < hi)) continue;
        double flo = p(lo), fhi = p(hi);
        // An exact zero at a cut is either a boundary root (excluded: the
        // interval is open) or a double root (excluded by precondition);
        // sample just inside instead.
        if (flo == 0.0) flo = p(std::min(lo + nudge, hi));
        if (fhi == 0.0) fhi = p(std::max(hi - nudge, lo));
        if (flo == 0.0 || fhi == 0.0) continue;
        if ((flo < 0.0) == (fhi < 0.0)) continue;
        double r = detail::refine_root(p, dp, lo, hi, flo, opt, scale);
        if (iv.strictly_contains(r)) roots.push_back(r);
    }

    std::sort(roots.begin(), roots.end());
    const double sep = opt.distinct_tol * scale;
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || r - unique.back() > sep) unique.push_back(r);
    return unique;
}

} // namespace nconvex
