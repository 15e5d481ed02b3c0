#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nconvex/errors.hpp"
#include "nconvex/polynomial.hpp"

namespace nconvex {

struct IntegrateOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 1 << 14;
};

double integrate_adaptive(const std::function<double(double)>& f, const Interval& iv,
                          const IntegrateOptions& opt = {});

/// Endpoint factors layered on a base weight. The rule families pick these;
/// users never select them directly.
enum class WeightModifier { none, left, right, both };

/// A nonnegative weight w on [a, b] with an integration contract. A
/// polynomial base enables the closed-form inner-product path that keeps
/// the classical fixtures exact to rounding; any other base goes through
/// the adaptive integrator.
class WeightFunction {
public:
    static WeightFunction legendre(const Interval& iv) {
        return from_polynomial(Polynomial::constant(1.0), iv, "legendre");
    }

    static WeightFunction from_polynomial(Polynomial base, const Interval& iv,
                                          std::string name = "") {
        WeightFunction w(iv);
        if (name.empty()) name = "poly:" + base.str();
        w.name_ = std::move(name);
        w.base_poly_ = base;
        w.base_fn_ = [base](double x) { return base(x); };
        w.validate();
        return w;
    }

    static WeightFunction from_function(std::function<double(double)> base, const Interval& iv,
                                        std::string name = "custom") {
        WeightFunction w(iv);
        w.name_ = std::move(name);
        w.base_fn_ = std::move(base);
        w.validate();
        return w;
    }

    WeightFunction with_modifier(WeightModifier m) const {
        WeightFunction w = *this;
        w.modifier_ = m;
        return w;
    }

    const Interval& interval() const noexcept { return interval_; }
    WeightModifier modifier() const noexcept { return modifier_; }
    const std::string& name() const noexcept { return name_; }
    bool has_polynomial_base() const noexcept { return base_poly_.has_value(); }

    Polynomial modifier_polynomial() const {
        const Polynomial left{-interval_.a, 1.0};
        const Polynomial right{interval_.b, -1.0};
        switch (modifier_) {
            case WeightModifier::none: return Polynomial::constant(1.0);
            case WeightModifier::left: return left;
            case WeightModifier::right: return right;
            case WeightModifier::both: return left * right;
        }
        return Polynomial::constant(1.0);
    }

    /// Base times modifier as one polynomial; only for polynomial bases.
    Polynomial effective_polynomial() const {
        if (!base_poly_)
            throw precondition_error("weight '" + name_ + "' has no polynomial base");
        return *base_poly_ * modifier_polynomial();
    }

    /// Effective weight value base(x) * modifier(x).
    double operator()(double x) const {
        double m = 1.0;
        switch (modifier_) {
            case WeightModifier::none: break;
            case WeightModifier::left: m = x - interval_.a; break;
            case WeightModifier::right: m = interval_.b - x; break;
            case WeightModifier::both: m = (x - interval_.a) * (interval_.b - x); break;
        }
        return base_fn_(x) * m;
    }

    /// Integral of the effective weight over [a, b].
    double integral() const {
        if (base_poly_) return effective_polynomial().integrate(interval_);
        return integrate_adaptive([this](double x) { return (*this)(x); }, interval_);
    }

private:
    explicit WeightFunction(const Interval& iv) : interval_(iv) {}

    void validate() const {
        const int samples = 129;
        for (int i = 0; i <= samples; ++i) {
            double x = interval_.a + (interval_.b - interval_.a) * i / samples;
            double v = base_fn_(x);
            if (v < -1e-12) {
                std::ostringstream os;
                os << "weight '" << name_ << "' is negative at x = " << x << " (" << v << ")";
                throw precondition_error(os.str());
            }
        }
        double mass;
        if (base_poly_) {
            mass = base_poly_->integrate(interval_);
        } else {
            IntegrateOptions loose;
            loose.abs_tol = 1e-10;
            mass = integrate_adaptive(base_fn_, interval_, loose);
        }
        if (!(mass > 1e-12))
            throw precondition_error("weight '" + name_ +
                                     "' integrates to " + std::to_string(mass) +
                                     "; a positive mass is required");
    }

    Interval interval_;
    std::string name_;
    std::optional<Polynomial> base_poly_;
    std::function<double(double)> base_fn_;
    WeightModifier modifier_ = WeightModifier::none;
};

/// <f, g>_w = integral of f * g * w over the weight's interval. Closed form
/// whenever everything involved is polynomial.
inline double inner_product(const Polynomial& f, const Polynomial& g, const WeightFunction& w) {
    if (w.has_polynomial_base())
        return (f * g * w.effective_polynomial()).integrate(w.interval());
    return integrate_adaptive([&](double x) { return f(x) * g(x) * w(x); }, w.interval());
}

inline double inner_product(const std::function<double(double)>& f,
                            const std::function<double(double)>& g, const WeightFunction& w) {
    return integrate_adaptive([&](double x) { return f(x) * g(x) * w(x); }, w.interval());
}

/// Monic polynomials of degrees 0..max, pairwise orthogonal under <.,.>_w.
struct OrthoSequence {
    WeightFunction weight;
    std::vector<Polynomial> polys;
    std::vector<double> gram_norms;  // <p_i, p_i>_w
};

/// Sequential (modified) Gram-Schmidt on the monomial ladder with one
/// re-orthogonalization pass; plain GS visibly loses orthogonality around
/// degree 8 in doubles. Degrees beyond 12 are outside the conditioning
/// contract and rejected.
inline OrthoSequence build_ortho_sequence(const WeightFunction& w, int max_degree) {
    if (max_degree < 0) throw precondition_error("build_ortho_sequence: max_degree >= 0");
    if (max_degree > 12)
        throw precondition_error("build_ortho_sequence: degree cap is 12, got " +
                                 std::to_string(max_degree));

    OrthoSequence seq{w, {}, {}};
    for (int k = 0; k <= max_degree; ++k) {
        Polynomial p = Polynomial::monomial(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < k; ++j) {
                double c = inner_product(p, seq.polys[j], w) / seq.gram_norms[j];
                p = p - c * seq.polys[j];
            }
        }
        double norm = inner_product(p, p, w);
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            std::ostringstream os;
            os << "orthogonalization against weight '" << w.name()
               << "' broke down at degree " << k << " (norm " << norm << ")";
            throw error(os.str());
        }
        seq.polys.push_back(std::move(p));
        seq.gram_norms.push_back(norm);
    }

    for (int i = 0; i <= max_degree; ++i) {
        for (int j = 0; j < i; ++j) {
            double r = inner_product(seq.polys[i], seq.polys[j], w);
            double bound = 1e-9 * std::sqrt(seq.gram_norms[i] * seq.gram_norms[j]);
            if (std::fabs(r) > bound) {
                std::ostringstream os;
                os << "orthogonality lost between degrees " << j << " and " << i
                   << " for weight '" << w.name() << "': residual " << r << " exceeds " << bound;
                throw error(os.str());
            }
        }
        if (std::fabs(seq.polys[i].leading_coefficient() - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "orthogonal polynomial of degree " << i << " is not monic";
            throw error(os.str());
        }
    }
    return seq;
}

/// Zeros of the degree-n member of the orthogonal sequence; all n of them
/// lie strictly inside (a, b).
inline std::vector<double> ortho_nodes(const WeightFunction& w, int degree) {
    if (degree < 1) throw precondition_error("ortho_nodes: degree must be >= 1");
    OrthoSequence seq = build_ortho_sequence(w, degree);
    std::vector<double> roots = poly_roots_in(seq.polys[static_cast<std::size_t>(degree)],
                                              w.interval());
    if (static_cast<int>(roots.size()) != degree) {
        std::ostringstream os;
        os << "internal consistency: degree-" << degree << " orthogonal polynomial for weight '"
           << w.name() << "' yielded " << roots.size() << " roots in (" << w.interval().a
           << ", " << w.interval().b << ")";
        throw error(os.str());
    }
    return roots;
}

/// CLI weight mini-language: "legendre" or "poly:c0,c1,...".
inline WeightFunction parse_weight(std::string_view spec, const Interval& iv) {
    if (spec == "legendre") return WeightFunction::legendre(iv);
    constexpr std::string_view prefix = "poly:";
    if (spec.substr(0, prefix.size()) == prefix) {
        std::vector<double> coeffs;
        std::string body(spec.substr(prefix.size()));
        std::istringstream is(body);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                coeffs.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw precondition_error("weight spec: '" + tok + "' is not a number");
            }
        }
        if (coeffs.empty())
            throw precondition_error("weight spec: 'poly:' needs at least one coefficient");
        return WeightFunction::from_polynomial(Polynomial{std::move(coeffs)}, iv,
                                               std::string(spec));
    }
    throw precondition_error("unknown weight spec '" + std::string(spec) +
                             "' (expected 'legendre' or 'poly:c0,c1,...')");
}

namespace detail {

/// Nodes/weights of the 10-point Gauss-Legendre rule on [-1, 1], generated
/// once from the library's own closed-form machinery. Exact on Pi_19; the
/// adaptive integrator uses it as its per-panel base rule.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre_base() {
    static const auto rule = [] {
        const Interval iv{-1.0, 1.0};
        const WeightFunction one = WeightFunction::legendre(iv);
        OrthoSequence seq = build_ortho_sequence(one, 10);
        const Polynomial& p10 = seq.polys[10];
        const Polynomial dp10 = p10.derivative();
        std::vector<double> nodes = poly_roots_in(p10, iv);
        std::vector<double> weights(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            weights[i] = p10.divide_by_root(nodes[i]).integrate(iv) / dp10(nodes[i]);
        return std::pair{std::move(nodes), std::move(weights)};
    }();
    return rule;
}

inline double gauss_panel(const std::function<double(double)>& f, double lo, double hi) {
    const auto& [nodes, weights] = gauss_legendre_base();
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(mid + half * nodes[i]);
    return acc * half;
}

} // namespace detail

/// Adaptive bisection with a fixed high-order Gauss panel rule. A panel is
/// accepted when its two-half refinement agrees with the single-panel
/// estimate to the length-proportional share of the tolerance.
inline double integrate_adaptive(const std::function<double(double)>& f, const Interval& iv,
                                 const IntegrateOptions& opt) {
    const double total_len = iv.length();
    const double whole = detail::gauss_panel(f, iv.a, iv.b);
    const double budget = std::max(opt.abs_tol, opt.rel_tol * std::fabs(whole));

    struct Panel {
        double lo, hi, estimate;
    };
    std::deque<Panel> work{{iv.a, iv.b, whole}};
    double result = 0.0;
    int panels = 1;
    double last_est = whole, last_refined = whole;

    while (!work.empty()) {
        Panel panel = work.back();
        work.pop_back();
        const double mid = 0.5 * (panel.lo + panel.hi);
        const double left = detail::gauss_panel(f, panel.lo, mid);
        const double right = detail::gauss_panel(f, mid, panel.hi);
        const double refined = left + right;
        const double err = std::fabs(refined - panel.estimate);
        last_est = panel.estimate;
        last_refined = refined;
        if (err <= budget * ((panel.hi - panel.lo) / total_len) ||
            (panel.hi - panel.lo) <= 1e-15 * total_len) {
            result += refined;
            continue;
        }
        panels += 1;
        if (panels > opt.max_panels) {
            std::ostringstream os;
            os << "adaptive integration exceeded " << opt.max_panels
               << " panels on [" << panel.lo << ", " << panel.hi << "]";
            throw convergence_error(os.str(), {last_est}, {last_refined});
        }
        work.push_back({panel.lo, mid, left});
        work.push_back({mid, panel.hi, right});
    }
    return result;
}

} // namespace nconvex
