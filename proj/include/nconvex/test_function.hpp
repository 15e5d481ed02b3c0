#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "nconvex/errors.hpp"
#include "nconvex/polynomial.hpp"

namespace nconvex {

/// Extended-precision scalar used by the coalescing-node interpolation
/// kernel, where plain doubles lose the race between truncation and
/// cancellation. Public interfaces stay in double.
using hp_float = boost::multiprecision::cpp_bin_float_quad;

/// A function under test: an evaluator plus optional derivative oracles and
/// the list of convexity orders it claims. Corpus constructors spot-check
/// the claims (see hadamard.hpp); a bare TestFunction is just the carrier.
struct TestFunction {
    std::string name;
    std::function<double(double)> value;
    /// derivative(order, x) for order >= 1; empty when no oracles exist.
    std::function<double(int, double)> derivative;
    /// Optional extended-precision evaluator. Falls back to the double
    /// evaluator (with its noise floor) when absent.
    std::function<hp_float(const hp_float&)> value_hp;
    /// Closed-form polynomial identity, when the function is one.
    std::optional<Polynomial> poly;
    std::vector<int> convex_orders;
    Interval domain{-1.0, 1.0};

    double operator()(double x) const { return value(x); }

    bool has_derivatives() const { return static_cast<bool>(derivative); }

    double deriv(int order, double x) const {
        if (order == 0) return value(x);
        if (!derivative) {
            std::ostringstream os;
            os << "function '" << name << "' has no derivative oracle (order " << order
               << " requested at x = " << x << ")";
            throw capability_error(os.str());
        }
        return derivative(order, x);
    }

    hp_float eval_hp(const hp_float& x) const {
        if (value_hp) return value_hp(x);
        return hp_float(value(static_cast<double>(x)));
    }

    bool declares_order(int n) const {
        return std::find(convex_orders.begin(), convex_orders.end(), n) != convex_orders.end();
    }
};

/// f(x) = x^power with exact derivative oracles.
inline TestFunction tf_monomial(int power, Interval domain, std::vector<int> orders = {}) {
    if (power < 0) throw precondition_error("tf_monomial: power must be >= 0");
    TestFunction f;
    f.name = "x^" + std::to_string(power);
    f.value = [power](double x) { return std::pow(x, power); };
    f.derivative = [power](int k, double x) -> double {
        if (k > power) return 0.0;
        double c = 1.0;
        for (int i = 0; i < k; ++i) c *= static_cast<double>(power - i);
        return c * std::pow(x, power - k);
    };
    f.value_hp = [power](const hp_float& x) {
        hp_float acc = 1;
        for (int i = 0; i < power; ++i) acc *= x;
        return acc;
    };
    f.poly = Polynomial::monomial(power);
    f.convex_orders = std::move(orders);
    f.domain = domain;
    return f;
}

} // namespace nconvex
