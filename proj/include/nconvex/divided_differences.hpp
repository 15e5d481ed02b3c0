#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nconvex/errors.hpp"
#include "nconvex/node_spec.hpp"
#include "nconvex/polynomial.hpp"
#include "nconvex/test_function.hpp"

namespace nconvex {

namespace detail {

/// Newton-form coefficients d_k = [z_0, ..., z_k; f] via the divided
/// difference recursion, computed in-place on the value vector. Works for
/// any floating scalar; the attaching construction instantiates it with an
/// extended-precision type.
template <class Real>
std::vector<Real> newton_coefficients(const std::vector<Real>& z, std::vector<Real> vals) {
    const std::size_t m = z.size();
    std::vector<Real> diag(m);
    if (m == 0) return diag;
    diag[0] = vals[0];
    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t i = 0; i + k < m; ++i)
            vals[i] = (vals[i + 1] - vals[i]) / (z[i + k] - z[i]);
        diag[k] = vals[0];
    }
    return diag;
}

/// Expand sum_k d_k * prod_{i<k} (x - z_i) into ascending monomial
/// coefficients (always exactly z.size() slots; trailing entries may be
/// zero).
template <class Real>
std::vector<Real> expand_newton_form(const std::vector<Real>& z, const std::vector<Real>& d) {
    const std::size_t m = z.size();
    std::vector<Real> coeffs(m, Real(0));
    if (m == 0) return coeffs;
    // Horner on the Newton basis: p = d_{m-1}; p = p*(x - z_{k}) + d_k.
    std::vector<Real> acc(m, Real(0));
    acc[0] = d[m - 1];
    std::size_t len = 1;
    for (std::size_t k = m - 1; k-- > 0;) {
        // acc <- acc * (x - z_k) + d_k
        for (std::size_t i = len; i-- > 0;) {
            acc[i + 1] += acc[i];
            acc[i] *= -z[k];
        }
        acc[0] += d[k];
        ++len;
    }
    for (std::size_t i = 0; i < m; ++i) coeffs[i] = acc[i];
    return coeffs;
}

inline void require_distinct(std::span<const double> sorted_points) {
    for (std::size_t i = 0; i + 1 < sorted_points.size(); ++i)
        if (sorted_points[i] == sorted_points[i + 1]) {
            std::ostringstream os;
            os << "divided difference points must be pairwise distinct, found duplicated value "
               << sorted_points[i];
            throw precondition_error(os.str());
        }
}

inline std::pair<std::vector<double>, std::vector<double>>
sorted_point_values(std::span<const double> points, std::span<const double> values) {
    if (points.size() != values.size())
        throw precondition_error("points and values differ in length");
    if (points.empty()) throw precondition_error("at least one point required");
    std::vector<std::size_t> idx(points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    std::vector<double> xs(points.size()), vs(points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        xs[i] = points[idx[i]];
        vs[i] = values[idx[i]];
    }
    require_distinct(xs);
    return {std::move(xs), std::move(vs)};
}

} // namespace detail

/// Full triangular divided-difference table over strictly increasing
/// points: table[k][i] = [x_{i+1}, ..., x_{i+k+1}; f] (row 0 holds values).
struct DividedDiffTable {
    std::vector<double> points;
    std::vector<std::vector<double>> table;

    static DividedDiffTable build(std::span<const double> pts, std::span<const double> vals) {
        auto [xs, vs] = detail::sorted_point_values(pts, vals);
        DividedDiffTable t;
        t.points = std::move(xs);
        t.table.push_back(std::move(vs));
        const std::size_t m = t.points.size();
        for (std::size_t k = 1; k < m; ++k) {
            const auto& prev = t.table[k - 1];
            std::vector<double> row(m - k);
            for (std::size_t i = 0; i + k < m; ++i)
                row[i] = (prev[i + 1] - prev[i]) / (t.points[i + k] - t.points[i]);
            t.table.push_back(std::move(row));
        }
        return t;
    }

    /// [x_1, ..., x_m; f]
    double top() const { return table.back().front(); }
};

/// [x_1, ..., x_m; f] by the recursion. Points are sorted ascending first;
/// symmetry of divided differences makes that sound and reproducible.
inline double divided_difference(std::span<const double> points,
                                 std::span<const double> values) {
    auto [xs, vs] = detail::sorted_point_values(points, values);
    return detail::newton_coefficients(xs, std::move(vs)).back();
}

struct DetDividedDiff {
    double value;
    bool ill_conditioned;  // adjacent points closer than 1e-10
};

/// Determinant form D(x_1..x_n; f) / V(x_1..x_n): the numerator determinant
/// (rows 1, x, ..., x^{n-2}, f) by Gaussian elimination, the Vandermonde by
/// its product formula. Serves as the independent oracle for
/// divided_difference.
inline DetDividedDiff divided_difference_det(std::span<const double> points,
                                             std::span<const double> values) {
    if (points.size() < 2)
        throw precondition_error("divided_difference_det needs at least 2 points");
    auto [xs, vs] = detail::sorted_point_values(points, values);
    const std::size_t n = xs.size();

    bool warn = false;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (xs[i + 1] - xs[i] < 1e-10) warn = true;

    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t col = 0; col < n; ++col) {
        double p = 1.0;
        for (std::size_t row = 0; row + 1 < n; ++row) {
            m[row][col] = p;
            p *= xs[col];
        }
        m[n - 1][col] = vs[col];
    }

    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[pivot][c])) pivot = r;
        if (m[pivot][c] == 0.0) {
            det = 0.0;
            break;
        }
        if (pivot != c) {
            std::swap(m[pivot], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }

    double vand = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) vand *= xs[j] - xs[i];

    return {det / vand, warn};
}

/// The unique p in Pi_{m-1} through (points_i, values_i), expanded to
/// coefficient form from the Newton representation.
inline Polynomial newton_interpolant(std::span<const double> points,
                                     std::span<const double> values) {
    auto [xs, vs] = detail::sorted_point_values(points, values);
    auto d = detail::newton_coefficients(xs, std::move(vs));
    return Polynomial{detail::expand_newton_form(xs, d)};
}

/// Hermite (confluent Newton) interpolant: the layout's nodes enter the
/// table with their multiplicities, and a block of j+1 equal nodes holds
/// f^(j)(x) / j!.
inline Polynomial confluent_interpolant(const NodeSpec& spec, const TestFunction& f) {
    spec.validate();
    const std::vector<double> z = spec.expanded();
    const std::size_t m = z.size();

    std::vector<double> factorial(m, 1.0);
    for (std::size_t k = 1; k < m; ++k) factorial[k] = factorial[k - 1] * static_cast<double>(k);

    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) col[i] = f.value(z[i]);

    std::vector<double> diag(m);
    diag[0] = col[0];
    for (std::size_t k = 1; k < m; ++k) {
        std::vector<double> next(m - k);
        for (std::size_t i = 0; i + k < m; ++i) {
            if (z[i + k] == z[i])
                next[i] = f.deriv(static_cast<int>(k), z[i]) / factorial[k];
            else
                next[i] = (col[i + 1] - col[i]) / (z[i + k] - z[i]);
        }
        col = std::move(next);
        diag[k] = col[0];
    }
    return Polynomial{detail::expand_newton_form(z, diag)};
}

struct ConvexityOptions {
    double tol = 1e-10;       // relative to max(1, max |f| on grid)
    int random_tuples = 200;
    std::uint32_t seed = 0x5eed5u;
};

struct ConvexityReport {
    bool convex = true;
    std::vector<double> witness_tuple;  // lexicographically smallest violator
    double witness_determinant = 0.0;   // D = dd * V for that tuple
};

/// Grid evidence for n-convexity: nonnegative (n+2)-point divided
/// differences over (a) every consecutive window of the grid and (b) a
/// deterministic batch of random increasing tuples. Not a proof over the
/// continuum, by design.
inline ConvexityReport is_n_convex_on_grid(const TestFunction& f, int n,
                                           std::span<const double> grid,
                                           const ConvexityOptions& opt = {}) {
    if (n < 1) throw precondition_error("is_n_convex_on_grid: n must be >= 1");
    const std::size_t tuple_len = static_cast<std::size_t>(n) + 2;
    if (grid.size() < tuple_len) {
        std::ostringstream os;
        os << "grid of " << grid.size() << " points cannot host an (n+2)-tuple with n = " << n;
        throw precondition_error(os.str());
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw precondition_error("grid must be strictly increasing");

    std::vector<double> fx(grid.size());
    double fmax = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        fx[i] = f.value(grid[i]);
        fmax = std::max(fmax, std::fabs(fx[i]));
    }
    const double threshold = -opt.tol * std::max(1.0, fmax);

    std::vector<std::vector<std::size_t>> tuples;
    for (std::size_t i = 0; i + tuple_len <= grid.size(); ++i) {
        std::vector<std::size_t> t(tuple_len);
        for (std::size_t j = 0; j < tuple_len; ++j) t[j] = i + j;
        tuples.push_back(std::move(t));
    }
    std::mt19937 rng(opt.seed);
    std::vector<std::size_t> all(grid.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (int r = 0; r < opt.random_tuples; ++r) {
        std::vector<std::size_t> t;
        std::sample(all.begin(), all.end(), std::back_inserter(t), tuple_len, rng);
        tuples.push_back(std::move(t));
    }

    ConvexityReport report;
    std::vector<double> pts(tuple_len), vals(tuple_len);
    for (const auto& t : tuples) {
        for (std::size_t j = 0; j < tuple_len; ++j) {
            pts[j] = grid[t[j]];
            vals[j] = fx[t[j]];
        }
        const double dd = detail::newton_coefficients(pts, vals).back();
        if (dd < threshold) {
            double vand = 1.0;
            for (std::size_t i = 0; i < tuple_len; ++i)
                for (std::size_t j = i + 1; j < tuple_len; ++j) vand *= pts[j] - pts[i];
            if (report.convex ||
                std::lexicographical_compare(pts.begin(), pts.end(),
                                             report.witness_tuple.begin(),
                                             report.witness_tuple.end())) {
                report.witness_tuple = pts;
                report.witness_determinant = dd * vand;
            }
            report.convex = false;
        }
    }
    return report;
}

/// Expected signs of f - p on the intervals cut by the nodes: one entry per
/// interval I_0, ..., I_k; +1 / -1, or 0 for unconstrained.
struct SignPattern {
    std::vector<double> boundaries;
    std::vector<int> signs;

    /// The attaching pattern: sign (-1)^(n+1) left of x_1, then
    /// (-1)^(n+1 - (l_1+...+l_j)) on (x_j, x_{j+1}), ending at +1 right of
    /// x_k. Requires sum(mults) == order + 1 so the bookkeeping closes.
    static SignPattern attaching(int order, std::span<const double> nodes,
                                 std::span<const int> mults) {
        if (nodes.size() != mults.size() || nodes.empty())
            throw precondition_error("SignPattern::attaching: bad node/multiplicity layout");
        int total = 0;
        for (int l : mults) total += l;
        if (total != order + 1)
            throw precondition_error(
                "SignPattern::attaching: multiplicities must sum to order + 1");
        SignPattern p;
        p.boundaries.assign(nodes.begin(), nodes.end());
        p.signs.resize(nodes.size() + 1);
        int cum = 0;
        p.signs[0] = ((order + 1) % 2 == 0) ? 1 : -1;
        for (std::size_t j = 0; j < mults.size(); ++j) {
            cum += mults[j];
            p.signs[j + 1] = ((order + 1 - cum) % 2 == 0) ? 1 : -1;
        }
        return p;
    }

    /// Plain-interpolation alternation (all multiplicities 1, one node more
    /// than the order).
    static SignPattern interpolation(std::span<const double> nodes) {
        if (nodes.size() < 2)
            throw precondition_error("SignPattern::interpolation: need at least 2 nodes");
        const int order = static_cast<int>(nodes.size()) - 1;
        SignPattern p;
        p.boundaries.assign(nodes.begin(), nodes.end());
        p.signs.resize(nodes.size() + 1);
        for (std::size_t j = 0; j < p.signs.size(); ++j)
            p.signs[j] = ((order + 1 - static_cast<int>(j)) % 2 == 0) ? 1 : -1;
        return p;
    }

    /// One-sided pattern (f - p >= 0 everywhere for sign = +1).
    static SignPattern one_sided(std::span<const double> nodes, int sign) {
        SignPattern p;
        p.boundaries.assign(nodes.begin(), nodes.end());
        p.signs.assign(nodes.size() + 1, sign);
        return p;
    }
};

struct SignCheckOptions {
    double tol = 1e-9;
    double exclusion_radius = -1.0;  // < 0: use 1e-6 * interval length
    double phase = 0.5;              // sample placement within each cell
};

struct SignCheckReport {
    bool pass = true;
    double worst_violation = std::numeric_limits<double>::infinity();  // min sign*(f-p)
    double worst_x = std::numeric_limits<double>::quiet_NaN();
    int worst_interval = -1;
    long samples_checked = 0;
};

/// Samples sign_j * (f - p) >= -tol on each interval the pattern constrains,
/// skipping points within the node-exclusion radius (f - p vanishes at the
/// nodes, so its floating-point sign is meaningless there).
inline SignCheckReport check_sign_pattern(const std::function<double(double)>& f,
                                          const Polynomial& p, const SignPattern& pattern,
                                          const Interval& iv, int samples_per_interval,
                                          const SignCheckOptions& opt = {}) {
    if (samples_per_interval < 2)
        throw precondition_error("check_sign_pattern: need at least 2 samples per interval");
    if (pattern.signs.size() != pattern.boundaries.size() + 1)
        throw precondition_error("check_sign_pattern: malformed sign pattern");

    const double excl =
        opt.exclusion_radius >= 0.0 ? opt.exclusion_radius : 1e-6 * iv.length();

    SignCheckReport report;
    const std::size_t k = pattern.boundaries.size();
    for (std::size_t j = 0; j <= k; ++j) {
        const int sign = pattern.signs[j];
        if (sign == 0) continue;
        const double lo = (j == 0) ? iv.a : pattern.boundaries[j - 1];
        const double hi = (j == k) ? iv.b : pattern.boundaries[j];
        if (!(lo < hi)) continue;  // empty cell (node on the boundary)
        const double step = (hi - lo) / samples_per_interval;
        for (int t = 0; t < samples_per_interval; ++t) {
            const double x = lo + (t + opt.phase) * step;
            bool near_node = false;
            for (double b : pattern.boundaries)
                if (std::fabs(x - b) < excl) {
                    near_node = true;
                    break;
                }
            if (near_node || x < iv.a || x > iv.b) continue;
            const double v = sign * (f(x) - p(x));
            ++report.samples_checked;
            if (v < report.worst_violation) {
                report.worst_violation = v;
                report.worst_x = x;
                report.worst_interval = static_cast<int>(j);
            }
        }
    }
    report.pass = report.worst_violation >= -opt.tol;
    return report;
}

} // namespace nconvex
