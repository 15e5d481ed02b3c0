#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "nconvex/errors.hpp"
#include "nconvex/polynomial.hpp"

namespace nconvex {

/// Node layout for the attaching construction: strictly increasing base
/// points x_1 < ... < x_k inside [a, b], each carrying a multiplicity l_j
/// (l_j - 1 points get attached to the right of x_j). Valid layouts satisfy
/// sum(l_j) == order + 1, k <= order, and multiplicity 1 at any node that
/// sits on the interval boundary.
struct NodeSpec {
    Interval interval;
    int order;                  // convexity order n; interpolant lives in Pi_n
    std::vector<double> nodes;
    std::vector<int> mults;

    int total_multiplicity() const {
        return std::accumulate(mults.begin(), mults.end(), 0);
    }

    int max_multiplicity() const {
        int m = 0;
        for (int l : mults) m = std::max(m, l);
        return m;
    }

    void validate() const {
        if (order < 1) throw precondition_error("NodeSpec: order must be >= 1");
        if (nodes.empty()) throw precondition_error("NodeSpec: at least one node required");
        if (nodes.size() != mults.size())
            throw precondition_error("NodeSpec: nodes and multiplicities differ in length");
        if (static_cast<int>(nodes.size()) > order) {
            std::ostringstream os;
            os << "NodeSpec: " << nodes.size() << " nodes exceed order " << order;
            throw precondition_error(os.str());
        }
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (!interval.contains(nodes[j])) {
                std::ostringstream os;
                os << "NodeSpec: node " << nodes[j] << " outside [" << interval.a << ", "
                   << interval.b << "]";
                throw precondition_error(os.str());
            }
            if (mults[j] < 1) throw precondition_error("NodeSpec: multiplicities must be >= 1");
            if (j > 0 && !(nodes[j - 1] < nodes[j]))
                throw precondition_error("NodeSpec: nodes must be strictly increasing");
        }
        if (total_multiplicity() != order + 1) {
            std::ostringstream os;
            os << "NodeSpec: multiplicities sum to " << total_multiplicity() << ", expected "
               << (order + 1) << " (= order + 1)";
            throw precondition_error(os.str());
        }
        if (nodes.front() == interval.a && mults.front() != 1)
            throw precondition_error(
                "NodeSpec: node at the left endpoint must have multiplicity 1 "
                "(points attach only to interior nodes)");
        if (nodes.back() == interval.b && mults.back() != 1)
            throw precondition_error(
                "NodeSpec: node at the right endpoint must have multiplicity 1 "
                "(points attach only to interior nodes)");
    }

    /// Nodes repeated per multiplicity, ascending: the confluent sequence.
    std::vector<double> expanded() const {
        std::vector<double> z;
        z.reserve(static_cast<std::size_t>(total_multiplicity()));
        for (std::size_t j = 0; j < nodes.size(); ++j)
            for (int s = 0; s < mults[j]; ++s) z.push_back(nodes[j]);
        return z;
    }
};

} // namespace nconvex
