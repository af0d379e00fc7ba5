#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bgc/error.hpp"
#include "bgc/game.hpp"
#include "bgc/rational.hpp"

namespace bgc {

// Payment variable x_{i,o}: what agent i is paid when o is observed.
struct PaymentVar {
    AgentId agent = 0;
    std::uint32_t observation = 0;

    friend auto operator<=>(const PaymentVar&, const PaymentVar&) = default;
};

// sum(coefficients[k] * x_k) >= constant, or > constant when strict.
template <class Key>
struct BasicLinearConstraint {
    std::map<Key, Rational> coefficients;
    Rational constant = 0;
    bool strict = false;

    Rational lhs(const std::map<Key, Rational>& point) const {
        Rational sum = 0;
        for (const auto& [k, a] : coefficients) {
            auto it = point.find(k);
            if (it != point.end()) {
                sum += a * it->second;
            }
        }
        return sum;
    }

    bool satisfied_by(const std::map<Key, Rational>& point) const {
        Rational l = lhs(point);
        return strict ? l > constant : l >= constant;
    }

    friend bool operator==(const BasicLinearConstraint&, const BasicLinearConstraint&) = default;
};

using LinearConstraint = BasicLinearConstraint<PaymentVar>;

// x_{to} - x_{from} > bound (or >=).
inline LinearConstraint payment_difference(AgentId agent, std::uint32_t to, std::uint32_t from, Rational bound,
                                           bool strict) {
    LinearConstraint c;
    c.coefficients[{agent, to}] += 1;
    c.coefficients[{agent, from}] -= 1;
    std::erase_if(c.coefficients, [](const auto& kv) { return kv.second == 0; });
    c.constant = std::move(bound);
    c.strict = strict;
    return c;
}

struct FmOptions {
    bool nonnegative = true;
    std::size_t max_constraints = 200000;  // per elimination stage
};

namespace detail {

template <class Key>
using Row = BasicLinearConstraint<Key>;

// Scales so the first coefficient is +-1; positive scaling keeps the sense.
template <class Key>
Row<Key> normalize(Row<Key> row) {
    std::erase_if(row.coefficients, [](const auto& kv) { return kv.second == 0; });
    if (row.coefficients.empty()) {
        return row;
    }
    Rational scale = abs(row.coefficients.begin()->second);
    if (scale != 1) {
        for (auto& [k, a] : row.coefficients) {
            a /= scale;
        }
        row.constant /= scale;
    }
    return row;
}

// Keeps only the tightest row per coefficient vector. Returns false when a
// variable-free row is violated.
template <class Key>
bool insert_row(std::map<std::map<Key, Rational>, std::pair<Rational, bool>>& rows, Row<Key> row) {
    row = normalize(std::move(row));
    if (row.coefficients.empty()) {
        return row.strict ? 0 > row.constant : 0 >= row.constant;
    }
    auto [it, inserted] = rows.try_emplace(row.coefficients, row.constant, row.strict);
    if (!inserted) {
        auto& [c, s] = it->second;
        if (row.constant > c || (row.constant == c && row.strict && !s)) {
            c = row.constant;
            s = row.strict;
        }
    }
    return true;
}

template <class Key>
std::vector<Row<Key>> materialize(const std::map<std::map<Key, Rational>, std::pair<Rational, bool>>& rows) {
    std::vector<Row<Key>> out;
    out.reserve(rows.size());
    for (const auto& [coeffs, cs] : rows) {
        out.push_back(Row<Key>{coeffs, cs.first, cs.second});
    }
    return out;
}

}  // namespace detail

// Exact Fourier-Motzkin elimination with strictness tracking. Returns a
// rational point satisfying every constraint (strict ones strictly), or
// nullopt iff the system is infeasible. Back-substitution picks the midpoint
// of each variable's residual interval, or lower bound + 1 when unbounded.
template <class Key>
std::optional<std::map<Key, Rational>> fm_feasible(const std::vector<BasicLinearConstraint<Key>>& constraints,
                                                   const FmOptions& options = {}) {
    using Row = detail::Row<Key>;
    std::set<Key> variables;
    for (const auto& c : constraints) {
        for (const auto& [k, a] : c.coefficients) {
            if (a != 0) {
                variables.insert(k);
            }
        }
    }

    std::map<std::map<Key, Rational>, std::pair<Rational, bool>> initial;
    for (const auto& c : constraints) {
        if (!detail::insert_row(initial, c)) {
            return std::nullopt;
        }
    }
    if (options.nonnegative) {
        for (const Key& k : variables) {
            Row r;
            r.coefficients[k] = 1;
            detail::insert_row(initial, r);
        }
    }

    std::vector<std::vector<Row>> stages;
    std::vector<Key> order;
    stages.push_back(detail::materialize(initial));
    std::set<Key> remaining = variables;

    while (!remaining.empty()) {
        const auto& current = stages.back();
        // Eliminate the variable producing the fewest new rows.
        std::optional<Key> pick;
        long long best_cost = 0;
        for (const Key& k : remaining) {
            long long pos = 0;
            long long neg = 0;
            for (const auto& r : current) {
                auto it = r.coefficients.find(k);
                if (it == r.coefficients.end()) {
                    continue;
                }
                (it->second > 0 ? pos : neg) += 1;
            }
            long long cost = pos * neg - pos - neg;
            if (!pick || cost < best_cost) {
                pick = k;
                best_cost = cost;
            }
        }
        const Key var = *pick;
        remaining.erase(var);
        order.push_back(var);

        std::vector<const Row*> lower;
        std::vector<const Row*> upper;
        std::map<std::map<Key, Rational>, std::pair<Rational, bool>> next;
        for (const auto& r : current) {
            auto it = r.coefficients.find(var);
            if (it == r.coefficients.end()) {
                detail::insert_row(next, r);
            } else if (it->second > 0) {
                lower.push_back(&r);
            } else {
                upper.push_back(&r);
            }
        }
        for (const Row* lo : lower) {
            const Rational a = lo->coefficients.at(var);
            for (const Row* up : upper) {
                const Rational b = -up->coefficients.at(var);
                // b*lo + a*up cancels var.
                Row combined;
                for (const auto& [k, c] : lo->coefficients) {
                    combined.coefficients[k] += b * c;
                }
                for (const auto& [k, c] : up->coefficients) {
                    combined.coefficients[k] += a * c;
                }
                combined.coefficients.erase(var);
                combined.constant = b * lo->constant + a * up->constant;
                combined.strict = lo->strict || up->strict;
                if (!detail::insert_row(next, std::move(combined))) {
                    return std::nullopt;
                }
                if (next.size() > options.max_constraints) {
                    throw CapExceeded("Fourier-Motzkin elimination produced too many constraints",
                                      options.max_constraints);
                }
            }
        }
        stages.push_back(detail::materialize(next));
    }

    std::map<Key, Rational> point;
    for (std::size_t step = order.size(); step-- > 0;) {
        const Key var = order[step];
        std::optional<Rational> lo;
        bool lo_strict = false;
        std::optional<Rational> hi;
        bool hi_strict = false;
        for (const auto& r : stages[step]) {
            auto it = r.coefficients.find(var);
            if (it == r.coefficients.end()) {
                continue;
            }
            Rational rest = 0;
            for (const auto& [k, c] : r.coefficients) {
                if (!(k == var)) {
                    rest += c * point.at(k);
                }
            }
            Rational bound = (r.constant - rest) / it->second;
            if (it->second > 0) {
                if (!lo || bound > *lo || (bound == *lo && r.strict)) {
                    lo = bound;
                    lo_strict = r.strict;
                }
            } else {
                if (!hi || bound < *hi || (bound == *hi && r.strict)) {
                    hi = bound;
                    hi_strict = r.strict;
                }
            }
        }
        Rational value = 0;
        if (lo && hi) {
            if (*lo > *hi || (*lo == *hi && (lo_strict || hi_strict))) {
                throw VerificationFailure("Fourier-Motzkin back-substitution found an empty interval");
            }
            value = (*lo == *hi) ? *lo : (*lo + *hi) / 2;
        } else if (lo) {
            value = *lo + 1;
        } else if (hi) {
            value = *hi - 1;
        }
        point[var] = value;
    }

    for (const auto& c : constraints) {
        if (!c.satisfied_by(point)) {
            throw VerificationFailure("Fourier-Motzkin witness violates an input constraint");
        }
    }
    return point;
}

}  // namespace bgc
