#pragma once

#include "mst/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mst {

enum class TollKind { constant, path_length, shape, power, custom };

/// Growth class of a toll sequence, in the sense of the transfer theorems.
enum class TollClass { small, borderline, moderate, linear, large, unknown };

/// A toll sequence: explicit values t_0..t_{m-2} plus a rule for n >= m-1.
/// The recurrence machinery reads initial conditions from a separate
/// base-value list; by convention `initial` doubles as that default.
struct TollSequence {
    int m = 2;
    TollKind kind = TollKind::constant;
    double beta = 0.0;
    int p = 0;
    std::vector<double> initial;              // t_0 .. t_{m-2}
    std::function<double(long)> rule;         // n >= m-1
    bool exact = true;                        // values are dyadic rationals
    bool eventually_constant = false;
    double tail_constant = 0.0;               // valid when eventually_constant
    std::string id;

    double value(long n) const {
        if (n < 0) throw std::invalid_argument("toll index must be nonnegative");
        if (n <= m - 2) return initial[static_cast<std::size_t>(n)];
        return rule(n);
    }

    /// Values of t_0..t_N as a dense table (Monte Carlo fast path).
    std::vector<double> table(long N) const {
        std::vector<double> t(static_cast<std::size_t>(N) + 1);
        for (long n = 0; n <= N; ++n) t[static_cast<std::size_t>(n)] = value(n);
        return t;
    }

    TollClass classify() const {
        switch (kind) {
            case TollKind::constant: return TollClass::small;
            case TollKind::shape: return TollClass::small;  // log growth
            case TollKind::path_length: return TollClass::linear;
            case TollKind::power:
                if (beta < 0.5) return TollClass::small;
                if (beta == 0.5) return p == 0 ? TollClass::borderline : TollClass::borderline;
                if (beta < 1.0) return TollClass::moderate;
                if (beta == 1.0) return TollClass::linear;
                return TollClass::large;
            case TollKind::custom:
                if (eventually_constant) return TollClass::small;
                return TollClass::unknown;
        }
        return TollClass::unknown;
    }
};

inline TollSequence constant_toll(int m, double c = 1.0) {
    TollSequence t;
    t.m = m;
    t.kind = TollKind::constant;
    t.initial.assign(m - 1, 0.0);
    t.rule = [c](long) { return c; };
    t.exact = true;
    t.eventually_constant = true;
    t.tail_constant = c;
    t.id = (c == 1.0) ? "constant" : ("constant:c=" + format_double(c));
    return t;
}

inline TollSequence path_length_toll(int m) {
    TollSequence t;
    t.m = m;
    t.kind = TollKind::path_length;
    t.initial.assign(m - 1, 0.0);
    t.rule = [m](long n) { return static_cast<double>(n - (m - 1)); };
    t.exact = true;
    t.id = "path-length";
    return t;
}

inline TollSequence shape_toll(int m) {
    TollSequence t;
    t.m = m;
    t.kind = TollKind::shape;
    t.initial.assign(m - 1, 0.0);
    t.rule = [m](long n) {
        return std::lgamma(n + 1.0) - std::lgamma(m) - std::lgamma(n - m + 2.0);
    };
    t.exact = false;
    t.id = "shape";
    return t;
}

inline TollSequence power_toll(int m, double beta, int p = 0) {
    TollSequence t;
    t.m = m;
    t.kind = TollKind::power;
    t.beta = beta;
    t.p = p;
    t.initial.assign(m - 1, 0.0);
    t.rule = [beta, p](long n) {
        if (n == 0) return 0.0;
        double v = std::pow(static_cast<double>(n), beta);
        for (int i = 0; i < p; ++i) v *= std::log(static_cast<double>(n));
        return v;
    };
    t.exact = false;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "power:beta=%g,p=%d", beta, p);
    t.id = buf;
    return t;
}

/// t_n = t * min(m-1, n); with base f(T) = t|T| the functional is t*n
/// exactly and the variance vanishes identically.
inline TollSequence degenerate_toll(int m, double t = 1.0) {
    TollSequence s;
    s.m = m;
    s.kind = TollKind::custom;
    s.initial.resize(m - 1);
    for (int j = 0; j <= m - 2; ++j) s.initial[j] = t * j;
    s.rule = [t, m](long) { return t * (m - 1); };
    s.exact = true;
    s.eventually_constant = true;
    s.tail_constant = t * (m - 1);
    s.id = (t == 1.0) ? "degenerate" : ("degenerate:t=" + format_double(t));
    return s;
}

/// t_n = 1 for n >= m-1 with initial values K(j+1) - 1/(m-1); the mean
/// remainder stays constant for every m, killing the oscillating terms.
inline TollSequence cancellation_toll(int m, double K = 1.0) {
    TollSequence s;
    s.m = m;
    s.kind = TollKind::custom;
    s.initial.resize(m - 1);
    for (int j = 0; j <= m - 2; ++j) s.initial[j] = K * (j + 1) - 1.0 / (m - 1);
    s.rule = [](long) { return 1.0; };
    s.exact = true;
    s.eventually_constant = true;
    s.tail_constant = 1.0;
    s.id = "cancellation:K=" + format_double(K);
    return s;
}

inline TollSequence custom_toll(int m, std::vector<double> initial,
                                std::function<double(long)> rule, std::string id,
                                bool exact = true) {
    TollSequence s;
    s.m = m;
    s.kind = TollKind::custom;
    if (initial.empty()) initial.assign(m - 1, 0.0);
    if (static_cast<int>(initial.size()) != m - 1)
        throw std::invalid_argument("custom toll needs m-1 initial values");
    s.initial = std::move(initial);
    s.rule = std::move(rule);
    s.exact = exact;
    s.id = std::move(id);
    return s;
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& args) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("toll spec: expected key=value, got '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '|')) out.push_back(std::stod(item));
    return out;
}

}  // namespace detail

/// Toll spec mini-grammar: name[:key=val,...].  Examples:
///   constant, path-length, shape, power:beta=0.75,p=1,
///   degenerate:t=1, cancellation:K=1, custom:file=tolls.csv,initial=0|0
inline TollSequence parse_toll(int m, const std::string& spec) {
    std::string name = spec;
    std::string args;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        args = spec.substr(colon + 1);
    }
    auto kv = detail::parse_kv(args.empty() ? std::string() : args);
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        for (auto& [k, v] : kv)
            if (k == key) return v;
        return std::nullopt;
    };
    if (name == "constant") return constant_toll(m, get("c") ? std::stod(*get("c")) : 1.0);
    if (name == "path-length") return path_length_toll(m);
    if (name == "shape") return shape_toll(m);
    if (name == "power") {
        if (!get("beta")) throw std::invalid_argument("power toll requires beta=");
        return power_toll(m, std::stod(*get("beta")), get("p") ? std::stoi(*get("p")) : 0);
    }
    if (name == "degenerate") return degenerate_toll(m, get("t") ? std::stod(*get("t")) : 1.0);
    if (name == "cancellation")
        return cancellation_toll(m, get("K") ? std::stod(*get("K")) : 1.0);
    if (name == "custom") {
        if (!get("file")) throw std::invalid_argument("custom toll requires file=");
        std::ifstream in(*get("file"));
        if (!in) throw std::invalid_argument("cannot open toll file " + *get("file"));
        auto values = std::make_shared<std::vector<double>>();
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::stringstream ls(line);
            std::string a, b;
            if (!std::getline(ls, a, ',') || !std::getline(ls, b)) continue;
            long n = std::stol(a);
            if (n >= static_cast<long>(values->size())) values->resize(n + 1, 0.0);
            (*values)[n] = std::stod(b);
        }
        std::vector<double> initial;
        if (get("initial")) initial = detail::parse_list(*get("initial"));
        auto rule = [values](long n) {
            if (n >= static_cast<long>(values->size()))
                throw std::out_of_range("custom toll table has no entry for n=" +
                                        std::to_string(n));
            return (*values)[n];
        };
        return custom_toll(m, std::move(initial), rule, spec);
    }
    throw std::invalid_argument("unknown toll kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// The series K_1 = sum_{j>=0} b_j / ((j+1)(j+2)), which drives the linear
// mean term; tails beyond the direct range are integrated analytically.

namespace detail {

/// int_A^inf x^g ln^p x dx for g < -1, p in {0,1,2}.
inline double power_log_integral(double g, int p, double A) {
    const double gp1 = g + 1.0;
    const double Ag = std::pow(A, gp1);
    const double lA = std::log(A);
    switch (p) {
        case 0: return -Ag / gp1;
        case 1: return Ag * (-lA / gp1 + 1.0 / (gp1 * gp1));
        case 2:
            return Ag * (-lA * lA / gp1 + 2.0 * lA / (gp1 * gp1) - 2.0 / (gp1 * gp1 * gp1));
        default: throw std::invalid_argument("ln power must be 0, 1 or 2");
    }
}

/// sum_{j>=M} j^beta ln^p j / ((j+1)(j+2)), beta < 1, via midpoint integral
/// of the 1/x^2 expansion of the kernel.
inline double tail_power_series(double beta, int p, long M) {
    static constexpr double coef[] = {1.0, -3.0, 7.0, -15.0, 31.0};
    const double A = static_cast<double>(M) - 0.5;
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += coef[i] * power_log_integral(beta - 2.0 - i, p, A);
    return s;
}

}  // namespace detail

struct SeriesConstant {
    double value = 0.0;       // K_1
    bool convergent = false;
    double tail = 0.0;        // magnitude of the analytic tail that was added
};

/// K_1 for the input sequence (base values then toll).  Returns a
/// non-convergent marker for linear-or-larger tolls.
inline SeriesConstant series_constant(const TollSequence& toll,
                                      const std::vector<double>& base,
                                      long direct_terms = 1'000'000) {
    const int m = toll.m;
    SeriesConstant out;
    const TollClass cls = toll.classify();
    if (cls == TollClass::linear || cls == TollClass::large) return out;  // divergent
    if (cls == TollClass::unknown && !toll.eventually_constant) return out;

    double s = 0.0;
    for (int j = 0; j <= m - 2; ++j)
        s += base[j] / (static_cast<double>(j + 1) * (j + 2));

    if (toll.eventually_constant) {
        // exact telescoped tail: sum_{j>=J} 1/((j+1)(j+2)) = 1/(J+1)
        long J = m - 1;
        out.tail = toll.tail_constant / static_cast<double>(J + 1);
        out.value = s + out.tail;
        out.convergent = true;
        return out;
    }

    long M = direct_terms;
    for (long j = m - 1; j < M; ++j)
        s += toll.value(j) / (static_cast<double>(j + 1) * (j + 2));

    double tail = 0.0;
    if (toll.kind == TollKind::power) {
        tail = detail::tail_power_series(toll.beta, toll.p, M);
    } else if (toll.kind == TollKind::shape) {
        // ln C(j, m-1) = (m-1) ln j - ln (m-1)! - S1/j - S2/(2 j^2) - ...
        const double S1 = 0.5 * (m - 1.0) * (m - 2.0);
        double S2 = 0.0;
        for (int i = 0; i <= m - 2; ++i) S2 += static_cast<double>(i) * i;
        tail = (m - 1.0) * detail::tail_power_series(0.0, 1, M) -
               std::lgamma(static_cast<double>(m)) * detail::tail_power_series(0.0, 0, M) -
               S1 * detail::tail_power_series(-1.0, 0, M) -
               0.5 * S2 * detail::tail_power_series(-2.0, 0, M);
    } else if (toll.kind == TollKind::power && toll.beta >= 1.0) {
        return out;
    }
    out.tail = tail;
    out.value = s + tail;
    out.convergent = true;
    return out;
}

/// Exact K_1 for eventually-constant tolls, in rational arithmetic.
inline std::optional<Rational> series_constant_rational(const TollSequence& toll,
                                                        const std::vector<Rational>& base) {
    if (!toll.exact || !toll.eventually_constant) return std::nullopt;
    const int m = toll.m;
    Rational s = 0;
    for (int j = 0; j <= m - 2; ++j) s += base[j] / Rational((j + 1) * (j + 2));
    s += Rational(toll.tail_constant) / Rational(m);
    return s;
}

}  // namespace mst
