#ifndef ZENO_JET_HPP
#define ZENO_JET_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace zeno {

/// Truncated Taylor (dual-number) arithmetic: value plus derivatives up to
/// order K with respect to one scalar variable. Used to evaluate closed-form
/// profiles together with their exact derivatives, so that plateau and
/// support zeros stay bit-exact.
template <std::size_t K>
struct Jet {
    std::array<double, K + 1> d{};  // d[p] = p-th derivative

    static Jet variable(double u) {
        Jet j;
        j.d[0] = u;
        if constexpr (K >= 1) j.d[1] = 1.0;
        return j;
    }
    static Jet constant(double c) {
        Jet j;
        j.d[0] = c;
        return j;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t p = 0; p <= K; ++p) r.d[p] = a.d[p] + b.d[p];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t p = 0; p <= K; ++p) r.d[p] = a.d[p] - b.d[p];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {  // Leibniz
        Jet r;
        for (std::size_t p = 0; p <= K; ++p) {
            double s = 0.0;
            for (std::size_t q = 0; q <= p; ++q) s += binom(p, q) * a.d[q] * b.d[p - q];
            r.d[p] = s;
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        // r = a/b via r*b = a, solved order by order
        Jet r;
        for (std::size_t p = 0; p <= K; ++p) {
            double s = a.d[p];
            for (std::size_t q = 0; q < p; ++q) s -= binom(p, q) * r.d[q] * b.d[p - q];
            r.d[p] = s / b.d[0];
        }
        return r;
    }

    static double binom(std::size_t n, std::size_t k) {
        double r = 1.0;
        for (std::size_t i = 0; i < k; ++i)
            r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
        return r;
    }
};

/// exp of a jet: f = exp(g) satisfies f' = g' f, giving the recurrence
/// f^(p) = sum_{q=0}^{p-1} C(p-1,q) g^(p-q) f^(q).
template <std::size_t K>
Jet<K> exp_jet(const Jet<K>& g) {
    Jet<K> f;
    f.d[0] = std::exp(g.d[0]);
    for (std::size_t p = 1; p <= K; ++p) {
        double s = 0.0;
        for (std::size_t q = 0; q < p; ++q)
            s += Jet<K>::binom(p - 1, q) * g.d[p - q] * f.d[q];
        f.d[p] = s;
    }
    return f;
}

}  // namespace zeno

#endif
