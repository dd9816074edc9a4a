#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bmotv {

// Dense polynomial of small degree. Capacity covers products of a cubic piece
// with the quartic mollifier kernel plus one antiderivative.
struct Poly {
    static constexpr int kMaxCoeffs = 12;
    std::array<double, kMaxCoeffs> c{};
    int n = 0;  // number of coefficients in use (degree + 1), 0 = zero poly

    Poly() = default;
    explicit Poly(std::initializer_list<double> coeffs) {
        for (double v : coeffs) c[n++] = v;
        trim();
    }

    static Poly constant(double v) {
        Poly p;
        p.c[0] = v;
        p.n = (v == 0.0) ? 0 : 1;
        return p;
    }

    int degree() const { return n == 0 ? 0 : n - 1; }

    void trim() {
        while (n > 0 && c[n - 1] == 0.0) --n;
    }

    double operator()(double x) const {
        double acc = 0.0;
        for (int i = n - 1; i >= 0; --i) acc = acc * x + c[i];
        return acc;
    }

    Poly& operator+=(const Poly& o) {
        if (o.n > n) n = o.n;
        for (int i = 0; i < o.n; ++i) c[i] += o.c[i];
        trim();
        return *this;
    }

    Poly operator+(const Poly& o) const {
        Poly r = *this;
        r += o;
        return r;
    }

    Poly operator*(double s) const {
        Poly r = *this;
        for (int i = 0; i < n; ++i) r.c[i] *= s;
        r.trim();
        return r;
    }

    Poly derivative() const {
        Poly r;
        for (int i = 1; i < n; ++i) r.c[i - 1] = c[i] * i;
        r.n = n > 0 ? n - 1 : 0;
        r.trim();
        return r;
    }

    Poly antiderivative() const {
        Poly r;
        for (int i = 0; i < n; ++i) r.c[i + 1] = c[i] / (i + 1);
        r.n = n > 0 ? n + 1 : 0;
        return r;
    }

    double integrate(double a, double b) const {
        Poly F = antiderivative();
        return F(b) - F(a);
    }

    // p(x + s), expanded.
    Poly shifted(double s) const {
        Poly r;
        r.n = n;
        // binomial expansion, degree is tiny so the quadratic loop is fine
        for (int i = 0; i < n; ++i) {
            double binom = 1.0;
            double pw = 1.0;
            for (int j = i; j >= 0; --j) {
                r.c[j] += c[i] * binom * pw;
                binom = binom * j / double(i - j + 1);
                pw *= s;
            }
        }
        r.trim();
        return r;
    }

    // p(k * x), expanded.
    Poly scaled_arg(double k) const {
        Poly r;
        r.n = n;
        double pw = 1.0;
        for (int i = 0; i < n; ++i) {
            r.c[i] = c[i] * pw;
            pw *= k;
        }
        r.trim();
        return r;
    }

    static Poly mul(const Poly& a, const Poly& b) {
        Poly r;
        if (a.n == 0 || b.n == 0) return r;
        r.n = a.n + b.n - 1;
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < b.n; ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }
};

// Real roots of a*x^2 + b*x + c inside [lo, hi], sorted. Degenerates to the
// linear case when a is (numerically) zero.
void quadratic_roots_in(double a, double b, double c, double lo, double hi,
                        std::vector<double>& out);

// Roots of p inside (lo, hi) for deg(p) <= 3, sorted: monotone pieces are
// isolated at the (closed-form) roots of p' and each is bisected.
void cubic_roots_in(const Poly& p, double lo, double hi, std::vector<double>& out);

}  // namespace bmotv
