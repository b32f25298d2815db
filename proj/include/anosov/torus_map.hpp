#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/rational.hpp"

namespace anosov {

struct Vec2 {
    double x = 0, y = 0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    Vec2 apply(const Vec2& p) const {
        return {double(a) * p.x + double(b) * p.y, double(c) * p.x + double(d) * p.y};
    }
    // Only valid for det = 1.
    Mat2 inverse() const { return {d, -b, -c, a}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
    friend auto operator<=>(const Mat2&, const Mat2&) = default;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 minus_identity() { return {-1, 0, 0, -1}; }
    // (x, y) -> (-y, x)
    static Mat2 rotation() { return {0, -1, 1, 0}; }

    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) +
               "," + std::to_string(d) + "]]";
    }
};

inline constexpr double kDefaultSteepness = 0.25;

// Normal-form drawing parameters of one lamination: leaf abscissae (empty
// means i/n) and the steepness factor of the band graphs.
struct Chart {
    std::vector<double> positions;
    double steepness = kDefaultSteepness;

    std::vector<double> resolve(std::size_t n) const {
        if (positions.empty()) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = double(i) / double(n);
            return p;
        }
        if (positions.size() != n)
            throw PreconditionViolation("chart has " + std::to_string(positions.size()) +
                                        " positions for " + std::to_string(n) + " leaves");
        for (std::size_t i = 1; i < n; ++i)
            if (!(positions[i] > positions[i - 1]))
                throw PreconditionViolation("chart positions must increase");
        if (!(positions.back() < positions.front() + 1.0))
            throw PreconditionViolation("chart positions must fit in one turn");
        return positions;
    }
};

// p -> A p + s between normal-form charts of the source and target tori.
struct TorusMap {
    Mat2 matrix;
    Rational sx{0}, sy{0};
    Chart source, target;

    TorusMap() = default;
    TorusMap(Mat2 m, Rational x, Rational y) : matrix(m), sx(x), sy(y) { validate(); }
    TorusMap(Mat2 m, Rational x, Rational y, Chart src, Chart tgt)
        : matrix(m), sx(x), sy(y), source(std::move(src)), target(std::move(tgt)) {
        validate();
    }

    void validate() const {
        if (matrix.det() != 1)
            throw PreconditionViolation("torus map must have determinant +1, got " +
                                        std::to_string(matrix.det()));
    }

    Vec2 apply(const Vec2& p) const {
        Vec2 q = matrix.apply(p);
        return {q.x + to_double(sx), q.y + to_double(sy)};
    }

    TorusMap inverse() const {
        TorusMap r;
        r.matrix = matrix.inverse();
        // exact shift: -A^{-1} s
        r.sx = -(Rational(r.matrix.a) * sx + Rational(r.matrix.b) * sy);
        r.sy = -(Rational(r.matrix.c) * sx + Rational(r.matrix.d) * sy);
        r.source = target;
        r.target = source;
        return r;
    }

    // Vertical circles go to vertical circles.
    bool preserves_vertical() const { return matrix.b == 0; }

    // Sign picked up by the vertical direction when preserved (a = d = +-1).
    int vertical_sign() const { return int(matrix.d); }

    std::string str() const {
        return matrix.str() + " + (" + to_string(sx) + "," + to_string(sy) + ")";
    }
};

// Algebraic intersection number of two primitive classes.
inline std::int64_t intersection_number(std::array<std::int64_t, 2> u, std::array<std::int64_t, 2> v) {
    return u[0] * v[1] - u[1] * v[0];
}

}  // namespace anosov
