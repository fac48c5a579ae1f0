#pragma once

#include "flatnorm/geom/rational.hpp"

#include <compare>
#include <cstddef>
#include <functional>

namespace flatnorm {

// Exact planar point. The double shadow is used only by filtered predicates.
class Point {
public:
    Point() : x_(0), y_(0) {}
    Point(Rational x, Rational y) : x_(std::move(x)), y_(std::move(y)) {
        x_.canonicalize();
        y_.canonicalize();
        fx_ = x_.get_d();
        fy_ = y_.get_d();
    }
    static Point from_doubles(double x, double y) { return {from_double(x), from_double(y)}; }

    const Rational& x() const { return x_; }
    const Rational& y() const { return y_; }
    double dx() const { return fx_; }
    double dy() const { return fy_; }

    friend bool operator==(const Point& a, const Point& b) { return a.x_ == b.x_ && a.y_ == b.y_; }
    friend bool operator<(const Point& a, const Point& b) {
        int c = cmp(a.x_, b.x_);
        return c < 0 || (c == 0 && a.y_ < b.y_);
    }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
    friend bool operator>(const Point& a, const Point& b) { return b < a; }

    friend Point operator+(const Point& a, const Point& b) { return {a.x_ + b.x_, a.y_ + b.y_}; }
    friend Point operator-(const Point& a, const Point& b) { return {a.x_ - b.x_, a.y_ - b.y_}; }
    friend Point operator*(const Rational& s, const Point& a) { return {s * a.x_, s * a.y_}; }

private:
    Rational x_, y_;
    double fx_ = 0, fy_ = 0;
};

Rational dot(const Point& a, const Point& b);
Rational cross(const Point& a, const Point& b);
Rational squared_distance(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);
// a + t (b - a)
Point lerp(const Point& a, const Point& b, const Rational& t);

struct PointHash {
    std::size_t operator()(const Point& p) const;
};

}  // namespace flatnorm
