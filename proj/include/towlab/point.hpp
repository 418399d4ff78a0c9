#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace towlab {

// Points live in dimension 1..kMaxDim (the cylinder walk needs n+1).
inline constexpr int kMaxDim = 4;

class Point {
public:
    Point() = default;
    explicit Point(int dim) : dim_(dim) {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("Point: dimension must be in [1, " +
                                        std::to_string(kMaxDim) + "]");
    }
    Point(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
        if (dim_ < 1 || dim_ > kMaxDim)
            throw std::invalid_argument("Point: bad initializer size");
        int i = 0;
        for (double v : xs) c_[i++] = v;
    }

    static Point zero(int dim) { return Point(dim); }

    int dim() const { return dim_; }
    double& operator[](int i) { return c_[i]; }
    double operator[](int i) const { return c_[i]; }

    Point& operator+=(const Point& o) {
        for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
        return *this;
    }
    Point& operator-=(const Point& o) {
        for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Point& operator*=(double s) {
        for (int i = 0; i < dim_; ++i) c_[i] *= s;
        return *this;
    }

    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double s, Point a) { return a *= s; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i]) return false;
        return true;
    }

private:
    std::array<double, kMaxDim> c_{};
    int dim_ = 0;
};

inline double dot(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Point& a) { return dot(a, a); }
inline double norm(const Point& a) { return std::sqrt(norm2(a)); }

inline double dist2(const Point& a, const Point& b) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

}  // namespace towlab
