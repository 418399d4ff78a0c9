#pragma once

#include <string>

#include "towlab/point.hpp"

namespace towlab {

// Bounded domains: interval (a,b), axis-aligned box, Euclidean ball.
// inside() is the strict (open-set) test; distance() measures to the closure.
class Domain {
public:
    enum class Shape { interval, box, ball };

    static Domain interval(double a, double b);
    static Domain box(const Point& lo, const Point& hi);
    static Domain ball(const Point& center, double radius);

    Shape shape() const { return shape_; }
    int dim() const { return dim_; }

    bool inside(const Point& x) const;
    double distance(const Point& x) const;      // 0 on the closure
    double interior_radius(const Point& x) const;  // distance to the boundary from inside
    Point project_to_boundary(const Point& x) const;

    Point bbox_lo() const;
    Point bbox_hi() const;
    double diameter() const;

    // true iff x is outside the closed domain and within distance eps of it
    bool strip_contains(const Point& x, double eps) const;

    std::string describe() const;

private:
    Domain() = default;
    void check_dim(const Point& x) const;

    Shape shape_ = Shape::interval;
    int dim_ = 1;
    Point lo_{1};      // interval/box corners
    Point hi_{1};
    Point center_{1};  // ball
    double radius_ = 0;
};

}  // namespace towlab
