#include "towlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace towlab {

Domain Domain::interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("Domain::interval: need a < b");
    Domain d;
    d.shape_ = Shape::interval;
    d.dim_ = 1;
    d.lo_ = Point{a};
    d.hi_ = Point{b};
    return d;
}

Domain Domain::box(const Point& lo, const Point& hi) {
    if (lo.dim() != hi.dim()) throw std::invalid_argument("Domain::box: corner dims differ");
    for (int i = 0; i < lo.dim(); ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("Domain::box: need lo < hi per axis");
    Domain d;
    d.shape_ = Shape::box;
    d.dim_ = lo.dim();
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
}

Domain Domain::ball(const Point& center, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("Domain::ball: radius must be > 0");
    Domain d;
    d.shape_ = Shape::ball;
    d.dim_ = center.dim();
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

void Domain::check_dim(const Point& x) const {
    if (x.dim() != dim_)
        throw std::invalid_argument("Domain: point dimension mismatch");
}

bool Domain::inside(const Point& x) const {
    check_dim(x);
    switch (shape_) {
        case Shape::interval:
            return x[0] > lo_[0] && x[0] < hi_[0];
        case Shape::box:
            for (int i = 0; i < dim_; ++i)
                if (!(x[i] > lo_[i] && x[i] < hi_[i])) return false;
            return true;
        case Shape::ball:
            return dist2(x, center_) < radius_ * radius_;
    }
    return false;
}

double Domain::distance(const Point& x) const {
    check_dim(x);
    switch (shape_) {
        case Shape::interval:
        case Shape::box: {
            double s = 0;
            for (int i = 0; i < dim_; ++i) {
                const double d = std::max({lo_[i] - x[i], x[i] - hi_[i], 0.0});
                s += d * d;
            }
            return std::sqrt(s);
        }
        case Shape::ball:
            return std::max(dist(x, center_) - radius_, 0.0);
    }
    return 0;
}

double Domain::interior_radius(const Point& x) const {
    check_dim(x);
    if (!inside(x)) return 0.0;
    switch (shape_) {
        case Shape::interval:
        case Shape::box: {
            double gap = 1e300;
            for (int i = 0; i < dim_; ++i)
                gap = std::min({gap, x[i] - lo_[i], hi_[i] - x[i]});
            return gap;
        }
        case Shape::ball:
            return radius_ - dist(x, center_);
    }
    return 0.0;
}

Point Domain::project_to_boundary(const Point& x) const {
    check_dim(x);
    switch (shape_) {
        case Shape::interval:
            return Point{(x[0] - lo_[0] <= hi_[0] - x[0]) ? lo_[0] : hi_[0]};
        case Shape::box: {
            Point y = x;
            for (int i = 0; i < dim_; ++i) y[i] = std::clamp(y[i], lo_[i], hi_[i]);
            if (inside(y)) {
                // snap along the axis with the smallest wall gap
                int ax = 0;
                double best = 1e300;
                double wall = 0;
                for (int i = 0; i < dim_; ++i) {
                    const double dl = y[i] - lo_[i], dh = hi_[i] - y[i];
                    if (dl < best) { best = dl; ax = i; wall = lo_[i]; }
                    if (dh < best) { best = dh; ax = i; wall = hi_[i]; }
                }
                y[ax] = wall;
            }
            return y;
        }
        case Shape::ball: {
            const double d = dist(x, center_);
            if (d < 1e-300) {
                Point y = center_;
                y[0] += radius_;
                return y;
            }
            Point y = center_;
            for (int i = 0; i < dim_; ++i) y[i] += (x[i] - center_[i]) * (radius_ / d);
            return y;
        }
    }
    return x;
}

Point Domain::bbox_lo() const {
    if (shape_ == Shape::ball) {
        Point p = center_;
        for (int i = 0; i < dim_; ++i) p[i] -= radius_;
        return p;
    }
    return lo_;
}

Point Domain::bbox_hi() const {
    if (shape_ == Shape::ball) {
        Point p = center_;
        for (int i = 0; i < dim_; ++i) p[i] += radius_;
        return p;
    }
    return hi_;
}

double Domain::diameter() const {
    if (shape_ == Shape::ball) return 2 * radius_;
    return dist(bbox_lo(), bbox_hi());
}

bool Domain::strip_contains(const Point& x, double eps) const {
    if (!(eps > 0)) throw std::invalid_argument("strip_contains: epsilon must be > 0");
    check_dim(x);
    const double d = distance(x);
    return d > 0.0 && d <= eps;
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (shape_) {
        case Shape::interval:
            os << "interval(" << lo_[0] << "," << hi_[0] << ")";
            break;
        case Shape::box:
            os << "box(";
            for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << lo_[i];
            os << ";";
            for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << hi_[i];
            os << ")";
            break;
        case Shape::ball:
            os << "ball(";
            for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << center_[i];
            os << ";" << radius_ << ")";
            break;
    }
    return os.str();
}

}  // namespace towlab
