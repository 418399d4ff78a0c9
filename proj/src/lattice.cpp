#include "towlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace towlab {

namespace {

// row-major iteration over integer boxes
bool advance(std::array<int64_t, kMaxDim>& it, const std::array<int64_t, kMaxDim>& lo,
             const std::array<int64_t, kMaxDim>& hi, int dims) {
    for (int ax = dims - 1; ax >= 0; --ax) {
        if (++it[ax] <= hi[ax]) return true;
        it[ax] = lo[ax];
    }
    return false;
}

}  // namespace

std::shared_ptr<const Lattice> Lattice::build(const Domain& dom, double epsilon,
                                              int refinement_k) {
    if (!(epsilon > 0)) throw std::invalid_argument("build_lattice: epsilon must be > 0");
    if (refinement_k < 1)
        throw std::invalid_argument("build_lattice: refinement k must be >= 1");
    // k = 1 is only the coarse discrete-walk variant; the regular DPP lattice
    // needs k >= 2 so the open eps-ball stencil is nonempty.
    const int n = dom.dim();

    auto lat = std::shared_ptr<Lattice>(new Lattice());
    lat->domain_ = dom;
    lat->epsilon_ = epsilon;
    lat->k_ = refinement_k;
    lat->h_ = epsilon / refinement_k;
    const double h = lat->h_;

    const Point lo = dom.bbox_lo();
    const Point hi = dom.bbox_hi();
    lat->origin_ = lo;

    const int64_t margin =
        refinement_k == 1 ? 0
                          : refinement_k + static_cast<int64_t>(std::ceil(std::sqrt(n))) + 1;
    lat->total_ = 1;
    for (int ax = 0; ax < n; ++ax) {
        const int64_t span = static_cast<int64_t>(std::ceil((hi[ax] - lo[ax]) / h - 1e-9));
        const int64_t count = span + 2 * margin + 1;
        if (count < 2) throw std::invalid_argument("build_lattice: degenerate axis extent");
        lat->extent_[ax] = count;
        lat->origin_[ax] = lo[ax] - margin * h;
        lat->total_ *= count;
        if (lat->total_ > (int64_t(1) << 31))
            throw std::invalid_argument("build_lattice: lattice too large");
    }
    for (int ax = n - 1; ax >= 0; --ax)
        lat->stride_[ax] = (ax == n - 1) ? 1 : lat->stride_[ax + 1] * lat->extent_[ax + 1];

    // classify
    lat->cls_.resize(static_cast<size_t>(lat->total_), NodeClass::outside);
    const double strip_tol = epsilon + h * std::sqrt(static_cast<double>(n)) + 1e-12;
    for (int64_t idx = 0; idx < lat->total_; ++idx) {
        const Point x = lat->node_point(idx);
        if (dom.inside(x)) {
            lat->cls_[static_cast<size_t>(idx)] = NodeClass::interior;
            lat->interior_.push_back(idx);
        } else if (refinement_k == 1 || dom.distance(x) <= strip_tol) {
            lat->cls_[static_cast<size_t>(idx)] = NodeClass::strip;
            lat->strip_.push_back(idx);
        }
    }
    if (lat->interior_.empty())
        throw std::invalid_argument("build_lattice: domain contains no lattice node");
    if (lat->strip_.empty())
        throw std::invalid_argument("build_lattice: no strip nodes (epsilon too small?)");
    lat->active_.reserve(lat->interior_.size() + lat->strip_.size());
    for (int64_t idx = 0; idx < lat->total_; ++idx)
        if (lat->cls_[static_cast<size_t>(idx)] != NodeClass::outside)
            lat->active_.push_back(idx);

    // DPP stencil: integer offsets with |d|^2 < k^2 (open) resp. <= k^2 (k = 1)
    const int64_t k = refinement_k;
    const int64_t limit2 = k * k;
    const bool closed = (refinement_k == 1);
    std::array<int64_t, kMaxDim> it{}, slo{}, shi{};
    for (int ax = 0; ax < n; ++ax) {
        slo[ax] = -k;
        shi[ax] = k;
        it[ax] = -k;
    }
    do {
        int64_t d2 = 0;
        for (int ax = 0; ax < n; ++ax) d2 += it[ax] * it[ax];
        if (d2 == 0) continue;
        if (closed ? d2 <= limit2 : d2 < limit2) {
            std::array<int32_t, kMaxDim> off{};
            for (int ax = 0; ax < n; ++ax) off[ax] = static_cast<int32_t>(it[ax]);
            lat->stencil_.push_back(off);
        }
    } while (advance(it, slo, shi, n));
    if (lat->stencil_.empty())
        throw std::invalid_argument("build_lattice: empty DPP stencil");

    // CSR neighbor lists for interior nodes
    lat->csr_start_.reserve(lat->interior_.size() + 1);
    lat->csr_start_.push_back(0);
    std::array<int64_t, kMaxDim> mi{};
    for (int64_t idx : lat->interior_) {
        lat->decompose(idx, mi);
        for (const auto& off : lat->stencil_) {
            int64_t nb = 0;
            bool ok = true;
            for (int ax = 0; ax < n; ++ax) {
                const int64_t j = mi[ax] + off[ax];
                if (j < 0 || j >= lat->extent_[ax]) {
                    ok = false;
                    break;
                }
                nb += j * lat->stride_[ax];
            }
            if (!ok)
                throw std::logic_error(
                    "build_lattice: stencil leaves the grid; margin too small");
            lat->csr_idx_.push_back(nb);
        }
        lat->csr_start_.push_back(static_cast<int64_t>(lat->csr_idx_.size()));
    }
    return lat;
}

void Lattice::decompose(int64_t idx, std::array<int64_t, kMaxDim>& mi) const {
    for (int ax = 0; ax < dim(); ++ax) {
        mi[ax] = idx / stride_[ax];
        idx -= mi[ax] * stride_[ax];
    }
}

Point Lattice::node_point(int64_t idx) const {
    std::array<int64_t, kMaxDim> mi{};
    decompose(idx, mi);
    Point x(dim());
    for (int ax = 0; ax < dim(); ++ax) x[ax] = origin_[ax] + h_ * static_cast<double>(mi[ax]);
    return x;
}

std::vector<int64_t> Lattice::ball_neighbors(int64_t node, double eps, BallClosure cl) const {
    if (node < 0 || node >= total_)
        throw std::out_of_range("ball_neighbors: node outside lattice");
    if (cls_[static_cast<size_t>(node)] != NodeClass::interior)
        throw std::invalid_argument("ball_neighbors: node is not interior");
    if (!(eps > 0)) throw std::invalid_argument("ball_neighbors: epsilon must be > 0");

    const int n = dim();
    const double ratio = eps / h_;
    const int64_t kk = static_cast<int64_t>(std::llround(ratio));
    const bool integral = std::abs(ratio - static_cast<double>(kk)) < 1e-9 && kk >= 1;
    const int64_t reach = static_cast<int64_t>(std::floor(ratio + 1e-9));

    std::array<int64_t, kMaxDim> mi{};
    decompose(node, mi);
    std::vector<int64_t> out;
    std::array<int64_t, kMaxDim> it{}, slo{}, shi{};
    for (int ax = 0; ax < n; ++ax) {
        slo[ax] = -reach;
        shi[ax] = reach;
        it[ax] = -reach;
    }
    if (reach < 1) return out;  // eps below spacing: empty, caller decides
    do {
        int64_t d2 = 0;
        for (int ax = 0; ax < n; ++ax) d2 += it[ax] * it[ax];
        if (d2 == 0) continue;
        bool in;
        if (integral) {
            in = (cl == BallClosure::open) ? d2 < kk * kk : d2 <= kk * kk;
        } else {
            const double r = std::sqrt(static_cast<double>(d2)) * h_;
            in = (cl == BallClosure::open) ? r < eps : r <= eps;
        }
        if (!in) continue;
        int64_t nb = 0;
        bool ok = true;
        for (int ax = 0; ax < n; ++ax) {
            const int64_t j = mi[ax] + it[ax];
            if (j < 0 || j >= extent_[ax]) {
                ok = false;
                break;
            }
            nb += j * stride_[ax];
        }
        if (ok) out.push_back(nb);
    } while (advance(it, slo, shi, n));
    return out;
}

std::vector<int64_t> Lattice::nodes_in_open_ball(const Point& x, double eps) const {
    const int n = dim();
    std::array<int64_t, kMaxDim> it{}, slo{}, shi{};
    for (int ax = 0; ax < n; ++ax) {
        slo[ax] = std::max<int64_t>(
            0, static_cast<int64_t>(std::ceil((x[ax] - eps - origin_[ax]) / h_)));
        shi[ax] = std::min<int64_t>(
            extent_[ax] - 1,
            static_cast<int64_t>(std::floor((x[ax] + eps - origin_[ax]) / h_)));
        if (slo[ax] > shi[ax]) return {};
        it[ax] = slo[ax];
    }
    // relative guard: nodes sitting on the sphere up to roundoff stay out
    const double e2 = eps * eps * (1.0 - 1e-12);
    std::vector<int64_t> out;
    do {
        int64_t idx = 0;
        Point y(n);
        for (int ax = 0; ax < n; ++ax) {
            idx += it[ax] * stride_[ax];
            y[ax] = origin_[ax] + h_ * static_cast<double>(it[ax]);
        }
        if (cls_[static_cast<size_t>(idx)] == NodeClass::outside) continue;
        if (dist2(y, x) < e2) out.push_back(idx);
    } while (advance(it, slo, shi, n));
    return out;
}

int64_t Lattice::nearest_active_node(const Point& x) const {
    int64_t best = -1;
    double best_d = 1e300;
    for (int64_t idx : active_) {
        const double d = dist2(node_point(idx), x);
        if (d < best_d) {
            best_d = d;
            best = idx;
        }
    }
    return best;
}

}  // namespace towlab
