#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "towlab/domain.hpp"
#include "towlab/point.hpp"

namespace towlab {

enum class NodeClass : uint8_t { interior, strip, outside };
enum class BallClosure : uint8_t { open, closed };

// Axis-aligned grid with spacing h = eps/k anchored at the domain's bounding
// box corner. k >= 2 is the regular DPP lattice: the grid extends past the
// domain so that the full eps-ball stencil of every interior node is covered,
// and strip nodes obey dist(x, Omega) <= eps + h*sqrt(n).
//
// k = 1 is the coarse discrete-walk variant (Examples on the eps-grid): the
// grid is trimmed to the closed bounding box, every non-interior node is
// strip, and the DPP stencil is the closed ball, i.e. the +-eps axis steps.
class Lattice {
public:
    static std::shared_ptr<const Lattice> build(const Domain& dom, double epsilon,
                                                int refinement_k);

    const Domain& domain() const { return domain_; }
    double epsilon() const { return epsilon_; }
    double spacing() const { return h_; }
    int refinement() const { return k_; }
    int dim() const { return domain_.dim(); }
    BallClosure dpp_closure() const { return k_ == 1 ? BallClosure::closed : BallClosure::open; }

    int64_t grid_size() const { return total_; }
    Point node_point(int64_t idx) const;
    NodeClass node_class(int64_t idx) const { return cls_[static_cast<size_t>(idx)]; }

    const std::vector<int64_t>& interior_nodes() const { return interior_; }
    const std::vector<int64_t>& strip_nodes() const { return strip_; }
    // interior + strip in row-major order (the serialization order)
    const std::vector<int64_t>& active_nodes() const { return active_; }

    // All lattice nodes y != node_point(node) with |y - x| < eps (open) or
    // <= eps (closed), in deterministic row-major offset order. Empty when
    // eps < spacing. Throws if `node` is not interior or out of range.
    std::vector<int64_t> ball_neighbors(int64_t node, double eps, BallClosure cl) const;

    // Precomputed DPP stencil neighbors of the i-th interior node.
    const int64_t* dpp_neighbors(size_t interior_pos, size_t* count) const {
        const auto b = csr_start_[interior_pos];
        *count = static_cast<size_t>(csr_start_[interior_pos + 1] - b);
        return csr_idx_.data() + b;
    }

    // Nodes (any class but outside) within the open eps-ball of an arbitrary
    // point; used by the greedy strategies.
    std::vector<int64_t> nodes_in_open_ball(const Point& x, double eps) const;

    int64_t nearest_active_node(const Point& x) const;

private:
    Lattice() = default;
    void decompose(int64_t idx, std::array<int64_t, kMaxDim>& mi) const;

    Domain domain_ = Domain::interval(0, 1);
    double epsilon_ = 0;
    double h_ = 0;
    int k_ = 0;
    Point origin_{1};
    std::array<int64_t, kMaxDim> extent_{};  // nodes per axis
    std::array<int64_t, kMaxDim> stride_{};
    int64_t total_ = 0;
    std::vector<NodeClass> cls_;
    std::vector<int64_t> interior_, strip_, active_;
    // DPP stencil as integer offsets plus CSR neighbor lists for interior nodes
    std::vector<std::array<int32_t, kMaxDim>> stencil_;
    std::vector<int64_t> csr_start_;
    std::vector<int64_t> csr_idx_;
};

// Values on every grid node; only interior/strip entries are meaningful.
struct LatticeField {
    std::shared_ptr<const Lattice> lattice;
    std::vector<double> values;

    explicit LatticeField(std::shared_ptr<const Lattice> lat, double fill = 0.0)
        : lattice(std::move(lat)),
          values(static_cast<size_t>(lattice->grid_size()), fill) {}

    double operator[](int64_t idx) const { return values[static_cast<size_t>(idx)]; }
    double& operator[](int64_t idx) { return values[static_cast<size_t>(idx)]; }
};

}  // namespace towlab
