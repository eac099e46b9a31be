#pragma once

// Finite metric measure spaces: validated distance data, positive node
// masses, a conductance-weighted neighbor graph, and (for the model
// generators) a geodesic interpolation oracle. Spaces are immutable after
// construction; every operation here is pure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace abplab {

using PointId = std::size_t;

struct Edge {
    PointId a = 0;
    PointId b = 0;
    double weight = 0.0;  // conductance, measure / length^2
};

enum class RegionKind { OpenDomain, VertexSet, Closure };

/// A subset of point ids, kept sorted and unique.
struct Region {
    std::vector<PointId> ids;
    RegionKind kind = RegionKind::VertexSet;

    static Region of(std::vector<PointId> ids, RegionKind kind = RegionKind::VertexSet) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return Region{std::move(ids), kind};
    }

    bool contains(PointId p) const {
        return std::binary_search(ids.begin(), ids.end(), p);
    }
    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
};

struct MetricViolation {
    enum class Kind { Diagonal, Symmetry, Negative, Triangle, Mass, EdgeWeight };
    Kind kind;
    PointId i = 0, j = 0, k = 0;
    double detail = 0.0;  // magnitude of the violation
};

struct MetricValidationReport {
    std::vector<MetricViolation> violations;
    double tolerance = 0.0;
    bool ok() const { return violations.empty(); }
};

class DiscreteMMSpace {
  public:
    enum class Model { Explicit, Interval, Grid, Circle, Sphere };

    // ---- model generators -------------------------------------------------

    static DiscreteMMSpace interval(double a, double b, std::size_t n) {
        if (n < 2) throw std::invalid_argument("interval: n must be >= 2, got " + std::to_string(n));
        if (!(b > a)) throw std::invalid_argument("interval: need b > a");
        DiscreteMMSpace s;
        s.model_ = Model::Interval;
        s.n_ = n;
        s.dim_ = 1;
        s.grid_h_ = (b - a) / static_cast<double>(n - 1);
        s.grid_lo_ = {a, 0.0, 0.0};
        s.grid_n_ = {n, 1, 1};
        s.coords_.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.coords_[i] = a + s.grid_h_ * static_cast<double>(i);
        s.mass_.assign(n, s.grid_h_);
        for (std::size_t i = 0; i + 1 < n; ++i)
            s.edges_.push_back({i, i + 1, 1.0 / s.grid_h_});  // m/h^2 with m = h
        s.mesh_ = s.grid_h_;
        s.diameter_ = b - a;
        s.finish_construction();
        for (std::size_t i = 0; i < n; ++i) s.interior_[i] = (i > 0 && i + 1 < n);
        return s;
    }

    static DiscreteMMSpace circle(std::size_t n) {
        if (n < 3) throw std::invalid_argument("circle: n must be >= 3, got " + std::to_string(n));
        DiscreteMMSpace s;
        s.model_ = Model::Circle;
        s.n_ = n;
        s.dim_ = 1;
        s.circle_step_ = 2.0 * kPi_ / static_cast<double>(n);
        s.coords_.resize(n);
        for (std::size_t i = 0; i < n; ++i) s.coords_[i] = s.circle_step_ * static_cast<double>(i);
        s.mass_.assign(n, s.circle_step_);
        for (std::size_t i = 0; i < n; ++i)
            s.edges_.push_back({i, (i + 1) % n, 1.0 / s.circle_step_});
        s.mesh_ = s.circle_step_;
        s.diameter_ = s.circle_step_ * static_cast<double>(n / 2);
        s.finish_construction();
        // every circle node has a complete two-sided stencil
        std::fill(s.interior_.begin(), s.interior_.end(), 1);
        return s;
    }

    /// Uniform grid in 1 to 3 dimensions; extent[d] = {lo, hi} per axis.
    static DiscreteMMSpace euclidean_grid(const std::vector<std::array<double, 2>>& extent,
                                          double h) {
        const std::size_t dim = extent.size();
        if (dim < 1 || dim > 3)
            throw std::invalid_argument("euclidean_grid: dim must be 1..3, got " +
                                        std::to_string(dim));
        if (!(h > 0.0)) throw std::invalid_argument("euclidean_grid: h must be positive");
        DiscreteMMSpace s;
        s.model_ = Model::Grid;
        s.dim_ = dim;
        s.grid_h_ = h;
        std::size_t total = 1;
        for (std::size_t d = 0; d < dim; ++d) {
            if (!(extent[d][1] > extent[d][0]))
                throw std::invalid_argument("euclidean_grid: extent[" + std::to_string(d) +
                                            "] needs hi > lo");
            const std::size_t nd =
                static_cast<std::size_t>(std::floor((extent[d][1] - extent[d][0]) / h + 1e-9)) + 1;
            if (nd < 2)
                throw std::invalid_argument("euclidean_grid: extent[" + std::to_string(d) +
                                            "] shorter than one mesh width");
            s.grid_n_[d] = nd;
            s.grid_lo_[d] = extent[d][0];
            total *= nd;
        }
        s.n_ = total;
        s.coords_.resize(total * dim);
        const double node_mass = std::pow(h, static_cast<double>(dim));
        s.mass_.assign(total, node_mass);
        for (std::size_t p = 0; p < total; ++p) {
            const auto idx = s.grid_unflatten(p);
            for (std::size_t d = 0; d < dim; ++d)
                s.coords_[p * dim + d] = s.grid_lo_[d] + h * static_cast<double>(idx[d]);
        }
        const double w = node_mass / (h * h);  // m/h^2
        for (std::size_t p = 0; p < total; ++p) {
            const auto idx = s.grid_unflatten(p);
            for (std::size_t d = 0; d < dim; ++d) {
                if (idx[d] + 1 < s.grid_n_[d]) {
                    auto nb = idx;
                    nb[d] += 1;
                    s.edges_.push_back({p, s.grid_flatten(nb), w});
                }
            }
        }
        s.mesh_ = h;
        double diag = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double len = h * static_cast<double>(s.grid_n_[d] - 1);
            diag += len * len;
        }
        s.diameter_ = std::sqrt(diag);
        s.finish_construction();
        for (std::size_t p = 0; p < total; ++p) {
            const auto idx = s.grid_unflatten(p);
            bool inside = true;
            for (std::size_t d = 0; d < dim; ++d)
                inside = inside && idx[d] > 0 && idx[d] + 1 < s.grid_n_[d];
            s.interior_[p] = inside;
        }
        return s;
    }

    /// Latitude/longitude grid on the unit sphere with cell-centered rows
    /// (no nodes at the poles). Masses are the spherical area weights
    /// sin(colatitude) * dtheta * dphi.
    static DiscreteMMSpace sphere2_grid(std::size_t n_lat, std::size_t n_lon) {
        if (n_lat < 2) throw std::invalid_argument("sphere2_grid: n_lat must be >= 2");
        if (n_lon < 3) throw std::invalid_argument("sphere2_grid: n_lon must be >= 3");
        DiscreteMMSpace s;
        s.model_ = Model::Sphere;
        s.nlat_ = n_lat;
        s.nlon_ = n_lon;
        s.n_ = n_lat * n_lon;
        s.dim_ = 3;
        const double dth = kPi_ / static_cast<double>(n_lat);
        const double dph = 2.0 * kPi_ / static_cast<double>(n_lon);
        s.coords_.resize(s.n_ * 3);
        s.mass_.resize(s.n_);
        for (std::size_t i = 0; i < n_lat; ++i) {
            const double th = (static_cast<double>(i) + 0.5) * dth;
            for (std::size_t j = 0; j < n_lon; ++j) {
                const double ph = static_cast<double>(j) * dph;
                const PointId p = i * n_lon + j;
                s.coords_[p * 3 + 0] = std::sin(th) * std::cos(ph);
                s.coords_[p * 3 + 1] = std::sin(th) * std::sin(ph);
                s.coords_[p * 3 + 2] = std::cos(th);
                s.mass_[p] = std::sin(th) * dth * dph;
            }
        }
        // finite-volume conductances on the latitude/longitude graph
        for (std::size_t i = 0; i < n_lat; ++i) {
            const double th = (static_cast<double>(i) + 0.5) * dth;
            for (std::size_t j = 0; j < n_lon; ++j) {
                const PointId p = i * n_lon + j;
                if (i + 1 < n_lat) {
                    const double face = std::sin((static_cast<double>(i) + 1.0) * dth);
                    s.edges_.push_back({p, (i + 1) * n_lon + j, face * dph / dth});
                }
                s.edges_.push_back({p, i * n_lon + (j + 1) % n_lon, dth / (std::sin(th) * dph)});
            }
        }
        s.mesh_ = std::max(dth, dph);
        s.diameter_ = kPi_;
        s.finish_construction();
        for (std::size_t i = 0; i < n_lat; ++i)
            for (std::size_t j = 0; j < n_lon; ++j)
                s.interior_[i * n_lon + j] = (i > 0 && i + 1 < n_lat);
        return s;
    }

    /// User-supplied space from a full distance matrix. No shortest-path
    /// completion happens unless complete_shortest_paths is set, in which
    /// case the matrix is rebuilt from the edge graph by Dijkstra.
    static DiscreteMMSpace from_data(std::vector<std::vector<double>> dist,
                                     std::vector<double> mass, std::vector<Edge> edges,
                                     std::vector<std::vector<double>> coords = {},
                                     bool complete_shortest_paths = false) {
        const std::size_t n = mass.size();
        if (n == 0) throw std::invalid_argument("from_data: empty space");
        if (dist.size() != n)
            throw std::invalid_argument("from_data: dist must be an n x n matrix");
        for (const auto& row : dist)
            if (row.size() != n)
                throw std::invalid_argument("from_data: dist must be an n x n matrix");
        DiscreteMMSpace s;
        s.model_ = Model::Explicit;
        s.n_ = n;
        s.mass_ = std::move(mass);
        s.edges_ = std::move(edges);
        for (const Edge& e : s.edges_)
            if (e.a >= n || e.b >= n)
                throw std::invalid_argument("from_data: edge endpoint out of range");
        if (!coords.empty()) {
            if (coords.size() != n)
                throw std::invalid_argument("from_data: coords must have one entry per point");
            s.dim_ = coords.front().size();
            s.coords_.resize(n * s.dim_);
            for (std::size_t p = 0; p < n; ++p) {
                if (coords[p].size() != s.dim_)
                    throw std::invalid_argument("from_data: ragged coords");
                for (std::size_t d = 0; d < s.dim_; ++d) s.coords_[p * s.dim_ + d] = coords[p][d];
            }
        }
        s.dist_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s.dist_[i * n + j] = dist[i][j];
        if (complete_shortest_paths) s.complete_by_shortest_paths();
        s.diameter_ = 0.0;
        for (double v : s.dist_) s.diameter_ = std::max(s.diameter_, v);
        s.finish_construction();
        // no generator structure: treat every node with a neighbor as interior
        for (std::size_t p = 0; p < n; ++p) s.interior_[p] = !s.adj_[p].empty();
        s.mesh_ = s.max_nearest_neighbor_distance();
        return s;
    }

    // ---- basic queries ----------------------------------------------------

    std::size_t size() const { return n_; }
    Model model() const { return model_; }
    std::size_t dim() const { return dim_; }

    double dist(PointId i, PointId j) const {
        switch (model_) {
            case Model::Explicit:
                return dist_[i * n_ + j];
            case Model::Interval:
                return std::abs(coords_[i] - coords_[j]);
            case Model::Grid: {
                double acc = 0.0;
                for (std::size_t d = 0; d < dim_; ++d) {
                    const double dd = coords_[i * dim_ + d] - coords_[j * dim_ + d];
                    acc += dd * dd;
                }
                return std::sqrt(acc);
            }
            case Model::Circle: {
                const std::size_t steps = i > j ? i - j : j - i;
                return circle_step_ * static_cast<double>(std::min(steps, n_ - steps));
            }
            case Model::Sphere: {
                // great-circle angle, evaluated in the atan2 form for accuracy
                const double* u = &coords_[i * 3];
                const double* v = &coords_[j * 3];
                const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
                const double cx = u[1] * v[2] - u[2] * v[1];
                const double cy = u[2] * v[0] - u[0] * v[2];
                const double cz = u[0] * v[1] - u[1] * v[0];
                return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
            }
        }
        return 0.0;
    }

    double mass(PointId i) const { return mass_[i]; }
    double total_mass() const {
        double s = 0.0;
        for (double m : mass_) s += m;
        return s;
    }
    double mass_of(const Region& r) const {
        double s = 0.0;
        for (PointId p : r.ids) s += mass_[p];
        return s;
    }

    double diameter() const { return diameter_; }
    double mesh_size() const { return mesh_; }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<PointId>>& adjacency() const { return adj_; }
    bool interior(PointId p) const { return interior_[p] != 0; }
    bool has_edges() const { return !edges_.empty(); }

    /// Coordinate of a point; empty for coordinate-free explicit spaces.
    std::vector<double> coords(PointId p) const {
        std::vector<double> out(dim_);
        for (std::size_t d = 0; d < dim_; ++d) out[d] = coords_[p * dim_ + d];
        return out;
    }
    double coord(PointId p, std::size_t d) const { return coords_[p * dim_ + d]; }

    // ---- geodesic interpolation oracle -------------------------------------

    bool has_geo_oracle() const { return model_ != Model::Explicit; }

    /// Node nearest the constant-speed geodesic position between x and y at
    /// fraction t; ties snap to the lowest point id.
    PointId geo(PointId x, PointId y, double t) const {
        if (!has_geo_oracle())
            throw std::invalid_argument("geo: space has no geodesic interpolation oracle");
        if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("geo: t must lie in [0,1]");
        if (t == 0.0) return x;
        if (t == 1.0) return y;
        switch (model_) {
            case Model::Interval:
            case Model::Grid: {
                PointId out = 0;
                std::size_t stride = 1;
                for (std::size_t d = 0; d < dim_; ++d) {
                    const double p =
                        (1.0 - t) * coords_[x * dim_ + d] + t * coords_[y * dim_ + d];
                    out += stride * snap_to_axis(p, d);
                    stride *= grid_n_[d];
                }
                return out;
            }
            case Model::Circle: {
                const std::size_t fwd = (y + n_ - x) % n_;
                const std::size_t bwd = n_ - fwd;
                // tie (antipodal) goes in the increasing-index direction
                const double dir = (fwd <= bwd) ? 1.0 : -1.0;
                const double steps = static_cast<double>(std::min(fwd, bwd));
                const double pos = static_cast<double>(x) + dir * t * steps;
                return snap_circle(pos);
            }
            case Model::Sphere: {
                const double* u = &coords_[x * 3];
                const double* v = &coords_[y * 3];
                const double dot = std::clamp(u[0] * v[0] + u[1] * v[1] + u[2] * v[2], -1.0, 1.0);
                const double alpha = std::acos(dot);
                std::array<double, 3> p;
                if (alpha < 1e-12) {
                    p = {u[0], u[1], u[2]};
                } else if (kPi_ - alpha < 1e-12) {
                    // antipodal: pick a deterministic orthogonal direction
                    std::array<double, 3> w = orthogonal_unit(u);
                    const double c = std::cos(t * kPi_), s = std::sin(t * kPi_);
                    p = {c * u[0] + s * w[0], c * u[1] + s * w[1], c * u[2] + s * w[2]};
                } else {
                    const double sa = std::sin(alpha);
                    const double cu = std::sin((1.0 - t) * alpha) / sa;
                    const double cv = std::sin(t * alpha) / sa;
                    p = {cu * u[0] + cv * v[0], cu * u[1] + cv * v[1], cu * u[2] + cv * v[2]};
                }
                // nearest node = largest inner product
                PointId best = 0;
                double best_dot = -2.0;
                for (PointId q = 0; q < n_; ++q) {
                    const double d = coords_[q * 3] * p[0] + coords_[q * 3 + 1] * p[1] +
                                     coords_[q * 3 + 2] * p[2];
                    if (d > best_dot + 1e-15) {
                        best_dot = d;
                        best = q;
                    }
                }
                return best;
            }
            default:
                break;
        }
        throw std::logic_error("geo: unreachable");
    }

    // ---- helpers for grid generators ---------------------------------------

    /// Grid node id from integer axis indices (Grid/Interval models).
    PointId grid_flatten(const std::array<std::size_t, 3>& idx) const {
        PointId p = 0;
        std::size_t stride = 1;
        for (std::size_t d = 0; d < dim_; ++d) {
            p += stride * idx[d];
            stride *= grid_n_[d];
        }
        return p;
    }

    std::array<std::size_t, 3> grid_unflatten(PointId p) const {
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (std::size_t d = 0; d < dim_; ++d) {
            idx[d] = p % grid_n_[d];
            p /= grid_n_[d];
        }
        return idx;
    }

    const std::array<std::size_t, 3>& grid_shape() const { return grid_n_; }

  private:
    static constexpr double kPi_ = 3.14159265358979323846;

    void finish_construction() {
        for (double m : mass_) {
            if (!(m > 0.0))
                throw std::invalid_argument("space: node masses must be strictly positive");
        }
        adj_.assign(n_, {});
        for (const Edge& e : edges_) {
            if (!(e.weight > 0.0))
                throw std::invalid_argument("space: edge conductances must be positive");
            adj_[e.a].push_back(e.b);
            adj_[e.b].push_back(e.a);
        }
        for (auto& nb : adj_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        interior_.assign(n_, 0);
    }

    std::size_t snap_to_axis(double p, std::size_t d) const {
        const double s = (p - grid_lo_[d]) / grid_h_;
        const double f = std::floor(s);
        // half-way ties (within 1e-12 of .5) go to the lower index, i.e. the
        // lower point id
        const double up = (s - f > 0.5 + 1e-12) ? 1.0 : 0.0;
        const double k = std::clamp(f + up, 0.0, static_cast<double>(grid_n_[d] - 1));
        return static_cast<std::size_t>(k);
    }

    PointId snap_circle(double pos) const {
        const double f = std::floor(pos);
        const double frac = pos - f;
        long long base = static_cast<long long>(f);
        long long k;
        if (frac > 0.5 + 1e-12) {
            k = base + 1;
        } else if (frac < 0.5 - 1e-12) {
            k = base;
        } else {
            // true tie between base and base+1: lowest resulting id
            const long long n = static_cast<long long>(n_);
            const long long lo = ((base % n) + n) % n;
            const long long hi = (((base + 1) % n) + n) % n;
            k = lo <= hi ? base : base + 1;
        }
        const long long n = static_cast<long long>(n_);
        return static_cast<PointId>(((k % n) + n) % n);
    }

    static std::array<double, 3> orthogonal_unit(const double* u) {
        // start from the basis vector least aligned with u
        std::array<double, 3> e{0.0, 0.0, 0.0};
        std::size_t axis = 0;
        double best = std::abs(u[0]);
        for (std::size_t d = 1; d < 3; ++d) {
            if (std::abs(u[d]) < best) {
                best = std::abs(u[d]);
                axis = d;
            }
        }
        e[axis] = 1.0;
        const double dot = e[0] * u[0] + e[1] * u[1] + e[2] * u[2];
        std::array<double, 3> w{e[0] - dot * u[0], e[1] - dot * u[1], e[2] - dot * u[2]};
        const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        return {w[0] / norm, w[1] / norm, w[2] / norm};
    }

    double max_nearest_neighbor_distance() const {
        if (n_ < 2) return 0.0;
        double worst = 0.0;
        for (PointId i = 0; i < n_; ++i) {
            double nn = std::numeric_limits<double>::infinity();
            for (PointId j = 0; j < n_; ++j)
                if (j != i) nn = std::min(nn, dist(i, j));
            worst = std::max(worst, nn);
        }
        return worst;
    }

    void complete_by_shortest_paths() {
        // all-pairs Dijkstra over the edge graph using edge lengths from the
        // supplied matrix (falling back to weight-free hop metric is not
        // meaningful, so edges must exist)
        if (edges_.empty())
            throw std::invalid_argument("from_data: shortest-path completion needs edges");
        std::vector<std::vector<std::pair<PointId, double>>> g(n_);
        for (const Edge& e : edges_) {
            const double len = dist_[e.a * n_ + e.b];
            g[e.a].push_back({e.b, len});
            g[e.b].push_back({e.a, len});
        }
        for (PointId src = 0; src < n_; ++src) {
            std::vector<double> d(n_, std::numeric_limits<double>::infinity());
            d[src] = 0.0;
            using Item = std::pair<double, PointId>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
            pq.push({0.0, src});
            while (!pq.empty()) {
                auto [dd, u] = pq.top();
                pq.pop();
                if (dd > d[u]) continue;
                for (auto [v, len] : g[u]) {
                    if (d[u] + len < d[v]) {
                        d[v] = d[u] + len;
                        pq.push({d[v], v});
                    }
                }
            }
            for (PointId j = 0; j < n_; ++j) dist_[src * n_ + j] = d[j];
        }
    }

    Model model_ = Model::Explicit;
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> coords_;  // n * dim
    std::vector<double> mass_;
    std::vector<Edge> edges_;
    std::vector<std::vector<PointId>> adj_;
    std::vector<char> interior_;
    std::vector<double> dist_;  // Explicit model only
    double mesh_ = 0.0;
    double diameter_ = 0.0;
    double circle_step_ = 0.0;
    std::array<std::size_t, 3> grid_n_{1, 1, 1};
    std::array<double, 3> grid_lo_{0.0, 0.0, 0.0};
    double grid_h_ = 0.0;
    std::size_t nlat_ = 0, nlon_ = 0;
};

// ---- region machinery -------------------------------------------------------

/// Nodes outside omega adjacent (via edges) to a node of omega.
inline Region boundary(const DiscreteMMSpace& space, const Region& omega) {
    std::vector<char> in(space.size(), 0);
    for (PointId p : omega.ids) in[p] = 1;
    std::vector<PointId> out;
    for (PointId p : omega.ids)
        for (PointId q : space.adjacency()[p])
            if (!in[q]) out.push_back(q);
    Region r = Region::of(std::move(out), RegionKind::VertexSet);
    return r;
}

/// omega together with its discrete boundary.
inline Region closure(const DiscreteMMSpace& space, const Region& omega) {
    Region b = boundary(space, omega);
    std::vector<PointId> all = omega.ids;
    all.insert(all.end(), b.ids.begin(), b.ids.end());
    return Region::of(std::move(all), RegionKind::Closure);
}

inline Region complement(const DiscreteMMSpace& space, const Region& a) {
    std::vector<char> in(space.size(), 0);
    for (PointId p : a.ids) in[p] = 1;
    std::vector<PointId> out;
    for (PointId p = 0; p < space.size(); ++p)
        if (!in[p]) out.push_back(p);
    return Region::of(std::move(out), RegionKind::VertexSet);
}

/// d(x, A) for every node x (zero on A). For grid-backed models the scan is
/// reduced to the inner ring of A, which carries the same minima.
inline std::vector<double> distance_to_region(const DiscreteMMSpace& space, const Region& a) {
    std::vector<double> out(space.size(), std::numeric_limits<double>::infinity());
    if (a.empty()) return out;
    std::vector<char> in(space.size(), 0);
    for (PointId p : a.ids) {
        in[p] = 1;
        out[p] = 0.0;
    }
    std::vector<PointId> candidates;
    const bool ring_ok = space.model() == DiscreteMMSpace::Model::Interval ||
                         space.model() == DiscreteMMSpace::Model::Grid ||
                         space.model() == DiscreteMMSpace::Model::Circle;
    if (ring_ok && space.has_edges()) {
        for (PointId p : a.ids) {
            bool edge_node = space.adjacency()[p].empty();
            for (PointId q : space.adjacency()[p])
                if (!in[q]) edge_node = true;
            if (edge_node) candidates.push_back(p);
        }
    }
    if (candidates.empty()) candidates = a.ids;
    for (PointId x = 0; x < space.size(); ++x) {
        if (in[x]) continue;
        double best = std::numeric_limits<double>::infinity();
        for (PointId q : candidates) best = std::min(best, space.dist(x, q));
        out[x] = best;
    }
    return out;
}

/// {x : d(x, A) < eps} together with A. The comparison carries a relative
/// slack of 1e-12 so lattice-exact eps values include their tie nodes.
inline Region epsilon_neighborhood(const DiscreteMMSpace& space, const Region& a, double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("epsilon_neighborhood: eps must be >= 0");
    const std::vector<double> d = distance_to_region(space, a);
    const double cut = eps * (1.0 + 1e-12);
    std::vector<PointId> out;
    for (PointId p = 0; p < space.size(); ++p)
        if (d[p] < cut) out.push_back(p);
    for (PointId p : a.ids)
        if (!(d[p] < cut)) out.push_back(p);
    return Region::of(std::move(out), a.kind);
}

/// Exhaustive metric-measure validation: diagonal, symmetry, positivity,
/// triangle inequality (tolerance 1e-12 * diameter), mass positivity and
/// edge-weight positivity. Diagnostic only; O(n^3).
inline MetricValidationReport validate_metric(const DiscreteMMSpace& space) {
    MetricValidationReport report;
    const std::size_t n = space.size();
    const double tol = 1e-12 * space.diameter();
    report.tolerance = tol;
    using Kind = MetricViolation::Kind;
    // cache the matrix for the O(n^3) triangle scan at moderate sizes
    std::vector<double> cache;
    const bool cached = n <= 2048;
    if (cached) {
        cache.resize(n * n);
        for (PointId i = 0; i < n; ++i)
            for (PointId j = 0; j < n; ++j) cache[i * n + j] = space.dist(i, j);
    }
    auto d = [&](PointId i, PointId j) { return cached ? cache[i * n + j] : space.dist(i, j); };
    for (PointId i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) > tol)
            report.violations.push_back({Kind::Diagonal, i, i, 0, std::abs(d(i, i))});
        if (!(space.mass(i) > 0.0))
            report.violations.push_back({Kind::Mass, i, 0, 0, space.mass(i)});
    }
    for (PointId i = 0; i < n; ++i) {
        for (PointId j = i + 1; j < n; ++j) {
            const double dij = d(i, j);
            const double dji = d(j, i);
            if (std::abs(dij - dji) > tol)
                report.violations.push_back({Kind::Symmetry, i, j, 0, std::abs(dij - dji)});
            if (dij < -tol) report.violations.push_back({Kind::Negative, i, j, 0, dij});
        }
    }
    for (PointId i = 0; i < n; ++i)
        for (PointId j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dij = d(i, j);
            for (PointId k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double gap = dij - d(i, k) - d(k, j);
                if (gap > tol)
                    report.violations.push_back({Kind::Triangle, i, j, k, gap});
            }
        }
    for (const Edge& e : space.edges())
        if (!(e.weight > 0.0))
            report.violations.push_back({Kind::EdgeWeight, e.a, e.b, 0, e.weight});
    return report;
}

}  // namespace abplab
