// Cones attached to trees and their Gaussian measures. A tree gives a
// square linear system over the rationals: one flow time per internal
// vertex plus the time along the output path, constrained by each leaf
// landing on its input wall. The solution picks the Gaussian center; the
// cone of directions that keep all flow times nonnegative carries the
// leading-order weight of the tree.
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "scatter/trees.hpp"

namespace scatter {

struct Cone {
    int dim = 0;
    std::vector<std::vector<double>> rays;   // nonnegative-span generators
    std::vector<std::vector<double>> lines;  // full-span generators
};

enum class MeasureMethod { Quadrature, MonteCarlo };

struct MeasureResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// exact inverse of a small rational matrix, throws on singularity
inline std::vector<std::vector<Rat>> rat_inverse(std::vector<std::vector<Rat>> a) {
    const size_t n = a.size();
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = Rat(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::runtime_error("degenerate flow system");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        Rat p = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            Rat f = a[row][col];
            for (size_t j = 0; j < n; ++j) {
                a[row][j] -= f * a[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

inline std::vector<std::vector<double>> dbl_inverse(std::vector<std::vector<double>> a) {
    const size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-12)
            throw std::runtime_error("cone generators are linearly dependent");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        double p = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col) continue;
            double f = a[row][col];
            if (f == 0.0) continue;
            for (size_t j = 0; j < n; ++j) {
                a[row][j] -= f * a[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// uniform in (0,1) built from the generator's raw 64-bit output, so runs
// do not depend on library distribution internals
inline double unit_open(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

inline void normal_pair(std::mt19937_64& g, double& z0, double& z1) {
    double u1 = unit_open(g);
    double u2 = unit_open(g);
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
}

// P(w . Z >= 0 for every row w) with Z standard normal; closed forms up
// to three rows, seeded sampling above that
inline MeasureResult halfspace_probability(const std::vector<std::vector<double>>& rows,
                                           MeasureMethod method, long long budget,
                                           unsigned long long seed) {
    const size_t r = rows.size();
    if (r == 0) return {1.0, 0.0};
    auto corr = [&](size_t i, size_t j) {
        double c = dot(rows[i], rows[j]) /
                   std::sqrt(dot(rows[i], rows[i]) * dot(rows[j], rows[j]));
        return std::clamp(c, -1.0, 1.0);
    };
    if (method == MeasureMethod::Quadrature && r <= 3) {
        constexpr double tau = 2.0 * std::numbers::pi;
        if (r == 1) return {0.5, 1e-15};
        if (r == 2) return {0.25 + std::asin(corr(0, 1)) / tau, 1e-14};
        double s = std::asin(corr(0, 1)) + std::asin(corr(0, 2)) + std::asin(corr(1, 2));
        return {0.125 + s / (2.0 * tau), 1e-13};
    }
    if (budget < 1) throw std::invalid_argument("sampling budget must be positive");
    const size_t dim = rows[0].size();
    std::mt19937_64 gen(seed);
    std::vector<double> z(dim + 1);
    long long hits = 0;
    for (long long it = 0; it < budget; ++it) {
        for (size_t i = 0; i + 1 < dim + 1; i += 2) normal_pair(gen, z[i], z[i + 1]);
        bool inside = true;
        for (size_t i = 0; i < r && inside; ++i) inside = dot(rows[i], z) >= 0.0;
        if (inside) ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(budget);
    double sigma = std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(budget)) /
                             static_cast<double>(budget));
    return {p, 3.0 * sigma};
}

// a 2-dimensional cone is an angular sector; its Gaussian measure is the
// angular fraction, whatever the generator list looks like
inline MeasureResult planar_measure(const Cone& c) {
    std::vector<double> angles;
    auto push = [&](double x, double y) {
        if (std::hypot(x, y) < 1e-14) throw std::invalid_argument("zero cone generator");
        angles.push_back(std::atan2(y, x));
    };
    for (const auto& g : c.rays) push(g[0], g[1]);
    for (const auto& g : c.lines) {
        push(g[0], g[1]);
        push(-g[0], -g[1]);
    }
    if (angles.empty()) return {0.0, 0.0};
    std::sort(angles.begin(), angles.end());
    constexpr double tau = 2.0 * std::numbers::pi;
    double max_gap = angles.front() + tau - angles.back();
    for (size_t i = 1; i < angles.size(); ++i)
        max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    // a gap above pi leaves a proper sector; exactly pi is a half-plane
    if (max_gap < std::numbers::pi - 1e-12) return {1.0, 1e-12};
    return {(tau - max_gap) / tau, 1e-12};
}

}  // namespace detail

// Gaussian measure of a cone under the standard normal on R^dim.
// Deterministic for a fixed seed; the error field bounds the numerical
// uncertainty (three sigma for sampling).
inline MeasureResult gaussian_cone_measure(const Cone& c, MeasureMethod method,
                                           long long budget = 1 << 20,
                                           unsigned long long seed = 2026) {
    for (const auto& g : c.rays)
        if (static_cast<int>(g.size()) != c.dim)
            throw std::invalid_argument("generator dimension mismatch");
    for (const auto& g : c.lines)
        if (static_cast<int>(g.size()) != c.dim)
            throw std::invalid_argument("generator dimension mismatch");
    if (c.dim == 2) return detail::planar_measure(c);
    if (c.rays.size() + c.lines.size() != static_cast<size_t>(c.dim))
        throw std::invalid_argument("need exactly dim generators above the plane");
    // columns of M are the generators; the cone is M applied to the
    // product of half-lines (ray slots) and lines, so membership is read
    // off the ray rows of the inverse
    std::vector<std::vector<double>> m(c.dim, std::vector<double>(c.dim));
    size_t col = 0;
    for (const auto& g : c.rays) {
        for (int i = 0; i < c.dim; ++i) m[i][col] = g[i];
        ++col;
    }
    for (const auto& g : c.lines) {
        for (int i = 0; i < c.dim; ++i) m[i][col] = g[i];
        ++col;
    }
    auto inv = detail::dbl_inverse(std::move(m));
    std::vector<std::vector<double>> rows(c.rays.size());
    for (size_t i = 0; i < c.rays.size(); ++i) rows[i] = inv[i];
    return detail::halfspace_probability(rows, method, budget, seed);
}

// Exact flow data of a tree: unknowns are one nonnegative time per
// internal vertex plus the signed time along the output path. Row i says
// leaf i sits on its input wall after flowing from the base point along
// the ancestor edge modes.
struct FlowWedge {
    int k = 0;                              // leaves == number of unknowns
    std::vector<std::vector<Rat>> matrix;   // columns: edge times, then path time
    std::vector<Rat> rhs;
    std::vector<Rat> solution;
    std::vector<std::vector<Rat>> inverse;
    bool reachable = true;                  // all edge times nonnegative
    std::vector<size_t> active;             // edge times that vanish exactly
};

namespace detail {

struct FlowRows {
    std::vector<IVec> edge_modes;            // one per internal vertex
    std::vector<std::vector<size_t>> paths;  // per leaf: ancestor edge ids
    std::vector<int> leaf_inputs;
};

inline void collect_flow(const LabeledTree& t, IVec dir1, IVec dir2, FlowRows& out,
                         std::vector<size_t>& chain, IVec& mode) {
    if (t->is_leaf()) {
        const IVec base = t->input == 1 ? dir1 : dir2;
        mode = base * t->mult;
        out.paths.push_back(chain);
        out.leaf_inputs.push_back(t->input);
        return;
    }
    IVec ml{}, mr{};
    size_t id = out.edge_modes.size();
    out.edge_modes.push_back(IVec{0, 0});  // reserve slot for this vertex
    chain.push_back(id);
    collect_flow(t->left, dir1, dir2, out, chain, ml);
    collect_flow(t->right, dir1, dir2, out, chain, mr);
    chain.pop_back();
    mode = ml + mr;
    out.edge_modes[id] = mode;
}

}  // namespace detail

inline FlowWedge flow_wedge(const LabeledTree& t, std::optional<IVec> path_direction = {},
                            IVec dir1 = IVec{1, 0}, IVec dir2 = IVec{0, 1}) {
    detail::FlowRows fr;
    std::vector<size_t> chain;
    IVec total{};
    detail::collect_flow(t, dir1, dir2, fr, chain, total);
    IVec a = primitive_part(total).direction;
    IVec base = -a;
    IVec d = path_direction.value_or(IVec{a.y, -a.x});

    FlowWedge w;
    w.k = static_cast<int>(fr.paths.size());
    const size_t ne = fr.edge_modes.size();
    if (ne + 1 != static_cast<size_t>(w.k))
        throw std::logic_error("flow unknowns do not match the leaves");
    w.matrix.assign(w.k, std::vector<Rat>(w.k, Rat(0)));
    w.rhs.assign(w.k, Rat(0));
    for (int i = 0; i < w.k; ++i) {
        // any nonzero level functional of the leaf's wall works: the rows
        // may be rescaled without moving the solution or the measure
        IVec u = rot90(fr.leaf_inputs[i] == 1 ? dir1 : dir2);
        for (size_t e : fr.paths[i]) w.matrix[i][e] += Rat(pairing(fr.edge_modes[e], u));
        w.matrix[i][ne] = Rat(pairing(d, u));
        w.rhs[i] = Rat(-pairing(base, u));
    }
    w.inverse = detail::rat_inverse(w.matrix);
    w.solution.assign(w.k, Rat(0));
    for (int i = 0; i < w.k; ++i)
        for (int j = 0; j < w.k; ++j) w.solution[i] += w.inverse[i][j] * w.rhs[j];
    for (size_t e = 0; e < ne; ++e) {
        if (w.solution[e] < 0) w.reachable = false;
        if (w.solution[e] == 0) w.active.push_back(e);
    }
    return w;
}

// cone of displacements keeping every flow time nonnegative, anchored at
// the solved configuration; empty when the configuration itself needs a
// negative time (the tree then carries no weight)
inline std::optional<Cone> cone_of_tree(const LabeledTree& t,
                                        std::optional<IVec> path_direction = {},
                                        IVec dir1 = IVec{1, 0}, IVec dir2 = IVec{0, 1}) {
    FlowWedge w = flow_wedge(t, path_direction, dir1, dir2);
    if (!w.reachable) return std::nullopt;
    Cone c;
    c.dim = w.k;
    std::vector<bool> is_active(w.k, false);
    for (size_t e : w.active) is_active[e] = true;
    for (int col = 0; col < w.k; ++col) {
        std::vector<double> g(w.k);
        for (int row = 0; row < w.k; ++row) g[row] = to_double(w.matrix[row][col]);
        if (col < w.k - 1 && is_active[col])
            c.rays.push_back(std::move(g));
        else
            c.lines.push_back(std::move(g));
    }
    return c;
}

// Gaussian weight of a tree: probability that a standard normal
// displacement keeps the active flow times nonnegative. Uses the exact
// inverse rows, so quadrature values are exact up to libm rounding.
inline MeasureResult tree_measure(const LabeledTree& t,
                                  MeasureMethod method = MeasureMethod::Quadrature,
                                  long long budget = 1 << 20,
                                  unsigned long long seed = 2026,
                                  std::optional<IVec> path_direction = {},
                                  IVec dir1 = IVec{1, 0}, IVec dir2 = IVec{0, 1}) {
    FlowWedge w = flow_wedge(t, path_direction, dir1, dir2);
    if (!w.reachable) return {0.0, 0.0};
    std::vector<std::vector<double>> rows;
    rows.reserve(w.active.size());
    for (size_t e : w.active) {
        std::vector<double> row(w.k);
        for (int j = 0; j < w.k; ++j) row[j] = to_double(w.inverse[e][j]);
        rows.push_back(std::move(row));
    }
    return detail::halfspace_probability(rows, method, budget, seed);
}

}  // namespace scatter
