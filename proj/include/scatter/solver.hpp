// Builds the consistent diagram directly as a weighted sum over trees:
// every tree contributes (product of leaf coefficients) x (orientation
// sign) x (Gaussian cone measure) / |Aut| on its propagated payload, and
// the aggregated payloads per outgoing direction are the wall logs. The
// result is compared against the order-by-order completion, which reaches
// the same diagram by an entirely different route.
#pragma once

#include <tuple>

#include "scatter/cone.hpp"

namespace scatter {

struct AssembleOptions {
    MeasureMethod method = MeasureMethod::Quadrature;
    long long budget = 1 << 20;
    unsigned long long seed = 2026;
    bool flip_chi = false;  // fault injection: negate every branching tree
    long snap_max_den = 64;
    double snap_factor = 10.0;  // snap tolerance = factor x coefficient error
};

struct TreeRecord {
    LabeledTree tree;
    TreeEvaluation eval;  // coefficient fields filled during assembly
    long long aut = 1;
    long long ribbon = 1;
    Rat leaf_product;
    double measure = 0.0;
    double measure_error = 0.0;
};

struct RawCoefficient {
    double value = 0.0;
    double error = 0.0;
    bool snapped = true;
    Rat exact;  // snapped value, or the float carried over exactly
};

struct AssembledDiagram {
    Diagram diagram{0};  // exact walls after snapping, minimized
    std::vector<TreeRecord> per_tree;
    // raw float wall-log coefficients keyed by (direction, t-order, mode)
    std::map<std::tuple<IVec, int, IVec>, RawCoefficient> raw;
    bool all_snapped = true;
};

inline AssembledDiagram assemble_wall_factors(const Wall& w1, const Wall& w2, int order,
                                              const AssembleOptions& opt = {}) {
    if (w1.support != Support::Line || w2.support != Support::Line)
        throw std::invalid_argument("initial walls must be lines");
    if (cross(w1.direction, w2.direction) == 0)
        throw std::invalid_argument("initial walls must be transversal");

    AssembledDiagram out;
    struct Agg {
        double nx = 0.0, ny = 0.0;
        double ex = 0.0, ey = 0.0;
    };
    std::map<std::tuple<IVec, int, long long>, Agg> agg;

    auto trees = enumerate_trees(w1, w2, order);
    for (size_t idx = 0; idx < trees.size(); ++idx) {
        const auto& t = trees[idx];
        TreeRecord rec;
        rec.tree = t;
        rec.eval = evaluate_tree(t, w1, w2);
        rec.aut = aut_count(t);
        rec.ribbon = ribbon_count(t);
        if (rec.eval.transversal) {
            rec.leaf_product = leaf_coefficient_product(t, w1, w2);
            auto mr = tree_measure(t, opt.method, opt.budget, opt.seed + idx, {},
                                   w1.direction, w2.direction);
            rec.measure = mr.value;
            rec.measure_error = mr.error;
            int sgn = -rec.eval.chi_sign;
            if (opt.flip_chi && t->leaf_count >= 2) sgn = -sgn;
            double lp = to_double(rec.leaf_product);
            double cx = lp * sgn * rec.measure / static_cast<double>(rec.aut);
            double err = std::abs(lp) * rec.measure_error / static_cast<double>(rec.aut) +
                         1e-15 * std::abs(cx);
            rec.eval.coefficient = cx;
            rec.eval.coefficient_error = err;
            auto prim = primitive_part(rec.eval.m_T);
            Agg& a = agg[{prim.direction, rec.eval.j_T, prim.multiple}];
            double tnx = to_double(rec.eval.n_T.x);
            double tny = to_double(rec.eval.n_T.y);
            a.nx += cx * tnx;
            a.ny += cx * tny;
            a.ex += err * std::abs(tnx);
            a.ey += err * std::abs(tny);
        }
        out.per_tree.push_back(std::move(rec));
    }

    // each aggregate must sit on the primitive normal of its direction;
    // the scalar on that normal, negated, is the wall-log coefficient
    std::map<IVec, LieElement> wall_logs;
    for (const auto& [key, a] : agg) {
        const auto& [dir, j, mult] = key;
        IVec na = rot90(dir);
        double scale, scale_err;
        if (na.x != 0 && na.y != 0) {
            double sx = a.nx / static_cast<double>(na.x);
            double sy = a.ny / static_cast<double>(na.y);
            scale_err = a.ex / std::abs(static_cast<double>(na.x)) +
                        a.ey / std::abs(static_cast<double>(na.y));
            if (std::abs(sx - sy) > std::max(1e-9, 10.0 * scale_err))
                throw std::logic_error("aggregated payload is off the wall normal");
            scale = 0.5 * (sx + sy);
        } else if (na.x == 0) {
            scale = a.ny / static_cast<double>(na.y);
            scale_err = a.ey / std::abs(static_cast<double>(na.y));
            if (std::abs(a.nx) > std::max(1e-9, 10.0 * a.ex))
                throw std::logic_error("aggregated payload is off the wall normal");
        } else {
            scale = a.nx / static_cast<double>(na.x);
            scale_err = a.ex / std::abs(static_cast<double>(na.x));
            if (std::abs(a.ny) > std::max(1e-9, 10.0 * a.ey))
                throw std::logic_error("aggregated payload is off the wall normal");
        }
        RawCoefficient rc;
        rc.value = -scale;
        rc.error = scale_err;
        double tol = std::max(opt.snap_factor * scale_err, 1e-12);
        if (auto s = snap_to_rational(rc.value, tol, opt.snap_max_den)) {
            rc.exact = *s;
        } else {
            rc.snapped = false;
            rc.exact = Rat(rc.value);  // exact binary value, flagged as unsnapped
            out.all_snapped = false;
        }
        if (rc.exact != 0) {
            auto it = wall_logs.find(dir);
            if (it == wall_logs.end()) it = wall_logs.emplace(dir, LieElement(order)).first;
            it->second.add_term(dir * mult, to_qvec(na) * rc.exact, j);
        }
        out.raw[{dir, j, dir * mult}] = std::move(rc);
    }

    std::vector<Wall> walls;
    for (auto& [dir, log] : wall_logs) {
        Support s = (dir == w1.direction || dir == w2.direction) ? Support::Line
                                                                 : Support::Ray;
        walls.push_back(Wall{dir, s, std::move(log)});
    }
    out.diagram = minimize(Diagram{order, std::move(walls)});
    return out;
}

struct VerifyReport {
    int order = 0;
    double tolerance = 0.0;
    bool structural_match = true;  // same wall set after snapping
    bool snapped_exact = true;     // wall logs identical after snapping
    double max_dev = 0.0;          // raw float vs completion, per coefficient
    bool ks_match = false;         // structural_match && max_dev <= tolerance
    std::vector<std::string> diagnostics;
    AssembledDiagram assembled;
    Diagram completed{0};
};

namespace detail {

// wall-log coefficients of a diagram keyed like AssembledDiagram::raw
inline std::map<std::tuple<IVec, int, IVec>, Rat> diagram_coefficients(const Diagram& d) {
    std::map<std::tuple<IVec, int, IVec>, Rat> out;
    for (const auto& w : d.walls) {
        IVec na = rot90(w.direction);
        for (const auto& [key, payload] : w.log_theta.terms()) {
            Rat c = na.x != 0 ? payload.x / Rat(na.x) : payload.y / Rat(na.y);
            out[{w.direction, key.j, key.m}] = c;
        }
    }
    return out;
}

}  // namespace detail

// runs both constructions and compares them coefficient by coefficient
inline VerifyReport verify_against_ks(const Wall& w1, const Wall& w2, int order,
                                      double tol, const AssembleOptions& opt = {}) {
    VerifyReport rep;
    rep.order = order;
    rep.tolerance = tol;
    rep.assembled = assemble_wall_factors(w1, w2, order, opt);
    rep.completed = ks_complete(w1, w2, order);

    auto ks_coeffs = detail::diagram_coefficients(rep.completed);
    for (const auto& [key, c] : ks_coeffs) {
        double ref = to_double(c);
        auto it = rep.assembled.raw.find(key);
        double got = it == rep.assembled.raw.end() ? 0.0 : it->second.value;
        rep.max_dev = std::max(rep.max_dev, std::abs(got - ref));
    }
    for (const auto& [key, rc] : rep.assembled.raw) {
        if (!ks_coeffs.count(key))
            rep.max_dev = std::max(rep.max_dev, std::abs(rc.value));
    }

    // structural comparison on the snapped, minimized diagrams
    auto describe = [](const Wall& w) {
        return std::string(w.support == Support::Line ? "line " : "ray ") + to_string(w.direction);
    };
    std::map<std::pair<IVec, Support>, const Wall*> left, right;
    for (const auto& w : rep.assembled.diagram.walls) left[{w.direction, w.support}] = &w;
    for (const auto& w : rep.completed.walls) right[{w.direction, w.support}] = &w;
    for (const auto& [k, w] : left) {
        if (!right.count(k)) {
            rep.structural_match = false;
            rep.diagnostics.push_back("extra wall: " + describe(*w));
        }
    }
    for (const auto& [k, w] : right) {
        if (!left.count(k)) {
            rep.structural_match = false;
            rep.diagnostics.push_back("missing wall: " + describe(*w));
        } else if (!(left[k]->log_theta == w->log_theta)) {
            rep.snapped_exact = false;
            rep.diagnostics.push_back("wall log differs on " + describe(*w) + ": got " +
                                      left[k]->log_theta.str() + ", want " +
                                      w->log_theta.str());
        }
    }
    if (!rep.structural_match) rep.snapped_exact = false;
    if (!rep.assembled.all_snapped) {
        rep.snapped_exact = false;
        rep.diagnostics.push_back("some coefficients did not snap to small rationals");
    }
    rep.ks_match = rep.structural_match && rep.max_dev <= tol;
    if (!rep.ks_match && rep.diagnostics.empty())
        rep.diagnostics.push_back("max coefficient deviation " + std::to_string(rep.max_dev));
    return rep;
}

}  // namespace scatter
