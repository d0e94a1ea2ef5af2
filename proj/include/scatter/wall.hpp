// Walls through the origin, scattering diagrams, path-ordered products
// around the joint, and order-by-order completion to a consistent diagram.
//
// A wall carries a primitive lattice direction m (its Fourier mode), a
// support that is either the full line R*m or the half-line -R_{>=0}*m,
// and the log of its automorphism. Every log term has mode k*m (k >= 1)
// and dual part proportional to rot90(m), the primitive normal.
//
// Consistency is checked along an anticlockwise loop around the origin.
// The base angle sits in the third quadrant, offset by an irrational
// amount so it can never coincide with a lattice ray.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "scatter/lie.hpp"

namespace scatter {

enum class Support { Line, Ray };

struct Wall {
    IVec direction;       // primitive mode m
    Support support;      // Line: R*m through 0; Ray: -R_{>=0}*m from 0
    LieElement log_theta;

    Wall(IVec dir, Support sup, LieElement log)
        : direction(dir), support(sup), log_theta(std::move(log)) {
        if (!is_primitive(direction))
            throw std::invalid_argument("wall direction must be primitive");
        for (const auto& [k, n] : log_theta.terms()) {
            auto p = primitive_part(k.m);
            if (p.direction != direction)
                throw std::invalid_argument(
                    "wall log term mode is not a positive multiple of the direction");
        }
    }
};

// Primitive normal of a wall: rotate the direction a quarter turn
// anticlockwise. With the oriented normal pointing clockwise off the
// support this is the unique primitive perpendicular pairing negatively
// with it.
inline IVec primitive_normal(const Wall& w) { return rot90(w.direction); }

struct Diagram {
    int order;
    std::vector<Wall> walls;
};

// Line wall with function (1 + t z^m)^mult.
inline Wall standard_line(int order, const IVec& m, int mult = 1) {
    auto f = TruncatedSeries::one(order) + TruncatedSeries::monomial(order, m, 1, Rat(1));
    auto g = series_log(f).scaled(Rat(mult));
    LieElement log(order);
    IVec n = rot90(m);
    for (const auto& [k, c] : g.terms())
        log.add_term(k.m, QVec{Rat(n.x), Rat(n.y)} * c, k.j);
    return Wall(m, Support::Line, std::move(log));
}

// Wall whose automorphism sends z^u to z^u * f^{<u, n>}; log is log(f) d_n.
inline Wall wall_from_function(const IVec& direction, Support support,
                               const TruncatedSeries& f) {
    auto g = series_log(f);
    LieElement log(f.order());
    IVec n = rot90(direction);
    for (const auto& [k, c] : g.terms())
        log.add_term(k.m, QVec{Rat(n.x), Rat(n.y)} * c, k.j);
    return Wall(direction, support, std::move(log));
}

struct Crossing {
    std::size_t wall;  // index into Diagram::walls
    int sigma;         // +1 or -1 exponent on the wall automorphism
    IVec position;     // primitive direction of the crossing point
    double angle;      // anticlockwise from the base angle, in (0, 2*pi)
};

using CrossingSequence = std::vector<Crossing>;

inline double default_base_angle() {
    return std::atan2(-1.0, -1.0) + (std::sqrt(2.0) - 1.0) / 8.0;
}

// Anticlockwise angle of an integer direction measured from base_angle.
inline double angle_from_base(const IVec& dir, double base_angle) {
    double a = std::atan2(static_cast<double>(dir.y), static_cast<double>(dir.x));
    double rel = a - base_angle;
    const double two_pi = 8.0 * std::atan(1.0);
    while (rel <= 0) rel += two_pi;
    while (rel > two_pi) rel -= two_pi;
    return rel;
}

// Crossing sign: +1 when the anticlockwise tangent at the crossing point and
// the wall mode form a positively oriented frame. For a crossing at position
// p the tangent is rot90(p), so the sign is sign(cross(rot90(p), m)).
inline int crossing_sign(const IVec& position, const IVec& mode) {
    long long c = cross(rot90(position), mode);
    if (c == 0) throw std::logic_error("loop tangent to a wall");
    return c > 0 ? 1 : -1;
}

inline CrossingSequence crossings_of_loop(const Diagram& d, double base_angle) {
    CrossingSequence out;
    for (std::size_t i = 0; i < d.walls.size(); ++i) {
        const Wall& w = d.walls[i];
        std::vector<IVec> positions;
        if (w.support == Support::Ray) {
            positions.push_back(-w.direction);
        } else {
            positions.push_back(w.direction);
            positions.push_back(-w.direction);
        }
        for (const IVec& p : positions) {
            double ang = angle_from_base(p, base_angle);
            const double two_pi = 8.0 * std::atan(1.0);
            if (ang < 1e-9 || two_pi - ang < 1e-9)
                throw std::invalid_argument("base angle coincides with a wall");
            out.push_back(Crossing{i, crossing_sign(p, w.direction), p, ang});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        // same support: factors commute, keep a deterministic order anyway
        return a.wall < b.wall;
    });
    return out;
}

inline CrossingSequence crossings_of_loop(const Diagram& d) {
    return crossings_of_loop(d, default_base_angle());
}

// Composition of the wall automorphisms in crossing order, first crossing
// applied first. Logs are combined with bch.
inline GroupElement path_ordered_product(const Diagram& d, const CrossingSequence& c) {
    GroupElement prod = GroupElement::identity(d.order);
    for (const Crossing& cr : c) {
        GroupElement factor(d.walls[cr.wall].log_theta.scaled(Rat(cr.sigma)));
        prod = factor.compose(prod);
    }
    return prod;
}

// Same product realized directly as a series transform. Independent of the
// bch route; used to extract completion defects through the operator log.
inline TruncatedSeries apply_loop(const Diagram& d, const CrossingSequence& c,
                                  const TruncatedSeries& f) {
    TruncatedSeries out = f;
    for (const Crossing& cr : c)
        out = apply_automorphism(d.walls[cr.wall].log_theta.scaled(Rat(cr.sigma)), out);
    return out;
}

inline bool is_consistent(const Diagram& d) {
    auto c = crossings_of_loop(d);
    return acts_as_identity(path_ordered_product(d, c));
}

struct CompletionOptions {
    // process same-order defect terms in reverse when appending rays;
    // the result must be an equivalent diagram
    bool reverse_insertion = false;
    // corrupt the sign of the crossing at this index in every loop used
    // during completion (negative control for tests)
    std::optional<std::size_t> flip_sigma_at;
    double base_angle = default_base_angle();
};

namespace detail {

inline CrossingSequence completion_loop(const Diagram& d, const CompletionOptions& opt) {
    auto c = crossings_of_loop(d, opt.base_angle);
    if (opt.flip_sigma_at && *opt.flip_sigma_at < c.size())
        c[*opt.flip_sigma_at].sigma = -c[*opt.flip_sigma_at].sigma;
    return c;
}

// Defect of the current diagram: log of the loop product computed through
// the series action, so the check is independent of the bch machinery.
inline LieElement loop_defect(const Diagram& d, const CompletionOptions& opt) {
    auto c = completion_loop(d, opt);
    SeriesMap act = [&](const TruncatedSeries& f) { return apply_loop(d, c, f); };
    return action_log(act, d.order);
}

}  // namespace detail

inline Diagram minimize(const Diagram& d);

// Order-by-order completion: starting from two non-parallel full lines,
// append rays cancelling the loop defect at each t-order until the diagram
// is consistent at the requested order.
inline Diagram ks_complete(const Wall& w1, const Wall& w2, int order,
                           const CompletionOptions& opt = {}) {
    if (w1.support != Support::Line || w2.support != Support::Line)
        throw std::invalid_argument("completion starts from two full lines");
    IVec m1 = w1.direction;
    IVec m2 = w2.direction;
    if (cross(m1, m2) == 0)
        throw std::invalid_argument("completion needs non-parallel initial lines");

    Diagram d{order, {}};
    auto retrunc = [&](const Wall& w) {
        return Wall(w.direction, w.support, w.log_theta.truncated(order));
    };
    d.walls.push_back(retrunc(w1));
    d.walls.push_back(retrunc(w2));

    for (int k = 1; k <= order; ++k) {
        Diagram dk{k, {}};
        for (const Wall& w : d.walls)
            dk.walls.emplace_back(w.direction, w.support, w.log_theta.truncated(k));
        LieElement defect = detail::loop_defect(dk, opt);
        if (defect.is_zero()) continue;

        std::vector<std::pair<MonoKey, QVec>> terms(defect.terms().begin(),
                                                    defect.terms().end());
        if (opt.reverse_insertion) std::reverse(terms.begin(), terms.end());
        for (const auto& [key, n] : terms) {
            if (key.j != k)
                throw std::logic_error(
                    "loop defect below the current order: completion is broken");
            auto p = primitive_part(key.m);
            // the mode must be strictly inside the cone spanned by m1, m2
            long long det = cross(m1, m2);
            long long a1 = cross(key.m, m2);  // det * coefficient on m1
            long long a2 = cross(m1, key.m);  // det * coefficient on m2
            if (!((det > 0 && a1 > 0 && a2 > 0) || (det < 0 && a1 < 0 && a2 < 0)))
                throw std::logic_error("defect mode " + to_string(key.m) +
                                       " outside the open cone of the initial lines");
            if (pairing(key.m, n) != 0)
                throw std::logic_error("defect dual part not perpendicular to its mode");

            // a ray is crossed once with sign +1 and top-order terms are
            // central, so cancelling the defect means subtracting it
            Wall* target = nullptr;
            for (Wall& w : d.walls)
                if (w.support == Support::Ray && w.direction == p.direction) target = &w;
            if (target == nullptr) {
                d.walls.emplace_back(p.direction, Support::Ray, LieElement(order));
                target = &d.walls.back();
            }
            target->log_theta.add_term(key.m, -n, key.j);
        }
    }

    Diagram out = minimize(d);
    if (!is_consistent(out))
        throw std::logic_error("completion failed to produce a consistent diagram");
    return out;
}

// Drop trivial walls and merge walls sharing both support and direction.
// Same-support factors commute, so merging is addition of logs.
inline Diagram minimize(const Diagram& d) {
    Diagram out{d.order, {}};
    for (const Wall& w : d.walls) {
        if (w.log_theta.is_zero()) continue;
        Wall* match = nullptr;
        for (Wall& v : out.walls)
            if (v.support == w.support && v.direction == w.direction) match = &v;
        if (match == nullptr) {
            out.walls.push_back(w);
        } else {
            match->log_theta = match->log_theta + w.log_theta;
        }
    }
    std::erase_if(out.walls, [](const Wall& w) { return w.log_theta.is_zero(); });
    return out;
}

inline Diagram truncate_diagram(const Diagram& d, int order) {
    Diagram out{order, {}};
    for (const Wall& w : d.walls)
        out.walls.emplace_back(w.direction, w.support, w.log_theta.truncated(order));
    return out;
}

// Two diagrams are equivalent when every loop and partial path around the
// origin produces the same group element. It is enough to compare the
// cumulative products at each distinct crossing angle of either diagram.
inline bool diagrams_equivalent(const Diagram& d1, const Diagram& d2) {
    if (d1.order != d2.order)
        throw std::invalid_argument("diagram order mismatch");
    double base = default_base_angle();
    auto c1 = crossings_of_loop(d1, base);
    auto c2 = crossings_of_loop(d2, base);

    std::vector<double> cuts;
    for (const auto& c : c1) cuts.push_back(c.angle);
    for (const auto& c : c2) cuts.push_back(c.angle);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto partial = [&](const Diagram& d, const CrossingSequence& c, double cut) {
        GroupElement prod = GroupElement::identity(d.order);
        for (const Crossing& cr : c) {
            if (cr.angle > cut) break;
            GroupElement factor(d.walls[cr.wall].log_theta.scaled(Rat(cr.sigma)));
            prod = factor.compose(prod);
        }
        return prod;
    };
    for (double cut : cuts)
        if (!group_equal(partial(d1, c1, cut), partial(d2, c2, cut))) return false;
    return true;
}

}  // namespace scatter
