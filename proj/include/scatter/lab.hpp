// Finite-width verification of the semiclassical wall data.
//
// single_wall_gauge runs the order-by-order gauge recursion for one wall:
// the order-1 field is the smoothed step whose jump is the wall log, and
// every higher correction is built from hbar-scaled derivatives of
// Gaussian profiles, so its sup norm carries an honest factor sqrt(hbar).
// two_wall_first_correction integrates the first scattered correction of
// the perpendicular two-wall configuration across the new (1,1) ray; its
// limit is the tree-sum coefficient. convergence_rate fits the decay
// exponent of measured sup errors against hbar.
#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "scatter/grid.hpp"
#include "scatter/wall.hpp"

namespace scatter {

namespace labdetail {

// coefficients a_{jk} of a single-mode log: t^j z^{k m} payloads must be
// rational multiples of the primitive normal rot90(m)
inline std::map<std::pair<int, int>, double> mode_coefficients(const LieElement& log_theta,
                                                               const IVec& m) {
    if (!is_primitive(m)) throw std::invalid_argument("mode direction must be primitive");
    IVec nrm = rot90(m);
    std::map<std::pair<int, int>, double> out;
    for (const auto& [key, payload] : log_theta.terms()) {
        auto p = primitive_part(key.m);
        if (p.direction != m)
            throw std::invalid_argument("log has a term off the given mode direction");
        Rat a = (nrm.x != 0) ? payload.x / Rat(nrm.x) : payload.y / Rat(nrm.y);
        if (!(payload == QVec{a * Rat(nrm.x), a * Rat(nrm.y)}))
            throw std::invalid_argument("log payload is not parallel to the wall normal");
        out[{key.j, static_cast<int>(p.multiple)}] = to_double(a);
    }
    return out;
}

}  // namespace labdetail

// gauge fields phi_{j,k}: the coefficient of t^j z^{k m} (payload on the
// primitive normal), sampled over the grid
struct GaugeResult {
    std::map<std::pair<int, int>, ScalarField> phi;
    LabGrid grid;
};

// One wall through the origin with direction m and the given single-mode
// log. Solves the gauge recursion up to t-order N:
//
//   phi_{s} = -H( Pi + sum_{l>=0} ad^l_phi (dbar phi) / (l+1)! ) at order s
//
// where Pi carries -a_{jk} times the Gaussian wall form, H integrates from
// `base` along flow-aligned two-leg paths, and the bracket of two fields on
// the same mode keeps only the derivation part
//
//   [f z^{k1 m} d_n, beta z^{k2 m} d_n] = hbar (f D_n beta - beta D_n f)
//
// with D_n the derivative along the primitive normal (the structure-constant
// part cancels because both payloads are parallel). The base must sit on
// the side of the wall where the gauge vanishes.
inline GaugeResult single_wall_gauge(const LieElement& log_theta, const IVec& m,
                                     double hbar, int N, const LabGrid& grid, DVec base) {
    grid.require_resolves(hbar);
    if (N < 1) throw std::invalid_argument("gauge iteration order must be >= 1");
    if (N > log_theta.order())
        throw std::invalid_argument("gauge iteration order beyond the log truncation");
    auto coeff = labdetail::mode_coefficients(log_theta, m);
    IVec nrm = rot90(m);

    OneForm delta = delta_form(m, hbar, grid);
    auto scaled_delta = [&](double c) {
        OneForm f(grid);
        for (int t = 0; t < grid.size(); ++t) {
            f.a1[t] = c * delta.a1[t];
            f.a2[t] = c * delta.a2[t];
        }
        return f;
    };

    GaugeResult res{{}, grid};
    using Key = std::pair<int, int>;

    for (int s = 1; s <= N; ++s) {
        // right-hand side at t-order s: the wall form plus bracket terms
        std::map<int, OneForm> rhs;  // k -> one-form
        auto add_rhs = [&](int k, const OneForm& f, double scale) {
            auto it = rhs.find(k);
            if (it == rhs.end()) it = rhs.emplace(k, OneForm(grid)).first;
            for (int t = 0; t < grid.size(); ++t) {
                it->second.a1[t] += scale * f.a1[t];
                it->second.a2[t] += scale * f.a2[t];
            }
        };

        for (const auto& [jk, a] : coeff)
            if (jk.first == s) add_rhs(jk.second, scaled_delta(-a), 1.0);

        // X^0 = dbar phi, X^{l+1} = [phi, X^l]; collect X^l / (l+1)!
        std::map<Key, OneForm> X;
        for (const auto& [jk, field] : res.phi) X.emplace(jk, d_scalar(grid, field));
        double fact = 1.0;
        int level = 0;
        while (!X.empty()) {
            fact *= (level + 1);  // (l+1)! after l steps
            for (const auto& [jk, f] : X)
                if (jk.first == s) add_rhs(jk.second, f, 1.0 / fact);
            // one more ad_phi, dropping orders beyond s
            std::map<Key, OneForm> next;
            for (const auto& [pjk, pf] : res.phi) {
                ScalarField dn_phi = dir_deriv(grid, pf, nrm);
                for (const auto& [xjk, xf] : X) {
                    int j = pjk.first + xjk.first, k = pjk.second + xjk.second;
                    if (j > s) continue;
                    OneForm dn_x = dir_deriv(grid, xf, nrm);
                    auto it = next.find({j, k});
                    if (it == next.end()) it = next.emplace(Key{j, k}, OneForm(grid)).first;
                    for (int t = 0; t < grid.size(); ++t) {
                        it->second.a1[t] +=
                            hbar * (pf.v[t] * dn_x.a1[t] - xf.a1[t] * dn_phi.v[t]);
                        it->second.a2[t] +=
                            hbar * (pf.v[t] * dn_x.a2[t] - xf.a2[t] * dn_phi.v[t]);
                    }
                }
            }
            X = std::move(next);
            ++level;
            if (level > s) break;  // every ad raises the t-order by at least one
        }

        for (auto& [k, f] : rhs) {
            ScalarField phi = homotopy_apply(m, f, grid, base);
            for (double& v : phi.v) v = -v;
            res.phi.emplace(Key{s, k}, std::move(phi));
        }
    }
    return res;
}

// Least-squares exponent of err ~ C * hbar^p from (hbar, err) samples.
// Wants at least three samples, hbar strictly decreasing, errors positive.
inline double convergence_rate(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3)
        throw std::invalid_argument("convergence fit needs at least three samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double prev = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        auto [hb, err] = samples[i];
        if (!(hb > 0)) throw std::invalid_argument("hbar values must be positive");
        if (i > 0 && hb >= prev)
            throw std::invalid_argument("hbar values must be strictly decreasing");
        prev = hb;
        if (!(err > 0)) throw std::invalid_argument("errors must be positive");
        double x = std::log(hb), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double k = static_cast<double>(samples.size());
    double den = k * sxx - sx * sx;
    if (std::abs(den) < 1e-14) throw std::invalid_argument("degenerate hbar samples");
    return (k * sxy - sx * sy) / den;
}

struct TwoWallOptions {
    int nodes = 512;
    double half_width = 1.2;
    // distance from the origin to the flow start plane along (1,1)/sqrt(2);
    // matches the base point lab_base_point() via <base,(1,1)>/sqrt(2)
    double start_offset = 0.6 / std::numbers::sqrt2;
    double cross_distance = 0.45;  // where the test path crosses the new ray
    double c1 = 1.0, c2 = 1.0;     // leaf coefficients of the two input walls
    bool zero_first = false, zero_second = false;  // fault injection
};

struct TwoWallResult {
    double value = 0.0;            // integral across the new ray
    double truncation_bound = 0.0; // Gaussian mass outside the swept window
    double grid_bound = 0.0;       // first-step quadrature estimate
};

// First correction of the perpendicular two-wall configuration: walls along
// the axes with logs c_i t z^{m_i} d_{n_i}. The order-t^2 field on the new
// direction (1,1) is -H applied to the wedge of the two wall forms (plus
// derivation terms that are kept for honesty but vanish identically here,
// each profile being constant along the other wall's normal). H sweeps
// along -(1,1) from the plane at `start_offset`; the result is integrated
// across the new ray where a positive crossing enters {y1 > y2}. The limit
// is c1*c2 times the tree-sum coefficient for the simple inputs, i.e. 1
// when c1 = c2 = 1.
inline TwoWallResult two_wall_first_correction(double hbar, TwoWallOptions opt = {}) {
    if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
    int need = static_cast<int>(std::ceil(8.0 * opt.half_width / hbar)) + 1;
    LabGrid g({0.0, 0.0}, std::max(opt.nodes, need), opt.half_width);
    g.require_resolves(hbar);

    double c1 = opt.zero_first ? 0.0 : opt.c1;
    double c2 = opt.zero_second ? 0.0 : opt.c2;

    // input wall forms with crossing orientation folded in:
    // -c1 * delta(x-axis) = +c1 g(y2) dy2, -c2 * delta(y-axis) = -c2 g(y1) dy1
    OneForm A(g), B(g);
    double nc = 1.0 / std::sqrt(std::numbers::pi * hbar);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            int t = g.idx(i, j);
            double y1 = g.x(i), y2 = g.y(j);
            A.a2[t] = c1 * nc * std::exp(-y2 * y2 / hbar);
            B.a1[t] = -c2 * nc * std::exp(-y1 * y1 / hbar);
        }

    // dy1^dy2 coefficient of the bracket's (1,1)-payload channel: the wedge
    // A^B plus half of each derivation term (their payloads project onto
    // the new normal with weight 1/2)
    OneForm dB = dir_deriv(g, B, rot90(IVec{1, 0}));
    OneForm dA = dir_deriv(g, A, rot90(IVec{0, 1}));
    std::vector<double> W(g.size());
    for (int t = 0; t < g.size(); ++t) {
        double lead = A.a1[t] * B.a2[t] - A.a2[t] * B.a1[t];
        double corr1 = hbar * (A.a1[t] * dB.a2[t] - A.a2[t] * dB.a1[t]);
        double corr2 = hbar * (B.a1[t] * dA.a2[t] - B.a2[t] * dA.a1[t]);
        W[t] = lead + 0.5 * (corr1 + corr2);
    }

    // sweep along -(1,1)/sqrt(2) from the start plane <y,(1,1)>/sqrt(2) = D:
    // cumulative trapezoid down each lattice diagonal (step h*sqrt(2)),
    // G(p) = integral of W over the swept segment through p
    double D = opt.start_offset;
    double step = g.h * std::numbers::sqrt2;
    std::vector<double> G(g.size(), 0.0);
    for (int d0 = -(g.n - 1); d0 <= g.n - 1; ++d0) {
        // diagonal of nodes (i, i - d0); walk downward from the top
        int i_hi = std::min(g.n - 1, g.n - 1 + d0);
        int i_lo = std::max(0, d0);
        if (i_hi < i_lo) continue;
        double run = 0.0;
        bool started = false;
        bool have_above = false;
        double w_above = 0.0, s_above = 0.0;
        double prev = 0.0;
        for (int i = i_hi; i >= i_lo; --i) {
            int j = i - d0;
            int t = g.idx(i, j);
            double s = (g.x(i) + g.y(j)) / std::numbers::sqrt2;
            if (s > D) {
                have_above = true;
                w_above = W[t];
                s_above = s;
                continue;
            }
            if (!started) {
                // partial first interval from the plane down to this node;
                // if the plane sits above the whole diagonal the missing
                // piece is outside the box, where the bump is negligible
                if (have_above) {
                    double frac = D - s;
                    double w_plane = W[t] + (w_above - W[t]) * frac / (s_above - s);
                    run = 0.5 * frac * (w_plane + W[t]);
                }
                started = true;
            } else {
                run += 0.5 * step * (prev + W[t]);
            }
            G[t] = run;
            prev = W[t];
        }
    }

    // integrate G across the new ray along the lattice antidiagonal nearest
    // the requested crossing distance (positive crossing direction
    // (1,-1)/sqrt(2), t-step h*sqrt(2))
    double target = -opt.cross_distance;  // s-coordinate of the crossing line
    int best_d = 0;
    double best_gap = 1e300;
    for (int dsum = 0; dsum <= 2 * (g.n - 1); ++dsum) {
        double s = (g.x(0) + g.y(0) + dsum * g.h) / std::numbers::sqrt2;
        if (std::abs(s - target) < best_gap) {
            best_gap = std::abs(s - target);
            best_d = dsum;
        }
    }
    double value = 0.0;
    {
        int i_lo = std::max(0, best_d - (g.n - 1));
        int i_hi = std::min(g.n - 1, best_d);
        double prev = 0.0;
        bool first = true;
        for (int i = i_lo; i <= i_hi; ++i) {
            int j = best_d - i;
            double cur = G[g.idx(i, j)];
            if (!first) value += 0.5 * step * (prev + cur);
            prev = cur;
            first = false;
        }
    }

    // window tails: mass of the unit Gaussian outside [-(cross), start] x
    // the antidiagonal extent
    auto tail = [&](double dist) { return 0.5 * std::erfc(dist / std::sqrt(hbar)); };
    double ell = (g.half - opt.cross_distance / std::numbers::sqrt2);
    TwoWallResult out;
    out.value = value;
    out.truncation_bound = tail(D) + tail(opt.cross_distance) + 2.0 * tail(ell);
    out.grid_bound = g.h * g.h;
    return out;
}

// sweep helper: rows (hbar, value, deviation from the expected coefficient)
struct TwoWallRow {
    double hbar;
    double value;
    double deviation;
};

inline std::vector<TwoWallRow> two_wall_sweep(const std::vector<double>& hbars,
                                              double expected, TwoWallOptions opt = {}) {
    std::vector<TwoWallRow> rows;
    for (double hb : hbars) {
        TwoWallResult r = two_wall_first_correction(hb, opt);
        rows.push_back({hb, r.value, std::abs(r.value - expected)});
    }
    return rows;
}

}  // namespace scatter
