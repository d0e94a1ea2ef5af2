#!/usr/bin/env python3
"""Reference oracle for the scattering pipeline.

Two independent routes, cross-checked against each other here before the
C++ exists:
  1. loop-product completion: compose wall automorphisms around a loop,
     read the defect order by order, insert cancelling rays;
  2. tree sum: enumerate labeled binary trees, propagate modes/normals/
     orientation signs, solve each tree's flow geometry exactly and weight
     by the Gaussian mass of the resulting wedge.
Prints golden values frozen into the C++ tests.
"""

from fractions import Fraction as Q
import itertools, math

from oracle_algebra import (ONE, s_add, s_scale, s_log, l_add, l_scale,
                            exp_action, action_log_to_lie, GEN1, GEN2, l_str)

M1, M2 = (1, 0), (0, 1)

def pair(m, n):
    return m[0] * n[0] + m[1] * n[1]

def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]

def rot90(m):
    return (-m[1], m[0])

def prim(m):
    g = math.gcd(abs(m[0]), abs(m[1]))
    return (m[0] // g, m[1] // g), g

# ------------------------------------------------------------ completion

def line_log(mode_series, n):
    """series log -> lie element with payload c * n per term"""
    return {k: (c * n[0], c * n[1]) for k, c in mode_series.items()}

def loop_factors(walls, N):
    """walls: list of dicts {kind, m, log}; returns the anticlockwise
    crossing sequence from base angle just past -m1-m2 as (log, sigma)."""
    base = math.atan2(-1.0, -1.0) + (math.sqrt(2) - 1) / 8
    crossings = []
    for w in walls:
        if not w["log"]:
            continue
        pts = [w["m"], (-w["m"][0], -w["m"][1])] if w["kind"] == "line" else [(-w["m"][0], -w["m"][1])]
        for p in pts:
            ang = (math.atan2(p[1], p[0]) - base) % (2 * math.pi)
            tangent = rot90(p)
            sigma = 1 if cross(tangent, w["m"]) > 0 else -1
            crossings.append((ang, w["log"], sigma))
    crossings.sort(key=lambda c: c[0])
    return [(log, sg) for _, log, sg in crossings]

def loop_action(walls, N):
    seq = loop_factors(walls, N)
    def act(s):
        for L, sg in seq:
            s = exp_action(l_scale(L, sg), s, N)
        return s
    return act

def ks_complete(log1, log2, N):
    walls = [{"kind": "line", "m": M1, "log": line_log(log1, rot90(M1))},
             {"kind": "line", "m": M2, "log": line_log(log2, rot90(M2))}]
    rays = {}
    for k in range(1, N + 1):
        defect = action_log_to_lie(loop_action(walls, k), k)
        top = {key: n for key, n in defect.items() if key[0] == k}
        for key in sorted(defect):
            assert key[0] >= k, "lower-order defect should have been cleared"
        for (j, x, y), n in sorted(top.items()):
            a, mult = prim((x, y))
            assert a[0] > 0 and a[1] > 0, "defect mode outside the open cone"
            assert pair((x, y), n) == 0
            if a not in rays:
                rays[a] = {"kind": "ray", "m": a, "log": {}}
                walls.append(rays[a])
            rays[a]["log"] = l_add(rays[a]["log"], {(j, x, y): (-n[0], -n[1])})
    # final consistency
    act = loop_action(walls, N)
    assert act(GEN1) == GEN1 and act(GEN2) == GEN2, "completion inconsistent"
    return rays

def ray_str(rays):
    out = []
    for a in sorted(rays):
        out.append("  ray (%d,%d): %s" % (a[0], a[1], l_str(rays[a]["log"])))
    return "\n".join(out) if out else "  (none)"

# -------------------------------------------------------------- tree sum

def leaf(a, k, j):
    return ("leaf", a, k, j)

def node(l, r):
    return ("node",) + tuple(sorted((l, r)))

def tree_leaves(t):
    if t[0] == "leaf":
        return 1
    return tree_leaves(t[1]) + tree_leaves(t[2])

def tree_mj(t, inputs):
    if t[0] == "leaf":
        _, a, k, j = t
        m = (k * (M1 if a == 1 else M2)[0], k * (M1 if a == 1 else M2)[1])
        return m, j
    m1, j1 = tree_mj(t[1], inputs)
    m2, j2 = tree_mj(t[2], inputs)
    return (m1[0] + m2[0], m1[1] + m2[1]), j1 + j2

def aut(t):
    if t[0] == "leaf":
        return 1
    base = aut(t[1]) * aut(t[2])
    return base * (2 if t[1] == t[2] else 1)

def enumerate_trees(inputs, N):
    """inputs: {1: series-log dict, 2: ...}; returns all trees with total
    t-order <= N whose leaves reference nonzero input terms."""
    leaves = []
    for a in (1, 2):
        base = M1 if a == 1 else M2
        for (j, x, y), c in inputs[a].items():
            k = x if a == 1 else y
            assert (x, y) == (k * base[0], k * base[1])
            leaves.append(leaf(a, k, j))
    by_order = {}
    for lf in leaves:
        by_order.setdefault(lf[3], set()).add(lf)
    for total in range(2, N + 1):
        fresh = set()
        for j1 in range(1, total):
            j2 = total - j1
            if j1 > j2:
                break
            for t1 in by_order.get(j1, ()):  # unordered pairs
                for t2 in by_order.get(j2, ()):
                    if j1 == j2 and repr(t1) > repr(t2):
                        continue
                    fresh.add(node(t1, t2))
        by_order.setdefault(total, set()).update(fresh)
    out = []
    for total in sorted(by_order):
        if total <= N:
            out.extend(sorted(by_order[total]))
    return out

def propagate(t):
    """returns (m, j, n payload, chi, transversal) for stored child order"""
    if t[0] == "leaf":
        _, a, k, j = t
        base = M1 if a == 1 else M2
        n = rot90(base)
        return (k * base[0], k * base[1]), j, (Q(n[0]), Q(n[1])), 0, True
    m1, j1, n1, c1, ok1 = propagate(t[1])
    m2, j2, n2, c2, ok2 = propagate(t[2])
    m = (m1[0] + m2[0], m1[1] + m2[1])
    j = j1 + j2
    cr = cross(m1, m2)
    if not (ok1 and ok2) or cr == 0:
        return m, j, (Q(0), Q(0)), 0, False
    w1, w2 = pair(m2, n1), pair(m1, n2)
    n = (w1 * n2[0] - w2 * n1[0], w1 * n2[1] - w2 * n1[1])
    chi = c1 + c2 + (0 if cr > 0 else 1)
    return m, j, n, chi, True

def edge_paths(t):
    """flow edges = one per non-leaf vertex (its outgoing edge). Returns
    (edges, paths) where edges[i] = mode of flow edge i and paths[leaf
    index] = list of flow-edge ids from the leaf's parent to the root,
    plus per-leaf input type."""
    edges, paths, types = [], [], []
    def walk(sub):
        if sub[0] == "leaf":
            types.append(sub[1])
            paths.append([])
            return [len(paths) - 1]
        below = walk(sub[1]) + walk(sub[2])
        m, _ = tree_mj(sub, None)
        eid = len(edges)
        edges.append(m)
        for li in below:
            paths[li].append(eid)
        return below
    walk(t)
    return edges, paths, types

def solve_linear(Arows, rhs):
    """exact Gaussian elimination; Arows: list of rows (Fractions)."""
    n = len(Arows)
    M = [row[:] + [rhs[i]] for i, row in enumerate(Arows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]

def mat_inverse(Arows):
    n = len(Arows)
    M = [row[:] + [Q(1) if j == i else Q(0) for j in range(n)] for i, row in enumerate(Arows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]

U = {1: (0, -1), 2: (1, 0)}   # eta_i(y) = <y, U[input type]>

def tree_measure(t):
    """Gaussian mass of the flow wedge for tree t, crossed by the standard
    transversal path of its outgoing mode. Returns (value, exact?) or 0."""
    m_T, _ = tree_mj(t, None)
    a, _ = prim(m_T)
    edges, paths, types = edge_paths(t)
    k = len(paths)
    nE = len(edges)
    assert nE == k - 1
    base = (-a[0], -a[1])
    d = (a[1], -a[0])   # positively transversal: det[-m, d] > 0
    # unknowns: s_0..s_{nE-1}, t ; equations eta_i = 0
    rows, rhs = [], []
    for i in range(k):
        u = U[types[i]]
        row = [Q(0)] * (nE + 1)
        for e in paths[i]:
            row[e] = Q(-pair(edges[e], u))
        row[nE] = Q(pair(d, u))
        rows.append(row)
        rhs.append(Q(-pair(base, u)))
    sol = solve_linear(rows, rhs)
    if sol is None:
        raise RuntimeError("degenerate flow map for " + repr(t))
    svals = sol[:nE]
    if any(s > 0 for s in svals):
        return 0.0
    active = [e for e in range(nE) if svals[e] == 0]
    r = len(active)
    if r == 0:
        return 1.0
    inv = mat_inverse(rows)
    rowsA = [[inv[e][i] for i in range(k)] for e in active]  # rows of A^-1
    # gaussian orthant mass P(w_e . Z <= 0 for all active e)
    import numpy as np
    W = np.array([[float(v) for v in row] for row in rowsA])
    G = W @ W.T
    Dg = np.sqrt(np.diag(G))
    C = G / np.outer(Dg, Dg)
    if r == 1:
        return 0.5
    if r == 2:
        return 0.25 + math.asin(C[0, 1]) / (2 * math.pi)
    if r == 3:
        return 0.125 + (math.asin(C[0, 1]) + math.asin(C[0, 2]) + math.asin(C[1, 2])) / (4 * math.pi)
    raise RuntimeError("r >= 4 not expected in oracle scope")

def tree_sum(inputs, N):
    """assembled Log Theta per primitive interior direction; floats."""
    agg = {}
    census = []
    for t in enumerate_trees(inputs, N):
        m_T, j_T = tree_mj(t, inputs)
        a, mult = prim(m_T)
        m, j, n, chi, ok = propagate(t)
        if not ok:
            census.append((t, m_T, j_T, None))
            continue
        coeff = Q(1)
        def leaf_coeffs(sub):
            nonlocal coeff
            if sub[0] == "leaf":
                _, ai, ki, ji = sub
                base = M1 if ai == 1 else M2
                coeff *= inputs[ai][(ji, ki * base[0], ki * base[1])]
            else:
                leaf_coeffs(sub[1]); leaf_coeffs(sub[2])
        leaf_coeffs(t)
        measure = tree_measure(t)
        w = Q(1, aut(t))
        sgn = (-1) ** (chi + 1)
        cx = float(coeff) * sgn * measure * float(w)
        key = (a, j_T, mult)
        nx, ny = agg.get(key, (0.0, 0.0))
        agg[key] = (nx + cx * float(n[0]), ny + cx * float(n[1]))
        census.append((t, m_T, j_T, measure))
    # Log Theta = -(aggregate); express on the primitive normal rot90(a)
    out = {}
    for (a, j, mult), (nx, ny) in agg.items():
        if a in ((1, 0), (0, 1)):
            continue
        na = rot90(a)
        scale = nx / na[0] if na[0] != 0 else ny / na[1]
        if na[0] != 0 and na[1] != 0:
            assert abs(nx / na[0] - ny / na[1]) < 1e-12, (a, nx, ny)
        out.setdefault(a, {})[(j, mult * a[0], mult * a[1])] = -scale
    return out, census


def show_case(name, log1, log2, N, trees=True):
    print("== %s, N=%d ==" % (name, N))
    rays = ks_complete(log1, log2, N)
    print("completion rays:")
    print(ray_str(rays))
    if not trees:
        print()
        return rays, None, None
    inputs = {1: log1, 2: log2}
    mc, census = tree_sum(inputs, N)
    print("tree-sum rays (float):")
    for a in sorted(mc):
        terms = ", ".join("t^%d z^(%d,%d): %.12f" % (j, x, y, c)
                          for (j, x, y), c in sorted(mc[a].items()))
        print("  ray (%d,%d): %s" % (a[0], a[1], terms))
    # cross-check numerically
    max_dev = 0.0
    for a, wall in rays.items():
        na = rot90(a)
        for (j, x, y), n in wall["log"].items():
            b = n[0] / na[0] if na[0] != 0 else n[1] / na[1]
            got = mc.get(a, {}).get((j, x, y), 0.0)
            max_dev = max(max_dev, abs(float(b) - got))
    for a, terms in mc.items():
        for key, got in terms.items():
            if a not in rays or key not in rays[a]["log"]:
                max_dev = max(max_dev, abs(got))
    print("max |tree-sum - completion| over all ray terms: %.3e" % max_dev)
    assert max_dev < 1e-9, "routes disagree"
    print()
    return rays, mc, census


def main():
    N = 6
    s_simple1 = s_log(s_add(ONE, {(1, 1, 0): Q(1)}), N)
    s_simple2 = s_log(s_add(ONE, {(1, 0, 1): Q(1)}), N)
    show_case("simple", s_simple1, s_simple2, 6, trees=False)
    rays3, mc3, census3 = show_case("simple", {k: v for k, v in s_simple1.items() if k[0] <= 3},
                                    {k: v for k, v in s_simple2.items() if k[0] <= 3}, 3)
    print("tree census at simple N=3:")
    for t, m_T, j_T, meas in census3:
        print("  %s  m=(%d,%d) j=%d measure=%s aut=%d" % (t, m_T[0], m_T[1], j_T,
              ("%.6f" % meas) if meas is not None else "empty", aut(t)))
    print()
    d1 = s_scale(s_simple1, 2)
    d2 = s_scale(s_simple2, 2)
    d1 = {k: v for k, v in d1.items() if k[0] <= 4}
    d2 = {k: v for k, v in d2.items() if k[0] <= 4}
    rays_d, mc_d, census_d = show_case("doubled", d1, d2, 4)
    print("doubled N=4 tree count: %d (nonempty %d)" %
          (len(census_d), sum(1 for c in census_d if c[3] is not None)))
    # caterpillar measure golden
    cat = node(node(leaf(1, 1, 1), leaf(2, 1, 1)), leaf(1, 1, 1))
    print("caterpillar ((1+2)+1) measure:", tree_measure(cat))
    m, j, n, chi, ok = propagate(node(node(leaf(1, 1, 1), leaf(2, 1, 1)), leaf(1, 1, 1)))
    print("caterpillar propagate: m=(%d,%d) j=%d n=(%s,%s) chi=%d" % (m[0], m[1], j, n[0], n[1], chi))


if __name__ == "__main__":
    main()
