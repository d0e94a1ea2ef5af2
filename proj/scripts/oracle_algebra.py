#!/usr/bin/env python3
"""Reference oracle for the exact-algebra layer.

Independent implementation of truncated Laurent series, derivations and
automorphism actions, using only fractions.Fraction. Prints golden values
that the C++ unit tests freeze. Run: python3 scripts/oracle_algebra.py
"""

from fractions import Fraction as Q
import math

# ---------------------------------------------------------------- series

def trim(f):
    return {k: c for k, c in f.items() if c != 0}

def s_add(f, g):
    out = dict(f)
    for k, c in g.items():
        out[k] = out.get(k, 0) + c
    return trim(out)

def s_scale(f, c):
    return trim({k: v * c for k, v in f.items()})

def s_mul(f, g, N):
    out = {}
    for (j1, x1, y1), c1 in f.items():
        for (j2, x2, y2), c2 in g.items():
            j = j1 + j2
            if j > N:
                continue
            k = (j, x1 + x2, y1 + y2)
            out[k] = out.get(k, 0) + c1 * c2
    return trim(out)

ONE = {(0, 0, 0): Q(1)}

def s_pow(f, p, N):
    out = ONE
    for _ in range(p):
        out = s_mul(out, f, N)
    return out

def s_exp(f, N):
    # requires every term of f to carry j >= 1
    assert all(j >= 1 for (j, _, _) in f)
    out, term = dict(ONE), dict(ONE)
    for k in range(1, N + 1):
        term = s_scale(s_mul(term, f, N), Q(1, k))
        if not term:
            break
        out = s_add(out, term)
    return out

def s_log(f, N):
    # f = 1 + g
    g = s_add(f, s_scale(ONE, -1))
    assert all(j >= 1 for (j, _, _) in g)
    out, p = {}, dict(ONE)
    for k in range(1, N + 1):
        p = s_mul(p, g, N)
        if not p:
            break
        out = s_add(out, s_scale(p, Q((-1) ** (k + 1), k)))
    return out

def s_inv(f, N):
    c0 = f.get((0, 0, 0), 0)
    assert c0 != 0
    # 1/f = (1/c0) * 1/(1 + g), g = f/c0 - 1
    g = s_add(s_scale(f, Q(1, 1) / c0), s_scale(ONE, -1))
    out, p = dict(ONE), dict(ONE)
    for k in range(1, N + 1):
        p = s_mul(p, g, N)
        if not p:
            break
        out = s_add(out, s_scale(p, Q(-1) ** k))
    return s_scale(out, Q(1, 1) / c0)

def s_str(f):
    def key(k):
        return (k[0], k[1], k[2])
    parts = []
    for (j, x, y) in sorted(f, key=key):
        parts.append("%s * t^%d z^(%d,%d)" % (f[(j, x, y)], j, x, y))
    return "  +  ".join(parts) if parts else "0"

# ------------------------------------------------------- lie / derivations

def pair(m, n):
    return m[0] * n[0] + m[1] * n[1]

def l_add(a, b):
    out = {k: v for k, v in a.items()}
    for k, (nx, ny) in b.items():
        ox, oy = out.get(k, (Q(0), Q(0)))
        out[k] = (ox + nx, oy + ny)
    return {k: v for k, v in out.items() if v != (0, 0)}

def l_scale(a, c):
    return {k: (nx * c, ny * c) for k, (nx, ny) in a.items() if c != 0}

def l_bracket(a, b, N):
    # [z^m d_n, z^m' d_n'] = z^(m+m') d_(<m',n> n' - <m,n'> n)
    out = {}
    for (j1, x1, y1), n1 in a.items():
        for (j2, x2, y2), n2 in b.items():
            j = j1 + j2
            if j > N:
                continue
            m1, m2 = (x1, y1), (x2, y2)
            c1, c2 = pair(m2, n1), pair(m1, n2)
            n = (c1 * n2[0] - c2 * n1[0], c1 * n2[1] - c2 * n1[1])
            if n == (0, 0):
                continue
            k = (j, x1 + x2, y1 + y2)
            ox, oy = out.get(k, (Q(0), Q(0)))
            out[k] = (ox + n[0], oy + n[1])
    return {k: v for k, v in out.items() if v != (0, 0)}

def derive(L, f, N):
    # D(z^m' t^j') = sum over terms of L of <m', n> z^(m'+m) t^(j'+j)
    out = {}
    for (j2, x2, y2), c in f.items():
        for (j1, x1, y1), n in L.items():
            j = j1 + j2
            if j > N:
                continue
            w = pair((x2, y2), n) * c
            if w == 0:
                continue
            k = (j, x1 + x2, y1 + y2)
            out[k] = out.get(k, 0) + w
    return trim(out)

def exp_action(L, f, N):
    out, term, k = dict(f), dict(f), 1
    while True:
        term = s_scale(derive(L, term, N), Q(1, k))
        if not term:
            return out
        out = s_add(out, term)
        k += 1

GEN1 = {(0, 1, 0): Q(1)}
GEN2 = {(0, 0, 1): Q(1)}

def action_log_to_lie(act, N):
    """Recover the Lie element whose exp realizes a given automorphism.

    act: series -> series. Operator log via sum (-1)^(k+1)/k (act - id)^k
    applied to both generators; the generator images pin each (j, m)
    payload componentwise.
    """
    def op_log(f):
        out = {}
        p = dict(f)
        for k in range(1, N + 1):
            p = s_add(act(p), s_scale(p, -1))  # (act - id) p
            if not p:
                break
            out = s_add(out, s_scale(p, Q((-1) ** (k + 1), k)))
        return out
    img1, img2 = op_log(GEN1), op_log(GEN2)
    L = {}
    for (j, x, y), c in img1.items():
        L[(j, x - 1, y)] = (c, L.get((j, x - 1, y), (Q(0), Q(0)))[1])
    for (j, x, y), c in img2.items():
        prev = L.get((j, x, y - 1), (Q(0), Q(0)))
        L[(j, x, y - 1)] = (prev[0], c)
    # closure sanity: <m, n> must vanish per term
    for (j, x, y), n in L.items():
        assert pair((x, y), n) == 0, ((j, x, y), n)
    return {k: v for k, v in L.items() if v != (0, 0)}

def l_str(L):
    parts = []
    for (j, x, y) in sorted(L):
        nx, ny = L[(j, x, y)]
        parts.append("t^%d z^(%d,%d) d_(%s,%s)" % (j, x, y, nx, ny))
    return "  +  ".join(parts) if parts else "0"


def main():
    print("== series ==")
    N = 3
    f = s_add(ONE, {(1, 1, 0): Q(1)})          # 1 + t z^(1,0)
    print("log(1 + t z^(1,0)) at N=3:", s_str(s_log(f, N)))
    g = {(1, 1, 0): Q(2), (2, 0, 1): Q(-3)}
    assert s_log(s_exp(g, 5), 5) == g
    print("exp/log round trip at N=5 on 2 t z^(1,0) - 3 t^2 z^(0,1): ok")
    h = s_add(ONE, {(1, -1, 2): Q(1, 2)})
    assert s_mul(h, s_inv(h, 4), 4) == ONE
    print("inv(1 + (1/2) t z^(-1,2)) * itself at N=4 == 1: ok")

    print("\n== automorphism action ==")
    D = {(1, 1, 0): (Q(0), Q(1))}              # t z^(1,0) d_(0,1)
    img = exp_action(D, GEN2, 2)
    print("exp(t z^(1,0) d_(0,1)) . z^(0,1) mod t^3:", s_str(img))

    print("\n== bch via composed-action operator log ==")
    X = {(1, 1, 0): (Q(0), Q(1))}              # t z^(1,0) d_(0,1)
    Y = {(1, 0, 1): (Q(1), Q(0))}              # t z^(0,1) d_(1,0)
    NB = 2
    comp = lambda s: exp_action(X, exp_action(Y, s, NB), NB)   # exp(X) after exp(Y)
    print("bch(X,Y) at N=2:", l_str(action_log_to_lie(comp, NB)))
    comp_rev = lambda s: exp_action(Y, exp_action(X, s, NB), NB)
    print("bch(Y,X) at N=2:", l_str(action_log_to_lie(comp_rev, NB)))
    print("exp(X)exp(Y) . z^(1,0) mod t^3:", s_str(comp(GEN1)))
    print("exp(Y)exp(X) . z^(1,0) mod t^3:", s_str(comp_rev(GEN1)))
    print("exp(X)exp(Y) . z^(0,1) mod t^3:", s_str(comp(GEN2)))
    print("exp(Y)exp(X) . z^(0,1) mod t^3:", s_str(comp_rev(GEN2)))

    print("\n== uncompleted two-line loop defect at N=2 ==")
    # walls: line along (1,0) with log(1+t x) d_(0,1), line along (0,1) with
    # log(1+t y) d_(-1,0); anticlockwise loop from just past the (-1,-1)
    # direction crosses: y-axis (sigma +1), x-axis (-1), y-axis (-1),
    # x-axis (+1). Product applies first crossing first.
    NB = 2
    A = {(j, x, y): (Q(0), c) for (j, x, y), c in s_log(s_add(ONE, {(1, 1, 0): Q(1)}), NB).items()}
    B = {(j, x, y): (-c, Q(0)) for (j, x, y), c in s_log(s_add(ONE, {(1, 0, 1): Q(1)}), NB).items()}
    seq = [(B, 1), (A, -1), (B, -1), (A, 1)]
    def loop(s):
        for L, sg in seq:
            s = exp_action(l_scale(L, sg), s, NB)
        return s
    print("defect log:", l_str(action_log_to_lie(loop, NB)))

    print("\n== dynkin cross-check values (order sums) ==")
    # golden coefficients the Dynkin summation must reproduce on nilpotents
    # log(e^x e^y) = x + y + 1/2 [x,y] + 1/12 [x,[x,y]] + 1/12 [y,[y,x]] + ...
    X3 = {(1, 1, 0): (Q(0), Q(1))}
    Y3 = {(1, 0, 1): (Q(2), Q(0))}
    N3 = 3
    comp3 = lambda s: exp_action(X3, exp_action(Y3, s, N3), N3)
    print("bch(t z^(1,0) d_(0,1), 2 t z^(0,1) d_(1,0)) at N=3:")
    print("  ", l_str(action_log_to_lie(comp3, N3)))


if __name__ == "__main__":
    main()
