#!/usr/bin/env python3
"""Independent re-derivation of the fixed values frozen into the C++ tests.

Plain Fractions and networkx only; shares no code with the C++ library.
Gadget instances are read from `circuitkit gadgets export` output, so pass
the directory holding those files with --gadgets (see README).

    python3 tests/oracle/derive.py --gadgets /tmp/gadgets > derived.json
"""

import argparse
import itertools
import json
from collections import deque
from fractions import Fraction
from math import gcd

import networkx as nx


# ------------------------------------------------------------ linear algebra

def rref(rows, ncols):
    m = [list(map(Fraction, r)) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], piv


def kernel(rows, ncols):
    red, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def normalize(v):
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    first = next(x for x in ints if x != 0)
    return tuple(-x for x in ints) if first < 0 else tuple(ints)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class System:
    def __init__(self, n, A=(), b=(), B=(), d=()):
        self.n = n
        self.A = [list(map(Fraction, r)) for r in A]
        self.b = list(map(Fraction, b))
        self.B = [list(map(Fraction, r)) for r in B]
        self.d = list(map(Fraction, d))

    @staticmethod
    def from_json(j):
        fr = lambda x: Fraction(x) if not isinstance(x, str) else Fraction(*map(int, x.split("/")))
        A = [[fr(c) for c in r["coeffs"]] for r in j["equalities"]]
        b = [fr(r["rhs"]) for r in j["equalities"]]
        B = [[fr(c) for c in r["coeffs"]] for r in j["inequalities"]]
        d = [fr(r["rhs"]) for r in j["inequalities"]]
        return System(j["n"], A, b, B, d)

    def is_circuit(self, g):
        if any(dot(r, g) != 0 for r in self.A) or all(x == 0 for x in g):
            return False
        zero = [r for r in self.B if dot(r, g) == 0]
        return len(kernel(self.A + zero, self.n)) == 1

    def circuits(self):
        """Support-minimal kernel vectors, found as 1-dim kernels of [A; B_S]."""
        kerA = kernel(self.A, self.n)
        dim = len(kerA)
        out = set()
        if dim == 0:
            return out
        for S in itertools.combinations(range(len(self.B)), dim - 1):
            k = kernel(self.A + [self.B[i] for i in S], self.n)
            if len(k) != 1:
                continue
            g = normalize(k[0])
            if self.is_circuit([Fraction(x) for x in g]):
                out.add(g)
        return out


def kappa(circs):
    best = Fraction(1)
    for c in circs:
        nz = [abs(x) for x in c if x != 0]
        best = max(best, Fraction(max(nz), min(nz)))
    return best


def fmt(q):
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------- walks

def max_step(sys, x, g):
    best = None
    for r, dd in zip(sys.B, sys.d):
        s = dot(r, g)
        if s > 0:
            t = (dd - dot(r, x)) / s
            best = t if best is None else min(best, t)
    return best


def bfs(sys, start, target, pool, depth_cap=12):
    start, target = tuple(map(Fraction, start)), tuple(map(Fraction, target))
    dirs = [tuple(map(Fraction, c)) for c in pool] + [tuple(-Fraction(v) for v in c) for c in pool]
    seen = {start: 0}
    q = deque([start])
    while q:
        x = q.popleft()
        if x == target:
            return seen[x], len(seen)
        if seen[x] >= depth_cap:
            continue
        for g in dirs:
            t = max_step(sys, x, g)
            if t is None or t <= 0:
                continue
            y = tuple(a + t * b for a, b in zip(x, g))
            if y not in seen:
                seen[y] = seen[x] + 1
                q.append(y)
    return None, len(seen)


def within_two(sys, start, pool):
    dirs = [tuple(map(Fraction, c)) for c in pool] + [tuple(-Fraction(v) for v in c) for c in pool]
    layer, seen = {tuple(map(Fraction, start))}, {tuple(map(Fraction, start))}
    for _ in range(2):
        nxt = set()
        for x in layer:
            for g in dirs:
                t = max_step(sys, x, g)
                if t is None or t <= 0:
                    continue
                y = tuple(a + t * b for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        layer = nxt
    return seen


# --------------------------------------------------------------- graphs

def rank_system(G, with_nonneg=False):
    V = list(G.nodes())
    E = list(G.edges())
    B, d = [], []
    for size in range(1, len(V) + 1):
        for U in itertools.combinations(V, size):
            Us = set(U)
            B.append([1 if (u in Us and v in Us) else 0 for u, v in E])
            d.append(len(U) - nx.number_connected_components(G.subgraph(U)))
    if with_nonneg:
        for i in range(len(E)):
            B.append([-1 if j == i else 0 for j in range(len(E))])
            d.append(0)
    return System(len(E), B=B, d=d)


def small_graphs(max_n, connected):
    out = []
    for G in nx.graph_atlas_g():
        if 1 <= G.number_of_nodes() <= max_n and (not connected or nx.is_connected(G)):
            out.append(G)
    return out


def coloring_system(G, t):
    V, E = list(G.nodes()), list(G.edges())
    n = len(V) * t
    idx = lambda v, c: V.index(v) * t + c
    A, b, B, d = [], [], [], []
    for v in V:
        A.append([1 if i // t == V.index(v) else 0 for i in range(n)])
        b.append(1)
    for u, v in E:
        for c in range(t):
            r = [0] * n
            r[idx(u, c)] = r[idx(v, c)] = 1
            B.append(r)
            d.append(1)
    for i in range(n):
        B.append([-1 if j == i else 0 for j in range(n)])
        d.append(0)
    return System(n, A, b, B, d)


def proper_colorings(G, t):
    V = list(G.nodes())
    res = []
    for a in itertools.product(range(t), repeat=len(V)):
        col = dict(zip(V, a))
        if all(col[u] != col[v] for u, v in G.edges()):
            res.append(a)
    return res


def char_diff(a, b, t):
    v = []
    for x, y in zip(a, b):
        for c in range(t):
            v.append(Fraction((c == y) - (c == x)))
    return v


def components(nodes, adj):
    seen, comps = set(), 0
    for s in nodes:
        if s in seen:
            continue
        comps += 1
        st = [s]
        seen.add(s)
        while st:
            x = st.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    st.append(y)
    return comps


def kempe_adjacency(G, cols):
    V = list(G.nodes())
    as_set = set(cols)
    adj = {c: set() for c in cols}
    for c in cols:
        for a, b in itertools.combinations(sorted(set(c)), 2):
            H = G.subgraph([v for i, v in enumerate(V) if c[i] in (a, b)])
            for comp in nx.connected_components(H):
                d = list(c)
                for v in comp:
                    i = V.index(v)
                    d[i] = b if c[i] == a else a
                d = tuple(d)
                if d != c and d in as_set:
                    adj[c].add(d)
        # single-vertex recolourings into unused colours are Kempe swaps too
        for i in range(len(V)):
            for x in range(max(max(cc) for cc in cols) + 1):
                d = list(c)
                d[i] = x
                d = tuple(d)
                if d != c and d in as_set and x not in c:
                    adj[c].add(d)
    return adj


def circuit_distance(G, t, c1, c2):
    sys = coloring_system(G, t)
    cols = proper_colorings(G, t)
    dist = {c1: 0}
    q = deque([c1])
    while q:
        c = q.popleft()
        if c == c2:
            return dist[c]
        for d in cols:
            if d not in dist and sys.is_circuit(char_diff(c, d, t)):
                dist[d] = dist[c] + 1
                q.append(d)
    return None


# --------------------------------------------------------------- zig-zag

def polygon_system(verts):
    """Facets of a convex polygon listed counter-clockwise."""
    B, d = [], []
    for (x1, y1), (x2, y2) in zip(verts, verts[1:] + verts[:1]):
        a, b = y2 - y1, -(x2 - x1)  # outward normal for ccw order
        B.append([a, b])
        d.append(a * x1 + b * y1)
    return System(2, B=B, d=d)


# ------------------------------------------------------------------ main

def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gadgets", required=True)
    args = ap.parse_args()
    out = {}

    s = System(2, B=[[1, 0], [0, 1], [1, 1]], d=[0, 0, 0])
    out["identity_plus_sum_circuits"] = sorted(s.circuits())
    s = System(3, A=[[1, 1, 1]], b=[0], B=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], d=[0, 0, 0])
    out["sum_zero_circuits"] = sorted(s.circuits())

    # eq1 as a plain kernel
    out["eq1_kernel"] = [fmt(x) for x in kernel([[-1, 1, 1, 0], [-1, 1, 0, 1], [-1, 0, 1, 1]], 4)[0]]

    # MWF on K3 at a spanning tree: feasible purely positive circuits
    K3 = nx.complete_graph(3)
    mwf3 = rank_system(K3, True)
    c3 = mwf3.circuits()
    x = [Fraction(1), Fraction(1), Fraction(0)]
    out["k3_mwf_circuits"] = len(c3)
    out["k3_tree_positive_feasible"] = sum(
        1 for c in c3 for sgn in (1, -1)
        if all(sgn * v >= 0 for v in c) and (max_step(mwf3, x, [sgn * Fraction(v) for v in c]) or 0) > 0)

    # MWF on K4: circuits, points within two steps of 0, and a spanning star
    K4 = nx.complete_graph(4)
    mwf4 = rank_system(K4, True)
    c4 = mwf4.circuits()
    E4 = list(K4.edges())
    star = tuple(Fraction(1 if 0 in e else 0) for e in E4)
    two = within_two(mwf4, [0] * 6, c4)
    out["k4_mwf_circuits"] = len(c4)
    out["k4_points_within_two_steps"] = len(two)
    out["k4_star_within_two_steps"] = star in two

    # gadgets
    for name in ["thm22_1", "thm22_2", "thm24_1", "thm24_2", "thm21_1", "thm23_1"]:
        with open(f"{args.gadgets}/o_{name}.system.json") as f:
            g = System.from_json(json.load(f))
        cs = g.circuits()
        out[f"{name}_circuits"] = len(cs)
        out[f"{name}_kappa"] = fmt(kappa(cs))

    # zig-zag with M = 2, eps = 1
    M, e = Fraction(2), Fraction(1)
    verts = [(Fraction(0), Fraction(0)), (e, Fraction(0)), (M + 1 + e, M), (M + 1 + e, M + e)]
    z = polygon_system(verts)
    zc = z.circuits()
    z01 = [c for c in zc if all(v in (-1, 0, 1) for v in c)]
    out["zigzag_circuits"] = sorted(zc)
    out["zigzag_restricted_length"] = bfs(z, verts[0], verts[3], z01)[0]
    out["zigzag_unrestricted_length"] = bfs(z, verts[0], verts[3], zc)[0]

    # colouring characterisation counts
    pairs = circ = 0
    for G in small_graphs(4, True):
        sysc = coloring_system(G, 3)
        cols = proper_colorings(G, 3)
        for a, b in itertools.combinations(cols, 2):
            pairs += 1
            circ += sysc.is_circuit(char_diff(a, b, 3))
    out["colcir_pairs"] = pairs
    out["colcir_circuit_pairs"] = circ

    # prism
    P = nx.Graph([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
    cols = proper_colorings(P, 3)
    sysp = coloring_system(P, 3)
    cadj = {c: {d for d in cols if d != c and sysp.is_circuit(char_diff(c, d, 3))} for c in cols}
    out["prism_colorings"] = len(cols)
    out["prism_kempe_components"] = components(cols, kempe_adjacency(P, cols))
    out["prism_circuit_components"] = components(cols, cadj)
    out["prism_circuit_adjacent_pairs"] = sum(len(v) for v in cadj.values()) // 2

    # long proper walks and the two-step bound
    out["k2_four_colors_distance"] = circuit_distance(nx.complete_graph(2), 4, (0, 1), (2, 3))
    out["k3_six_colors_distance"] = circuit_distance(nx.complete_graph(3), 6, (0, 1, 2), (3, 4, 5))
    K4c = proper_colorings(K4, 4)
    sys44 = coloring_system(K4, 4)
    adj = {c: {d for d in K4c if d != c and sys44.is_circuit(char_diff(c, d, 4))} for c in K4c}
    far = 0
    for c in K4c:
        one = adj[c]
        two_set = set().union(*(adj[d] for d in one)) if one else set()
        far += sum(1 for d in K4c if d != c and d not in one and d not in two_set)
    out["k4_four_colors_pairs_beyond_two"] = far
    out["k4_four_colors_adjacent_pairs"] = sum(len(v) for v in adj.values()) // 2

    # rank-system 0/±1 vectors on graphs with <= 4 vertices
    uni = unit_ok = mixed = mixed_circ = 0
    for G in small_graphs(4, False):
        m = G.number_of_edges()
        if m == 0:
            continue
        rs = rank_system(G)
        for vals in itertools.product((-1, 0, 1), repeat=m):
            if not any(vals):
                continue
            g = [Fraction(v) for v in vals]
            c = rs.is_circuit(g)
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                uni += 1
                unit_ok += c == (sum(1 for v in vals if v) == 1)
            else:
                mixed += 1
                mixed_circ += c
    out["rank4_uniform_vectors"] = uni
    out["rank4_uniform_agree"] = unit_ok
    out["rank4_mixed_vectors"] = mixed
    out["rank4_mixed_circuits"] = mixed_circ

    print(json.dumps(out, indent=1, default=list))


if __name__ == "__main__":
    main()
