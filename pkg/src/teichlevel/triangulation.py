"""Oriented triangulated pseudo 3-manifolds with shape structures.

Angles are stored per tetrahedron as (alpha_01, alpha_02, alpha_03) in units
of pi, so rational fixtures stay exact under Pachner moves and gauge shifts.
The opposite edge carries the same angle: pair 0 = {01, 23}, pair 1 =
{02, 13}, pair 2 = {03, 12}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}
BALANCE_TOL = 1e-12


class MalformedGluing(ValueError):
    pass


class UnknownEdge(KeyError):
    pass


class BoundaryGauge(ValueError):
    pass


class NotBalanced(ValueError):
    pass


class BadStar(ValueError):
    pass


class NonPositive(ValueError):
    pass


def face_vertices(f: int) -> tuple[int, ...]:
    return tuple(v for v in range(4) if v != f)


def _face_map(fa: int, fb: int) -> dict[int, int]:
    """Vertex-order preserving identification of face fa with face fb."""
    return dict(zip(face_vertices(fa), face_vertices(fb)))


def _to_pi(v) -> Real:
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class Tetrahedron:
    id: int
    sign: int
    angles: tuple  # units of pi

    def radians(self) -> tuple[float, float, float]:
        return tuple(float(a) * math.pi for a in self.angles)

    def angle_at(self, i: int, j: int):
        return self.angles[PAIR[(min(i, j), max(i, j))]]


@dataclass(frozen=True)
class Gluing:
    ta: int
    fa: int
    tb: int
    fb: int


@dataclass(frozen=True)
class LeveledShape:
    shape: tuple  # per tetrahedron angle triples, units of pi
    level: Real = 0


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _classes(keys, uf: _UnionFind) -> dict:
    """Number equivalence classes in order of first appearance."""
    label, out = {}, {}
    for k in keys:
        r = uf.find(k)
        if r not in label:
            label[r] = len(label)
        out[k] = label[r]
    return out


@dataclass(frozen=True)
class PseudoManifold:
    tetrahedra: tuple
    gluings: tuple
    N: int = 1
    vertex_of: dict = field(compare=False, repr=False, default=None)
    edge_of: dict = field(compare=False, repr=False, default=None)
    face_of: dict = field(compare=False, repr=False, default=None)

    @property
    def census(self) -> tuple[int, int, int, int]:
        return (len(set(self.vertex_of.values())), len(set(self.edge_of.values())),
                len(set(self.face_of.values())), len(self.tetrahedra))

    @property
    def edges(self) -> list[str]:
        return [f"e{i}" for i in range(self.census[1])]

    def glued_faces(self) -> dict:
        out = {}
        for g in self.gluings:
            out[(g.ta, g.fa)] = (g.tb, g.fb)
            out[(g.tb, g.fb)] = (g.ta, g.fa)
        return out

    def boundary_faces(self) -> list[tuple[int, int]]:
        glued = self.glued_faces()
        return [(t, f) for t in range(len(self.tetrahedra)) for f in range(4) if (t, f) not in glued]

    def boundary_edges(self) -> set[int]:
        out = set()
        for t, f in self.boundary_faces():
            fv = face_vertices(f)
            for i in range(3):
                for j in range(i + 1, 3):
                    out.add(self.edge_of[(t, (fv[i], fv[j]))])
        return out

    def boundary_sign_counts(self) -> tuple[int, int]:
        signs = [(-1) ** f * self.tetrahedra[t].sign for t, f in self.boundary_faces()]
        return signs.count(1), signs.count(-1)

    def tet_edges_over(self, e) -> list[tuple[int, tuple[int, int]]]:
        idx = edge_index(self, e)
        return [k for k, v in self.edge_of.items() if v == idx]

    def shape(self) -> tuple:
        return tuple(t.angles for t in self.tetrahedra)


def edge_index(X: PseudoManifold, e) -> int:
    if isinstance(e, str) and e.startswith("e") and e[1:].isdigit():
        e = int(e[1:])
    if not isinstance(e, (int, np.integer)) or not 0 <= e < X.census[1]:
        raise UnknownEdge(e)
    return int(e)


def _propagate_signs(n: int, gluings) -> list[int]:
    """Orientation-reversing gluings fix each sign relative to its neighbours."""
    signs = [0] * n
    adj = {t: [] for t in range(n)}
    for g in gluings:
        rel = -((-1) ** (g.fa + g.fb))
        adj[g.ta].append((g.tb, rel))
        adj[g.tb].append((g.ta, rel))
    for root in range(n):
        if signs[root]:
            continue
        signs[root] = 1
        stack = [root]
        while stack:
            t = stack.pop()
            for u, rel in adj[t]:
                want = rel * signs[t]
                if signs[u] == 0:
                    signs[u] = want
                    stack.append(u)
                elif signs[u] != want:
                    raise MalformedGluing("gluings admit no consistent orientation")
    return signs


def build(n_tets: int, gluings, angles=None, signs=None, N: int = 1) -> PseudoManifold:
    """Quotient cell structure of a set of ordered tetrahedra and face gluings.

    gluings: iterable of (tet_a, face_a, tet_b, face_b). Signs default to the
    orientation forced by the gluings (first tetrahedron of each component
    positive).
    """
    gl = tuple(g if isinstance(g, Gluing) else Gluing(*map(int, g)) for g in gluings)
    used = set()
    for g in gl:
        for t, f in ((g.ta, g.fa), (g.tb, g.fb)):
            if not (0 <= t < n_tets and 0 <= f < 4):
                raise MalformedGluing(f"no face {t}.{f}")
            if (t, f) in used:
                raise MalformedGluing(f"face {t}.{f} used twice")
            used.add((t, f))
    if signs is None:
        signs = _propagate_signs(n_tets, gl)
    else:
        signs = [int(s) for s in signs]
        for g in gl:
            if (-1) ** g.fa * signs[g.ta] != -((-1) ** g.fb) * signs[g.tb]:
                raise MalformedGluing(f"gluing {g.ta}.{g.fa} {g.tb}.{g.fb} preserves orientation")
    if angles is None:
        angles = [(Fraction(1, 3),) * 3] * n_tets
    tets = tuple(Tetrahedron(i, signs[i], tuple(_to_pi(a) for a in angles[i])) for i in range(n_tets))

    uv, ue, uf = _UnionFind(), _UnionFind(), _UnionFind()
    for g in gl:
        m = _face_map(g.fa, g.fb)
        uf.union((g.ta, g.fa), (g.tb, g.fb))
        for v, w in m.items():
            uv.union((g.ta, v), (g.tb, w))
        fv = face_vertices(g.fa)
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = fv[i], fv[j]
                ue.union((g.ta, (a, b)), (g.tb, (m[a], m[b])))
    vkeys = [(t, v) for t in range(n_tets) for v in range(4)]
    ekeys = [(t, e) for t in range(n_tets) for e in EDGES]
    fkeys = [(t, f) for t in range(n_tets) for f in range(4)]
    return PseudoManifold(tets, gl, N, _classes(vkeys, uv), _classes(ekeys, ue), _classes(fkeys, uf))


def rebuild(X: PseudoManifold, shape=None) -> PseudoManifold:
    shape = X.shape() if shape is None else shape
    return build(len(X.tetrahedra), X.gluings, shape, [t.sign for t in X.tetrahedra], X.N)


def disjoint_union(X: PseudoManifold, Y: PseudoManifold) -> PseudoManifold:
    k = len(X.tetrahedra)
    gl = list(X.gluings) + [Gluing(g.ta + k, g.fa, g.tb + k, g.fb) for g in Y.gluings]
    return build(k + len(Y.tetrahedra), gl, list(X.shape()) + list(Y.shape()),
                 [t.sign for t in X.tetrahedra] + [t.sign for t in Y.tetrahedra], X.N)


# ------------------------------------------------------------- weights

def weight_pi(X: PseudoManifold, e, shape=None):
    """Weight of an edge in units of pi (exact for rational angles)."""
    shape = X.shape() if shape is None else shape
    return sum((shape[t][PAIR[ij]] for t, ij in X.tet_edges_over(e)), Fraction(0))


def weight(X: PseudoManifold, e, shape=None) -> float:
    return float(weight_pi(X, e, shape)) * math.pi


def weights(X: PseudoManifold, shape=None) -> list[float]:
    return [weight(X, e, shape) for e in range(X.census[1])]


def is_balanced(X: PseudoManifold, shape, e) -> bool:
    idx = edge_index(X, e)
    if idx in X.boundary_edges():
        return False
    return abs(weight(X, idx, shape) - 2 * math.pi) < BALANCE_TOL


def is_fully_balanced(X: PseudoManifold, shape=None) -> bool:
    return all(is_balanced(X, shape, e) for e in range(X.census[1]))


# ------------------------------------------------------- gauge action

def epsilon_pair(a: tuple[int, int], b: tuple[int, int], X: PseudoManifold | None = None) -> int:
    """Skew pairing on (tet, pair) elements; b following a cyclically gives +1.

    The cyclic order 0 -> 1 -> 2 holds on positive tetrahedra and is reversed
    on negative ones when X is supplied.
    """
    if a[0] != b[0]:
        return 0
    d = (b[1] - a[1]) % 3
    s = 0 if d == 0 else (1 if d == 1 else -1)
    if X is not None:
        s *= X.tetrahedra[a[0]].sign
    return s


def gauge_transform(X: PseudoManifold, ls: LeveledShape, g: dict) -> LeveledShape:
    """Shift angles by the edge function g (keys: edge index or 'e<k>')."""
    gv = {}
    for k, v in g.items():
        gv[edge_index(X, k)] = v
    bnd = X.boundary_edges()
    if any(gv.get(e, 0) != 0 for e in bnd):
        raise BoundaryGauge("gauge must vanish on boundary edges")
    shape = [list(s) for s in ls.shape]
    level = ls.level
    for t in range(len(X.tetrahedra)):
        for k in range(3):
            shift = 0
            for ij in EDGES:
                eps = epsilon_pair((t, k), (t, PAIR[ij]), X)
                if eps:
                    shift = shift + eps * gv.get(X.edge_of[(t, ij)], 0)
            shape[t][k] = ls.shape[t][k] + shift
    for e, ge in gv.items():
        if ge:
            level = level + ge * sum(Fraction(1, 3) - ls.shape[t][PAIR[ij]] for t, ij in X.tet_edges_over(e))
    return LeveledShape(tuple(tuple(s) for s in shape), level)


# ----------------------------------------------------------- 3-2 move

@dataclass(frozen=True)
class PachnerResult:
    manifold: PseudoManifold
    shape: tuple
    level: Real
    edge_map: dict  # old edge index -> new edge index


def _topo_order(labels, relations) -> list:
    order, rest = [], set(labels)
    while rest:
        free = [x for x in rest if not any((y, x) in relations for y in rest if y != x)]
        if len(free) != 1:
            raise BadStar("star vertices admit no consistent ordering")
        order.append(free[0])
        rest.remove(free[0])
    return order


def pachner_32_full(X: PseudoManifold, shape, e, level: Real = 0) -> PachnerResult:
    idx = edge_index(X, e)
    members = X.tet_edges_over(idx)
    star = [t for t, _ in members]
    if len(members) != 3 or len(set(star)) != 3:
        raise BadStar(f"edge e{idx} is not shared by exactly three distinct tetrahedra")
    if not is_balanced(X, shape, idx):
        raise NotBalanced(f"edge e{idx} is not balanced")
    glued = X.glued_faces()
    ends = {t: ij for t, ij in members}

    # label local vertices: p, q for the edge, equator vertices by union-find
    uf = _UnionFind()
    for t, (u, v) in members:
        for s in range(4):
            if s in (u, v):
                continue
            partner = glued.get((t, s))
            if partner is None or partner[0] not in ends:
                raise BadStar("edge star is not closed")
            t2, f2 = partner
            m = _face_map(s, f2)
            other = next(w for w in face_vertices(s) if w not in (u, v))
            uf.union((t, other), (t2, m[other]))
    req = sorted({uf.find((t, s)) for t in star for s in range(4) if s not in ends[t]})
    if len(req) != 3:
        raise BadStar("edge link is not a triangle")
    rname = {r: f"r{i}" for i, r in enumerate(req)}

    def label(t, s):
        u, v = ends[t]
        return "p" if s == u else "q" if s == v else rname[uf.find((t, s))]

    relations = set()
    for t in star:
        for i in range(4):
            for j in range(i + 1, 4):
                relations.add((label(t, i), label(t, j)))
    rs = ["r0", "r1", "r2"]
    o4 = _topo_order(["p"] + rs, relations)
    o5 = _topo_order(["q"] + rs, relations)

    # angle of each star edge (pair of labels), summed over star tetrahedra
    def star_angle(l1, l2):
        tot = 0
        for t in star:
            labs = [label(t, s) for s in range(4)]
            if l1 in labs and l2 in labs:
                tot = tot + shape[t][PAIR[tuple(sorted((labs.index(l1), labs.index(l2))))]]
        return tot

    new_shapes = []
    for order, apex in ((o4, "p"), (o5, "q")):
        ang = []
        for pair_edges in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
            for i, j in pair_edges:
                if apex in (order[i], order[j]):
                    ang.append(star_angle(order[i], order[j]))
                    break
        new_shapes.append(tuple(ang))

    old = [t for t in range(len(X.tetrahedra)) if t not in ends]
    renum = {t: i for i, t in enumerate(old)}
    t4, t5 = len(old), len(old) + 1
    new_face = {}  # (old tet, old face) -> (new tet, new face)
    signs = {}
    for t in star:
        u, v = ends[t]
        for f, target, order in ((v, t4, o4), (u, t5, o5)):
            labs = {label(t, s) for s in face_vertices(f)}
            nf = next(k for k in range(4) if order[k] not in labs)
            new_face[(t, f)] = (target, nf)
            s_new = (-1) ** (f + nf) * X.tetrahedra[t].sign
            if signs.setdefault(target, s_new) != s_new:
                raise BadStar("inconsistent orientation in edge star")
    gl, seen = [], set()
    for g in X.gluings:
        a, b = (g.ta, g.fa), (g.tb, g.fb)
        if a[0] in ends and b[0] in ends and (a not in new_face or b not in new_face):
            continue  # internal to the star
        na = new_face.get(a, (renum.get(a[0]), a[1]))
        nb = new_face.get(b, (renum.get(b[0]), b[1]))
        key = frozenset((na, nb))
        if key not in seen:
            seen.add(key)
            gl.append((na[0], na[1], nb[0], nb[1]))
    gl.append((t4, o4.index("p"), t5, o5.index("q")))
    new_signs = [X.tetrahedra[t].sign for t in old] + [signs[t4], signs[t5]]
    new_shape = [tuple(shape[t]) for t in old] + new_shapes
    Y = build(len(new_shape), gl, new_shape, new_signs, X.N)

    # old edge -> new edge through any representative tet-edge
    emap = {}
    for (t, (i, j)), ei in X.edge_of.items():
        if ei == idx or ei in emap:
            continue
        if t in renum:
            emap[ei] = Y.edge_of[(renum[t], (i, j))]
        else:
            l1, l2 = label(t, i), label(t, j)
            for nt, order in ((t4, o4), (t5, o5)):
                if l1 in order and l2 in order:
                    a, b = sorted((order.index(l1), order.index(l2)))
                    emap[ei] = Y.edge_of[(nt, (a, b))]
                    break
    lvl = level
    for t, ij in members:
        k = PAIR[ij]
        lvl = lvl + Fraction(1, 12) * sum(
            2 * epsilon_pair((t, k), (t, k2), X) * shape[t][k2] for k2 in range(3))
    return PachnerResult(Y, tuple(new_shape), lvl, emap)


def pachner_32(X: PseudoManifold, shape, e):
    r = pachner_32_full(X, shape, e)
    return r.manifold, r.shape


# ------------------------------------------------------ admissibility

def _truncated_chain_complex(X: PseudoManifold):
    """Boundary matrices d2 (C2 -> C1) and d3 (C3 -> C2) of the truncated complex.

    Cells per tetrahedron: 6 edge segments, 12 link edges, 4 hexagons, 4 link
    triangles, one 3-cell. Gluings are order preserving, so cell orientations
    taken from the vertex order are compatible across identifications.
    """
    uf1, uf2 = _UnionFind(), _UnionFind()
    for g in X.gluings:
        m = _face_map(g.fa, g.fb)
        uf2.union(("hex", g.ta, g.fa), ("hex", g.tb, g.fb))
        fv = face_vertices(g.fa)
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = fv[i], fv[j]
                uf1.union(("mid", g.ta, a, b), ("mid", g.tb, m[a], m[b]))
                c = next(x for x in fv if x not in (a, b))
                # link edge at vertex c between directions a and b
                uf1.union(("lnk", g.ta, c, a, b), ("lnk", g.tb, m[c], m[a], m[b]))
    n = len(X.tetrahedra)
    c1, c2 = [], []
    for t in range(n):
        c1 += [("mid", t, a, b) for a, b in EDGES]
        for v in range(4):
            o = [w for w in range(4) if w != v]
            c1 += [("lnk", t, v, o[0], o[1]), ("lnk", t, v, o[0], o[2]), ("lnk", t, v, o[1], o[2])]
        c2 += [("hex", t, f) for f in range(4)] + [("tri", t, v) for v in range(4)]
    i1 = _classes(c1, uf1)
    i2 = _classes(c2, uf2)
    d2 = np.zeros((len(set(i1.values())), len(set(i2.values()))), dtype=np.int64)
    d3 = np.zeros((len(set(i2.values())), n), dtype=np.int64)

    def hex_boundary(t, f):
        x0, x1, x2 = face_vertices(f)
        return [(("mid", t, x0, x1), 1), (("lnk", t, x1, x0, x2), 1), (("mid", t, x1, x2), 1),
                (("lnk", t, x2, x0, x1), -1), (("mid", t, x0, x2), -1), (("lnk", t, x0, x1, x2), -1)]

    def tri_boundary(t, v):
        w = [x for x in range(4) if x != v]
        return [(("lnk", t, v, w[0], w[1]), 1), (("lnk", t, v, w[1], w[2]), 1), (("lnk", t, v, w[0], w[2]), -1)]

    col_seen = set()
    for t in range(n):
        for f in range(4):
            col = i2[("hex", t, f)]
            if col not in col_seen:
                col_seen.add(col)
                for cell, s in hex_boundary(t, f):
                    d2[i1[cell], col] += s
        for v in range(4):
            col = i2[("tri", t, v)]
            for cell, s in tri_boundary(t, v):
                d2[i1[cell], col] += s
    # 3-cell: alternating hexagons, link triangles signed so that d2 d3 = 0
    # link triangle signs from a free tetrahedron, where no cells are merged
    local = {}
    for f in range(4):
        for cell, s in hex_boundary(0, f):
            local[cell] = local.get(cell, 0) + (-1) ** f * s
    tri_sign = []
    for v in range(4):
        cell, s = tri_boundary(0, v)[0]
        tri_sign.append(-local[cell] * s)
    for t in range(n):
        for f in range(4):
            d3[i2[("hex", t, f)], t] += (-1) ** f
        for v in range(4):
            d3[i2[("tri", t, v)], t] += tri_sign[v]
    if np.any(d2 @ d3):
        raise AssertionError("truncated complex boundary does not square to zero")
    return d2, d3


def smith_invariants(m: np.ndarray) -> list[int]:
    """Nonzero invariant factors of an integer matrix."""
    if m.size == 0:
        return []
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    s = smith_normal_form(Matrix(m.tolist()), domain=ZZ)
    return [abs(int(s[i, i])) for i in range(min(s.shape)) if s[i, i] != 0]


def h2_rank_torsion(X: PseudoManifold) -> tuple[int, list[int]]:
    d2, d3 = _truncated_chain_complex(X)
    inv2 = smith_invariants(d2)
    inv3 = smith_invariants(d3)
    kernel = d2.shape[1] - len(inv2)
    return kernel - len(inv3), [d for d in inv3 if d > 1]


def h2_vanishes(X: PseudoManifold) -> bool:
    rank, torsion = h2_rank_torsion(X)
    return rank == 0 and not torsion


def shape_polytope_slack(X: PseudoManifold, balanced: bool = False) -> float:
    """Largest t with every angle >= t; positive iff the polytope is nonempty.

    balanced=True adds the 2*pi condition on internal edges.
    """
    from scipy.optimize import linprog
    n = len(X.tetrahedra)
    nv = 3 * n + 1
    A_eq, b_eq = [], []
    for t in range(n):
        row = np.zeros(nv)
        row[3 * t:3 * t + 3] = 1
        A_eq.append(row)
        b_eq.append(1.0)
    if balanced:
        bnd = X.boundary_edges()
        for e in range(X.census[1]):
            if e in bnd:
                continue
            row = np.zeros(nv)
            for t, ij in X.tet_edges_over(e):
                row[3 * t + PAIR[ij]] += 1
            A_eq.append(row)
            b_eq.append(2.0)
    A_ub = np.zeros((3 * n, nv))
    for k in range(3 * n):
        A_ub[k, k] = -1
        A_ub[k, -1] = 1
    c = np.zeros(nv)
    c[-1] = -1
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(3 * n), A_eq=np.array(A_eq), b_eq=b_eq,
                  bounds=[(None, None)] * (nv - 1) + [(None, 1.0)], method="highs")
    return float(-res.fun) if res.status == 0 else -math.inf


def is_admissible(X: PseudoManifold) -> bool:
    return shape_polytope_slack(X) > 0 and h2_vanishes(X)


# ----------------------------------------------------- Ptolemy ratios

def _check_pos(*vals):
    if any(v <= 0 for v in vals):
        raise NonPositive("ratio coordinates must be positive")


def ratio_bullet(x, y):
    _check_pos(*x, *y)
    return (x[0] * y[0], x[0] * y[1] + x[1])


def ratio_star(x, y):
    _check_pos(*x, *y)
    d = x[0] * y[1] + x[1]
    return (y[0] * x[1] / d, y[1] / d)


# ----------------------------------------------------------- file I/O

def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def _parse_num(s: str):
    try:
        return Fraction(s)
    except ValueError:
        return float(s)


def dumps(X: PseudoManifold, shape=None) -> str:
    shape = X.shape() if shape is None else shape
    lines = [f"tets {len(X.tetrahedra)} N {X.N}"]
    lines += [f"glue {g.ta}.{g.fa} {g.tb}.{g.fb}" for g in X.gluings]
    lines += [f"sign {t.id} {t.sign:+d}" for t in X.tetrahedra]
    lines += [f"angles {t} " + " ".join(_fmt(a) for a in shape[t]) for t in range(len(X.tetrahedra))]
    return "\n".join(lines) + "\n"


def loads(text: str) -> PseudoManifold:
    """Parse the line-oriented triangulation format; `sign` lines are optional."""
    n = N = None
    gl, angles, signs = [], {}, {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "tets":
                n, N = int(tok[1]), int(tok[3]) if len(tok) > 3 else 1
            elif tok[0] == "glue":
                ta, fa = tok[1].split(".")
                tb, fb = tok[2].split(".")
                gl.append((int(ta), int(fa), int(tb), int(fb)))
            elif tok[0] == "angles":
                angles[int(tok[1])] = tuple(_parse_num(x) for x in tok[2:5])
                if len(tok) != 5:
                    raise ValueError
            elif tok[0] == "sign":
                signs[int(tok[1])] = int(tok[2])
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise MalformedGluing(f"line {lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise MalformedGluing("missing 'tets' header")
    ang = [angles.get(t, (Fraction(1, 3),) * 3) for t in range(n)]
    sg = [signs[t] for t in range(n)] if len(signs) == n else None
    return build(n, gl, ang, sg, N)


def load(path) -> PseudoManifold:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def save(X: PseudoManifold, path, shape=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(X, shape))


# --------------------------------------------------------- fixtures

def figure_eight(a=(Fraction(1, 3),) * 2, b=(Fraction(1, 3),) * 2, c=(Fraction(1, 3),) * 2, N: int = 1):
    """Two-tetrahedron figure-eight complement; angles (a, b, c) for (T+, T-) in units of pi."""
    gl = [(0, 2 * i + j, 1, 2 - 2 * i + j) for i in (0, 1) for j in (0, 1)]
    return build(2, gl, [(a[0], b[0], c[0]), (a[1], b[1], c[1])], [1, -1], N)


def five_two(angles=None, N: int = 1):
    """Three positive tetrahedra whose quotient is the 5_2 complement."""
    gl = [(0, 0, 2, 3), (0, 2, 1, 3), (0, 1, 2, 2), (0, 3, 1, 0), (1, 2, 2, 1), (1, 1, 2, 0)]
    return build(3, gl, angles or [(Fraction(1, 3),) * 3] * 3, [1, 1, 1], N)


def single_tetrahedron(angles=(Fraction(1, 3),) * 3):
    return build(1, [], [angles], [1])


def h_figure_eight(angles=None, N: int = 1):
    """Figure-eight H-triangulation: a folded tetrahedron T0 (faces 0, 1 glued)
    inserted between T+ and T-.  Tetrahedra are ordered (T0, T+, T-); the knot
    is the edge (2, 3) of T0."""
    gl = [(0, 0, 0, 1), (0, 2, 1, 1), (0, 3, 2, 3), (1, 0, 2, 2), (1, 2, 2, 0), (1, 3, 2, 1)]
    return build(3, gl, angles or [(Fraction(1, 3),) * 3] * 3, [1, 1, -1], N)


def h_five_two(angles=None, N: int = 1):
    """5_2 H-triangulation: negative folded T0 followed by the three positive
    tetrahedra of :func:`five_two`; the knot is the edge (2, 3) of T0."""
    gl = [(0, 0, 0, 1), (0, 3, 1, 3), (0, 2, 2, 0), (1, 0, 3, 3), (1, 2, 2, 3),
          (1, 1, 3, 2), (2, 2, 3, 1), (2, 1, 3, 0)]
    return build(4, gl, angles or [(Fraction(1, 3),) * 3] * 4, [-1, 1, 1, 1], N)


def knot_edge(X: PseudoManifold) -> int:
    """Edge class of (2, 3) in the first tetrahedron (the knot of an H-triangulation)."""
    return X.edge_of[(0, (2, 3))]


def three_star(angles=None, N: int = 1):
    """Three tetrahedra around the common edge (0, 1), the input shape of a 3-2 move.

    Vertices p < q < r0 < r1 < r2 globally; the tetrahedra are pqr0r1, pqr1r2
    and pqr0r2 with local vertices in global order, so every gluing keeps the
    order.  The default angles balance the central edge.
    """
    gl = [(0, 2, 1, 3), (1, 2, 2, 2), (0, 3, 2, 3)]
    default = [(Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))] * 3
    return build(3, gl, angles or default, None, N)
