"""Independent Δ-complex model of a compact surface, used to cross-check ``surface``.

Σ_{h,c} is the polygon with boundary word

    a1 b1 a1^-1 b1^-1 ... ah bh ah^-1 bh^-1  t1 c1 t1^-1 ... tc cc tc^-1

with corners glued as the word dictates, then coned off from a centre O.
The loops c_j are the boundary circles. Homology is computed from the
boundary matrices with a bitset elimination that shares no code with the
rest of the package. Intersection numbers come from cup products on the
surface obtained by capping each c_j with a (degenerate) cone.
"""

from __future__ import annotations

from dataclasses import dataclass


def _reduce(rows: list[int]) -> list[int]:
    """Row echelon basis of the F2 span of ``rows`` (ints as bitsets), keyed by top bit."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                break
            r ^= pivots[top]
    return list(pivots.values())


def _rank(rows: list[int]) -> int:
    return len(_reduce(rows))


def _in_span(v: int, basis: list[int]) -> bool:
    pivots = {b.bit_length() - 1: b for b in _reduce(basis)}
    while v:
        top = v.bit_length() - 1
        if top not in pivots:
            return False
        v ^= pivots[top]
    return True


def _nullspace(cols: list[int], width: int) -> list[int]:
    """Basis of {x : <x, col> = 0 for every col}, vectors of ``width`` bits."""
    # Gaussian elimination on the matrix whose rows are the constraints
    rows = list(cols)
    pivot_cols: list[int] = []
    reduced: list[int] = []
    for bit in range(width):
        mask = 1 << bit
        idx = next((i for i, r in enumerate(rows) if r & mask), None)
        if idx is None:
            continue
        p = rows.pop(idx)
        rows = [r ^ p if r & mask else r for r in rows]
        reduced = [r ^ p if r & mask else r for r in reduced]
        reduced.append(p)
        pivot_cols.append(bit)
    free = [b for b in range(width) if b not in pivot_cols]
    out = []
    for f in free:
        v = 1 << f
        for p, bit in zip(reduced, pivot_cols):
            if p & (1 << f):
                v |= 1 << bit
        out.append(v)
    return out


@dataclass
class DeltaComplex:
    vertices: list[str]
    edges: list[tuple[str, int, int]]  # (name, tail, head)
    triangles: list[tuple[int, int, int]]  # edge ids of faces [v0v1], [v1v2], [v0v2]

    def edge(self, name: str) -> int:
        return next(i for i, e in enumerate(self.edges) if e[0] == name)

    def boundary1(self) -> list[int]:
        return [(1 << t) ^ (1 << h) for _, t, h in self.edges]  # loops give 0

    def boundary2(self) -> list[int]:
        out = []
        for f in self.triangles:
            v = 0
            for e in f:
                v ^= 1 << e
            out.append(v)
        return out

    def betti(self) -> tuple[int, int, int]:
        r1, r2 = _rank(self.boundary1()), _rank(self.boundary2())
        return (len(self.vertices) - r1, len(self.edges) - r1 - r2, len(self.triangles) - r2)


def polygon_complex(h: int, c: int, capped: bool = False) -> DeltaComplex:
    word: list[tuple[str, int]] = []
    for i in range(1, h + 1):
        word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
    for j in range(1, c + 1):
        word += [(f"t{j}", 1), (f"c{j}", 1), (f"t{j}", -1)]
    n = len(word)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # corner k sits before letter k; letter k runs corner k -> corner k+1
    ends: dict[str, tuple[int, int]] = {}
    for k, (name, sign) in enumerate(word):
        tail, head = (k, (k + 1) % n) if sign > 0 else ((k + 1) % n, k)
        if name in ends:
            t0, h0 = ends[name]
            parent[find(tail)] = find(t0)
            parent[find(head)] = find(h0)
        else:
            ends[name] = (tail, head)
    roots = sorted({find(k) for k in range(n)})
    vid = {r: i for i, r in enumerate(roots)}
    vertices = [f"w{i}" for i in range(len(roots))] + ["O"]
    centre = len(vertices) - 1
    names = list(ends)
    edges: list[tuple[str, int, int]] = [(nm, vid[find(t)], vid[find(hd)]) for nm, (t, hd) in ends.items()]
    triangles: list[tuple[int, int, int]] = []
    if word:
        spokes = []
        for k in range(n):
            spokes.append(len(edges))
            edges.append((f"s{k}", vid[find(k)], centre))
        for k, (name, sign) in enumerate(word):
            e = names.index(name)
            start, end = spokes[k], spokes[(k + 1) % n]
            tail, head = (start, end) if sign > 0 else (end, start)
            # vertices (tail, head, O): faces edge, head spoke, tail spoke
            triangles.append((e, head, tail))
    else:
        # the sphere: two triangles on the same three edges
        vertices = ["w", "x", "O"]
        edges = [("e0", 0, 1), ("e1", 1, 2), ("e2", 0, 2)]
        triangles = [(0, 1, 2), (0, 1, 2)]
    if capped:
        for j in range(1, c + 1):
            cj = names.index(f"c{j}")
            vertices.append(f"Q{j}")
            edges.append((f"r{j}", edges[cj][1], len(vertices) - 1))
            rj = len(edges) - 1
            triangles.append((cj, rj, rj))  # vertices (v, v, Q_j) with c_j a loop at v
    return DeltaComplex(vertices, edges, triangles)


def _cup_form(K: DeltaComplex) -> tuple[list[int], list[list[int]]]:
    """H^1 representatives and their cup-product matrix on the closed complex K."""
    ne = len(K.edges)
    cocycles = _nullspace(K.boundary2(), ne)
    # coboundaries of vertex indicators: edges with exactly one endpoint there
    cobounds = []
    for v in range(len(K.vertices)):
        vec = 0
        for i, (_, t, hd) in enumerate(K.edges):
            if (t == v) != (hd == v):
                vec |= 1 << i
        cobounds.append(vec)
    basis: list[int] = []
    for z in cocycles:
        if not _in_span(z, cobounds + basis):
            basis.append(z)
    Q = [[0] * len(basis) for _ in basis]
    for i, al in enumerate(basis):
        for j, be in enumerate(basis):
            s = 0
            for f01, f12, _ in K.triangles:
                s ^= ((al >> f01) & 1) & ((be >> f12) & 1)
            Q[i][j] = s
    return basis, Q


def _invert(Q: list[list[int]]) -> list[list[int]]:
    n = len(Q)
    rows = [sum(Q[i][j] << j for j in range(n)) | (1 << (n + i)) for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if (rows[r] >> col) & 1)
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and (rows[r] >> col) & 1:
                rows[r] ^= rows[col]
    return [[(rows[i] >> (n + j)) & 1 for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class OracleResult:
    betti: tuple[int, int, int]
    cycles: tuple[str, ...]
    intersection: tuple[tuple[int, ...], ...]
    last_boundary_is_sum: bool
    cycles_form_basis: bool


def surface_oracle(h: int, c: int) -> OracleResult:
    """Betti numbers of Σ_{h,c} and intersection numbers of a_i, b_i, c_1..c_{c-1}."""
    K = polygon_complex(h, c)
    cycles = [f"a{i}" for i in range(1, h + 1)] + [f"b{i}" for i in range(1, h + 1)]
    cycles += [f"c{j}" for j in range(1, c)]
    closed = polygon_complex(h, c, capped=True)
    basis, Q = _cup_form(closed)
    Qi = _invert(Q) if basis else []

    def ev(name: str) -> list[int]:
        e = closed.edge(name)
        return [(z >> e) & 1 for z in basis]

    table = []
    for x in cycles:
        ex = ev(x)
        row = []
        for y in cycles:
            ey = ev(y)
            s = 0
            for i in range(len(basis)):
                for j in range(len(basis)):
                    s ^= ex[i] & Qi[i][j] & ey[j]
            row.append(s)
        table.append(tuple(row))
    last = True
    if c >= 1:
        v = 0
        for j in range(1, c + 1):
            v ^= 1 << K.edge(f"c{j}")
        last = _in_span(v, K.boundary2())
    b2 = K.boundary2()
    vecs = [1 << K.edge(x) for x in cycles]
    independent = _rank(b2 + vecs) == _rank(b2) + len(vecs) == _rank(b2) + K.betti()[1]
    return OracleResult(K.betti(), tuple(cycles), tuple(table), last, independent)
