"""Pure-Python versions of the hot loops.

Same signatures as the compiled ``_kernels`` module. Used when the extension
is not built or when ``DEHNFLOER_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import numpy as np

OP_EQ, OP_GE, OP_LE = 0, 1, 2


def f2_rank(bits: np.ndarray) -> int:
    """Rank over GF(2) of a 0/1 matrix, rows packed into Python ints."""
    rows = [int("".join("1" if b else "0" for b in row) or "0", 2) for row in bits]
    rank = 0
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def enumerate_linear(values, dom_start, dom_size, comp_off, width,
                     coef, rhs, ops, con_rows, con_level):
    """Depth-first enumeration of a product of finite domains under linear rows.

    Variable ``v`` takes one of ``dom_size[v]`` vectors stored in
    ``values[dom_start[v]:dom_start[v] + dom_size[v], :width[v]]``; its entries
    occupy ``comp_off[v]:comp_off[v] + width[v]`` of the component vector.
    Constraint ``c`` owns rows ``con_rows[c]:con_rows[c + 1]`` and is tested as
    soon as variable ``con_level[c]`` is bound (constraints are pre-sorted by
    level). Returns ``(killed, witness, survivors)``: per-constraint counts of
    full assignments rejected first by that constraint, the index vector of the
    first such assignment (-1 if none) and the list of surviving index tuples.
    """
    n_vars = len(dom_size)
    n_cons = len(con_level)
    n_comp = int(comp_off[-1] + width[-1]) if n_vars else 0
    suffix = [1] * (n_vars + 1)
    for v in range(n_vars - 1, -1, -1):
        suffix[v] = suffix[v + 1] * int(dom_size[v])
    by_level: list[list[int]] = [[] for _ in range(n_vars)]
    for c in range(n_cons):
        by_level[int(con_level[c])].append(c)
    rows = [[(int(j), int(a)) for j, a in enumerate(coef[r]) if a] for r in range(coef.shape[0])]
    rhs_l = [int(x) for x in rhs]
    ops_l = [int(x) for x in ops]
    doms = [
        [tuple(int(x) for x in values[dom_start[v] + i, : width[v]]) for i in range(int(dom_size[v]))]
        for v in range(n_vars)
    ]
    offs = [int(x) for x in comp_off]
    killed = [0] * n_cons
    witness = -np.ones((n_cons, n_vars), dtype=np.int64)
    survivors: list[tuple[int, ...]] = []
    comps = [0] * n_comp
    idx = [0] * n_vars

    def holds(c: int) -> bool:
        for r in range(int(con_rows[c]), int(con_rows[c + 1])):
            s = 0
            for j, a in rows[r]:
                s += a * comps[j]
            op = ops_l[r]
            if op == OP_EQ:
                if s != rhs_l[r]:
                    return False
            elif op == OP_GE:
                if s < rhs_l[r]:
                    return False
            elif s > rhs_l[r]:
                return False
        return True

    def visit(level: int) -> None:
        off = offs[level]
        for i, vec in enumerate(doms[level]):
            idx[level] = i
            comps[off: off + len(vec)] = vec
            failed = -1
            for c in by_level[level]:
                if not holds(c):
                    failed = c
                    break
            if failed >= 0:
                killed[failed] += suffix[level + 1]
                if witness[failed, 0] < 0:
                    witness[failed, : level + 1] = idx[: level + 1]
                    witness[failed, level + 1:] = 0
                continue
            if level == n_vars - 1:
                survivors.append(tuple(idx))
            else:
                visit(level + 1)

    if n_vars:
        visit(0)
    return np.asarray(killed, dtype=np.int64), witness, survivors
