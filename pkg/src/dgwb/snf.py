"""Smith normal form over the covering Euclidean domains.

The list-level routines (``*_cover``) take a :class:`EuclideanDomain` and
plain nested lists; the :class:`Matrix` wrappers handle rings and lifting.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import mutants
from .cache import active_cache
from .errors import InvalidInput
from .matrix import Matrix


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    D: Matrix
    V: Matrix
    invariant_factors: tuple


@dataclass
class CoverSNF:
    """``U @ A @ V == D`` with ``Uinv``/``Vinv`` the inverses; ``rank`` nonzero pivots."""

    D: list
    U: list
    Uinv: list
    V: list
    Vinv: list
    rank: int

    def diagonal(self):
        return [self.D[i][i] for i in range(self.rank)]


def _eye(E, n):
    z, o = E.zero(), E.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def snf_cover(E, A, rows: int, cols: int, track: bool = True) -> CoverSNF:
    """Smith normal form of ``A`` (``rows`` x ``cols`` nested list over ``E``).

    Pivot: smallest nonzero norm, ties broken by lowest row then column.
    """
    A = [list(r) for r in A]
    U = _eye(E, rows) if track else None
    Uinv = _eye(E, rows) if track else None
    V = _eye(E, cols) if track else None
    Vinv = _eye(E, cols) if track else None
    iz = E.is_zero
    norm = E.norm
    check_div = not mutants.active("snf_divisibility")

    def swap_rows(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if track:
            U[i], U[j] = U[j], U[i]
            for r in Uinv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i == j:
            return
        for r in A:
            r[i], r[j] = r[j], r[i]
        if track:
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_axpy(dst, src, q):
        # row_dst -= q * row_src
        rs, rd = A[src], A[dst]
        for k in range(cols):
            if not iz(rs[k]):
                rd[k] = E.sub(rd[k], E.mul(q, rs[k]))
        if track:
            us, ud = U[src], U[dst]
            for k in range(rows):
                if not iz(us[k]):
                    ud[k] = E.sub(ud[k], E.mul(q, us[k]))
            for r in Uinv:
                if not iz(r[dst]):
                    r[src] = E.add(r[src], E.mul(q, r[dst]))

    def col_axpy(dst, src, q):
        # col_dst -= q * col_src
        for r in A:
            if not iz(r[src]):
                r[dst] = E.sub(r[dst], E.mul(q, r[src]))
        if track:
            for r in V:
                if not iz(r[src]):
                    r[dst] = E.sub(r[dst], E.mul(q, r[src]))
            vs, vd = Vinv[src], Vinv[dst]
            for k in range(cols):
                if not iz(vd[k]):
                    vs[k] = E.add(vs[k], E.mul(q, vd[k]))

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            r = A[i]
            for j in range(t, cols):
                x = r[j]
                if not iz(x):
                    key = (norm(x), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if not iz(A[i][t]):
                    q, r = E.divmod(A[i][t], p)
                    row_axpy(i, t, q)
                    dirty = dirty or not iz(r)
            for j in range(t + 1, cols):
                if not iz(A[t][j]):
                    q, r = E.divmod(A[t][j], p)
                    col_axpy(j, t, q)
                    dirty = dirty or not iz(r)
            if dirty:
                cand = [(norm(A[i][t]), i, t) for i in range(t, rows) if not iz(A[i][t])]
                cand += [(norm(A[t][j]), t, j) for j in range(t + 1, cols) if not iz(A[t][j])]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            if check_div:
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if not iz(A[i][j]) and not E.divides(p, A[i][j]):
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    row_axpy(t, bad, E.neg(E.one()))
                    continue
            break
        u, normed = E.normalize(A[t][t])
        if normed != A[t][t]:
            A[t] = [E.mul(u, x) for x in A[t]]
            if track:
                U[t] = [E.mul(u, x) for x in U[t]]
                ui = E.unit_inverse(u)
                for r in Uinv:
                    r[t] = E.mul(r[t], ui)
        t += 1
    return CoverSNF(A, U, Uinv, V, Vinv, t)


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    """Smith decomposition ``U @ A @ V == D`` over a Euclidean-domain ring."""
    R = A.ring
    if not R.is_domain_cover:
        raise InvalidInput(f"smith_normal_form needs a Euclidean domain, got {R}; lift quotient rings first")
    cache = active_cache()
    if cache is not None:
        payload = A.to_json()
        hit = cache.get("snf", payload)
        if hit is not None:
            U, D, V = (Matrix.from_json(hit[k], R) for k in ("U", "D", "V"))
            return SmithDecomposition(U, D, V, tuple(R.elem_from_json(x) for x in hit["invariant_factors"]))
        out = _smith(A)
        cache.put("snf", payload, {
            "U": out.U.to_json(),
            "D": out.D.to_json(),
            "V": out.V.to_json(),
            "invariant_factors": [R.elem_to_json(x) for x in out.invariant_factors],
        })
        return out
    return _smith(A)


def _smith(A: Matrix) -> SmithDecomposition:
    R = A.ring
    res = snf_cover(R.cover, A.to_lists(), A.rows, A.cols)
    mk = lambda rows, n, m: Matrix(R, n, m, tuple(map(tuple, rows)))
    return SmithDecomposition(
        U=mk(res.U, A.rows, A.rows),
        D=mk(res.D, A.rows, A.cols),
        V=mk(res.V, A.cols, A.cols),
        invariant_factors=tuple(res.diagonal()),
    )


def kernel_basis_cover(E, A, rows: int, cols: int, g) -> list[list]:
    """Basis of ``{x in E^cols : A x in g E^rows}``.

    For ``g == 0`` this is the kernel of ``A``; otherwise the kernel of the
    augmented matrix ``[A | g I]`` projected onto its first ``cols``
    coordinates, which is injective because ``g`` is a non-zero-divisor.
    """
    if rows == 0:
        return _eye(E, cols)
    if E.is_zero(g):
        aug, width = A, cols
    else:
        z = E.zero()
        aug = [list(A[i]) + [g if k == i else z for k in range(rows)] for i in range(rows)]
        width = cols + rows
    res = snf_cover(E, aug, rows, width)
    basis = []
    for j in range(res.rank, width):
        basis.append([res.V[i][j] for i in range(cols)])
    return basis


def invariants_of_relations(E, rel, rows: int, cols: int) -> list:
    """Non-unit invariant factors of ``coker(rel)`` with zeros for free summands."""
    res = snf_cover(E, rel, rows, cols, track=False)
    diag = res.diagonal()
    out = [d for d in diag if not E.is_unit(d)]
    out += [E.zero()] * (rows - res.rank)
    return out


def kernel_presentation(A: Matrix) -> Matrix:
    """Matrix whose columns generate ``{x : A x = 0}`` over ``A.ring``."""
    R = A.ring
    E = R.cover
    basis = kernel_basis_cover(E, A.to_lists(), A.rows, A.cols, R.modulus)
    cols = [[R.reduce(x) for x in v] for v in basis]
    cols = [c for c in cols if any(not R.is_zero(x) for x in c)]
    data = tuple(tuple(c[i] for c in cols) for i in range(A.cols))
    return Matrix(R, A.cols, len(cols), data)


class SpanSolver:
    """Coordinates of vectors in the span of a full-column-rank basis over ``E``."""

    def __init__(self, E, basis: list[list], n: int):
        self.E = E
        self.k = len(basis)
        self.n = n
        mat = [[basis[j][i] for j in range(self.k)] for i in range(n)]
        self.res = snf_cover(E, mat, n, self.k)
        if self.res.rank != self.k:
            raise ValueError("basis is not linearly independent")

    def solve(self, b) -> list | None:
        E = self.E
        res = self.res
        c = [E.zero()] * self.n
        for i, row in enumerate(res.U):
            acc = E.zero()
            for x, y in zip(row, b):
                if not E.is_zero(x) and not E.is_zero(y):
                    acc = E.add(acc, E.mul(x, y))
            c[i] = acc
        y = []
        for j in range(self.k):
            q, r = E.divmod(c[j], res.D[j][j])
            if not E.is_zero(r):
                return None
            y.append(q)
        if any(not E.is_zero(c[i]) for i in range(self.k, self.n)):
            return None
        out = []
        for row in res.V:
            acc = E.zero()
            for x, w in zip(row, y):
                if not E.is_zero(x) and not E.is_zero(w):
                    acc = E.add(acc, E.mul(x, w))
            out.append(acc)
        return out
