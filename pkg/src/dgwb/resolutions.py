"""Free resolutions of cyclic modules and linear solving over quotient rings."""
from __future__ import annotations

from .complexes import FreeComplex
from .matrix import Matrix
from .rings import RingSpec
from .snf import snf_cover


def solve_cover(E, A, rows: int, cols: int, b, g=None) -> list | None:
    """Some ``x`` with ``A x ≡ b`` modulo ``g`` (exactly if ``g`` is zero/None)."""
    if g is not None and not E.is_zero(g):
        z = E.zero()
        A = [list(A[i]) + [g if k == i else z for k in range(rows)] for i in range(rows)]
        width = cols + rows
    else:
        width = cols
    if rows == 0:
        return [E.zero()] * cols
    res = snf_cover(E, A, rows, width)
    c = []
    for row in res.U:
        acc = E.zero()
        for x, y in zip(row, b):
            if not E.is_zero(x) and not E.is_zero(y):
                acc = E.add(acc, E.mul(x, y))
        c.append(acc)
    y = [E.zero()] * width
    for j in range(res.rank):
        q, r = E.divmod(c[j], res.D[j][j])
        if not E.is_zero(r):
            return None
        y[j] = q
    if any(not E.is_zero(c[i]) for i in range(res.rank, rows)):
        return None
    out = []
    for row in res.V[:cols]:
        acc = E.zero()
        for x, w in zip(row, y):
            if not E.is_zero(x) and not E.is_zero(w):
                acc = E.add(acc, E.mul(x, w))
        out.append(acc)
    return out


def solve_preimage(A: Matrix, b) -> list | None:
    """Some ``x`` over ``A.ring`` with ``A x = b``, or ``None``."""
    R = A.ring
    x = solve_cover(R.cover, A.to_lists(), A.rows, A.cols, list(b), R.modulus)
    return None if x is None else [R.reduce(v) for v in x]


def resolve_invariants(R: RingSpec, invariants, top: int, length: int) -> tuple[FreeComplex, int | None]:
    """Free resolution of ``⊕ E/(d)`` over ``R`` ending in degree ``top``.

    Over a domain each summand needs at most two terms. Over ``E/(g)`` a
    summand ``E/(d)`` with ``d`` a proper divisor of ``g`` has the periodic
    resolution ``... --g/d--> R --d--> R``; it is cut after ``length`` maps
    and the returned bound is the lowest degree in which the result is
    still exact (``None`` when nothing was cut).
    """
    E = R.cover
    g = R.modulus
    pieces = []  # (list of multipliers from the top down)
    cut = False
    for d in invariants:
        d = E.normalize(d)[1]
        if E.is_unit(d):
            continue
        if E.is_zero(g):
            pieces.append([] if E.is_zero(d) else [d])
        elif E.normalize(E.gcd(d, g))[1] == E.normalize(g)[1] or E.is_zero(d):
            pieces.append([])
        else:
            other = E.exact_div(g, d)
            pieces.append([d if k % 2 == 0 else other for k in range(length)])
            cut = True
    ranks: dict[int, int] = {}
    entries: dict[int, dict] = {}
    offsets = []
    for maps in pieces:
        off = {}
        for k in range(len(maps) + 1):
            deg = top - k
            off[deg] = ranks.get(deg, 0)
            ranks[deg] = ranks.get(deg, 0) + 1
        offsets.append(off)
    for maps, off in zip(pieces, offsets):
        for k, m in enumerate(maps):
            deg = top - k - 1
            entries.setdefault(deg, {})[(off[deg + 1], off[deg])] = m
    diffs = {deg: Matrix.from_sparse(R, ranks[deg + 1], ranks[deg], e) for deg, e in entries.items()}
    return FreeComplex(R, ranks, diffs), (top - length + 1 if cut else None)


def coresolve_invariants(R: RingSpec, invariants, bottom: int, length: int) -> tuple[FreeComplex, int | None]:
    """Free coresolution of ``⊕ E/(d)`` starting in degree ``bottom``.

    Over a self-injective ``E/(g)`` the module ``E/(d)`` is the kernel of
    multiplication by ``d``, giving ``R --d--> R --g/d--> R --d--> ...``;
    cut after ``length`` maps, the result is exact in degrees below the
    returned bound. Over a domain the two-term free resolution is used
    instead (it is exact, so no bound is returned).
    """
    E = R.cover
    g = R.modulus
    if E.is_zero(g):
        F, _ = resolve_invariants(R, invariants, bottom, length)
        return F, None
    pieces = []
    cut = False
    for d in invariants:
        d = E.normalize(d)[1]
        if E.is_unit(d):
            continue
        if E.is_zero(d) or E.normalize(E.gcd(d, g))[1] == E.normalize(g)[1]:
            pieces.append([])
        else:
            other = E.exact_div(g, d)
            pieces.append([d if k % 2 == 0 else other for k in range(length)])
            cut = True
    ranks: dict[int, int] = {}
    offsets = []
    for maps in pieces:
        off = {}
        for k in range(len(maps) + 1):
            deg = bottom + k
            off[deg] = ranks.get(deg, 0)
            ranks[deg] = ranks.get(deg, 0) + 1
        offsets.append(off)
    entries: dict[int, dict] = {}
    for maps, off in zip(pieces, offsets):
        for k, m in enumerate(maps):
            deg = bottom + k
            entries.setdefault(deg, {})[(off[deg + 1], off[deg])] = m
    diffs = {deg: Matrix.from_sparse(R, ranks[deg + 1], ranks[deg], e) for deg, e in entries.items()}
    return FreeComplex(R, ranks, diffs), (bottom + length - 1 if cut else None)
