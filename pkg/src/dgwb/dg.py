"""Koszul DG-rings and finite semi-free DG-modules over them.

A DG-ring here is ``A = base<ξ_1..ξ_k ; dξ_j = a_j>``, the exterior algebra
on degree ``-1`` generators. Its elements are dicts ``{monomial: coeff}``
where a monomial is a sorted tuple of generator indices.

A semi-free DG-module has a finite basis ``e_b`` of given degrees and a
differential ``d(e_b) = Σ κ ξ_U e_c``, stored as ``(c, U, κ)`` terms.
Everything is expanded over ``base`` through the monomial basis: the
*underlying complex* ``ξ_S e_b`` in degree ``deg(e_b) - |S|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from . import mutants
from .complexes import ComplexMap, FreeComplex, hom_sign
from .errors import InvalidInput
from .matrix import Matrix
from .rings import RingSpec, ring_map


def _merge_sign(S: tuple, T: tuple) -> int:
    """Sign of sorting the concatenation ``S + T`` (both sorted, disjoint)."""
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


@dataclass(frozen=True)
class DGRingPresentation:
    base: RingSpec
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.base.reduce(x) for x in self.a))

    @property
    def k(self) -> int:
        return len(self.a)

    @cached_property
    def monomials(self) -> list[tuple]:
        return [S for r in range(self.k + 1) for S in combinations(range(self.k), r)]

    @cached_property
    def mono_index(self) -> dict:
        return {S: i for i, S in enumerate(self.monomials)}

    def mul_mono(self, S: tuple, T: tuple):
        """``ξ_S ξ_T = sign ξ_V`` as ``(sign, V)``, or ``None`` when it vanishes."""
        if set(S) & set(T):
            return None
        return _merge_sign(S, T), tuple(sorted(S + T))

    def d_mono(self, S: tuple) -> list:
        """``d(ξ_S)`` as ``[(coeff, T)]``."""
        R = self.base
        out = []
        for p, j in enumerate(S):
            c = self.a[j] if p % 2 == 0 else R.neg(self.a[j])
            if not R.is_zero(c):
                out.append((c, S[:p] + S[p + 1:]))
        return out

    def is_ordinary(self) -> bool:
        return self.k == 0

    @cached_property
    def h0(self):
        """``(Ā, c)``: ``H^0(A) = base/(c)`` with ``c`` the gcd of the ``a_j``."""
        E = self.base.cover
        c = E.zero()
        for x in self.a:
            c = E.gcd(c, x)
        return self.base.quotient(c), c

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "koszul": [self.base.elem_to_json(x) for x in self.a]}

    @classmethod
    def from_json(cls, data) -> "DGRingPresentation":
        base = RingSpec.from_json(data["base"])
        return cls(base, tuple(base.elem_from_json(x) for x in data.get("koszul", [])))

    def __str__(self):
        if not self.a:
            return str(self.base)
        E = self.base.cover
        return f"Kos({self.base}; {', '.join(E.to_str(x) for x in self.a)})"


def koszul_dg_ring(base: RingSpec, a=()) -> DGRingPresentation:
    return DGRingPresentation(base, tuple(base(x) if not isinstance(x, tuple) else base.reduce(x) for x in a))


def h0_ring(A: DGRingPresentation):
    """``Ā = H^0(A)`` as a supported ring, with the generator of the defining ideal."""
    return A.h0


def koszul_complex(A: DGRingPresentation) -> FreeComplex:
    """Underlying complex of ``A`` itself."""
    return SemiFreeDGModule.free(A, [0]).underlying


@dataclass(frozen=True)
class SemiFreeDGModule:
    ring: DGRingPresentation
    names: tuple
    degrees: tuple
    diff: tuple  # per basis element: tuple of (c, U, coeff)

    def __post_init__(self):
        A = self.ring
        R = A.base
        n = len(self.degrees)
        if len(self.names) != n or len(self.diff) != n:
            raise InvalidInput("basis, degrees and differential must have equal length")
        if len(set(self.names)) != n:
            raise InvalidInput("basis names must be distinct")
        clean = []
        for b, terms in enumerate(self.diff):
            acc: dict = {}
            for c, U, x in terms:
                U = tuple(sorted(U))
                if not 0 <= c < n:
                    raise InvalidInput(f"differential of {self.names[b]} refers to unknown basis element")
                if U not in A.mono_index:
                    raise InvalidInput("unknown monomial")
                x = R.reduce(x)
                if R.is_zero(x):
                    continue
                if self.degrees[c] - len(U) != self.degrees[b] + 1:
                    raise InvalidInput(f"differential of {self.names[b]} is not of degree +1")
                acc[(c, U)] = R.add(acc.get((c, U), R.zero()), x)
            clean.append(tuple((c, U, x) for (c, U), x in sorted(acc.items(), key=lambda t: (t[0][0], A.mono_index[t[0][1]])) if not R.is_zero(x)))
        object.__setattr__(self, "diff", tuple(clean))
        self.underlying  # certifies d∘d = 0

    # -- constructors ------------------------------------------------------------

    @classmethod
    def free(cls, A: DGRingPresentation, degrees, names=None) -> "SemiFreeDGModule":
        degrees = tuple(int(d) for d in degrees)
        names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(len(degrees)))
        return cls(A, names, degrees, tuple(() for _ in degrees))

    @classmethod
    def zero(cls, A: DGRingPresentation) -> "SemiFreeDGModule":
        return cls(A, (), (), ())

    def attach(self, name: str, degree: int, boundary: list) -> "SemiFreeDGModule":
        """Attach a cell ``e`` of ``degree`` with ``d(e) = boundary`` (a cycle)."""
        return SemiFreeDGModule(self.ring, self.names + (name,), self.degrees + (degree,), self.diff + (tuple(boundary),))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    # -- underlying complex ----------------------------------------------------------

    @cached_property
    def layout(self) -> dict:
        """Degree ``n`` -> list of ``(b, S)`` spanning the underlying complex."""
        A = self.ring
        out: dict[int, list] = {}
        for b, deg in enumerate(self.degrees):
            for S in A.monomials:
                out.setdefault(deg - len(S), []).append((b, S))
        return dict(sorted(out.items()))

    @cached_property
    def index(self) -> dict:
        return {key: (n, i) for n, keys in self.layout.items() for i, key in enumerate(keys)}

    def underlying_terms(self, b: int, S: tuple) -> list:
        """``d(ξ_S e_b)`` as ``[((c, T), coeff)]``."""
        A = self.ring
        R = A.base
        out = []
        for x, T in A.d_mono(S):
            out.append(((b, T), x))
        sgn = -1 if len(S) % 2 else 1
        for c, U, x in self.diff[b]:
            prod = A.mul_mono(S, U)
            if prod is None:
                continue
            s, V = prod
            y = x if s * sgn == 1 else R.neg(x)
            out.append(((c, V), y))
        return out

    @cached_property
    def underlying(self) -> FreeComplex:
        R = self.ring.base
        ranks = {n: len(keys) for n, keys in self.layout.items()}
        entries: dict[int, dict] = {}
        for n, keys in self.layout.items():
            for col, (b, S) in enumerate(keys):
                for key, x in self.underlying_terms(b, S):
                    m, row = self.index[key]
                    e = entries.setdefault(n, {})
                    e[(row, col)] = R.add(e.get((row, col), R.zero()), x)
        diffs = {n: Matrix.from_sparse(R, ranks.get(n + 1, 0), ranks[n], e) for n, e in entries.items()}
        return FreeComplex(R, ranks, diffs)

    def vector_to_terms(self, n: int, vec) -> list:
        """Underlying vector of degree ``n`` as ``(b, S, coeff)`` terms."""
        R = self.ring.base
        return [(b, S, x) for (b, S), x in zip(self.layout.get(n, []), vec) if not R.is_zero(x)]

    # -- serialisation ----------------------------------------------------------------

    def to_json(self) -> dict:
        R = self.ring.base
        return {
            "ring": self.ring.to_json(),
            "basis": [{"name": nm, "deg": d} for nm, d in zip(self.names, self.degrees)],
            "differential": {
                self.names[b]: [{"target": self.names[c], "monomial": list(U), "coeff": R.elem_to_json(x)} for c, U, x in terms]
                for b, terms in enumerate(self.diff)
                if terms
            },
        }

    @classmethod
    def from_json(cls, data, ring: DGRingPresentation | None = None) -> "SemiFreeDGModule":
        A = ring or DGRingPresentation.from_json(data["ring"])
        names = tuple(e["name"] for e in data["basis"])
        degrees = tuple(int(e["deg"]) for e in data["basis"])
        pos = {nm: i for i, nm in enumerate(names)}
        diff = []
        for nm in names:
            terms = []
            for t in data.get("differential", {}).get(nm, []):
                if t["target"] not in pos:
                    raise InvalidInput(f"unknown basis element {t['target']!r}")
                terms.append((pos[t["target"]], tuple(int(i) for i in t.get("monomial", [])), A.base.elem_from_json(t["coeff"])))
            diff.append(tuple(terms))
        return cls(A, names, degrees, tuple(diff))


def underlying_complex(M: SemiFreeDGModule) -> FreeComplex:
    return M.underlying


def shift_module(M: SemiFreeDGModule, k: int) -> SemiFreeDGModule:
    """``M[k]``: degrees drop by ``k``, differential scaled by ``(-1)^k``."""
    R = M.ring.base
    sgn = k % 2
    diff = tuple(tuple((c, U, R.neg(x) if sgn else x) for c, U, x in terms) for terms in M.diff)
    return SemiFreeDGModule(M.ring, M.names, tuple(d - k for d in M.degrees), diff)


def direct_sum_modules(M: SemiFreeDGModule, N: SemiFreeDGModule) -> SemiFreeDGModule:
    if M.ring != N.ring:
        raise InvalidInput("DG-ring mismatch")
    off = M.rank
    names = tuple(f"{n}" for n in M.names) + tuple(f"{n}'" if n in M.names else n for n in N.names)
    diff = M.diff + tuple(tuple((c + off, U, x) for c, U, x in terms) for terms in N.diff)
    return SemiFreeDGModule(M.ring, names, M.degrees + N.degrees, diff)


# ---------------------------------------------------------------------------
# Tensor products


def dg_tensor(M: SemiFreeDGModule, N: SemiFreeDGModule) -> SemiFreeDGModule:
    """``M ⊗_A N`` on the basis ``e_b ⊗ f_c`` (``b``-major)."""
    if M.ring != N.ring:
        raise InvalidInput("DG-ring mismatch")
    A = M.ring
    R = A.base
    drop = mutants.active("koszul_sign")
    nN = N.rank
    names, degrees, diff = [], [], []
    for b in range(M.rank):
        for c in range(nN):
            names.append(f"{M.names[b]}*{N.names[c]}")
            degrees.append(M.degrees[b] + N.degrees[c])
            terms = [(b2 * nN + c, U, x) for b2, U, x in M.diff[b]]
            for c2, U, x in N.diff[c]:
                e = 0 if drop else M.degrees[b] + len(U) * M.degrees[b]
                terms.append((b * nN + c2, U, R.neg(x) if e % 2 else x))
            diff.append(tuple(terms))
    return SemiFreeDGModule(A, tuple(names), tuple(degrees), tuple(diff))


def base_tensor(F: FreeComplex, M: SemiFreeDGModule) -> SemiFreeDGModule:
    """``F ⊗_{A^0} M`` for a free complex ``F`` over the base; basis ``(i, f, b)``."""
    A = M.ring
    R = A.base
    if F.ring != R:
        raise InvalidInput("complex must live over the base ring")
    drop = mutants.active("koszul_sign")
    pos = {}
    names, degrees = [], []
    for i in sorted(F.ranks):
        for f in range(F.rank(i)):
            for b in range(M.rank):
                pos[(i, f, b)] = len(names)
                names.append(f"t{i}_{f}*{M.names[b]}")
                degrees.append(i + M.degrees[b])
    diff = [None] * len(names)
    for (i, f, b), idx in pos.items():
        terms = []
        d = F.differentials.get(i)
        if d is not None:
            for g in range(d.rows):
                x = d[g, f]
                if not R.is_zero(x):
                    terms.append((pos[(i + 1, g, b)], (), x))
        for c, U, x in M.diff[b]:
            e = 0 if drop else i + len(U) * i
            terms.append((pos[(i, f, c)], U, R.neg(x) if e % 2 else x))
        diff[idx] = tuple(terms)
    return SemiFreeDGModule(A, tuple(names), tuple(degrees), tuple(diff))


# ---------------------------------------------------------------------------
# Maps


@dataclass(frozen=True)
class DGMap:
    """Degree-zero A-linear chain map given on the basis: ``e_b -> Σ κ ξ_U f_c``."""

    source: SemiFreeDGModule
    target: SemiFreeDGModule
    images: tuple

    def __post_init__(self):
        self.underlying  # certifies the chain-map condition

    def component(self, n: int) -> Matrix:
        S, T = self.source, self.target
        A = S.ring
        R = A.base
        cols = S.layout.get(n, [])
        rows = T.layout.get(n, [])
        entries = {}
        for col, (b, Sm) in enumerate(cols):
            for c, U, x in self.images[b]:
                prod = A.mul_mono(Sm, U)
                if prod is None:
                    continue
                s, V = prod
                m, row = T.index[(c, V)]
                y = x if s == 1 else R.neg(x)
                entries[(row, col)] = R.add(entries.get((row, col), R.zero()), y)
        return Matrix.from_sparse(R, len(rows), len(cols), entries)

    @cached_property
    def underlying(self) -> ComplexMap:
        degrees = set(self.source.layout) & set(self.target.layout)
        return ComplexMap(self.source.underlying, self.target.underlying, {n: self.component(n) for n in degrees})


def base_tensor_map(phi: ComplexMap, M: SemiFreeDGModule) -> DGMap:
    """``phi ⊗ id_M`` between :func:`base_tensor` modules."""
    S = base_tensor(phi.source, M)
    T = base_tensor(phi.target, M)
    tpos = {}
    k = 0
    for i in sorted(phi.target.ranks):
        for f in range(phi.target.rank(i)):
            for b in range(M.rank):
                tpos[(i, f, b)] = k
                k += 1
    images = []
    for i in sorted(phi.source.ranks):
        comp = phi.component(i)
        for f in range(phi.source.rank(i)):
            col = comp.column(f) if comp.rows else []
            for b in range(M.rank):
                images.append(tuple((tpos[(i, g, b)], (), x) for g, x in enumerate(col) if not M.ring.base.is_zero(x)))
    return DGMap(S, T, tuple(images))


# ---------------------------------------------------------------------------
# Hom and base change to H^0


def hom_layout_dg(P: SemiFreeDGModule, M: SemiFreeDGModule, n: int):
    """Blocks of ``Hom_A(P, M)^n``: block ``b`` is ``M``'s underlying degree ``deg(e_b) + n``."""
    offs = []
    total = 0
    for b, deg in enumerate(P.degrees):
        offs.append(total)
        total += len(M.layout.get(deg + n, []))
    return offs, total


def dg_hom(P: SemiFreeDGModule, M: SemiFreeDGModule, window: tuple[int, int]) -> FreeComplex:
    """``Hom_A(P, M)`` in degrees ``window[0]-1 .. window[1]+1`` as a base complex.

    ``f`` is stored through the values ``f(e_b)``; the differential is
    ``D(f) = d∘f - (-1)^n f∘d`` with ``f(ξ_U e) = (-1)^{|U| n} ξ_U f(e)``.
    """
    if P.ring != M.ring:
        raise InvalidInput("DG-ring mismatch")
    A = P.ring
    R = A.base
    lo, hi = window[0] - 1, window[1] + 1
    layouts = {n: hom_layout_dg(P, M, n) for n in range(lo, hi + 1)}
    ranks = {n: t for n, (_, t) in layouts.items()}
    dM = M.underlying
    diffs = {}
    for n in range(lo, hi):
        offs, total = layouts[n]
        toffs, ttotal = layouts[n + 1]
        if not total or not ttotal:
            continue
        entries: dict = {}
        s = hom_sign(n)
        for b, deg in enumerate(P.degrees):
            # d_M ∘ f on block b
            dm = dM.differentials.get(deg + n)
            if dm is not None:
                for r, c, x in dm.nonzero_entries():
                    key = (toffs[b] + r, offs[b] + c)
                    entries[key] = R.add(entries.get(key, R.zero()), x)
            # s * f(d e_b) = s * Σ κ (-1)^{|U| n} ξ_U f(e_c)
            for c, U, kappa in P.diff[b]:
                sign = s * (-1 if (len(U) * n) % 2 else 1)
                for col, (u, T) in enumerate(M.layout.get(P.degrees[c] + n, [])):
                    prod = A.mul_mono(U, T)
                    if prod is None:
                        continue
                    s2, V = prod
                    _, row = M.index[(u, V)]
                    y = kappa if sign * s2 == 1 else R.neg(kappa)
                    key = (toffs[b] + row, offs[c] + col)
                    entries[key] = R.add(entries.get(key, R.zero()), y)
        diffs[n] = Matrix.from_sparse(R, ttotal, total, entries)
    return FreeComplex(R, ranks, diffs)


def dg_hom_post(P: SemiFreeDGModule, g: DGMap, window: tuple[int, int]) -> ComplexMap:
    """``Hom_A(P, g)`` on the windowed Hom complexes."""
    src = dg_hom(P, g.source, window)
    dst = dg_hom(P, g.target, window)
    comps = {}
    for n in src.ranks:
        offs, total = hom_layout_dg(P, g.source, n)
        toffs, ttotal = hom_layout_dg(P, g.target, n)
        entries = {}
        for b, deg in enumerate(P.degrees):
            if deg + n not in g.source.layout or deg + n not in g.target.layout:
                continue
            for r, c, x in g.component(deg + n).nonzero_entries():
                entries[(toffs[b] + r, offs[b] + c)] = x
        comps[n] = Matrix.from_sparse(src.ring, ttotal, total, entries)
    return ComplexMap(src, dst, comps)


def tensor_with_h0(M: SemiFreeDGModule) -> FreeComplex:
    """``Ā ⊗_A M`` as a complex over ``Ā``: basis ``e_b``, keep the ``ξ``-free terms."""
    A = M.ring
    Abar, _ = A.h0
    f = ring_map(A.base, Abar)
    by_deg: dict[int, list] = {}
    for b, d in enumerate(M.degrees):
        by_deg.setdefault(d, []).append(b)
    pos = {b: i for d, bs in by_deg.items() for i, b in enumerate(bs)}
    ranks = {d: len(bs) for d, bs in by_deg.items()}
    entries: dict[int, dict] = {}
    for b, terms in enumerate(M.diff):
        for c, U, x in terms:
            if U:
                continue
            y = Abar.reduce(f(x))
            if not Abar.is_zero(y):
                entries.setdefault(M.degrees[b], {})[(pos[c], pos[b])] = y
    diffs = {d: Matrix.from_sparse(Abar, ranks.get(d + 1, 0), ranks[d], e) for d, e in entries.items()}
    return FreeComplex(Abar, ranks, diffs)


def tensor_with_h0_map(g: DGMap) -> ComplexMap:
    S, T = g.source, g.target
    A = S.ring
    Abar, _ = A.h0
    f = ring_map(A.base, Abar)
    src, dst = tensor_with_h0(S), tensor_with_h0(T)

    def positions(M):
        by_deg: dict[int, list] = {}
        for b, d in enumerate(M.degrees):
            by_deg.setdefault(d, []).append(b)
        return {b: i for bs in by_deg.values() for i, b in enumerate(bs)}

    sp, tp = positions(S), positions(T)
    entries: dict[int, dict] = {}
    for b, terms in enumerate(g.images):
        for c, U, x in terms:
            if U:
                continue
            y = Abar.reduce(f(x))
            if not Abar.is_zero(y):
                entries.setdefault(S.degrees[b], {})[(tp[c], sp[b])] = y
    comps = {d: Matrix.from_sparse(Abar, dst.rank(d), src.rank(d), e) for d, e in entries.items()}
    return ComplexMap(src, dst, comps)


def random_scalar(R, rng):
    """A small random element of ``R``, zero about a quarter of the time."""
    if rng.randrange(4) == 0:
        return R.zero()
    if R.kind == "Fpx":
        return R.reduce(R.cover.coerce(rng.randrange(R.p) for _ in range(len(R.f) - 1)))
    if R.kind == "GF":
        return R(rng.randrange(R.p))
    return R(rng.randrange(1, 7))


def random_semifree(A: DGRingPresentation, rng, cells: int, span: int, top: int = 0) -> SemiFreeDGModule:
    """Random finite semi-free module built by attaching cells in descending degree.

    Each new cell in degree ``j`` gets as boundary a random combination of
    representative cycles of ``H^{j+1}`` of what has been built so far, so the
    result is a genuine DG-module. Degrees lie in ``top - span .. top``.
    """
    from .complexes import HomologyComputer  # local: avoids a cycle at import time

    R = A.base
    degrees = sorted((top - rng.randrange(span + 1) for _ in range(cells)), reverse=True)
    M = SemiFreeDGModule.zero(A)
    for t, j in enumerate(degrees):
        boundary: list = []
        if M.rank:
            reps = HomologyComputer(M.underlying).degree(j + 1).reps if (j + 1) in M.layout else []
            vec = None
            for rep in reps:
                k = random_scalar(R, rng)
                if not R.is_zero(k):
                    scaled = [R.mul(k, x) for x in rep]
                    vec = scaled if vec is None else [R.add(x, y) for x, y in zip(vec, scaled)]
            if vec is not None:
                boundary = M.vector_to_terms(j + 1, vec)
        M = M.attach(f"e{t}", j, boundary)
    return M
