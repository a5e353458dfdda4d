"""Injective, projective and flat dimensions, detected through ``Ext``/``Tor``
against the residue rings ``R/q`` of a finite prime inventory.

Over an ordinary ring inputs may be bounded free complexes or finitely
presented modules; modules are replaced by free (co)resolutions that are
long enough for the degrees being inspected. Over a Koszul DG-ring the
dimensions are reduced to ``H^0``: injective dimension via
``Ext_A(Ā/q, M)`` computed on truncated semi-free resolutions, flat
dimension via ``Ā ⊗_A M`` over ``Ā``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import total_ordering

from .complexes import (
    CohomologyTable,
    FreeComplex,
    cohomology,
    hom_complex,
    tensor,
)
from .dg import DGRingPresentation, SemiFreeDGModule, dg_hom, dg_tensor, tensor_with_h0
from .errors import InvalidInput
from .modules import ModulePresentation, module_invariants
from .resolutions import coresolve_invariants, resolve_invariants
from .rings import RingSpec, is_prime
from .tate import ext_floor, resolve_cyclic, tor_floor

DEFAULT_CUTOFF = 3


# ---------------------------------------------------------------------------
# Dimension values


@total_ordering
@dataclass(frozen=True)
class DimValue:
    """``-∞``, a finite integer, or "larger than anything inspected"."""

    kind: str  # "minus_infinity" | "finite" | "exceeds"
    n: int = 0

    _RANK = {"minus_infinity": 0, "finite": 1, "exceeds": 2}

    def __lt__(self, other: "DimValue") -> bool:
        a, b = self._RANK[self.kind], self._RANK[other.kind]
        if a != b:
            return a < b
        return self.kind == "finite" and self.n < other.n

    def __str__(self):
        if self.kind == "minus_infinity":
            return "MinusInfinity"
        if self.kind == "finite":
            return f"Finite({self.n})"
        return f"ExceedsCutoff({self.n})"

    def to_json(self):
        return {"kind": self.kind, "value": self.n} if self.kind != "minus_infinity" else {"kind": self.kind}


def MinusInfinity() -> DimValue:
    return DimValue("minus_infinity")


def Finite(n: int) -> DimValue:
    return DimValue("finite", n)


def ExceedsCutoff(cutoff: int) -> DimValue:
    return DimValue("exceeds", cutoff)


def dim_le(x: DimValue, y: DimValue) -> bool | None:
    """``x <= y`` when decidable; ``None`` when ``x`` exceeded the search."""
    if x.kind == "exceeds":
        return None
    return x <= y


def dim_eq(x: DimValue, y: DimValue) -> bool | None:
    if x.kind == "exceeds" or y.kind == "exceeds":
        return None
    return x == y


@dataclass(frozen=True)
class Witness:
    prime: str
    degree: int
    module: str

    def to_json(self):
        return {"prime": self.prime, "degree": self.degree, "module": self.module}


@dataclass(frozen=True)
class DimensionReport:
    kind: str
    value: DimValue
    witnesses: tuple = ()
    window_used: tuple = ()
    primes_used: tuple = ()
    notes: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value.to_json(),
            "witnesses": [w.to_json() for w in self.witnesses],
            "window": list(self.window_used),
            "primes": list(self.primes_used),
            "notes": list(self.notes),
        }

    def __str__(self):
        return f"{self.kind} = {self.value}"


# ---------------------------------------------------------------------------
# Prime inventories


@dataclass(frozen=True)
class PrimeInventory:
    """Finitely many primes ``q`` whose residue rings ``R/q`` detect dimensions.

    For artinian rings and fields this is every prime. Over ``Z`` it is the
    zero ideal, the primes dividing some torsion invariant of the inputs,
    and the smallest prime outside that set as a generic representative of
    the primes the inputs do not see.
    """

    ring: RingSpec
    primes: tuple

    @classmethod
    def of(cls, R: RingSpec, tables=(), extra=()) -> "PrimeInventory":
        """Inventory for inputs with the given cohomology tables.

        ``extra`` lists further elements whose prime divisors must be
        included (over ``Z``), e.g. generators of an ideal.
        """
        E = R.cover
        if R.is_field:
            return cls(R, (E.zero(),) if R.is_domain_cover else (R.modulus,))
        if not R.is_domain_cover:
            return cls(R, tuple(E.primes_dividing(R.modulus)))
        support: set = set()
        for t in tables:
            for inv in t.invariants.values():
                for d in inv:
                    if not E.is_zero(d):
                        support.update(E.primes_dividing(d))
        for d in extra:
            if not E.is_zero(d) and not E.is_unit(d):
                support.update(E.primes_dividing(d))
        generic = 2
        while generic in support:
            generic += 1
            while not is_prime(generic):
                generic += 1
        return cls(R, (0, *sorted(support), generic))

    def residue(self, q) -> ModulePresentation:
        return ModulePresentation.from_invariants(self.ring, [q])

    def names(self) -> tuple:
        E = self.ring.cover
        return tuple(f"({E.to_str(q)})" for q in self.primes)


# ---------------------------------------------------------------------------
# Ext and Tor over an ordinary ring


def _invariants(X) -> tuple:
    return module_invariants(X) if isinstance(X, ModulePresentation) else ()


def table_of(X) -> CohomologyTable:
    """Cohomology of a free complex, or a module placed in degree 0."""
    if isinstance(X, FreeComplex):
        return cohomology(X)
    if isinstance(X, ModulePresentation):
        E = X.ring.cover
        inv = tuple(d for d in module_invariants(X) if not E.is_unit(d))
        return CohomologyTable(X.ring, {0: inv})
    raise InvalidInput(f"expected a complex or a module, got {type(X).__name__}")


def _span(X) -> tuple[int, int]:
    if isinstance(X, ModulePresentation) or X.is_zero_complex():
        return 0, 0
    return X.lo, X.hi


def _source_model(X, length: int) -> FreeComplex:
    if isinstance(X, FreeComplex):
        return X
    return resolve_invariants(X.ring, _invariants(X), 0, length)[0]


def _target_model(X, length: int) -> FreeComplex:
    if isinstance(X, FreeComplex):
        return X
    return coresolve_invariants(X.ring, _invariants(X), 0, length)[0]


def ext_table(N, M, window: tuple[int, int]) -> CohomologyTable:
    """``Ext^i_R(N, M) = H^i RHom_R(N, M)`` for ``i`` in ``window``.

    Module arguments are replaced by free resolutions (source) or free
    coresolutions (target) long enough that the cut-off ends cannot reach
    the window.
    """
    lo, hi = window
    R = N.ring
    if M.ring != R:
        raise InvalidInput(f"ring mismatch: {R} vs {M.ring}")
    n_lo, n_hi = _span(N)
    m_lo, m_hi = _span(M)
    Ln = max(hi - m_lo + 3, 2)
    Lm = max(hi + n_hi + 3, 2)
    H = hom_complex(_source_model(N, Ln), _target_model(M, Lm))
    return cohomology(H, (lo, hi)).restrict(lo, hi)


def tor_table(N, M, window: tuple[int, int]) -> CohomologyTable:
    """``H^i(N ⊗^L_R M)`` for ``i`` in ``window``; ``Tor_j`` sits in degree ``-j``."""
    lo, hi = window
    R = N.ring
    if M.ring != R:
        raise InvalidInput(f"ring mismatch: {R} vs {M.ring}")
    n_lo, n_hi = _span(N)
    m_lo, m_hi = _span(M)
    Ln = max(m_hi - lo + 3, 2)
    Lm = max(n_hi - lo + 3, 2)
    T = tensor(_source_model(N, Ln), _source_model(M, Lm))
    return cohomology(T, (lo, hi)).restrict(lo, hi)


# ---------------------------------------------------------------------------
# Dimensions over an ordinary ring


def _periodicity(tables, window, ascending: bool) -> int | None:
    """Degree from which every table repeats with period 2 up to the far end of ``window``.

    Only the last four degrees are compared; over an artinian PIR minimal
    resolutions are periodic of period at most 2 after one step, so this
    certifies that the nonvanishing continues forever.
    """
    lo, hi = window
    if hi - lo < 3:
        return None
    far = [hi - 3, hi - 2] if ascending else [lo + 2, lo + 3]
    step = 2 if ascending else -2
    for t in tables:
        for i in far:
            if t.at(i) != t.at(i + step):
                return None
    if not any(t.at(i) for t in tables for i in far):
        return None
    return far[0] if ascending else far[-1]


def _scan(kind, R, inventory, window, limit, table_for, index) -> DimensionReport:
    """Largest ``index(i)`` over nonzero degrees ``i`` of ``table_for(q)``."""
    best = None
    witnesses = []
    tables = []
    for q, name in zip(inventory.primes, inventory.names()):
        t = table_for(q)
        tables.append(t)
        for i, inv in t.invariants.items():
            j = index(i)
            if best is None or j > best:
                best = j
                witnesses = []
            if j == best:
                witnesses.append(Witness(name, i, t.entries[i].describe()))
    notes = ()
    if best is None:
        value = MinusInfinity()
    elif best > limit:
        value = ExceedsCutoff(limit)
        if R.is_artinian:
            start = _periodicity(tables, window, index(1) > index(0))
            if start is not None:
                notes = (f"periodic with period 2 from degree {start}",)
    else:
        value = Finite(best)
    return DimensionReport(kind, value, tuple(witnesses), tuple(window), inventory.names(), notes)


def injdim_ring(M, cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """``sup_q sup{i : Ext^i(R/q, M) ≠ 0}``, searched up to ``sup M + cutoff``."""
    R = M.ring
    H = table_of(M)
    if H.is_zero():
        return DimensionReport("injdim", MinusInfinity(), window_used=(), primes_used=())
    inv = PrimeInventory.of(R, [H])
    window = (H.inf, H.sup + cutoff + 1)
    return _scan("injdim", R, inv, window, H.sup + cutoff,
                 lambda q: ext_table(inv.residue(q), M, window), lambda i: i)


def flatdim_ring(M, cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """``sup_q sup{j : Tor_j(R/q, M) ≠ 0}``, searched up to ``-inf M + cutoff``."""
    R = M.ring
    H = table_of(M)
    if H.is_zero():
        return DimensionReport("flatdim", MinusInfinity(), window_used=(), primes_used=())
    inv = PrimeInventory.of(R, [H])
    window = (H.inf - cutoff - 1, H.sup)
    return _scan("flatdim", R, inv, window, -H.inf + cutoff,
                 lambda q: tor_table(inv.residue(q), M, window), lambda i: -i)


def projdim_ring(M, cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """``sup_q sup{i : Ext^i(M, R/q) ≠ 0}``, searched up to ``-inf M + cutoff``."""
    R = M.ring
    H = table_of(M)
    if H.is_zero():
        return DimensionReport("projdim", MinusInfinity(), window_used=(), primes_used=())
    inv = PrimeInventory.of(R, [H])
    window = (-H.sup, -H.inf + cutoff + 1)
    return _scan("projdim", R, inv, window, -H.inf + cutoff,
                 lambda q: ext_table(M, inv.residue(q), window), lambda i: i)


# ---------------------------------------------------------------------------
# Koszul DG-rings: reduction to H^0


@dataclass(frozen=True)
class RHomResult:
    table: CohomologyTable  # over Ā
    floor: int
    window: tuple


def ext_dg(A: DGRingPresentation, c, M: SemiFreeDGModule, window: tuple[int, int]) -> tuple[CohomologyTable, int]:
    """``Ext^i_A(Ā/(c), M)`` for ``i`` in ``window`` (``c = 0`` gives ``Ā``), with the floor used."""
    H = cohomology(M.underlying)
    lo, hi = window
    if H.is_zero():
        return CohomologyTable(A.base, {}), 0
    floor = ext_floor(H.inf, hi)
    P = resolve_cyclic(A, c, floor).module
    return cohomology(dg_hom(P, M, window), window).restrict(lo, hi), floor


def tor_dg(A: DGRingPresentation, c, M: SemiFreeDGModule, window: tuple[int, int]) -> tuple[CohomologyTable, int]:
    """``H^i(Ā/(c) ⊗^L_A M)`` for ``i`` in ``window``, with the floor used."""
    H = cohomology(M.underlying)
    lo, hi = window
    if H.is_zero():
        return CohomologyTable(A.base, {}), 0
    floor = tor_floor(H.sup, -lo)
    P = resolve_cyclic(A, c, floor).module
    return cohomology(dg_tensor(P, M).underlying, window).restrict(lo, hi), floor


def rhom_from_h0(A: DGRingPresentation, M: SemiFreeDGModule, window: tuple[int, int]) -> RHomResult:
    """``RHom_A(Ā, M)`` in ``window``, read as ``Ā``-modules."""
    Abar, _ = A.h0
    t, floor = ext_dg(A, A.base.cover.zero(), M, window)
    return RHomResult(t.retag(Abar), floor, tuple(window))


def injdim_dg(A: DGRingPresentation, M: SemiFreeDGModule, cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """Injective dimension through ``Ext_A(Ā/q, M)`` for primes ``q`` of ``Ā``."""
    Abar, _ = A.h0
    H = cohomology(M.underlying)
    if H.is_zero():
        return DimensionReport("injdim", MinusInfinity())
    inv = PrimeInventory.of(Abar, [H])
    window = (H.inf, H.sup + cutoff + 1)
    rep = _scan("injdim", Abar, inv, window, H.sup + cutoff,
                lambda q: ext_dg(A, q, M, window)[0].retag(Abar), lambda i: i)
    return rep


def flatdim_dg(A: DGRingPresentation, M: SemiFreeDGModule, cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """Flat dimension of ``M`` as that of ``Ā ⊗_A M`` over ``Ā``."""
    return flatdim_ring(tensor_with_h0(M), cutoff)


# ---------------------------------------------------------------------------
# Direct (sampled) evaluation of the defining suprema


@dataclass(frozen=True)
class Sample:
    """A test module ``N``: ``Ext``/``Tor`` against it are exact up to ``top`` (``None``: everywhere)."""

    name: str
    module: SemiFreeDGModule
    inf: int
    sup: int
    top: int | None = None
    target: object = None  # ``c`` when the module resolves ``Ā/(c)``


def default_samples(A: DGRingPresentation, M: SemiFreeDGModule, cutoff: int = DEFAULT_CUTOFF,
                    seed: int = 0, count: int = 3, cells: int = 3, span: int = 2) -> list[Sample]:
    """Residue fields ``Ā/q`` (truncated resolutions), shifts of ``A`` and random cell modules."""
    from .dg import random_semifree, shift_module

    Abar, _ = A.h0
    H = cohomology(M.underlying)
    out: list[Sample] = []
    if H.is_zero():
        return out
    hi = H.sup + cutoff + 1
    for q in PrimeInventory.of(Abar, [H]).primes:
        P = resolve_cyclic(A, q, ext_floor(H.inf, hi)).module
        out.append(Sample(f"res({Abar.cover.to_str(q)})", P, 0, 0, hi, q))
    rng = random.Random(seed)
    free = SemiFreeDGModule.free(A, [0])
    candidates = [("A", free), ("A[1]", shift_module(free, 1))]
    for k in range(count):
        candidates.append((f"cell{k}", random_semifree(A, rng, cells, span, top=rng.randrange(-1, 2))))
    for name, N in candidates:
        HN = cohomology(N.underlying)
        if not HN.is_zero():
            out.append(Sample(name, N, HN.inf, HN.sup, None))
    return out


def _full_hom_window(N: SemiFreeDGModule, M: SemiFreeDGModule) -> tuple[int, int]:
    m = M.underlying
    return m.lo - max(N.degrees), m.hi - min(N.degrees)


def injdim_direct(A: DGRingPresentation, M: SemiFreeDGModule, samples: list[Sample],
                  cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """``sup_N sup{i + inf N : Ext^i_A(N, M) ≠ 0}`` over the given samples."""
    H = cohomology(M.underlying)
    if H.is_zero():
        return DimensionReport("injdim", MinusInfinity())
    limit = H.sup + cutoff
    best = None
    witnesses = []
    for s in samples:
        lo, hi = _full_hom_window(s.module, M)
        if s.top is not None:
            hi = min(hi, s.top)
        t = cohomology(dg_hom(s.module, M, (lo, hi)), (lo, hi)).restrict(lo, hi)
        for i in t.invariants:
            j = i + s.inf
            if best is None or j > best:
                best, witnesses = j, []
            if j == best:
                witnesses.append(Witness(s.name, i, t.entries[i].describe()))
    value = MinusInfinity() if best is None else (ExceedsCutoff(limit) if best > limit else Finite(best))
    return DimensionReport("injdim", value, tuple(witnesses), (H.inf, limit + 1), tuple(s.name for s in samples))


def flatdim_direct(A: DGRingPresentation, M: SemiFreeDGModule, samples: list[Sample],
                   cutoff: int = DEFAULT_CUTOFF) -> DimensionReport:
    """``sup_N sup{j + inf N : H^{-j}(N ⊗^L_A M) ≠ 0}`` over the given samples.

    Truncated samples are re-resolved with the floor certified for ``Tor``.
    """
    H = cohomology(M.underlying)
    if H.is_zero():
        return DimensionReport("flatdim", MinusInfinity())
    limit = -H.inf + cutoff
    best = None
    witnesses = []
    for s in samples:
        N = s.module
        lo = -(limit + 1) + s.inf
        if s.top is not None:
            N = resolve_cyclic(A, s.target, tor_floor(H.sup, limit + 1)).module
        t = cohomology(dg_tensor(N, M).underlying, (lo, H.sup + s.sup)).restrict(lo, H.sup + s.sup)
        for i in t.invariants:
            j = -i + s.inf
            if best is None or j > best:
                best, witnesses = j, []
            if j == best:
                witnesses.append(Witness(s.name, i, t.entries[i].describe()))
    value = MinusInfinity() if best is None else (ExceedsCutoff(limit) if best > limit else Finite(best))
    return DimensionReport("flatdim", value, tuple(witnesses), (-limit - 1, H.sup), tuple(s.name for s in samples))
