"""Telescope complexes, derived torsion and derived completion.

``Tel_m(R; a)`` is the order-``m`` truncation of the telescope: degrees 0
and 1, bases ``δ_0..δ_m``, ``d(δ_0) = δ_0'`` and ``d(δ_i) = δ_{i-1}' - a δ_i'``.
Several generators give the tensor product of the single ones.

``RΓ(M)`` is the colimit over ``m`` of ``Tel_m ⊗ M`` and ``LΛ(M)`` the limit
of ``Hom(Tel_m, M)``. Only truncations are materialised. Colimits and
limits are read off through images of transition maps: the order-``m``
table is the image of ``H(C_m)`` in ``H(C_{2m})`` (colimits) or of
``H(C_{2m})`` in ``H(C_m)`` (limits), and a value is declared stable once
three consecutive orders give isomorphic tables.

For speed the stabilised computations may use the compact model
``K_m = (R --a^m--> R)``, to which ``Tel_m`` reduces by cancelling its unit
entries; the transition ``K_m -> K_{m'}`` is ``(1, a^{m'-m})``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import mutants
from .complexes import (
    CohomologyTable,
    ComplexMap,
    FreeComplex,
    HomologyComputer,
    cohomology,
    hom_complex,
    hom_maps_pre,
    image_in_cohomology,
    shift,
    tensor,
    tensor_maps,
)
from .dg import (
    DGRingPresentation,
    SemiFreeDGModule,
    base_tensor,
    base_tensor_map,
    dg_hom,
)
from .errors import InvalidInput
from .matrix import Matrix
from .modules import ModulePresentation, module_invariants
from .rings import RingSpec, ring_map


# ---------------------------------------------------------------------------
# Telescope truncations


@dataclass(frozen=True)
class TelescopeTruncation:
    ring: RingSpec
    generators: tuple
    order: int
    complex: FreeComplex

    def inclusion(self, order: int) -> ComplexMap:
        """The transition map ``Tel_m -> Tel_{order}``."""
        if order < self.order:
            raise InvalidInput("transition maps go up in order")
        other = build_telescope(self.ring, self.generators, order)
        return _telescope_inclusion(self, other)


def _single_telescope(R: RingSpec, a, m: int) -> FreeComplex:
    swapped = mutants.active("telescope_index")
    entries = {(0, 0): R.one()}
    for i in range(1, m + 1):
        if swapped:
            entries[(i, i)] = R.one()
            entries[(i - 1, i)] = R.neg(a)
        else:
            entries[(i - 1, i)] = R.one()
            entries[(i, i)] = R.neg(a)
    d = Matrix.from_sparse(R, m + 1, m + 1, entries)
    return FreeComplex(R, {0: m + 1, 1: m + 1}, {0: d})


def build_telescope(ring: RingSpec, a, m: int) -> TelescopeTruncation:
    if m < 0:
        raise InvalidInput("order must be >= 0")
    gens = tuple(ring.reduce(x) for x in a)
    if not gens:
        raise InvalidInput("need at least one generator")
    C = _single_telescope(ring, gens[0], m)
    for x in gens[1:]:
        C = tensor(C, _single_telescope(ring, x, m))
    return TelescopeTruncation(ring, gens, m, C)


def _single_inclusion(R: RingSpec, m: int, m2: int) -> Matrix:
    return Matrix.from_sparse(R, m2 + 1, m + 1, {(i, i): R.one() for i in range(m + 1)})


def _telescope_inclusion(src: TelescopeTruncation, dst: TelescopeTruncation) -> ComplexMap:
    R = src.ring
    maps = []
    for x in src.generators:
        S = _single_telescope(R, x, src.order)
        T = _single_telescope(R, x, dst.order)
        inc = _single_inclusion(R, src.order, dst.order)
        maps.append(ComplexMap(S, T, {0: inc, 1: inc}))
    f = maps[0]
    for g in maps[1:]:
        f = tensor_maps(f, g)
    return ComplexMap(src.complex, dst.complex, f.components)


def telescope_base_change(T: TelescopeTruncation, target: RingSpec) -> TelescopeTruncation:
    """Entrywise base change of ``Tel_m(R; a)`` along the canonical map ``R -> target``."""
    f = ring_map(T.ring, target)
    gens = tuple(target.reduce(f(x)) for x in T.generators)
    return TelescopeTruncation(target, gens, T.order, T.complex.map_ring(f, target))


def koszul_power(R: RingSpec, a, m: int) -> FreeComplex:
    """Compact model ``⊗_j (R --a_j^m--> R)`` in degrees ``0..k``."""
    C = None
    for x in a:
        K = FreeComplex(R, {0: 1, 1: 1}, {0: Matrix.from_rows(R, [[R.pow(R.reduce(x), m)]])})
        C = K if C is None else tensor(C, K)
    return C


def koszul_quotient(R: RingSpec, a, K: int) -> FreeComplex:
    """Derived quotient ``K(a^K)`` in degrees ``-k..0`` (``H^0 = R/(a^K)``)."""
    return shift(koszul_power(R, a, K), 1)


def koszul_transition(R: RingSpec, a, m: int, m2: int) -> ComplexMap:
    f = None
    for x in a:
        S = FreeComplex(R, {0: 1, 1: 1}, {0: Matrix.from_rows(R, [[R.pow(R.reduce(x), m)]])})
        T = FreeComplex(R, {0: 1, 1: 1}, {0: Matrix.from_rows(R, [[R.pow(R.reduce(x), m2)]])})
        g = ComplexMap(S, T, {0: Matrix.identity(R, 1), 1: Matrix.from_rows(R, [[R.pow(R.reduce(x), m2 - m)]])})
        f = g if f is None else tensor_maps(f, g)
    return f


# ---------------------------------------------------------------------------
# Stabilisation


@dataclass(frozen=True)
class Stable:
    at_order: int

    def to_json(self):
        return {"status": "stable", "at_order": self.at_order}


@dataclass(frozen=True)
class Unstable:
    cutoff: int
    trajectory: tuple

    def to_json(self):
        return {"status": "unstable", "cutoff": self.cutoff, "trajectory": [t.to_json() for t in self.trajectory]}


@dataclass(frozen=True)
class StabilizedCohomology:
    table: CohomologyTable
    status: object
    support_stable: bool = True

    @property
    def per_degree(self) -> dict:
        return self.table.entries

    @property
    def is_stable(self) -> bool:
        return isinstance(self.status, Stable)

    @property
    def support(self) -> tuple:
        return tuple(self.table.invariants)

    def to_json(self) -> dict:
        out = {"table": self.table.to_json()}
        out.update(self.status.to_json())
        out["support_stable"] = self.support_stable
        return out


@dataclass
class DirectedSystem:
    """``build(m)`` gives ``C_m``; ``transition(m, m2)`` the map between orders.

    For a colimit (``kind="ind"``) transitions go ``C_m -> C_{m2}``; for a
    limit (``kind="pro"``) they go ``C_{m2} -> C_m``. ``m2 > m`` always.
    """

    build: Callable[[int], FreeComplex]
    transition: Callable[[int, int], ComplexMap]
    kind: str = "ind"
    window: tuple | None = None
    _hc: dict = field(default_factory=dict)

    def image_table(self, m: int, lag: int | None = None) -> CohomologyTable:
        m2 = m + (lag if lag is not None else m)
        f = self.transition(m, m2)
        src_m, dst_m = (m, m2) if self.kind == "ind" else (m2, m)
        hs = self._hc.get(src_m) or HomologyComputer(f.source)
        ht = self._hc.get(dst_m) or HomologyComputer(f.target)
        self._hc[src_m], self._hc[dst_m] = hs, ht
        degrees = None
        if self.window is not None:
            lo, hi = self.window
            degrees = [i for i in sorted(set(f.source.ranks) & set(f.target.ranks)) if lo <= i <= hi]
        return image_in_cohomology(f, degrees, hs, ht)


def stabilize(system: DirectedSystem, cutoff: int, start: int = 1, lag: int | None = None) -> StabilizedCohomology:
    """First order ``m`` with three consecutive isomorphic image tables."""
    tables = []
    for m in range(start, max(cutoff, start + 2) + 1):
        tables.append(system.image_table(m, lag))
        if len(tables) >= 3 and tables[-1].isomorphic(tables[-2]) and tables[-2].isomorphic(tables[-3]):
            return StabilizedCohomology(tables[-3], Stable(m - 2))
    last = tuple(tables[-3:])
    supp = {tuple(t.invariants) for t in last}
    return StabilizedCohomology(last[-1], Unstable(cutoff, last), support_stable=len(supp) == 1)


# ---------------------------------------------------------------------------
# Derived torsion and completion


def _check_lifts(A: DGRingPresentation, lifts) -> tuple:
    lifts = tuple(A.base.reduce(x) if isinstance(x, tuple) else A.base(x) for x in lifts)
    if not lifts:
        raise InvalidInput("need at least one lift")
    return lifts


def rgamma(A: DGRingPresentation, lifts, M: SemiFreeDGModule, m: int) -> FreeComplex:
    """``Tel_m(A^0; a) ⊗_{A^0} M`` (underlying complex over the base)."""
    lifts = _check_lifts(A, lifts)
    T = build_telescope(A.base, lifts, m)
    return tensor(T.complex, M.underlying)


def llambda(A: DGRingPresentation, lifts, M: SemiFreeDGModule, m: int) -> FreeComplex:
    """``Hom_{A^0}(Tel_m(A^0; a), M)`` (underlying complex over the base)."""
    lifts = _check_lifts(A, lifts)
    T = build_telescope(A.base, lifts, m)
    return hom_complex(T.complex, M.underlying)


def torsion_system(R: RingSpec, lifts, X: FreeComplex, model: str = "koszul", window=None) -> DirectedSystem:
    """Colimit system ``m -> model_m ⊗ X`` over ``R``."""
    if model == "telescope":
        build = lambda m: tensor(build_telescope(R, lifts, m).complex, X)

        def transition(m, m2):
            inc = build_telescope(R, lifts, m).inclusion(m2)
            return tensor_maps(inc, _identity(X))
    else:
        build = lambda m: tensor(koszul_power(R, lifts, m), X)
        transition = lambda m, m2: tensor_maps(koszul_transition(R, lifts, m, m2), _identity(X))
    return DirectedSystem(build, transition, "ind", window)


def completion_system(R: RingSpec, lifts, X: FreeComplex, window=None, post=None) -> DirectedSystem:
    """Limit system ``m -> Hom(K_m, X)`` (optionally followed by ``post``)."""

    def transition(m, m2):
        f = hom_maps_pre(koszul_transition(R, lifts, m, m2), X)
        return post(f) if post else f

    return DirectedSystem(lambda m: hom_complex(koszul_power(R, lifts, m), X), transition, "pro", window)


def _identity(X: FreeComplex) -> ComplexMap:
    return ComplexMap.identity(X)


def dg_torsion_module(A: DGRingPresentation, lifts, M: SemiFreeDGModule, m: int) -> SemiFreeDGModule:
    """The semi-free model ``K_m ⊗_{A^0} M`` of the order-``m`` torsion approximation."""
    return base_tensor(koszul_power(A.base, lifts, m), M)


def dg_torsion_transition(A: DGRingPresentation, lifts, M: SemiFreeDGModule, m: int, m2: int):
    return base_tensor_map(koszul_transition(A.base, lifts, m, m2), M)


def dg_completion_module(A: DGRingPresentation, lifts, M: SemiFreeDGModule, m: int) -> SemiFreeDGModule:
    """``Hom_{A^0}(K_m, M) = K_m^∨ ⊗_{A^0} M`` as a semi-free module."""
    R = A.base
    dual = hom_complex(koszul_power(R, lifts, m), FreeComplex.concentrated(R, 0))
    return base_tensor(dual, M)


def dg_completion_transition(A: DGRingPresentation, lifts, M: SemiFreeDGModule, m: int, m2: int):
    """``Hom(K_{m2}, M) -> Hom(K_m, M)``."""
    R = A.base
    f = hom_maps_pre(koszul_transition(R, lifts, m, m2), FreeComplex.concentrated(R, 0))
    return base_tensor_map(f, M)


def rgamma_stabilized(A: DGRingPresentation, lifts, M: SemiFreeDGModule, cutoff: int, model: str = "koszul") -> StabilizedCohomology:
    lifts = _check_lifts(A, lifts)
    if cutoff < 3:
        raise InvalidInput("cutoff must be >= 3")
    return stabilize(torsion_system(A.base, lifts, M.underlying, model), cutoff)


def llambda_stabilized(A: DGRingPresentation, lifts, M: SemiFreeDGModule, cutoff: int) -> StabilizedCohomology:
    lifts = _check_lifts(A, lifts)
    return stabilize(completion_system(A.base, lifts, M.underlying), cutoff)


@dataclass(frozen=True)
class LambdaModPower:
    """``LΛ(M) ⊗^L K(a^K)`` at a fixed telescope order and its limit table."""

    complex: FreeComplex
    order: int
    precision: int
    table: CohomologyTable
    status: object


def mod_power_order(K: int, amp: int) -> int:
    return K + amp + 1


def llambda_mod_power_complex(R: RingSpec, lifts, X: FreeComplex, K: int) -> LambdaModPower:
    """Finite-precision view of ``LΛ(X)`` for a complex ``X`` over ``R``."""
    if K < 1:
        raise InvalidInput("precision must be >= 1")
    if X.is_zero_complex():
        return LambdaModPower(X, 0, K, CohomologyTable(R, {}), Stable(1))
    T = cohomology(X)
    amp = T.amp if T.amp is not None else 0
    m = mod_power_order(K, amp)
    KK = koszul_quotient(R, lifts, K)
    post = lambda f: tensor_maps(f, ComplexMap.identity(KK))
    system = DirectedSystem(
        lambda mm: tensor(hom_complex(koszul_power(R, lifts, mm), X), KK),
        lambda mm, m2: post(hom_maps_pre(koszul_transition(R, lifts, mm, m2), X)),
        "pro",
    )
    res = stabilize(system, m + 2, start=m)
    return LambdaModPower(system.build(m), m, K, res.table, res.status)


def llambda_mod_power(A: DGRingPresentation, lifts, M: SemiFreeDGModule, K: int) -> LambdaModPower:
    lifts = _check_lifts(A, lifts)
    return llambda_mod_power_complex(A.base, lifts, M.underlying, K)


def gm_adjunction_check(A: DGRingPresentation, lifts, M: SemiFreeDGModule, N: SemiFreeDGModule, window, order: int = 3) -> bool:
    """``Hom(Tel_m ⊗ M, N)`` and ``Hom(M, Hom(Tel_m, N))`` agree on ``window``."""
    lifts = _check_lifts(A, lifts)
    T = build_telescope(A.base, lifts, order).complex
    left = dg_hom(base_tensor(T, M), N, window)
    dual = hom_complex(T, FreeComplex.concentrated(A.base, 0))
    right = dg_hom(M, base_tensor(dual, N), window)
    lo, hi = window
    return cohomology(left, window).isomorphic(cohomology(right, window))


# ---------------------------------------------------------------------------
# Classical oracles


def _part_coprime(E, d, a):
    """Largest divisor of ``d`` coprime to ``a`` (``d`` nonzero)."""
    c = E.normalize(d)[1]
    while True:
        t = E.gcd(c, a)
        if E.is_unit(t):
            return c
        c = E.exact_div(c, t)


def classical_gamma(P: ModulePresentation, a) -> ModulePresentation:
    """The ``(a)``-torsion submodule (``a`` a sequence; the ideal is its gcd)."""
    R = P.ring
    E = R.cover
    g = E.zero()
    for x in a:
        g = E.gcd(g, R.reduce(x) if not isinstance(x, int) else E.from_int(x))
    out = []
    for d in module_invariants(P):
        if E.is_zero(g):
            out.append(d)  # zero ideal: every element is killed by 0^n
        elif E.is_zero(d):
            continue  # torsion-free summand of a domain
        else:
            part = E.exact_div(d, _part_coprime(E, d, g))
            if not E.is_unit(part):
                out.append(part)
    return ModulePresentation.from_invariants(R, out)


@dataclass(frozen=True)
class LambdaResult:
    module: ModulePresentation
    precision: int
    exact: bool


def classical_lambda(P: ModulePresentation, a, K: int) -> LambdaResult:
    """``M / a^K M``; flagged exact when ``a^K M = a^{K+1} M`` (the limit is reached)."""
    R = P.ring
    E = R.cover
    g = E.zero()
    for x in a:
        g = E.gcd(g, R.reduce(x) if not isinstance(x, int) else E.from_int(x))
    gK, gK1 = E.pow(g, K), E.pow(g, K + 1)
    out = []
    exact = True
    for d in module_invariants(P):
        q = E.gcd(d, gK)
        q1 = E.gcd(d, gK1)
        if E.normalize(q)[1] != E.normalize(q1)[1]:
            exact = False
        if not E.is_unit(q):
            out.append(q)
    return LambdaResult(ModulePresentation.from_invariants(R, out), K, exact)


def cech_oracle(P: ModulePresentation, a):
    """``(H^0, H^1)`` of the Čech complex ``M -> M_a`` for a single ``a``.

    ``H^1`` is ``None`` when it is not finitely generated (a free summand
    over a domain with ``a`` neither zero nor a unit).
    """
    R = P.ring
    E = R.cover
    a = R.reduce(a) if not isinstance(a, int) else E.from_int(a)
    h0 = classical_gamma(P, [a])
    if E.is_zero(a):
        return h0, ModulePresentation.zero(R)
    if E.is_unit(E.gcd(a, R.modulus)) and not R.is_domain_cover:
        return h0, ModulePresentation.zero(R)
    for d in module_invariants(P):
        if E.is_zero(d) and not E.is_unit(a):
            return h0, None
    return h0, ModulePresentation.zero(R)
