"""Semi-free resolutions of cyclic ``Ā``-modules over a Koszul DG-ring.

Cells are attached degree by degree: starting from ``A·e_0`` (plus one
degree ``-1`` cell with ``d = c·e_0`` for ``Ā/(c)``), each generator of the
lowest surviving negative cohomology ``H^j`` is killed by a cell in degree
``j - 1`` whose boundary is a representative cycle. After degree ``j`` has
been processed, the augmentation is an isomorphism on ``H^i`` for all
``i >= j``; later cells live in degrees ``<= j - 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import mutants
from .cache import active_cache
from .complexes import HomologyComputer, brutal_truncation
from .dg import DGRingPresentation, SemiFreeDGModule
from .errors import ResourceLimit, UnsupportedInstance

DEFAULT_BUDGET = 600


@dataclass(frozen=True)
class TateResolutionTruncation:
    dg_ring: DGRingPresentation
    target: object  # generator c of the ideal in Ā = base/(a), or zero for Ā itself
    module: SemiFreeDGModule
    adjoined: tuple  # (name, degree, boundary terms)
    validity_floor: int

    @property
    def is_zero_target(self) -> bool:
        return self.module.rank == 0


class _Builder:
    def __init__(self, A: DGRingPresentation, c):
        self.A = A
        self.c = c
        Abar, _ = A.h0
        E = A.base.cover
        self.cells: list = []
        self.done = 0  # lowest degree j already processed (0 means none)
        try:
            Abar.quotient(c) if not E.is_zero(c) else Abar
        except UnsupportedInstance:
            self.module = SemiFreeDGModule.zero(A)
            self.zero = True
            return
        self.zero = False
        M = SemiFreeDGModule.free(A, [0], names=["u"])
        if not E.is_zero(c):
            quotient = Abar.quotient(c)
            if quotient != Abar:
                M = M.attach("v", -1, [(0, (), A.base.reduce(c))])
                self.cells.append(("v", -1, ((0, (), A.base.reduce(c)),)))
        self.module = M

    def extend(self, floor: int, budget: int):
        if self.zero:
            return
        j = self.done - 1
        while j >= floor:
            P = self.module
            C = brutal_truncation(P.underlying, j - 1, j + 1)
            hc = HomologyComputer(C)
            dh = hc.degree(j)
            for t, rep in enumerate(dh.reps):
                name = f"x{-j + 1}_{t}"
                boundary = tuple(P.vector_to_terms(j, rep))
                P = P.attach(name, j - 1, boundary)
                self.cells.append((name, j - 1, boundary))
                if P.rank > budget:
                    raise ResourceLimit(
                        f"resolution of {self.A} exceeds {budget} cells at degree {j}",
                        transcript=[(nm, d) for nm, d, _ in self.cells],
                    )
            self.module = P
            self.done = j
            j -= 1


_BUILDERS: dict = {}
mutants.register_cache(_BUILDERS.clear)


def resolve_cyclic(A: DGRingPresentation, c=None, floor: int = 0, budget: int = DEFAULT_BUDGET) -> TateResolutionTruncation:
    """Semi-free resolution of ``Ā/(c)`` valid (quasi-isomorphic) in degrees ``>= floor``."""
    if floor > 0:
        floor = 0
    E = A.base.cover
    if c is None:
        c = E.zero()
    cache = active_cache()
    if cache is not None:
        payload = {"ring": A.to_json(), "target": A.base.elem_to_json(c), "floor": floor, "budget": budget}
        hit = cache.get("tate", payload)
        if hit is not None:
            P = SemiFreeDGModule.from_json(hit, A)
            return TateResolutionTruncation(A, c, P, _cells_of(P), floor)
        res = _resolve(A, c, floor, budget)
        cache.put("tate", payload, res.module.to_json())
        return res
    return _resolve(A, c, floor, budget)


def _cells_of(P: SemiFreeDGModule) -> tuple:
    """Adjoined cells of a resolution: everything but the generator ``u``."""
    return tuple((P.names[i], P.degrees[i], tuple(P.diff[i])) for i in range(1, P.rank))


def _resolve(A: DGRingPresentation, c, floor: int, budget: int) -> TateResolutionTruncation:
    key = (A, c)
    b = _BUILDERS.get(key)
    if b is None:
        b = _BUILDERS[key] = _Builder(A, c)
    if b.done > floor:
        b.extend(floor, budget)
    # the prefix of cells with degree >= floor - 1 is exactly the truncation
    P = b.module
    keep = [i for i, d in enumerate(P.degrees) if d >= floor - 1]
    if len(keep) != P.rank:
        P = SemiFreeDGModule(A, tuple(P.names[i] for i in keep), tuple(P.degrees[i] for i in keep), tuple(P.diff[i] for i in keep))
    cells = tuple(cell for cell in b.cells if cell[1] >= floor - 1)
    return TateResolutionTruncation(A, c, P, cells, floor)


def tate_resolution(A: DGRingPresentation, t: int, budget: int = DEFAULT_BUDGET) -> TateResolutionTruncation:
    """Resolution of ``Ā`` itself, certified in degrees ``>= t``."""
    return resolve_cyclic(A, None, t, budget)


def ext_floor(inf_M: int, top: int) -> int:
    """Floor making ``Hom_A(P_floor, M)`` exact in degrees ``<= top``.

    Cells below the floor have degree ``<= floor - 2``; the discarded part
    of the Hom complex has cohomology in degrees ``>= inf M - floor + 2``.
    """
    t = inf_M - top
    return t + 1 if mutants.active("window_off_by_one") else t


def tor_floor(sup_M: int, top: int) -> int:
    """Floor making ``P_floor ⊗_A M`` exact for ``Tor_i``, ``i <= top``."""
    t = -top - sup_M
    return t + 1 if mutants.active("window_off_by_one") else t
