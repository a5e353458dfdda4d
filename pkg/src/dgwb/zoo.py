"""Deterministic generation of small test instances.

An instance is a Koszul DG-ring over one of a few small base rings, an
ideal of ``Ā`` given by a single lift to ``A^0``, and a finite semi-free
module built by random cell attachment (so its cohomology is bounded by
construction).
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .cache import digest_of
from .dg import DGRingPresentation, SemiFreeDGModule, random_semifree
from .rings import GF, ZZ, FpxQuotient, RingSpec, Zmod

BASES = (
    ("ZZ", ZZ),
    ("Z/4", Zmod(4)),
    ("Z/8", Zmod(8)),
    ("Z/9", Zmod(9)),
    ("F2", GF(2)),
    ("F3", GF(3)),
    ("F2[x]/(x^2)", FpxQuotient(2, (0, 0, 1))),
)

BASE_WEIGHTS = (3, 2, 2, 2, 1, 1, 2)

IDEAL_KINDS = ("zero", "principal", "unit", "nilpotent")
IDEAL_WEIGHTS = (2, 5, 1, 2)


@dataclass(frozen=True)
class Budgets:
    max_cells: int = 4
    max_span: int = 3
    max_koszul: int = 2
    cutoff: int = 3  # dimension searches look this far past the obvious bound
    stab_cutoff: int = 6  # maximal telescope order when stabilising
    precision: int = 3  # precision ladder K = 1..precision

    def __post_init__(self):
        if min(self.max_cells, self.max_koszul + 1, self.cutoff, self.stab_cutoff - 2, self.precision) < 1 or self.max_span < 0:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class ZooInstance:
    dg_ring: DGRingPresentation
    ideal_lifts: tuple
    module: SemiFreeDGModule
    seed: int
    index: int
    ideal_kind: str
    budgets: Budgets = field(default_factory=Budgets)

    def to_json(self) -> dict:
        R = self.dg_ring.base
        return {
            "dg_ring": self.dg_ring.to_json(),
            "ideal": [R.elem_to_json(x) for x in self.ideal_lifts],
            "ideal_kind": self.ideal_kind,
            "module": self.module.to_json(),
            "seed": self.seed,
            "index": self.index,
            "budgets": asdict(self.budgets),
        }

    @classmethod
    def from_json(cls, data) -> "ZooInstance":
        A = DGRingPresentation.from_json(data["dg_ring"])
        return cls(
            A,
            tuple(A.base.elem_from_json(x) for x in data["ideal"]),
            SemiFreeDGModule.from_json(data["module"], A),
            int(data["seed"]),
            int(data["index"]),
            data.get("ideal_kind", "principal"),
            Budgets(**data.get("budgets", {})),
        )

    @property
    def digest(self) -> str:
        return digest_of(self.to_json())

    def __str__(self):
        E = self.dg_ring.base.cover
        ideal = ", ".join(E.to_str(x) for x in self.ideal_lifts)
        return f"#{self.index} {self.dg_ring} ideal=({ideal}) cells={list(self.module.degrees)}"


def _nonunits(R: RingSpec, p: int) -> list:
    """A few non-units of ``R`` (all multiples of ``p`` over ``Z``)."""
    if R.kind == "ZZ":
        return [0, p, 2 * p]
    if R.kind == "Zmod":
        return [x for x in range(R.n) if not R.is_unit(x)]
    if R.kind == "Fpx":
        return [R.zero(), R((0, 1))]
    return [R.zero()]


def _radical(R: RingSpec):
    """A generator of the nilradical (zero for domains and fields)."""
    E = R.cover
    if R.is_domain_cover or R.is_field:
        return E.zero()
    r = E.one()
    for q in E.primes_dividing(R.modulus):
        r = E.mul(r, q)
    return R.reduce(r)


def _instance(seed: int, index: int, budgets: Budgets) -> ZooInstance:
    rng = random.Random(seed * 1_000_003 + index)
    _, base = rng.choices(BASES, weights=BASE_WEIGHTS)[0]
    p = rng.choice((2, 3))
    k = rng.randrange(budgets.max_koszul + 1)
    a = tuple(rng.choice(_nonunits(base, p)) for _ in range(k))
    A = DGRingPresentation(base, tuple(base.reduce(x) if isinstance(x, tuple) else base(x) for x in a))
    Abar, _ = A.h0
    kind = rng.choices(IDEAL_KINDS, weights=IDEAL_WEIGHTS)[0]
    if kind == "zero":
        lift = base.zero()
    elif kind == "unit":
        lift = base.one()
    elif kind == "nilpotent":
        lift = base.reduce(_radical(Abar))
    else:
        lift = rng.choice([x for x in _nonunits(base, rng.choice((2, 3))) if not base.is_zero(x)] or [base.zero()])
    cells = 1 + rng.randrange(budgets.max_cells)
    span = rng.randrange(budgets.max_span + 1)
    M = random_semifree(A, rng, cells, span, top=rng.randrange(2))
    return ZooInstance(A, (lift,), M, seed, index, kind, budgets)


def generate_zoo(seed: int, count: int, budgets: Budgets | None = None) -> list[ZooInstance]:
    """``count`` instances, each determined by ``(seed, index)`` alone."""
    budgets = budgets or Budgets()
    return [_instance(seed, i, budgets) for i in range(count)]
