"""Finitely presented modules and their invariant factors."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput
from .matrix import Matrix
from .rings import RingSpec
from .snf import invariants_of_relations


@dataclass(frozen=True)
class ModulePresentation:
    """``coker(relations)``; columns of ``relations`` are relations among generators."""

    ring: RingSpec
    generators: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.rows != self.generators:
            raise InvalidInput("relation matrix must have one row per generator")
        if self.relations.ring != self.ring:
            raise InvalidInput("relation matrix over the wrong ring")

    @classmethod
    def from_invariants(cls, ring: RingSpec, invariants) -> "ModulePresentation":
        invariants = list(invariants)
        return cls(ring, len(invariants), Matrix.diag(ring, invariants))

    @classmethod
    def free(cls, ring: RingSpec, rank: int) -> "ModulePresentation":
        return cls(ring, rank, Matrix.zeros(ring, rank, 0))

    @classmethod
    def zero(cls, ring: RingSpec) -> "ModulePresentation":
        return cls(ring, 0, Matrix.zeros(ring, 0, 0))

    def invariants(self) -> tuple:
        return module_invariants(self)

    def is_zero(self) -> bool:
        return not module_invariants(self)

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "generators": self.generators, "relations": self.relations.to_json()}

    @classmethod
    def from_json(cls, data) -> "ModulePresentation":
        ring = RingSpec.from_json(data["ring"])
        return cls(ring, int(data["generators"]), Matrix.from_json(data["relations"], ring))

    def describe(self) -> str:
        return describe_invariants(self.ring, module_invariants(self))


def module_invariants(P: ModulePresentation) -> tuple:
    """Invariant factors over the covering Euclidean domain.

    Non-unit factors in divisibility order followed by one zero per free
    summand of the cover. Modulus relations are appended for quotient
    rings, so the list is a complete isomorphism invariant.
    """
    R = P.ring
    E = R.cover
    g = R.modulus
    rel = P.relations.to_lists()
    cols = P.relations.cols
    if not E.is_zero(g):
        z = E.zero()
        rel = [row + [g if k == i else z for k in range(P.generators)] for i, row in enumerate(rel)]
        cols += P.generators
    return tuple(invariants_of_relations(E, rel, P.generators, cols))


def module_iso_test(P: ModulePresentation, Q: ModulePresentation) -> bool:
    if P.ring != Q.ring:
        raise InvalidInput(f"ring mismatch: {P.ring} vs {Q.ring}")
    return module_invariants(P) == module_invariants(Q)


def describe_invariants(ring: RingSpec, invariants) -> str:
    if not invariants:
        return "0"
    E = ring.cover
    base = "Z" if ring.kind in ("ZZ", "Zmod") else E.name
    parts = []
    for d in invariants:
        if E.is_zero(d):
            parts.append(str(ring))
        else:
            parts.append(f"{base}/({E.to_str(d)})")
    return " + ".join(parts)
