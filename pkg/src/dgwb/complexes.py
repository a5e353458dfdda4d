"""Bounded cochain complexes of finite free modules.

Grading is cohomological: ``d^i : C^i -> C^{i+1}``. The matrix of ``d^i``
has shape ``rank(i+1) x rank(i)``.

Sign conventions, fixed once:

* shift: ``C[k]^i = C^{i+k}``, ``d_{C[k]} = (-1)^k d_C``;
* cone of ``f : C -> D``: ``cone^i = C^{i+1} + D^i``, ``d(c, x) = (-dc, f(c) + dx)``;
* tensor: ``d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy``;
* Hom: ``D(f) = d∘f - (-1)^{|f|} f∘d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from . import mutants
from .errors import InvalidInput
from .matrix import Matrix, block_diag
from .modules import ModulePresentation, describe_invariants
from .rings import RingSpec
from .snf import SpanSolver, kernel_basis_cover, snf_cover


def _sparse_mul_is_zero(R: RingSpec, A: Matrix, B: Matrix) -> bool:
    """Is ``A @ B == 0``? Uses only the nonzero entries."""
    E = R.cover
    brows: dict[int, list] = {}
    for k, j, x in B.nonzero_entries():
        brows.setdefault(k, []).append((j, x))
    acc: dict[tuple, object] = {}
    for i, k, x in A.nonzero_entries():
        for j, y in brows.get(k, ()):
            acc[(i, j)] = E.add(acc.get((i, j), E.zero()), E.mul(x, y))
    return all(R.is_zero(R.reduce(v)) for v in acc.values())


@dataclass(frozen=True)
class FreeComplex:
    ring: RingSpec
    ranks: Mapping[int, int]
    differentials: Mapping[int, Matrix]

    def __post_init__(self):
        ranks = {int(i): int(r) for i, r in self.ranks.items() if int(r) > 0}
        object.__setattr__(self, "ranks", dict(sorted(ranks.items())))
        diffs = {}
        for i, m in self.differentials.items():
            i = int(i)
            if m.ring != self.ring:
                raise InvalidInput("differential over the wrong ring")
            if (m.rows, m.cols) != (self.rank(i + 1), self.rank(i)):
                raise InvalidInput(f"d^{i} has shape {m.rows}x{m.cols}, expected {self.rank(i + 1)}x{self.rank(i)}")
            if m.rows and m.cols and not m.is_zero():
                diffs[i] = m
        object.__setattr__(self, "differentials", dict(sorted(diffs.items())))
        for i in self.differentials:
            if i + 1 in self.differentials:
                if not _sparse_mul_is_zero(self.ring, self.differentials[i + 1], self.differentials[i]):
                    raise InvalidInput(f"d∘d != 0 at degree {i}")

    # -- access ----------------------------------------------------------------

    def rank(self, i: int) -> int:
        return self.ranks.get(i, 0)

    def diff(self, i: int) -> Matrix:
        m = self.differentials.get(i)
        if m is None:
            return Matrix.zeros(self.ring, self.rank(i + 1), self.rank(i))
        return m

    @property
    def degrees(self) -> list[int]:
        return list(self.ranks)

    @property
    def lo(self):
        return min(self.ranks) if self.ranks else None

    @property
    def hi(self):
        return max(self.ranks) if self.ranks else None

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def is_zero_complex(self) -> bool:
        return not self.ranks

    # -- constructors --------------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingSpec) -> "FreeComplex":
        return cls(ring, {}, {})

    @classmethod
    def concentrated(cls, ring: RingSpec, degree: int, rank: int = 1) -> "FreeComplex":
        return cls(ring, {degree: rank}, {})

    @classmethod
    def two_term(cls, ring: RingSpec, matrix: Matrix, degree: int) -> "FreeComplex":
        """``R^cols --matrix--> R^rows`` in degrees ``degree, degree+1``."""
        return cls(ring, {degree: matrix.cols, degree + 1: matrix.rows}, {degree: matrix})

    # -- serialisation -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "ranks": {str(i): r for i, r in self.ranks.items()},
            "differentials": {str(i): m.to_json() for i, m in self.differentials.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FreeComplex":
        ring = RingSpec.from_json(data["ring"])
        ranks = {int(k): int(v) for k, v in data["ranks"].items()}
        diffs = {int(k): Matrix.from_json(v, ring) for k, v in data.get("differentials", {}).items()}
        return cls(ring, ranks, diffs)

    def map_ring(self, fn, ring: RingSpec) -> "FreeComplex":
        """Entrywise base change along a ring map ``fn``."""
        return FreeComplex(ring, self.ranks, {i: m.map_entries(fn, ring) for i, m in self.differentials.items()})


@dataclass(frozen=True)
class ComplexMap:
    source: FreeComplex
    target: FreeComplex
    components: Mapping[int, Matrix]

    def __post_init__(self):
        S, T = self.source, self.target
        comps = {}
        for i, m in self.components.items():
            if (m.rows, m.cols) != (T.rank(i), S.rank(i)):
                raise InvalidInput(f"component {i} has wrong shape")
            if m.rows and m.cols:
                comps[int(i)] = m
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        degrees = set(S.degrees) | set(T.degrees)
        for i in sorted(degrees):
            lhs = self.component(i + 1) @ S.diff(i)
            rhs = T.diff(i) @ self.component(i)
            if lhs != rhs:
                raise InvalidInput(f"not a chain map at degree {i}")

    def component(self, i: int) -> Matrix:
        m = self.components.get(i)
        if m is None:
            return Matrix.zeros(self.source.ring, self.target.rank(i), self.source.rank(i))
        return m

    @classmethod
    def identity(cls, C: FreeComplex) -> "ComplexMap":
        return cls(C, C, {i: Matrix.identity(C.ring, r) for i, r in C.ranks.items()})

    @classmethod
    def zero(cls, S: FreeComplex, T: FreeComplex) -> "ComplexMap":
        return cls(S, T, {})

    def __matmul__(self, other: "ComplexMap") -> "ComplexMap":
        degrees = set(self.components) & set(other.components)
        return ComplexMap(other.source, self.target, {i: self.components[i] @ other.components[i] for i in degrees})


# ---------------------------------------------------------------------------
# Cohomology


@dataclass(frozen=True)
class CohomologyTable:
    """Nonzero cohomology modules by degree, with ``inf``/``sup``/``amp``."""

    ring: RingSpec
    invariants: Mapping[int, tuple]

    def __post_init__(self):
        object.__setattr__(self, "invariants", {int(i): tuple(v) for i, v in sorted(self.invariants.items()) if v})

    @property
    def entries(self) -> dict[int, ModulePresentation]:
        return {i: ModulePresentation.from_invariants(self.ring, inv) for i, inv in self.invariants.items()}

    def at(self, i: int) -> tuple:
        return self.invariants.get(i, ())

    @property
    def inf(self):
        return min(self.invariants) if self.invariants else None

    @property
    def sup(self):
        return max(self.invariants) if self.invariants else None

    @property
    def amp(self):
        return None if not self.invariants else self.sup - self.inf

    def is_zero(self) -> bool:
        return not self.invariants

    def restrict(self, lo: int, hi: int) -> "CohomologyTable":
        return CohomologyTable(self.ring, {i: v for i, v in self.invariants.items() if lo <= i <= hi})

    def retag(self, ring: RingSpec) -> "CohomologyTable":
        """Re-read the same modules over another ring with the same cover."""
        if type(ring.cover) is not type(self.ring.cover):
            raise InvalidInput("retag needs a common covering domain")
        E = ring.cover
        for inv in self.invariants.values():
            for d in inv:
                ok = ring.is_domain_cover or (not E.is_zero(d) and E.divides(d, ring.modulus))
                if not ok:
                    raise InvalidInput(f"module is not a {ring}-module")
        return CohomologyTable(ring, self.invariants)

    def isomorphic(self, other: "CohomologyTable") -> bool:
        return dict(self.invariants) == dict(other.invariants)

    def to_json(self) -> dict:
        E = self.ring.cover
        return {str(i): [E.to_str(d) for d in inv] for i, inv in self.invariants.items()}

    def describe(self) -> str:
        if not self.invariants:
            return "0"
        return ", ".join(f"H^{i}={describe_invariants(self.ring, inv)}" for i, inv in self.invariants.items())


@dataclass
class _Step:
    degree: int
    b: int
    c: int
    phi_inv: object
    gamma: dict  # column b of d^degree without row c
    delta: dict  # row c of d^degree without column b


@dataclass
class DegreeHomology:
    degree: int
    invariants: list
    reps: list  # cycles in the original basis, one per invariant
    coords: object = field(repr=False)  # original-basis cycle -> H coordinates


class HomologyComputer:
    """Cohomology of a free complex with cycle representatives and coordinates.

    The complex is first shrunk by cancelling unit entries of the
    differentials (a chain homotopy equivalence); the projection and
    inclusion of the equivalence are recorded so that cycles can be moved
    in and out of the small model.
    """

    def __init__(self, C: FreeComplex):
        self.C = C
        R = C.ring
        self.R = R
        self.E = R.cover
        self.g = R.modulus
        self.basis = {i: list(range(r)) for i, r in C.ranks.items()}
        self.cols: dict[int, dict] = {}
        self.rows: dict[int, dict] = {}
        for i, m in C.differentials.items():
            cols: dict[int, dict] = {}
            rows: dict[int, set] = {}
            for r, c, x in m.nonzero_entries():
                cols.setdefault(c, {})[r] = x
                rows.setdefault(r, set()).add(c)
            self.cols[i] = cols
            self.rows[i] = rows
        self.steps: list[_Step] = []
        self._reduce()
        self._cache: dict[int, DegreeHomology] = {}

    # -- reduction ------------------------------------------------------------------

    def _reduce(self):
        R = self.R
        while True:
            best = None
            for i, cols in self.cols.items():
                rows = self.rows[i]
                for c, col in cols.items():
                    for r, x in col.items():
                        if R.is_unit(x):
                            cost = (len(col) - 1) * (len(rows[r]) - 1)
                            key = (cost, i, c, r)
                            if best is None or key < best:
                                best = key
                                if cost == 0:
                                    break
                    if best is not None and best[0] == 0:
                        break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                return
            _, i, b, c = best
            self._eliminate(i, b, c)

    def _eliminate(self, i: int, b: int, c: int):
        R = self.R
        cols, rows = self.cols[i], self.rows[i]
        phi_inv = R.inverse(cols[b][c])
        gamma = {r: x for r, x in cols[b].items() if r != c}
        delta = {a: cols[a][c] for a in rows[c] if a != b}
        self.steps.append(_Step(i, b, c, phi_inv, gamma, delta))
        for a, da in delta.items():
            coef = R.mul(phi_inv, da)
            col = cols[a]
            for r, gr in gamma.items():
                v = R.sub(col.get(r, R.zero()), R.mul(gr, coef))
                if R.is_zero(v):
                    if r in col:
                        del col[r]
                        rows[r].discard(a)
                else:
                    col[r] = v
                    rows.setdefault(r, set()).add(a)
        # drop column b and row c of d^i
        for r in cols.pop(b, {}):
            rows[r].discard(b)
        for a in rows.pop(c, set()):
            cols[a].pop(c, None)
        # drop row b of d^{i-1} and column c of d^{i+1}
        if i - 1 in self.cols:
            pc, pr = self.cols[i - 1], self.rows[i - 1]
            for a in pr.pop(b, set()):
                pc[a].pop(b, None)
        if i + 1 in self.cols:
            nc, nr = self.cols[i + 1], self.rows[i + 1]
            for r in nc.pop(c, {}):
                nr[r].discard(c)
        self.basis[i].remove(b)
        self.basis[i + 1].remove(c)

    def project(self, i: int, vec: Mapping[int, object]) -> dict:
        """Image of an original-basis vector of degree ``i`` in the small model."""
        R = self.R
        v = {k: x for k, x in vec.items() if not R.is_zero(x)}
        for s in self.steps:
            if s.degree == i:
                v.pop(s.b, None)
            elif s.degree + 1 == i:
                yc = v.pop(s.c, None)
                if yc is not None:
                    coef = R.mul(s.phi_inv, yc)
                    for r, gr in s.gamma.items():
                        nv = R.sub(v.get(r, R.zero()), R.mul(gr, coef))
                        if R.is_zero(nv):
                            v.pop(r, None)
                        else:
                            v[r] = nv
        return v

    def include(self, i: int, vec: Mapping[int, object]) -> dict:
        """Image of a small-model vector of degree ``i`` in the original basis."""
        R = self.R
        v = {k: x for k, x in vec.items() if not R.is_zero(x)}
        for s in reversed(self.steps):
            if s.degree == i:
                acc = R.zero()
                for a, da in s.delta.items():
                    if a in v:
                        acc = R.add(acc, R.mul(da, v[a]))
                if not R.is_zero(acc):
                    v[s.b] = R.neg(R.mul(s.phi_inv, acc))
        return v

    # -- homology ------------------------------------------------------------------------

    def _dense(self, i: int):
        """Dense lifted matrix of the reduced d^i (rows: basis[i+1], cols: basis[i])."""
        src = self.basis.get(i, [])
        dst = self.basis.get(i + 1, [])
        col_index = {c: k for k, c in enumerate(src)}
        row_index = {r: k for k, r in enumerate(dst)}
        z = self.E.zero()
        mat = [[z] * len(src) for _ in dst]
        for c, col in self.cols.get(i, {}).items():
            if c in col_index:
                for r, x in col.items():
                    if r in row_index:
                        mat[row_index[r]][col_index[c]] = x
        return mat, src, dst

    def degree(self, i: int) -> DegreeHomology:
        if i in self._cache:
            return self._cache[i]
        E, R, g = self.E, self.R, self.g
        n = len(self.basis.get(i, []))
        if n == 0:
            out = DegreeHomology(i, [], [], lambda vec: [])
            self._cache[i] = out
            return out
        d, src, dst = self._dense(i)
        K = kernel_basis_cover(E, d, len(dst), n, g)
        if not K:
            out = DegreeHomology(i, [], [], lambda vec: [])
            self._cache[i] = out
            return out
        e, _, _ = self._dense(i - 1)
        prev = len(self.basis.get(i - 1, []))
        bgens = [[e[r][c] for r in range(n)] for c in range(prev)]
        if not E.is_zero(g):
            bgens += [[g if r == k else E.zero() for r in range(n)] for k in range(n)]
        solver = SpanSolver(E, K, n)
        rel_cols = []
        for b in bgens:
            if all(E.is_zero(x) for x in b):
                continue
            y = solver.solve(b)
            if y is None:
                raise ArithmeticError("boundary outside cycle span")
            rel_cols.append(y)
        k = len(K)
        rel = [[col[r] for col in rel_cols] for r in range(k)]
        res = snf_cover(E, rel, k, len(rel_cols))
        keep = []
        invariants = []
        for j in range(k):
            dj = res.D[j][j] if j < res.rank else E.zero()
            if j < res.rank and E.is_unit(dj):
                continue
            keep.append(j)
            invariants.append(dj)
        reps = []
        for j in keep:
            coeffs = [res.Uinv[r][j] for r in range(k)]
            small = {}
            for t, basis_vec in enumerate(K):
                if E.is_zero(coeffs[t]):
                    continue
                for r in range(n):
                    if not E.is_zero(basis_vec[r]):
                        small[src[r]] = E.add(small.get(src[r], E.zero()), E.mul(coeffs[t], basis_vec[r]))
            small = {key: R.reduce(x) for key, x in small.items()}
            full = self.include(i, small)
            reps.append([full.get(t, R.zero()) for t in range(self.C.rank(i))])
        U = res.U
        src_index = {c: t for t, c in enumerate(src)}

        def coords(vec, _i=i):
            small = self.project(_i, {t: x for t, x in enumerate(vec)})
            dense = [E.zero()] * n
            for key, x in small.items():
                dense[src_index[key]] = x
            y = solver.solve(dense)
            if y is None:
                raise ArithmeticError("vector is not a cycle")
            out = []
            for j, dj in zip(keep, invariants):
                acc = E.zero()
                for t in range(k):
                    if not E.is_zero(U[j][t]) and not E.is_zero(y[t]):
                        acc = E.add(acc, E.mul(U[j][t], y[t]))
                out.append(acc if E.is_zero(dj) else E.divmod(acc, dj)[1])
            return out

        out = DegreeHomology(i, invariants, reps, coords)
        self._cache[i] = out
        return out

    def table(self, degrees=None) -> CohomologyTable:
        if degrees is None:
            degrees = sorted(self.C.ranks)
        return CohomologyTable(self.R, {i: tuple(self.degree(i).invariants) for i in degrees})


def cohomology(C: FreeComplex, window: tuple[int, int] | None = None) -> CohomologyTable:
    """Cohomology table of ``C`` (optionally restricted to a degree window)."""
    hc = HomologyComputer(C)
    degrees = sorted(C.ranks)
    if window is not None:
        degrees = [i for i in degrees if window[0] <= i <= window[1]]
    return hc.table(degrees)


def submodule_invariants(E, vectors: list[list], invariants: list) -> tuple:
    """Invariants of the submodule of ``⊕ E/(d_j)`` generated by ``vectors``."""
    m = len(invariants)
    vectors = [v for v in vectors if any(not E.is_zero(x) for x in v)]
    r = len(vectors)
    if r == 0 or m == 0:
        return ()
    mods = [j for j, d in enumerate(invariants) if not E.is_zero(d)]
    z = E.zero()
    aug = [[v[j] for v in vectors] + [invariants[j] if j == t else z for t in mods] for j in range(m)]
    kern = kernel_basis_cover(E, aug, m, r + len(mods), z)
    rel = [[kv[t] for kv in kern] for t in range(r)]
    from .snf import invariants_of_relations

    return tuple(invariants_of_relations(E, rel, r, len(kern)))


def image_in_cohomology(f: ComplexMap, degrees=None, source_hc=None, target_hc=None) -> CohomologyTable:
    """Table of ``im(H(f))`` degreewise."""
    S, T = f.source, f.target
    hs = source_hc or HomologyComputer(S)
    ht = target_hc or HomologyComputer(T)
    E = T.ring.cover
    if degrees is None:
        degrees = sorted(set(S.ranks) & set(T.ranks))
    out = {}
    for i in degrees:
        ds = hs.degree(i)
        dt = ht.degree(i)
        if not ds.invariants or not dt.invariants:
            continue
        comp = f.component(i)
        vecs = [dt.coords(comp.apply(z)) for z in ds.reps]
        out[i] = submodule_invariants(E, vecs, dt.invariants)
    return CohomologyTable(T.ring, out)


# ---------------------------------------------------------------------------
# Constructions


def shift(C: FreeComplex, k: int) -> FreeComplex:
    """``C[k]``: ``C[k]^i = C^{i+k}`` with differential ``(-1)^k d``."""
    sign = -1 if k % 2 else 1
    R = C.ring
    return FreeComplex(
        R,
        {i - k: r for i, r in C.ranks.items()},
        {i - k: (m if sign == 1 else -m) for i, m in C.differentials.items()},
    )


def cone(f: ComplexMap) -> FreeComplex:
    C, D = f.source, f.target
    R = C.ring
    degrees = sorted({i - 1 for i in C.ranks} | set(D.ranks))
    ranks = {i: C.rank(i + 1) + D.rank(i) for i in degrees}
    diffs = {}
    for i in degrees:
        top = ranks.get(i + 1, 0)
        if not top or not ranks[i]:
            continue
        entries = {}
        c0, c1 = C.rank(i + 1), C.rank(i + 2)
        for r, c, x in C.diff(i + 1).nonzero_entries():
            entries[(r, c)] = R.neg(x)
        for r, c, x in f.component(i + 1).nonzero_entries():
            entries[(c1 + r, c)] = x
        for r, c, x in D.diff(i).nonzero_entries():
            entries[(c1 + r, c0 + c)] = x
        diffs[i] = Matrix.from_sparse(R, top, ranks[i], entries)
    return FreeComplex(R, ranks, diffs)


def _check_same_ring(C: FreeComplex, D: FreeComplex):
    if C.ring != D.ring:
        raise InvalidInput(f"ring mismatch: {C.ring} vs {D.ring}")


def tensor_layout(C: FreeComplex, D: FreeComplex):
    """Offsets of the blocks ``C^i ⊗ D^j`` inside ``(C⊗D)^{i+j}``."""
    offsets = {}
    ranks: dict[int, int] = {}
    for i in sorted(C.ranks):
        for j in sorted(D.ranks):
            n = i + j
            offsets[(i, j)] = ranks.get(n, 0)
            ranks[n] = ranks.get(n, 0) + C.rank(i) * D.rank(j)
    return offsets, ranks


def tensor(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    """Total complex of ``C ⊗ D``; basis of ``C^i ⊗ D^j`` is ``(a, b)`` row-major."""
    _check_same_ring(C, D)
    R = C.ring
    offsets, ranks = tensor_layout(C, D)
    drop_sign = mutants.active("koszul_sign")
    entries: dict[int, dict] = {}
    for (i, j), off in offsets.items():
        n = i + j
        nb = D.rank(j)
        block = entries.setdefault(n, {})
        # dx ⊗ y
        if (i + 1, j) in offsets:
            toff = offsets[(i + 1, j)]
            for r, c, x in C.diff(i).nonzero_entries():
                for b in range(nb):
                    block[(toff + r * nb + b, off + c * nb + b)] = x
        # (-1)^i x ⊗ dy
        if (i, j + 1) in offsets:
            toff = offsets[(i, j + 1)]
            nb1 = D.rank(j + 1)
            sign = 1 if (i % 2 == 0 or drop_sign) else -1
            for r, c, y in D.diff(j).nonzero_entries():
                yy = y if sign == 1 else R.neg(y)
                for a in range(C.rank(i)):
                    key = (toff + a * nb1 + r, off + a * nb + c)
                    block[key] = R.add(block.get(key, R.zero()), yy)
    diffs = {n: Matrix.from_sparse(R, ranks.get(n + 1, 0), ranks[n], e) for n, e in entries.items() if ranks.get(n + 1, 0)}
    return FreeComplex(R, ranks, diffs)


def hom_layout(C: FreeComplex, D: FreeComplex):
    """Offsets of the blocks ``Hom(C^i, D^{i+n})`` inside ``Hom(C, D)^n``.

    Inside a block the basis element ``E_{b,a}`` (sending basis vector ``a``
    of ``C^i`` to basis vector ``b`` of ``D^{i+n}``) has index ``a * rank + b``.
    """
    offsets = {}
    ranks: dict[int, int] = {}
    for n in range(D.lo - C.hi, D.hi - C.lo + 1) if C.ranks and D.ranks else ():
        for i in sorted(C.ranks):
            if D.rank(i + n):
                offsets[(n, i)] = ranks.get(n, 0)
                ranks[n] = ranks.get(n, 0) + C.rank(i) * D.rank(i + n)
    return offsets, ranks


def hom_sign(n: int) -> int:
    """Sign of the ``f∘d`` term in the Hom differential for ``|f| = n``."""
    s = -1 if n % 2 == 0 else 1
    return -s if mutants.active("hom_sign") else s


def hom_complex(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    _check_same_ring(C, D)
    R = C.ring
    offsets, ranks = hom_layout(C, D)
    entries: dict[int, dict] = {}
    for (n, i), off in offsets.items():
        na, nb = C.rank(i), D.rank(i + n)
        block = entries.setdefault(n, {})
        # d∘f: E_{b,a} -> sum_b' dD[b', b] E_{b',a} in Hom(C^i, D^{i+n+1})
        if (n + 1, i) in offsets:
            toff = offsets[(n + 1, i)]
            nb1 = D.rank(i + n + 1)
            for r, c, x in D.diff(i + n).nonzero_entries():
                for a in range(na):
                    key = (toff + a * nb1 + r, off + a * nb + c)
                    block[key] = R.add(block.get(key, R.zero()), x)
        # sign * f∘d: E_{b,a} -> sum_a' dC[a, a'] E_{b,a'} in Hom(C^{i-1}, D^{i+n})
        if (n + 1, i - 1) in offsets:
            toff = offsets[(n + 1, i - 1)]
            s = hom_sign(n)
            for r, c, x in C.diff(i - 1).nonzero_entries():
                # r indexes C^i (our a), c indexes C^{i-1}
                xx = x if s == 1 else R.neg(x)
                for b in range(nb):
                    key = (toff + c * nb + b, off + r * nb + b)
                    block[key] = R.add(block.get(key, R.zero()), xx)
    diffs = {n: Matrix.from_sparse(R, ranks.get(n + 1, 0), ranks[n], e) for n, e in entries.items() if ranks.get(n + 1, 0)}
    return FreeComplex(R, ranks, diffs)


def direct_sum(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    _check_same_ring(C, D)

    R = C.ring
    degrees = set(C.ranks) | set(D.ranks)
    ranks = {i: C.rank(i) + D.rank(i) for i in degrees}
    diffs = {i: block_diag(R, [C.diff(i), D.diff(i)]) for i in degrees}
    return FreeComplex(R, ranks, diffs)


def is_acyclic(C: FreeComplex) -> bool:
    return cohomology(C).is_zero()


def is_quasi_iso(f: ComplexMap) -> bool:
    return is_acyclic(cone(f))


# ---------------------------------------------------------------------------
# Truncation triangle


@dataclass(frozen=True)
class TruncationTriangle:
    """``lower -> C -> upper -> lower[1]`` with ``lower ≃ H^{inf}(C)[-inf]``.

    ``lower`` is a free resolution of ``H^{inf}(C)`` ending in degree
    ``inf``; ``upper`` is the cone of the inclusion. When the resolution is
    infinite (artinian non-semisimple rings) it is cut at ``exact_from``, and
    both pieces are exact only in degrees above that.
    """

    lower: FreeComplex
    upper: FreeComplex
    inclusion: ComplexMap
    exact_from: int | None


def truncation_triangle(C: FreeComplex, length: int | None = None) -> TruncationTriangle:
    hc = HomologyComputer(C)
    table = hc.table()
    if table.is_zero() or table.amp == 0:
        raise InvalidInput("truncation triangle needs amp >= 1")
    s = table.inf
    R = C.ring
    E = R.cover
    if length is None:
        length = 2 * (table.amp + 2)
    dh = hc.degree(s)
    from .resolutions import resolve_invariants

    F, exact_from = resolve_invariants(R, dh.invariants, s, length)
    # comparison map F -> C: degree s sends generator j to its representative cycle
    comps = {}
    gens = F.rank(s)
    comps[s] = Matrix(R, C.rank(s), gens, tuple(tuple(dh.reps[j][r] for j in range(gens)) for r in range(C.rank(s))))
    from .resolutions import solve_preimage

    for k in range(s - 1, F.lo - 1 if F.lo is not None else s, -1):
        if not F.rank(k):
            break
        # need phi_k with d_C phi_k = phi_{k+1} d_F
        target = comps[k + 1] @ F.diff(k)
        cols = []
        for j in range(F.rank(k)):
            col = target.column(j)
            w = solve_preimage(C.diff(k), col)
            if w is None:
                raise ArithmeticError("comparison map does not lift")
            cols.append(w)
        comps[k] = Matrix(R, C.rank(k), F.rank(k), tuple(tuple(cols[j][r] for j in range(F.rank(k))) for r in range(C.rank(k))))
    inc = ComplexMap(F, C, comps)
    upper = cone(inc)
    return TruncationTriangle(F, upper, inc, exact_from)


def brutal_truncation(C: FreeComplex, lo: int, hi: int) -> FreeComplex:
    """Keep degrees ``lo..hi``; cohomology is unchanged strictly inside the range."""
    ranks = {i: r for i, r in C.ranks.items() if lo <= i <= hi}
    diffs = {i: m for i, m in C.differentials.items() if lo <= i and i + 1 <= hi}
    return FreeComplex(C.ring, ranks, diffs)


def tensor_maps(f: ComplexMap, g: ComplexMap) -> ComplexMap:
    """``f ⊗ g`` for degree-zero chain maps, in the basis of :func:`tensor`."""
    S = tensor(f.source, g.source)
    T = tensor(f.target, g.target)
    R = S.ring
    soff, _ = tensor_layout(f.source, g.source)
    toff, _ = tensor_layout(f.target, g.target)
    entries: dict[int, dict] = {}
    for (i, j), so in soff.items():
        if (i, j) not in toff:
            continue
        to = toff[(i, j)]
        fi, gj = f.component(i), g.component(j)
        nb_s, nb_t = g.source.rank(j), g.target.rank(j)
        block = entries.setdefault(i + j, {})
        gnz = list(gj.nonzero_entries())
        for r, c, x in fi.nonzero_entries():
            for r2, c2, y in gnz:
                block[(to + r * nb_t + r2, so + c * nb_s + c2)] = R.cover.mul(x, y)
    comps = {n: Matrix.from_sparse(R, T.rank(n), S.rank(n), e) for n, e in entries.items()}
    return ComplexMap(S, T, comps)


def hom_maps_pre(f: ComplexMap, D: FreeComplex) -> ComplexMap:
    """``Hom(f, D) : Hom(target, D) -> Hom(source, D)`` for a degree-zero chain map ``f``."""
    S, T = f.source, f.target
    src = hom_complex(T, D)
    dst = hom_complex(S, D)
    R = D.ring
    soff, _ = hom_layout(T, D)
    toff, _ = hom_layout(S, D)
    entries: dict[int, dict] = {}
    for (n, i), so in soff.items():
        if (n, i) not in toff:
            continue
        to = toff[(n, i)]
        nb = D.rank(i + n)
        block = entries.setdefault(n, {})
        # E_{b,a} (a in T^i) ∘ f^i = sum_{a'} f[a, a'] E_{b,a'}
        for a, a2, x in f.component(i).nonzero_entries():
            for b in range(nb):
                block[(to + a2 * nb + b, so + a * nb + b)] = x
    comps = {n: Matrix.from_sparse(R, dst.rank(n), src.rank(n), e) for n, e in entries.items()}
    return ComplexMap(src, dst, comps)
