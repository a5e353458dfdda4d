from hypothesis import given
from hypothesis import strategies as st

from dgwb import mutants
from dgwb.complexes import (
    ComplexMap,
    FreeComplex,
    cohomology,
    cone,
    direct_sum,
    hom_complex,
    hom_layout,
    is_acyclic,
    is_quasi_iso,
    shift,
    tensor,
    truncation_triangle,
)
from dgwb.dg import koszul_complex, koszul_dg_ring
from dgwb.matrix import Matrix
from dgwb.rings import ZZ, Zmod
from oracles import brute_cohomology, determinantal_invariants, group_profile, rank_q
from strategies import matrices


def two_term(R, rows, degree=-1):
    return FreeComplex.two_term(R, Matrix.from_rows(R, rows), degree)


def mult(R, x, degree=-1):
    return two_term(R, [[x]], degree)


def _d_squared_zero(C):
    return all((C.diff(i + 1) @ C.diff(i)).is_zero() for i in C.degrees)


# -- worked examples -----------------------------------------------------------


def test_multiplication_by_two():
    H = cohomology(mult(ZZ, 2))
    assert H.at(0) == (2,) and H.at(-1) == ()
    assert (H.inf, H.sup, H.amp) == (0, 0, 0)


def test_identity_is_acyclic():
    assert is_acyclic(mult(ZZ, 1))


def test_concentrated_free():
    H = cohomology(FreeComplex.concentrated(ZZ, 3, 2))
    assert H.at(3) == (0, 0) and H.amp == 0


def test_shift_examples():
    C = mult(ZZ, 2)
    assert shift(C, 0) == C
    assert cohomology(shift(C, -1)).at(1) == (2,)
    assert shift(shift(C, 3), -3) == C


def test_cone_examples():
    C = mult(ZZ, 2)
    assert is_acyclic(cone(ComplexMap.identity(C)))
    Z0 = FreeComplex.concentrated(ZZ, 0)
    f = ComplexMap(Z0, Z0, {0: Matrix.from_rows(ZZ, [[2]])})
    H = cohomology(cone(f))
    assert H.at(0) == (2,) and H.at(-1) == ()
    # cone of the zero map is C ⊕ shift(C, 1) up to cohomology
    H = cohomology(cone(ComplexMap.zero(C, C)))
    assert H.isomorphic(cohomology(direct_sum(C, shift(C, 1))))


def test_tensor_examples():
    H = cohomology(tensor(mult(ZZ, 2), mult(ZZ, 3)))
    assert H.is_zero()
    unit = FreeComplex.concentrated(ZZ, 0)
    C = two_term(ZZ, [[2, 4], [0, 6]])
    assert cohomology(tensor(C, unit)).isomorphic(cohomology(C))
    R = Zmod(4)
    T = tensor(mult(R, 2), mult(R, 2))
    assert cohomology(T).at(0) == (2,)
    n = 4
    ranks = dict(T.ranks)
    diffs = {i: m.to_lists() for i, m in T.differentials.items()}
    for i in T.degrees:
        assert brute_cohomology(n, ranks, diffs, i) == group_profile(n, cohomology(T).at(i))


def test_hom_gives_ext1():
    H = cohomology(hom_complex(mult(ZZ, 2), FreeComplex.concentrated(ZZ, 0)))
    assert H.at(0) == () and H.at(1) == (2,)


def test_truncation_triangle_koszul():
    C = koszul_complex(koszul_dg_ring(Zmod(8), (2, 2)))
    amp = cohomology(C).amp
    assert amp >= 1
    tri = truncation_triangle(C)
    lo, hi = cohomology(C).inf, cohomology(C).sup
    lower = cohomology(tri.lower, (lo, hi))
    upper = cohomology(tri.upper, (lo, hi))
    assert (lower.amp or 0) < amp and (upper.amp or 0) < amp


def test_quasi_iso_examples():
    C = mult(ZZ, 2)
    assert is_quasi_iso(ComplexMap.identity(C))
    assert not is_quasi_iso(ComplexMap.zero(C, C))
    # augmentation Kos(Z;2) -> Z/2, written over Z as the two-term complex itself
    K = koszul_complex(koszul_dg_ring(ZZ, (2,)))
    assert cohomology(K).isomorphic(cohomology(C))


# -- oracle comparisons ----------------------------------------------------------


@given(matrices(ZZ, 4, 4, 30))
def test_two_term_over_integers(A):
    C = FreeComplex.two_term(ZZ, A, -1)
    H = cohomology(C)
    rows = A.to_lists() if A.rows and A.cols else []
    r = rank_q(rows) if rows else 0
    torsion = [d for d in determinantal_invariants(rows) if d != 1] if rows else []
    assert sorted(d for d in H.at(0) if d != 0) == sorted(torsion)
    assert sum(1 for d in H.at(0) if d == 0) == A.rows - r
    assert H.at(-1) == (0,) * (A.cols - r)


@st.composite
def small_complexes(draw, n):
    R = Zmod(n)
    A = draw(matrices(R, 2, 2))
    B = draw(matrices(R, 2, 2))
    return tensor(FreeComplex.two_term(R, A, -1), FreeComplex.two_term(R, B, 0))


@given(st.sampled_from((4, 6)).flatmap(lambda n: st.tuples(st.just(n), small_complexes(n))))
def test_cohomology_matches_enumeration(case):
    n, C = case
    if C.total_rank > 7:
        return
    H = cohomology(C)
    ranks = dict(C.ranks)
    diffs = {i: m.to_lists() for i, m in C.differentials.items()}
    for i in C.degrees:
        assert brute_cohomology(n, ranks, diffs, i) == group_profile(n, H.at(i))


# -- properties -----------------------------------------------------------------


@given(matrices(Zmod(6), 3, 3), matrices(Zmod(6), 3, 3), st.integers(-2, 2))
def test_constructions_square_to_zero(A, B, k):
    R = Zmod(6)
    C, D = FreeComplex.two_term(R, A, 0), FreeComplex.two_term(R, B, -1)
    for X in (tensor(C, D), hom_complex(C, D), shift(C, k), cone(ComplexMap.identity(D)), direct_sum(C, D)):
        assert _d_squared_zero(X)


@given(matrices(ZZ, 3, 3, 9), st.integers(-3, 3))
def test_shift_moves_cohomology(A, k):
    C = FreeComplex.two_term(ZZ, A, 0)
    H, Hs = cohomology(C), cohomology(shift(C, k))
    assert {i + k: v for i, v in Hs.invariants.items()} == dict(H.invariants)


@given(matrices(Zmod(4), 2, 2), matrices(Zmod(4), 2, 2))
def test_hom_into_concentrated_is_dual(A, B):
    # Hom(C, R) has the cohomology of the transposed (dual) complex
    R = Zmod(4)
    C = FreeComplex.two_term(R, A, 0)
    dual = FreeComplex.two_term(R, A.transpose(), -1)
    assert cohomology(hom_complex(C, FreeComplex.concentrated(R, 0))).isomorphic(cohomology(dual))


def _identity_vector(C):
    offsets, ranks = hom_layout(C, C)
    vec = [0] * ranks.get(0, 0)
    for (n, i), off in offsets.items():
        if n == 0:
            r = C.rank(i)
            for a in range(r):
                vec[off + a * r + a] = 1
    return vec


@given(matrices(Zmod(6), 3, 3), st.integers(-1, 1))
def test_identity_is_a_cycle_in_hom(A, degree):
    C = FreeComplex.two_term(Zmod(6), A, degree)
    H = hom_complex(C, C)
    assert all(x == 0 for x in H.diff(0).apply(_identity_vector(C)))


def test_hom_sign_mutant_changes_differential():
    C = mult(ZZ, 2, 0)
    with mutants.inject("hom_sign"):
        flipped = hom_complex(C, C)
    assert any(x != 0 for x in flipped.diff(0).apply(_identity_vector(C)))
