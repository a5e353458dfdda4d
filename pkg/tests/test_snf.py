import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgwb import mutants
from dgwb.errors import InvalidInput
from dgwb.matrix import Matrix
from dgwb.modules import ModulePresentation, module_invariants, module_iso_test
from dgwb.rings import GF, QQ, ZZ, FpxQuotient, Zmod
from dgwb.snf import kernel_presentation, smith_normal_form, snf_cover
from oracles import det, determinantal_invariants
from strategies import int_matrices, matrices


def M(R, rows):
    return Matrix.from_rows(R, rows)


def _is_diagonal(D):
    return all(D.data[i][j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j)


def test_identity():
    res = smith_normal_form(Matrix.identity(ZZ, 3))
    assert res.D == Matrix.identity(ZZ, 3)
    assert res.invariant_factors == (1, 1, 1)


def test_diag_2_3():
    assert smith_normal_form(M(ZZ, [[2, 0], [0, 3]])).D == M(ZZ, [[1, 0], [0, 6]])


def test_minors_example():
    res = smith_normal_form(M(ZZ, [[2, 4], [6, 8]]))
    assert res.D == M(ZZ, [[2, 0], [0, 4]])
    assert determinantal_invariants([[2, 4], [6, 8]]) == [2, 4]


def test_rejects_quotient_rings():
    with pytest.raises(InvalidInput):
        smith_normal_form(M(Zmod(4), [[2]]))


@given(int_matrices)
def test_snf_contract_over_integers(A):
    res = smith_normal_form(A)
    assert res.U @ A @ res.V == res.D
    assert _is_diagonal(res.D)
    assert abs(det(res.U.to_lists())) == 1 if A.rows else True
    assert abs(det(res.V.to_lists())) == 1 if A.cols else True
    inv = res.invariant_factors
    assert all(d > 0 for d in inv)
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    assert list(inv) == determinantal_invariants(A.to_lists())


@given(matrices(GF(5), 4, 4))
def test_snf_over_prime_field_gives_rank(A):
    res = smith_normal_form(A)
    assert res.U @ A @ res.V == res.D
    assert all(d == 1 for d in res.invariant_factors)


def test_snf_over_rationals():
    res = smith_normal_form(M(QQ, [[1, 2], [2, 4]]))
    assert len(res.invariant_factors) == 1


@given(st.lists(st.lists(st.integers(0, 1), min_size=3, max_size=3), min_size=2, max_size=3))
def test_snf_cover_polynomials(rows):
    # entries x^e + c over F2[x]; divisibility of the diagonal in F2[x]
    E = FpxQuotient(2, (0, 0, 1)).cover
    A = [[E.coerce([c, 1]) if e else E.coerce([c]) for e, c in zip(r, r[1:] + r[:1])] for r in rows]
    res = snf_cover(E, A, len(A), 3)
    diag = res.diagonal()
    assert all(E.divides(a, b) for a, b in zip(diag, diag[1:]))


def test_divisibility_mutant_breaks_chain():
    with mutants.inject("snf_divisibility"):
        inv = smith_normal_form(M(ZZ, [[2, 0], [0, 3]])).invariant_factors
    assert inv != (1, 6)


def test_kernel_examples():
    K = kernel_presentation(Matrix.zeros(ZZ, 2, 2))
    assert smith_normal_form(K).invariant_factors == (1, 1)
    K = kernel_presentation(M(Zmod(4), [[2]]))
    assert {x for col in K.columns() for x in col} - {0} == {2}
    assert kernel_presentation(M(ZZ, [[2]])).cols == 0


@given(matrices(Zmod(6), 3, 3))
def test_kernel_is_exactly_the_kernel(A):
    K = kernel_presentation(A)
    assert (A @ K).is_zero()
    span = {tuple(K.apply(list(c))) for c in itertools.product(range(6), repeat=K.cols)}
    kernel = {v for v in itertools.product(range(6), repeat=A.cols) if all(x == 0 for x in A.apply(list(v)))}
    assert span == kernel


def test_module_invariants_examples():
    assert module_invariants(ModulePresentation(ZZ, 1, M(ZZ, [[0]]))) == (0,)
    assert module_invariants(ModulePresentation(ZZ, 2, M(ZZ, [[2, 0], [0, 4]]))) == (2, 4)
    assert module_invariants(ModulePresentation(ZZ, 1, M(ZZ, [[1]]))) == ()


def test_module_iso_examples():
    z6 = ModulePresentation.from_invariants(ZZ, [6])
    z2z3 = ModulePresentation(ZZ, 2, M(ZZ, [[2, 0], [0, 3]]))
    assert module_iso_test(z6, z2z3)
    assert not module_iso_test(ModulePresentation.free(ZZ, 1), ModulePresentation.from_invariants(ZZ, [2]))
    assert module_iso_test(ModulePresentation.zero(ZZ), ModulePresentation(ZZ, 1, M(ZZ, [[1]])))


@given(matrices(Zmod(8), 3, 3))
def test_invariants_count_elements(A):
    # |coker A| over Z/8 equals the product of the invariant factors
    P = ModulePresentation(Zmod(8), A.rows, A)
    size = 1
    for d in module_invariants(P):
        size *= 8 if d == 0 else d
    image = {tuple(A.apply(list(v))) for v in itertools.product(range(8), repeat=A.cols)} if A.cols else {(0,) * A.rows}
    assert size * len(image) == 8 ** A.rows
