import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgwb import mutants
from dgwb.complexes import cohomology, tensor
from dgwb.dg import SemiFreeDGModule, koszul_dg_ring
from dgwb.errors import InvalidInput
from dgwb.modules import ModulePresentation, module_invariants
from dgwb.rings import GF, ZZ, Zmod
from dgwb.telescope import (
    Stable,
    Unstable,
    build_telescope,
    cech_oracle,
    classical_gamma,
    classical_lambda,
    gm_adjunction_check,
    koszul_power,
    koszul_quotient,
    llambda_mod_power,
    llambda_stabilized,
    rgamma,
    rgamma_stabilized,
    telescope_base_change,
)

Z = koszul_dg_ring(ZZ, ())


def cyclic(A, n):
    """``A^0/(n)`` as a two-cell semi-free module (``n = 0``: free)."""
    M = SemiFreeDGModule.free(A, [0])
    return M if n == 0 else M.attach("r", -1, [(0, (), n)])


def from_invariants(A, invariants):
    M = SemiFreeDGModule.free(A, [0] * len(invariants))
    for j, d in enumerate(invariants):
        if d:
            M = M.attach(f"r{j}", -1, [(j, (), d)])
    return M


# -- telescope ----------------------------------------------------------------------


def test_base_change_examples():
    T = build_telescope(ZZ, (2,), 3)
    assert telescope_base_change(T, Zmod(4)) == build_telescope(Zmod(4), (2,), 3)
    assert telescope_base_change(T, ZZ) == T
    assert telescope_base_change(build_telescope(ZZ, (6,), 3), GF(3)).complex == build_telescope(GF(3), (0,), 3).complex


@given(st.lists(st.integers(-12, 12), min_size=1, max_size=2), st.integers(0, 8), st.sampled_from((2, 3, 4, 6, 8, 9, 12)))
def test_base_change_is_entrywise(gens, m, n):
    T = build_telescope(ZZ, gens, m)
    assert telescope_base_change(T, Zmod(n)) == build_telescope(Zmod(n), gens, m)


def test_telescope_rejects_bad_input():
    with pytest.raises(InvalidInput):
        build_telescope(ZZ, (2,), -1)
    with pytest.raises(InvalidInput):
        build_telescope(ZZ, (), 2)


def test_truncated_telescope_of_z():
    assert cohomology(build_telescope(ZZ, (2,), 4).complex).invariants == {1: (16,)}


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=2), st.integers(0, 4), st.sampled_from((0, 4, 6, 9)))
def test_truncated_telescope_matches_koszul_model(gens, m, n):
    R = ZZ if n == 0 else Zmod(n)
    T = build_telescope(R, gens, m).complex
    assert cohomology(T).isomorphic(cohomology(koszul_power(R, gens, m)))


# -- RΓ ------------------------------------------------------------------------------


def test_rgamma_fixed_order():
    # Koszul model M --2^m--> M
    for m in (3, 4):
        assert cohomology(rgamma(Z, (2,), cyclic(Z, 8), m)).invariants == {0: (8,), 1: (8,)}
    for m in (1, 2, 3):
        assert cohomology(rgamma(Z, (2,), cyclic(Z, 0), m)).invariants == {1: (2 ** m,)}


def test_rgamma_stabilized_examples():
    s = rgamma_stabilized(Z, (2,), cyclic(Z, 8), 6)
    assert s.status == Stable(3) and s.table.invariants == {0: (8,)}
    s = rgamma_stabilized(Z, (2,), cyclic(Z, 0), 8)
    assert isinstance(s.status, Unstable) and s.support_stable
    assert [t.invariants for t in s.status.trajectory] == [{1: (64,)}, {1: (128,)}, {1: (256,)}]
    s = rgamma_stabilized(Z, (2,), SemiFreeDGModule.zero(Z), 6)
    assert s.status == Stable(1) and s.table.is_zero()
    assert rgamma_stabilized(Z, (1,), cyclic(Z, 0), 6).table.is_zero()
    with pytest.raises(InvalidInput):
        rgamma_stabilized(Z, (2,), cyclic(Z, 8), 2)


def test_stable_verdict_survives_raising_cutoff():
    M = from_invariants(Z, [4, 12, 0])
    a = rgamma_stabilized(Z, (2,), M, 6)
    b = rgamma_stabilized(Z, (2,), M, 9)
    assert a.support == b.support
    M = from_invariants(Z, [4, 12])
    a, b = rgamma_stabilized(Z, (2,), M, 6), rgamma_stabilized(Z, (2,), M, 9)
    assert a.is_stable and b.is_stable and a.table.isomorphic(b.table)


@st.composite
def torsion_instances(draw):
    n = draw(st.sampled_from((0, 4, 8, 12, 18, 36)))
    R = ZZ if n == 0 else Zmod(n)
    invs = draw(st.lists(st.sampled_from([d for d in (2, 3, 4, 6, 8, 9, 12) if n == 0 or n % d == 0] or [2]), min_size=1, max_size=3))
    a = draw(st.sampled_from((2, 3, 6)))
    return R, invs, a


@given(torsion_instances())
def test_rgamma_agrees_with_cech_oracle(case):
    R, invs, a = case
    A = koszul_dg_ring(R, ())
    s = rgamma_stabilized(A, (a,), from_invariants(A, invs), 6)
    h0, h1 = cech_oracle(ModulePresentation.from_invariants(R, invs), a)
    assert s.is_stable
    assert s.table.at(0) == module_invariants(h0)
    assert s.table.at(1) == module_invariants(h1)


@given(torsion_instances())
def test_rgamma_is_identity_on_torsion(case):
    R, invs, a = case
    A = koszul_dg_ring(R, ())
    E = R.cover
    torsion = [d for d in invs if all(E.divides(q, a) for q in E.primes_dividing(d))]
    if not torsion:
        return
    M = from_invariants(A, torsion)
    assert rgamma_stabilized(A, (a,), M, 6).table.isomorphic(cohomology(M.underlying))


def test_telescope_mutant_changes_complex():
    clean = build_telescope(ZZ, (2,), 2).complex
    with mutants.inject("telescope_index"):
        bad = build_telescope(ZZ, (2,), 2).complex
    assert clean != bad


# -- LΛ ------------------------------------------------------------------------------


def test_llambda_examples():
    s = llambda_stabilized(Z, (2,), cyclic(Z, 8), 6)
    assert s.is_stable and s.table.invariants == {0: (8,)}
    s = llambda_stabilized(Z, (0,), cyclic(Z, 8), 6)
    assert s.table.invariants == {0: (8,)}


def test_llambda_mod_power_examples():
    assert llambda_mod_power(Z, (2,), cyclic(Z, 0), 3).table.invariants == {0: (8,)}
    B = koszul_dg_ring(Zmod(4), ())
    M = SemiFreeDGModule.free(B, [0])
    res = llambda_mod_power(B, (2,), M, 2)
    assert res.table.isomorphic(cohomology(tensor(M.underlying, koszul_quotient(Zmod(4), (2,), 2))))
    assert llambda_mod_power(Z, (2,), SemiFreeDGModule.zero(Z), 2).table.is_zero()
    with pytest.raises(InvalidInput):
        llambda_mod_power(Z, (2,), cyclic(Z, 0), 0)


@given(st.lists(st.sampled_from((0, 2, 3, 4, 6, 8, 9)), min_size=1, max_size=3), st.sampled_from((2, 3)), st.integers(1, 3))
def test_llambda_mod_power_matches_classical_lambda(invs, a, K):
    # bounded f.g. module over Z in degree 0: H^0(LΛ ⊗ K(a^K)) = M / a^K M
    M = from_invariants(Z, invs)
    res = llambda_mod_power(Z, (a,), M, K)
    expect = classical_lambda(ModulePresentation.from_invariants(ZZ, invs), (a,), K)
    assert res.table.at(0) == module_invariants(expect.module)


# -- classical oracles -------------------------------------------------------------


def _count_torsion(n, a):
    return sum(1 for x in range(n) if any(a ** k * x % n == 0 for k in range(n.bit_length() + 1)))


def _count_quotient(n, a, K):
    return n // len({a ** K * x % n for x in range(n)})


def test_classical_gamma_examples():
    assert module_invariants(classical_gamma(ModulePresentation.from_invariants(ZZ, [12]), (2,))) == (4,)
    assert classical_gamma(ModulePresentation.free(ZZ, 2), (2,)).is_zero()
    assert classical_gamma(ModulePresentation.from_invariants(ZZ, [12]), (1,)).is_zero()


def test_classical_lambda_examples():
    res = classical_lambda(ModulePresentation.from_invariants(ZZ, [8]), (2,), 3)
    assert module_invariants(res.module) == (8,) and res.exact
    res = classical_lambda(ModulePresentation.free(ZZ, 1), (2,), 2)
    assert module_invariants(res.module) == (4,) and not res.exact
    # 2 acts invertibly on Z/3, so Z/3 = 2^K (Z/3) and every quotient vanishes
    res = classical_lambda(ModulePresentation.from_invariants(ZZ, [3]), (2,), 3)
    assert res.module.is_zero() and res.exact


@given(st.integers(2, 60), st.sampled_from((2, 3, 5, 6)), st.integers(1, 4))
def test_classical_oracles_count_elements(n, a, K):
    P = ModulePresentation.from_invariants(ZZ, [n])
    size = 1
    for d in module_invariants(classical_gamma(P, (a,))):
        size *= d
    assert size == _count_torsion(n, a)
    size = 1
    for d in module_invariants(classical_lambda(P, (a,), K).module):
        size *= d
    assert size == _count_quotient(n, a, K)


def test_gm_adjunction_examples():
    Z8 = cyclic(Z, 8)
    assert gm_adjunction_check(Z, (2,), SemiFreeDGModule.free(Z, [0]), Z8, (-2, 2))
    assert gm_adjunction_check(Z, (2,), SemiFreeDGModule.zero(Z), Z8, (-2, 2))


@pytest.mark.parametrize("invs", list(itertools.product((0, 2, 4), repeat=2)))
def test_gm_adjunction_over_integers(invs):
    M, N = from_invariants(Z, list(invs)), from_invariants(Z, [8, 3])
    assert gm_adjunction_check(Z, (2,), M, N, (-2, 2))
