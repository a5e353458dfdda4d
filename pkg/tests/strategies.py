from hypothesis import strategies as st

from dgwb.matrix import Matrix
from dgwb.rings import GF, ZZ, FpxQuotient, Zmod

small_moduli = st.sampled_from((2, 3, 4, 6, 8, 9, 12))
rings = st.sampled_from((ZZ, Zmod(4), Zmod(6), Zmod(8), Zmod(9), GF(2), GF(3), GF(5), FpxQuotient(2, (0, 0, 1)), FpxQuotient(3, (1, 0, 1))))
finite_rings = st.sampled_from((Zmod(4), Zmod(6), Zmod(8), GF(2), GF(3)))


def elements(R, bound=20):
    if R.kind == "Fpx":
        deg = len(R.f) - 1
        return st.lists(st.integers(0, R.p - 1), min_size=deg, max_size=deg).map(R)
    return st.integers(-bound, bound).map(R)


@st.composite
def matrices(draw, R=None, max_rows=4, max_cols=4, bound=20):
    R = R if R is not None else draw(rings)
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(0, max_cols))
    data = tuple(tuple(draw(elements(R, bound)) for _ in range(cols)) for _ in range(rows))
    return Matrix(R, rows, cols, data)


int_matrices = matrices(ZZ, 5, 5, 50)
