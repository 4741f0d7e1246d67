import pytest
from hypothesis import given, strategies as st

from qgauss.jimbo import assemble_T, closed_form, sl_signature
from qgauss.opmatrix import (
    OpMatrix,
    gauss_factors,
    gauss_product,
    involved_positions,
    inversions,
    is_triangular,
    matmul,
    perturb,
    qdet,
    relation_residual,
    rtt_residual,
    triangular_inverse,
)
from qgauss.rmatrix import derived_parts, standard_r

SIG = sl_signature(2)
q = SIG.ring.var("q")


def test_identity_and_shapes():
    I = OpMatrix.identity(SIG, 2)
    T = assemble_T(closed_form(2))
    assert matmul(I, T) == T and matmul(T, I) == T
    with pytest.raises(ValueError):
        matmul(OpMatrix.zeros(SIG, 2, 3), OpMatrix.zeros(SIG, 2, 2))
    assert T.entry(1, 1) == T[0, 0]


def test_gauss_product_requires_disjoint_slots():
    tr = closed_form(2)
    with pytest.raises(ValueError, match="share slots"):
        gauss_product(tr.T_plus, tr.T_plus)
    assert gauss_product(tr.T_minus, tr.T_plus) == assemble_T(tr)


def test_inversions():
    assert inversions([0, 1, 2]) == 0
    assert inversions([2, 1, 0]) == 3
    assert inversions([1, 0, 2]) == 1


def test_qdet_identity_and_diagonal():
    assert qdet(OpMatrix.identity(SIG, 3)) == SIG.one()
    k = SIG.torus_word("U+1", [1])
    D = OpMatrix.diagonal(SIG, [k, k ** -1])
    assert qdet(D) == SIG.one()
    with pytest.raises(ValueError):
        qdet(OpMatrix.zeros(SIG, 2, 3))


@pytest.mark.parametrize("n", [2, 3])
def test_qdet_of_gauss_factors(n):
    tr = closed_form(n)
    assert qdet(tr.T_plus) == tr.sig.one()
    assert qdet(tr.T_minus) == tr.sig.one()
    assert qdet(assemble_T(tr)) == tr.sig.one()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_triangular_inverse_is_two_sided(n):
    tr = closed_form(n)
    for T, shape in ((tr.T_plus, "upper"), (tr.T_minus, "lower")):
        inv = triangular_inverse(T, shape)
        I = OpMatrix.identity(tr.sig, n)
        assert matmul(T, inv) == I
        assert matmul(inv, T) == I
        assert is_triangular(inv, shape)


def test_triangular_inverse_of_diagonal():
    tr = closed_form(2)
    D = OpMatrix.diagonal(tr.sig, tr.T_plus.diagonal_entries())
    inv = triangular_inverse(D, "upper")
    assert inv == triangular_inverse(D, "lower")
    assert matmul(D, inv) == OpMatrix.identity(tr.sig, 2)


def test_triangular_inverse_errors():
    tr = closed_form(2)
    with pytest.raises(ValueError):
        triangular_inverse(tr.T_plus, "lower")
    with pytest.raises(ValueError):
        triangular_inverse(tr.T_plus, "diagonal")
    with pytest.raises(ValueError):
        triangular_inverse(assemble_T(tr), "upper")


@pytest.mark.parametrize("n", [2, 3])
def test_inverse_satisfies_swapped_rtt(n):
    tr = closed_form(n)
    R = standard_r(n, tr.sig.ring)
    R_swap = derived_parts(R).R_plus
    for T, shape in ((tr.T_plus, "upper"), (tr.T_minus, "lower")):
        assert rtt_residual(R, T).is_zero()
        inv = triangular_inverse(T, shape)
        assert rtt_residual(R_swap, inv).is_zero()
        # against R itself the relation does not survive inversion
        assert not rtt_residual(R, inv).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gauss_factors_reconstruct(n):
    tr = closed_form(n)
    T = assemble_T(tr)
    L, D, U = gauss_factors(T)
    assert matmul(matmul(L, D), U) == T
    assert is_triangular(L, "lower") and is_triangular(U, "upper")
    assert all(L[i, i] == tr.sig.one() and U[i, i] == tr.sig.one() for i in range(n))
    # the diagonal is the product of the two triangles' diagonals
    assert D.diagonal_entries() == [a * b for a, b in zip(tr.T_minus.diagonal_entries(), tr.T_plus.diagonal_entries())]


def test_relation_residual_identity_r():
    tr = closed_form(2)
    assert relation_residual(None, tr.T_minus, tr.T_plus).is_zero()
    T = assemble_T(tr)
    assert not relation_residual(None, T, T).is_zero()


@given(st.integers(0, 1), st.integers(0, 1))
def test_perturbation_residual_is_located(i, j):
    T = assemble_T(closed_form(2))
    R = standard_r(2, T.sig.ring)
    bad = rtt_residual(R, perturb(T, i, j, q))
    positions = set(bad.nonzero_positions())
    assert positions
    assert positions <= involved_positions(R, 2, i, j)
    assert bad.first_nonzero() in involved_positions(R, 2, i, j)


def test_json_roundtrip():
    T = assemble_T(closed_form(3))
    assert OpMatrix.from_json(T.sig, T.to_json()) == T
