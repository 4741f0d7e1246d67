from fractions import Fraction

import pytest

from qgauss.cartan import (
    bracket,
    build_chevalley,
    cartan_matrix,
    fundamental_rep,
    htilde_coeffs,
    mirrored_ad_table,
    torus_exponents,
)


def test_cartan_matrix_a2():
    assert cartan_matrix(3) == [[2, -1], [-1, 2]]
    assert cartan_matrix(2) == [[2]]


def test_invalid_rank():
    with pytest.raises(ValueError):
        build_chevalley(1)
    with pytest.raises(ValueError):
        fundamental_rep(1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_htilde_sums_to_zero_and_differences_give_h(n):
    H = htilde_coeffs(n)
    for k in range(n - 1):
        assert sum(row[k] for row in H) == 0
    # Htilde_i - Htilde_{i+1} = H_i
    for i in range(n - 1):
        diff = [a - b for a, b in zip(H[i], H[i + 1])]
        assert diff == [Fraction(int(k == i)) for k in range(n - 1)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ad_exponents(n):
    data = build_chevalley(n)
    for m in range(1, n + 1):
        for j in range(1, n):
            expected = (m == j) - (m == j + 1)
            assert data.ad_exponent(m, j, +1) == expected
            assert data.ad_exponent(m, j, -1) == -expected


def test_mirrored_table_differs_on_lower_branch():
    data = build_chevalley(3)
    table = mirrored_ad_table(3)
    upper_ok = all(table[m][j][0] == data.ad_exponent(m + 1, j + 1, +1) for m in range(3) for j in range(2))
    lower_ok = all(table[m][j][1] == data.ad_exponent(m + 1, j + 1, -1) for m in range(3) for j in range(2))
    assert upper_ok
    assert not lower_ok


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fundamental_rep_relations(n):
    rep = fundamental_rep(n)
    for i in range(n - 1):
        assert bracket(rep.x_plus[i], rep.x_minus[i]) == rep.h[i]
        for j in range(n - 1):
            if i != j:
                assert not any(any(r) for r in bracket(rep.x_plus[i], rep.x_minus[j]))
            a_ij = cartan_matrix(n)[i][j]
            hx = bracket(rep.h[i], rep.x_plus[j])
            assert hx == [[a_ij * x for x in r] for r in rep.x_plus[j]]


def test_torus_diagonals_for_sl2():
    rep = fundamental_rep(2)
    v = rep.ring.var("v")
    # K1 = q^{H/2} = diag(v, v^-1) with q = v^2
    assert rep.K[0] == (v, v ** -1)
    assert rep.K[1] == (v ** -1, v)


def test_torus_exponents():
    assert torus_exponents(3, 1) == (1, 0)
    assert torus_exponents(3, 3) == (-1, -1)
    with pytest.raises(ValueError):
        torus_exponents(3, 4)


def test_chevalley_json():
    d = build_chevalley(3).to_json()
    assert d["cartan"] == [[2, -1], [-1, 2]]
    assert d["ad_minus"][0] == [-1, 0]
