import pytest
from hypothesis import given, strategies as st

from qgauss.jimbo import dual_signature, glpq_signature, sl_signature
from qgauss.slotalg import AlgebraElement, commutator, invert

SIG = sl_signature(3)
RING = SIG.ring
q = RING.var("q")
SLOTS = [s.name for s in SIG.slots]


def K(slot, i, e=1):
    exps = [0, 0]
    exps[i - 1] = e
    return SIG.torus_word(slot, exps)


def X(slot, power=1):
    return SIG.gen(slot, 0, power)


def test_torus_generator_commutation():
    # K_1 X_1^+ = q X_1^+ K_1, K_2 X_1^+ = q^-1 X_1^+ K_2
    assert K("U+1", 1) * X("U+1") == X("U+1") * K("U+1", 1) * q
    assert K("U+1", 2) * X("U+1") == X("U+1") * K("U+1", 2) * q ** -1
    assert K("U-1", 1) * X("U-1") == X("U-1") * K("U-1", 1) * q ** -1


def test_slots_commute():
    assert commutator(X("U+1"), X("U+2")) == SIG.zero()
    assert commutator(K("U-1", 1), X("U+1")) == SIG.zero()


def test_invert_torus_monomial():
    k = K("U+2", 1) * K("U-1", 2, 3) * (-q)
    assert k * invert(k) == SIG.one()
    assert k ** -2 * k ** 2 == SIG.one()
    with pytest.raises(ValueError):
        invert(X("U+1"))
    with pytest.raises(ValueError):
        invert(k + SIG.one())


def test_word_validation():
    with pytest.raises(ValueError):
        SIG.word({"U+1": ((1,), 0)})
    with pytest.raises(ValueError):
        SIG.word({"U+1": ((0, 0), -1)})
    with pytest.raises(KeyError):
        SIG.gen("U+9")


def test_coefficient_ring_mismatch():
    other = glpq_signature()
    with pytest.raises(ValueError):
        SIG.scalar(other.ring.var("k"))
    with pytest.raises(ValueError):
        X("U+1") * other.one()


def test_str_and_json():
    x = K("U+1", 1, -1) * X("U+1") * RING.var("f1")
    assert str(x) == "f1*[1 (x) 1 (x) K1^-1*X1+ (x) 1]"
    assert AlgebraElement.from_json(SIG, x.to_json()) == x


def test_monomial_commutation_factors():
    sig = glpq_signature()
    r = sig.ring
    a = sig.torus_word("U+", [1, 0])
    x = sig.gen("U+")
    assert a * x == x * a * (r.var("k") * r.var("p") ** -1)


def test_dual_slot_generators_commute():
    sig = dual_signature()
    xp, xm = sig.gen("D", "Xt+"), sig.gen("D", "Xt-")
    assert xp * xm == xm * xp
    k = sig.torus_word("D", [1])
    assert k * xp == xp * k * sig.ring.var("q")
    assert k * xm == xm * k * sig.ring.var("q")


@st.composite
def element(draw):
    out = SIG.zero()
    for _ in range(draw(st.integers(1, 3))):
        parts = {}
        for slot in draw(st.lists(st.sampled_from(SLOTS), max_size=2, unique=True)):
            tor = (draw(st.integers(-2, 2)), draw(st.integers(-2, 2)))
            parts[slot] = (tor, draw(st.integers(0, 2)))
        c = q ** draw(st.integers(-2, 2)) * draw(st.integers(-3, 3))
        out = out + SIG.word(parts, c)
    return out


@given(element(), element(), element())
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(element(), element(), element())
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(element(), element(), element())
def test_jacobi(a, b, c):
    total = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert total.is_zero()
