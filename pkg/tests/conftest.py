from hypothesis import settings, strategies as st

from qgauss.ring import LaurentPoly, VarSet

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

RING = VarSet(["q", "v", "f"])


@st.composite
def laurent(draw, ring=RING, max_terms=4, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(-max_exp, max_exp)) for _ in ring)
        terms[e] = terms.get(e, 0) + draw(st.integers(-5, 5))
    return LaurentPoly(ring, terms)


@st.composite
def unit_monomial(draw, ring=RING, max_exp=3):
    e = tuple(draw(st.integers(-max_exp, max_exp)) for _ in ring)
    return LaurentPoly(ring, {e: draw(st.sampled_from([1, -1]))})


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
