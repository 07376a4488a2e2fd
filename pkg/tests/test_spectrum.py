import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eondpp.spectrum import (
    CU, SpectrumError, SpectrumSet, add, cu_includes, first_fit, intersect, maximal_runs, subtract,
)

from oracles import runs_of_mask, units_mask

OMEGA = 64


def S(text):
    return SpectrumSet.parse(text)


@pytest.mark.parametrize("outer, inner, expected", [
    (CU(0, 2), CU(2, 3), False),
    (CU(2, 3), CU(0, 2), False),
    (CU(0, 3), CU(0, 3), True),
    (CU(0, 3), CU(1, 2), True),
    (CU(1, 2), CU(0, 3), False),
])
def test_cu_includes(outer, inner, expected):
    assert cu_includes(outer, inner) is expected
    assert outer.includes(inner) is expected


@pytest.mark.parametrize("a, b, expected", [
    ("0-4", "2-6", "2-4"),
    ("0-1,3-5", "1-3", "1-1,3-3"),
    ("0-2", "4-5", ""),
])
def test_intersect(a, b, expected):
    assert intersect(S(a), S(b)) == S(expected)
    assert intersect(S(b), S(a)) == S(expected)


def test_maximal_runs():
    assert maximal_runs(S("0-1,3-5")) == [CU(0, 1), CU(3, 5)]
    assert maximal_runs(SpectrumSet()) == []
    assert maximal_runs(SpectrumSet.from_units([0, 1, 3, 4, 5])) == [CU(0, 1), CU(3, 5)]
    assert SpectrumSet.from_units([0, 1, 3, 4, 5]) == S("0-1,3-5")


@pytest.mark.parametrize("k, expected", [(3, CU(3, 5)), (1, CU(0, 0)), (4, None)])
def test_first_fit(k, expected):
    assert first_fit(S("0-1,3-5"), k) == expected


def test_first_fit_empty_set_is_absent():
    assert first_fit(SpectrumSet(), 1) is None
    with pytest.raises(SpectrumError):
        first_fit(S("0-3"), 0)


def test_subtract_and_add():
    assert subtract(S("0-5"), CU(2, 3)) == S("0-1,4-5")
    assert add(S("0-1,4-5"), CU(2, 3)) == S("0-5")
    assert subtract(S("0-2"), CU(0, 2)) == SpectrumSet()


def test_ledger_contract_errors():
    with pytest.raises(SpectrumError):
        subtract(S("0-1,3-5"), CU(1, 3))
    with pytest.raises(SpectrumError):
        add(S("0-3"), CU(3, 4))


def test_normalization_merges_adjacent_runs():
    assert SpectrumSet([(3, 5), (0, 2)]).runs == (CU(0, 5),)
    assert SpectrumSet([(0, 2), (1, 4), (6, 6)]).to_text() == "0-4,6-6"


def test_text_and_json_forms():
    s = S("0-1,3-5")
    assert s.to_text() == "0-1,3-5"
    assert s.to_json() == [[0, 1], [3, 5]]
    assert SpectrumSet.from_json([[0, 1], [3, 5]]) == s
    assert S("7") == S("7-7")
    assert S("") == SpectrumSet()
    with pytest.raises(SpectrumError):
        S("1-x")
    with pytest.raises(SpectrumError):
        SpectrumSet([(4, 2)])


def test_full_and_len():
    assert SpectrumSet.full(160).to_text() == "0-159"
    assert len(S("0-1,3-5")) == 5
    assert list(S("0-1,4-4").units()) == [0, 1, 4]


# property laws; the acceptance module reruns the main ones at 10^4 cases

masks = st.lists(st.booleans(), min_size=OMEGA, max_size=OMEGA)


def from_mask(m):
    return SpectrumSet(runs_of_mask(m))


@st.composite
def set_and_cu(draw):
    s = from_mask(draw(masks))
    if not s.runs:
        return s, None
    r = draw(st.sampled_from(s.runs))
    lo = draw(st.integers(r.lo, r.hi))
    hi = draw(st.integers(lo, r.hi))
    return s, CU(lo, hi)


@settings(max_examples=300)
@given(masks, masks)
def test_intersect_matches_bitwise_oracle(ma, mb):
    a, b = from_mask(ma), from_mask(mb)
    got = intersect(a, b)
    assert list(units_mask(got.runs, OMEGA)) == [x and y for x, y in zip(ma, mb)]
    runs = got.runs
    assert all(r.hi + 1 < r2.lo for r, r2 in zip(runs, runs[1:]))


@settings(max_examples=300)
@given(masks, masks, masks)
def test_intersect_laws(ma, mb, mc):
    a, b, c = from_mask(ma), from_mask(mb), from_mask(mc)
    assert a & b == b & a
    assert (a & b) & c == a & (b & c)
    assert a & a == a


@settings(max_examples=300)
@given(set_and_cu())
def test_subtract_add_round_trip(sc):
    s, c = sc
    if c is None:
        return
    assert add(subtract(s, c), c) == s


@settings(max_examples=300)
@given(masks, st.integers(1, OMEGA))
def test_first_fit_oracle(m, k):
    s = from_mask(m)
    got = first_fit(s, k)
    windows = [lo for lo in range(OMEGA - k + 1) if all(m[lo:lo + k])]
    if not windows:
        assert got is None
    else:
        assert got == CU(windows[0], windows[0] + k - 1)
        assert s.contains_cu(got)


cus = st.tuples(st.integers(0, 20), st.integers(0, 20)).map(lambda p: CU(min(p), max(p)))


@settings(max_examples=300)
@given(cus, cus, cus)
def test_cu_inclusion_is_partial_order(a, b, c):
    assert cu_includes(a, a)
    if cu_includes(a, b) and cu_includes(b, a):
        assert a == b
    if cu_includes(a, b) and cu_includes(b, c):
        assert cu_includes(a, c)
