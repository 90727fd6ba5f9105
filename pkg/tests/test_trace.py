from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scld.code import EvidenceVector, desc
from scld.constructions import fpc_poly_eval, x3_code
from scld.errors import AmbiguousEvidenceError, ListOverflowError, ShapeError
from scld.gf import field_create
from scld.trace import fast_trace_x3, trace_fpc, trace_sc, trace_scld

from strategies import codes


def ev(q, *sets):
    return EvidenceVector.from_sets(q, sets)


def test_scld_examples(c1):
    r = trace_scld(c1, 2, 3, ev(2, {0, 1}, {0}, {1}))
    assert r.identified and r.coalition == (0, 1) and r.candidate_count == 2
    assert trace_scld(c1, 2, 3, ev(2, {1}, {1}, {0})).coalition == (2,)
    assert trace_scld(c1, 2, 3, ev(2, {1}, {1}, {1})).status == "no-match"


def test_scld_list_overflow(c1):
    with pytest.raises(ListOverflowError, match="list overflow"):
        trace_scld(c1, 2, 2, ev(2, {0, 1}, {0, 1}, {0, 1}))


def test_scld_smallest_subset_first(c1):
    # all-mixed evidence: pair (0, 2) is the first size-2 match in lexicographic order
    r = trace_scld(c1, 2, 3, ev(2, {0, 1}, {0, 1}, {0, 1}))
    assert r.coalition == (0, 2) and r.subsets_tested == 5


def test_shape_mismatch(c1):
    with pytest.raises(ShapeError):
        trace_scld(c1, 2, 3, ev(2, {0}, {0}))


def test_fpc_examples(rep3):
    assert trace_fpc(rep3, 2, ev(3, {0, 1}, {0, 1})).coalition == (0, 1)
    assert trace_fpc(rep3, 2, ev(3, {2}, {2})).coalition == (2,)
    assert trace_fpc(rep3, 2, ev(3, {0}, {1})).status == "invalid-evidence"


def test_fpc_poly_code_all_pairs():
    code = fpc_poly_eval(3, 4, 2, extended=True)
    assert code.M == 9
    for J in combinations(range(9), 2):
        assert trace_fpc(code, 2, desc(code, J)).coalition == J


def test_sc_examples(c2, cube2):
    assert trace_sc(c2, 2, desc(c2, [1, 2])).coalition == (1, 2)
    for j in range(c2.M):
        assert trace_sc(c2, 2, desc(c2, [j])).coalition == (j,)
    with pytest.raises(AmbiguousEvidenceError):
        trace_sc(cube2, 2, desc(cube2, [1, 2]), diagnostic=True)


def test_diagnostic_unique_on_scld(c2):
    for J in combinations(range(c2.M), 2):
        assert trace_scld(c2, 2, 3, desc(c2, J), diagnostic=True).coalition == J


@given(code=codes(min_m=2), data=st.data())
def test_trace_returns_matching_coalition(code, data):
    J = tuple(sorted(data.draw(st.sets(st.integers(0, code.M - 1), min_size=1, max_size=2))))
    d = desc(code, J)
    r = trace_scld(code, 2, None, d)
    assert r.identified and desc(code, r.coalition) == d
    assert len(r.coalition) <= len(J)


def test_x3_hand_example():
    F = field_create(2, 3)
    x, y = 2, 3  # alpha, alpha + 1
    assert x ^ y == 1
    assert F.pow(x, 3) ^ F.pow(y, 3) == 0b111  # v = alpha^2 + alpha + 1
    code = x3_code(3)
    r = fast_trace_x3(3, desc(code, [x, y]))
    assert r.identified and r.coalition == (2, 3)


def test_x3_singletons_and_invalid():
    code = x3_code(3)
    assert fast_trace_x3(3, desc(code, [0])).coalition == (0,)
    bad = ev(2, {0}, {0}, {0}, {0, 1}, {0}, {0})  # u = 0, v != 0
    assert fast_trace_x3(3, bad).status == "invalid-evidence"
    with pytest.raises(ShapeError):
        fast_trace_x3(4, bad)


@pytest.mark.parametrize("l", [3, 4, 5])
def test_x3_rejects_non_descendants(l):
    code = x3_code(l)
    valid = {desc(code, J).sets for s in (1, 2) for J in combinations(range(code.M), s)}
    # sample evidences that are not descendants of any coalition of size <= 2
    import numpy as np

    gen = np.random.default_rng(l)
    for _ in range(300):
        sets = tuple(int(v) for v in gen.integers(1, 4, size=2 * l))
        d = EvidenceVector(2, 2 * l, sets)
        r = fast_trace_x3(l, d)
        if sets in valid:
            assert r.identified and desc(code, r.coalition) == d
        else:
            assert r.status == "invalid-evidence"


@pytest.mark.parametrize("l", [3, 4, 5, 6])
def test_x3_matches_generic(l):
    code = x3_code(l)
    for J in list(combinations(range(code.M), 1)) + list(combinations(range(code.M), 2)):
        d = desc(code, J)
        assert fast_trace_x3(l, d).coalition == trace_scld(code, 2, None, d).coalition == J
