from fractions import Fraction
from itertools import combinations
from math import ceil

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scld.code import covers, desc
from scld.constructions import (
    PackingDesign,
    concatenate,
    construction4_size,
    fpc_construction4,
    fpc_poly_eval,
    packing_to_scld,
    projective_plane,
    random_expurgated,
    truncate_plane,
    x3_code,
)
from scld.errors import ExpurgationError, ParameterError
from scld.gf import field_create
from scld.verify import is_frameproof, is_hld, is_scld, is_separable


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_projective_plane(q):
    d = projective_plane(q)
    v = q * q + q + 1
    assert d.v == d.b == v
    assert d.block_sizes() == {q + 1: v}
    incidence = [sum(x in blk for blk in d.blocks) for x in range(v)]
    assert incidence == [q + 1] * v
    pairs = {p for blk in d.blocks for p in combinations(blk, 2)}
    assert len(pairs) == v * (v - 1) // 2  # every pair exactly once


def test_fano_frozen():
    assert projective_plane(2).blocks == (
        (1, 3, 5), (0, 3, 4), (2, 3, 6), (0, 1, 2), (1, 4, 6), (0, 5, 6), (2, 4, 5),
    )


def test_plane_unsupported():
    with pytest.raises(ParameterError):
        projective_plane(6)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_truncated_plane(q):
    d = truncate_plane(q)
    assert d.v == d.b == q * q + q
    assert d.block_sizes() == {q: q, q + 1: q * q}


def test_packing_validation():
    with pytest.raises(ParameterError):
        PackingDesign(4, ((0, 1, 2), (0, 1, 3)), {3})


def test_packing_block_mismatch():
    with pytest.raises(ParameterError, match="block count mismatch"):
        packing_to_scld(PackingDesign(4, ((0, 1),), {2}))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_packing_code_sizes(q):
    a = packing_to_scld(projective_plane(q))
    b = packing_to_scld(truncate_plane(q))
    assert a.M == (q + 1) * (q * q + q + 1)
    assert b.M == q**3 + 2 * q * q
    for code in (a, b):
        rep = is_scld(code, 2)
        assert rep.holds and rep.minimal_list_size <= 3


@st.composite
def packings(draw):
    v = draw(st.integers(2, 7))
    pts = list(range(v))
    blocks, used = [], set()
    for _ in range(v):
        size = draw(st.integers(0, min(3, v)))
        blk = tuple(sorted(draw(st.permutations(pts))[:size]))
        pairs = set(combinations(blk, 2))
        if pairs & used:
            blk = blk[:1]
            pairs = set()
        used |= pairs
        blocks.append(blk)
    return PackingDesign(v, tuple(blocks), frozenset(len(b) for b in blocks if b) or {1})


@given(packings())
def test_any_packing_gives_list_size_three(design):
    code = packing_to_scld(design) if any(design.blocks) else None
    if code is None:
        return
    rep = is_scld(code, min(2, code.M))
    assert rep.holds and rep.minimal_list_size <= 3


def test_poly_fpc_examples():
    code = fpc_poly_eval(3, 4, 2, extended=True)
    assert (code.n, code.M) == (4, 9) and is_frameproof(code, 2).holds
    rep = fpc_poly_eval(7, 2, 2)
    assert rep.M == 7 and all(len(set(w)) == 1 for w in rep.codewords)
    with pytest.raises(ParameterError, match="not enough evaluation points"):
        fpc_poly_eval(2, 3, 2)
    with pytest.raises(ParameterError):
        fpc_poly_eval(3, 4, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_poly_fpc_agreement(q):
    for l in range(2, q + 1):
        for t in (2, 3):
            code = fpc_poly_eval(q, l, t)
            k = ceil(l / t)
            assert code.M == q**k
            worst = max(sum(x == y for x, y in zip(a, b)) for a, b in combinations(code.codewords, 2)) if code.M > 1 else 0
            assert worst <= k - 1


@pytest.mark.parametrize("q,l,t", [(4, 4, 2), (5, 5, 2), (5, 4, 3), (4, 5, 2)])
def test_poly_fpc_frameproof(q, l, t):
    code = fpc_poly_eval(q, l, t, extended=l > q)
    if t < code.M:
        assert is_frameproof(code, t).holds


def test_construction4_size_and_identity():
    code = fpc_construction4(5, 4)
    assert code.M == 1125 == construction4_size(5, 4)
    q = code.q
    assert q == 26
    lhs = Fraction(construction4_size(5, 4))
    rhs = 2 * Fraction(q - 1) ** 2 * (1 - Fraction(1, 2 * 5))
    assert lhs == rhs


@pytest.mark.parametrize("m,l", [(5, 4), (7, 4), (7, 6), (8, 4), (9, 4)])
def test_construction4_size_identity_general(m, l):
    # sqrt(q - 1) = m, so the identity is exact in rationals
    assert Fraction(construction4_size(m, l)) == 2 * Fraction(m * m) ** (l // 2) * (1 - Fraction(1, 2 * m))


def test_construction4_small_exhaustive():
    code = fpc_construction4(5, 4)
    sub = code.subcode(range(0, code.M, 25))
    assert is_frameproof(sub, 2).holds


def test_construction4_framing_probes():
    code = fpc_construction4(5, 4)
    gen = np.random.default_rng(2024)
    for _ in range(1000):
        a, b, c = gen.choice(code.M, size=3, replace=False)
        assert not covers(code[c], desc(code, [a, b]))


def test_construction4_errors():
    with pytest.raises(ParameterError):
        fpc_construction4(4, 4)
    with pytest.raises(ParameterError):
        fpc_construction4(7, 5)


def test_concatenation_examples():
    outer = packing_to_scld(projective_plane(2))
    code = concatenate(fpc_poly_eval(3, 4, 2, extended=True), outer)
    assert (code.n, code.M, code.q) == (8, 21, 3)
    rep = is_scld(code, 2)
    assert rep.holds and rep.minimal_list_size <= is_scld(outer, 2).minimal_list_size
    rep7 = concatenate(fpc_poly_eval(7, 2, 2), outer)
    assert (rep7.n, rep7.M, rep7.q) == (4, 21, 7) and is_scld(rep7, 2).holds


def test_concatenation_too_small():
    outer = packing_to_scld(projective_plane(2))
    inner = fpc_poly_eval(7, 2, 2).subcode(range(6))
    with pytest.raises(ParameterError, match="bijection impossible"):
        concatenate(inner, outer)


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_x3_code(l):
    code = x3_code(l)
    assert (code.n, code.M) == (2 * l, 2**l)
    assert code[0] == (0,) * (2 * l)
    assert abs(code.rate - 0.5) < 1e-12
    assert is_scld(code, 2).holds
    F = field_create(2, l)
    for x in range(code.M):
        hi = sum(b << i for i, b in enumerate(code[x][l:]))
        assert hi == F.pow(x, 3)


def test_random_examples():
    code, rep = random_expurgated(30, 2, 2, "SC", p=0.2, seed=11)
    assert is_separable(code, 2).holds
    assert rep.final_size == rep.initial_size - rep.removed_bad_pairs - rep.removed_bad_sets - rep.removed_bad_weight
    code, rep = random_expurgated(20, 5, 2, "SCLD", L=3, seed=11)
    r = is_scld(code, 2, 3)
    assert r.holds and r.minimal_list_size <= 3


def test_random_single_word_unchanged():
    code, rep = random_expurgated(5, 2, 2, "SC", M=1, seed=0)
    assert code.M == 1 and rep.final_size == 1 and rep.rounds == 0


def test_random_expurgation_removes():
    code, rep = random_expurgated(10, 2, 2, "SCLD", L=3, M=40, p=0.3, seed=4)
    assert rep.removed_bad_pairs + rep.removed_bad_sets > 0
    assert is_scld(code, min(2, code.M), 3).holds


def test_random_weight_filter():
    code, rep = random_expurgated(12, 2, 2, "SC", M=80, p=0.25, weight_filter=True, seed=1)
    assert all(sum(w) == 3 for w in code.codewords)
    assert rep.removed_bad_weight > 0


def test_random_empty():
    with pytest.raises(ExpurgationError, match="expurgated to empty"):
        # none of the three sampled words has weight floor(0.2 * 5) = 1
        random_expurgated(4, 2, 2, "SC", M=3, p=0.2, weight_filter=True, seed=1)


def test_random_param_errors():
    with pytest.raises(ParameterError):
        random_expurgated(5, 2, 2, "SCLD")
    with pytest.raises(ParameterError):
        random_expurgated(5, 3, 2, "SC", p=0.5)


@settings(max_examples=25)
@given(n=st.integers(4, 10), q=st.integers(2, 4), seed=st.integers(0, 10**6), target=st.sampled_from(["SC", "SCLD", "HLD"]))
def test_random_output_passes_oracle(n, q, seed, target):
    L = 3 if target != "SC" else None
    try:
        code, rep = random_expurgated(n, q, 2, target, L=L, M=24, seed=seed)
    except ExpurgationError:
        return
    assert rep.final_size == code.M
    if target == "SC":
        assert is_separable(code, min(2, code.M)).holds
    elif target == "SCLD":
        assert is_scld(code, min(2, code.M), 3).holds
    elif code.M >= 2:
        assert is_hld(code, 2, 3).holds


def test_random_deterministic():
    a, _ = random_expurgated(10, 3, 2, "SC", seed=9)
    b, _ = random_expurgated(10, 3, 2, "SC", seed=9)
    assert a == b
