import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scld._backend import HAVE_EXTENSION, _ext, _py, use_backend
from scld.code import Code, desc
from scld.constructions import packing_to_scld, projective_plane, x3_code

from strategies import codes

pytestmark = pytest.mark.skipif(not HAVE_EXTENSION, reason="compiled extension not built")


def fixtures():
    return [x3_code(4), packing_to_scld(projective_plane(3)), Code(2, 3, ((0, 0, 1), (1, 0, 1), (1, 1, 0)))]


def _ext_scan(code, t, exact):
    from scld.code import count_coalitions

    return _ext.coalition_scan(_ext.onehot(code.array), t, exact, count_coalitions(code.M, t, exact))


@pytest.mark.parametrize("exact", [False, True])
@pytest.mark.parametrize("idx", range(3))
def test_scan_counts_agree(idx, exact):
    code = fixtures()[idx]
    _, c_py = _py.coalition_scan(code, 2, exact)
    _, c_ext = _ext_scan(code, 2, exact)
    assert np.array_equal(c_py, c_ext)


@given(code=codes(max_m=10, max_q=5), t=st.integers(1, 3))
def test_scan_digests_partition_like_exact_keys(code, t):
    t = min(t, code.M)
    keys_py, c_py = _py.coalition_scan(code, t, False)
    keys_ext, c_ext = _ext_scan(code, t, False)
    assert np.array_equal(c_py, c_ext)
    # equal exact descendants must give equal digests
    seen = {}
    for k, h in zip(keys_py, keys_ext.tolist()):
        assert seen.setdefault(k, h) == h


@given(code=codes(max_m=10, max_q=5), data=st.data())
def test_residual_and_match_agree(code, data):
    J = sorted(data.draw(st.sets(st.integers(0, code.M - 1), min_size=1, max_size=3)))
    d = desc(code, J)
    with use_backend("python"):
        from scld.code import residual

        r_py = residual(code, d)
    r_ext = tuple(int(i) for i in _ext.residual(_ext.onehot(code.array), d.masks))
    assert r_py == r_ext
    m_py = _py.match_subsets(code, list(r_py), 3, d, False)
    m_ext = _ext.match_subsets(_ext.onehot(code.array), np.asarray(r_py, dtype=np.int64), 3, d.masks, False)
    assert m_py[0] == m_ext[0] and m_py[1] == m_ext[1]


def test_large_alphabet_falls_back():
    from scld._backend import kernels

    code = Code(70, 1, tuple((i,) for i in range(70)))
    assert not kernels._use_ext(code.q)
    assert kernels.residual(code, desc(code, [69])).tolist() == [69]
