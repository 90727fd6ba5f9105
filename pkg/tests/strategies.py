from hypothesis import strategies as st

from scld.code import Code


@st.composite
def codes(draw, max_n=6, max_m=10, max_q=3, min_m=1):
    q = draw(st.integers(2, max_q))
    n = draw(st.integers(1, max_n))
    cap = min(max_m, q**n)
    m = draw(st.integers(min(min_m, cap), cap))
    words = draw(
        st.lists(st.tuples(*[st.integers(0, q - 1)] * n), min_size=m, max_size=m, unique=True)
    )
    return Code(q, n, tuple(words))
