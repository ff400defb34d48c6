import hypothesis.strategies as st
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

from rankone_gap import HighestWeight  # noqa: E402


@st.composite
def so_weights(draw, min_n=1, max_n=7, max_entry=4):
    n = draw(st.integers(min_n, max_n))
    m = n // 2
    if n == 2:
        return HighestWeight(2, (draw(st.integers(-max_entry, max_entry)),))
    entries = sorted(
        draw(st.lists(st.integers(0, max_entry), min_size=m, max_size=m)),
        reverse=True,
    )
    if n % 2 == 0 and m >= 2 and draw(st.booleans()):
        entries[-1] = -entries[-1]
    return HighestWeight(n, tuple(entries))
