from collections import Counter

from hypothesis import strategies as st

from ltsfit.model import Alphabet, Lts

SIGMA = Alphabet(("a", "b", "c"))


@st.composite
def small_lts(draw, max_states=6, max_out=3, alphabet=SIGMA):
    """Random LTS with at most ``max_states`` states and out-degree ``max_out``."""
    n = draw(st.integers(1, max_states))
    states = tuple(f"q{i}" for i in range(n))
    initial = draw(st.lists(st.sampled_from(states), min_size=1, max_size=2, unique=True))
    labels = list(alphabet)
    rel = []
    for q in states:
        k = draw(st.integers(0, max_out))
        outs = draw(
            st.lists(
                st.tuples(st.sampled_from(labels), st.sampled_from(states)),
                min_size=k,
                max_size=k,
                unique=True,
            )
        )
        rel += [(q, a, r) for a, r in outs]
    return Lts(alphabet, states, tuple(initial), tuple(rel))


def count_paths(m, n):
    frontier = Counter(m.initial)
    for _ in range(n):
        nxt = Counter()
        for q, c in frontier.items():
            for _, r in m.successors(q):
                nxt[r] += c
        frontier = nxt
    return sum(frontier.values())
