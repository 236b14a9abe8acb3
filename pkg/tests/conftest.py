import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from frameproof.code import Code  # noqa: E402

# the 4-word (3, 4, 2) code used throughout the examples
FOUR = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


@pytest.fixture
def four():
    return Code(N=3, q=2, words=FOUR)


@st.composite
def codes(draw, max_N=6, max_n=8, max_q=3):
    q = draw(st.integers(2, max_q))
    N = draw(st.integers(1, max_N))
    n = draw(st.integers(1, min(max_n, q ** N)))
    pool = st.tuples(*[st.integers(0, q - 1)] * N)
    words = draw(st.lists(pool, min_size=n, max_size=n, unique=True))
    return Code(N=N, q=q, words=tuple(words))


def random_code(rng: random.Random, N: int, n: int, q: int) -> Code:
    n = min(n, q ** N)
    words = set()
    while len(words) < n:
        words.add(tuple(rng.randrange(q) for _ in range(N)))
    return Code(N=N, q=q, words=tuple(sorted(words, key=lambda _: rng.random())))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                detail = f" ({props['detail']})" if props.get("detail") else ""
                lines.append((props["criterion"], f"{outcome.upper():6} {props['criterion']}{detail}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)
