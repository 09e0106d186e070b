import random
from functools import lru_cache

import pytest

from bsm.corpus import corpus, twin


@lru_cache(maxsize=None)
def _corpus(per_shape):
    return tuple(corpus(per_shape))


@pytest.fixture(scope="session")
def small_corpus():
    """Seeded corpus, 3 data per graph shape."""
    return list(_corpus(3))


@pytest.fixture(scope="session")
def corpus_twins(small_corpus):
    rng = random.Random(7)
    return [(name, gr, twin(gr, rng)) for name, gr in small_corpus]


# acceptance summary: test_acceptance records (number, title, ok, detail)
ACCEPTANCE: dict = {}


def record(number: int, title: str, ok: bool, detail: str = ""):
    ACCEPTANCE[number] = (title, ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
