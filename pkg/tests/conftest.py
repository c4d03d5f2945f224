import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from steinerforest.core import Graph, Instance, validate_solution

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def make(n, edges, pairs=()):
    return Instance.make(Graph.from_edges(n, edges), pairs)


def cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


def path(n):
    return [(i, i + 1) for i in range(n - 1)]


def certified(inst, res):
    """A feasible result carries a valid certificate whose size is the value."""
    if not res.feasible:
        return res.certificate is None
    return res.certificate.size == res.value and validate_solution(inst, res.certificate)


def random_instance(rng: random.Random, n: int, p: float, k: int) -> Instance:
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(k)]
    return make(n, edges, pairs)


@st.composite
def instances(draw, min_n=1, max_n=7, max_pairs=3, max_edges=None):
    n = draw(st.integers(min_n, max_n))
    slots = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(slots), max_size=len(slots)))
    edges = [e for e, keep in zip(slots, mask) if keep]
    if max_edges is not None:
        edges = edges[:max_edges]
    vert = st.integers(0, n - 1)
    pairs = draw(st.lists(st.tuples(vert, vert), max_size=max_pairs))
    return make(n, edges, pairs)


@pytest.fixture
def rng():
    return random.Random(20240607)
