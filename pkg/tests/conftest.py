import random

import pytest

from superflip.grassmann import GrassmannNumber


@pytest.fixture
def rng():
    return random.Random(20240817)


def scalar(v, n=2):
    return GrassmannNumber.scalar(n, v)


def gens(n=2):
    return [GrassmannNumber.generator(n, i) for i in range(1, n + 1)]


def random_grassmann(rng, n=3, scale=0.5, body=None):
    coeffs = {}
    for mask in range(1, 1 << n):
        if rng.random() < 0.7:
            coeffs[mask] = rng.uniform(-1, 1) * scale
    x = GrassmannNumber(n, coeffs)
    if body is not None:
        x = x + body
    else:
        x = x + rng.uniform(-2, 2)
    return x


def guarded_flip_word(state, length, rng, cap=1e100):
    """Apply `length` random flips, avoiding floating-point overflow.

    The invariance statements under test are scale-free; the guard only
    keeps orbits inside the representable range.
    """
    from superflip.torus import flip

    cur = state
    for _ in range(length):
        edges = ["a", "b", "c"]
        rng.shuffle(edges)
        for e in edges:
            nxt = flip(cur, e)
            if max(x.body for x in nxt.lambdas()) < cap:
                cur = nxt
                break
        else:
            raise AssertionError("all flips overflow")
    return cur
