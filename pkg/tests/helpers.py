"""Seeded generators shared by the test modules."""

import numpy as np

from frameforge import Drop, Insert, InvalidInput, Replace, RuleTerm, from_matrix, make_rule, make_structured


def low_rank(rng, d, n, rank, complex_field=False):
    if rank == 0:
        m = np.zeros((d, n))
    else:
        m = rng.standard_normal((d, rank)) @ rng.standard_normal((rank, n))
    if complex_field and rank:
        m = m + 1j * (rng.standard_normal((d, rank)) @ rng.standard_normal((rank, n)))
    return m


def random_finite(rng, d_max=5, n_max=7, max_kernel=None, complex_field=None, min_rank=0):
    d = int(rng.integers(1, d_max + 1))
    n_top = n_max if max_kernel is None else min(n_max, d + max_kernel)
    n = int(rng.integers(1, n_top + 1))
    lo = 0 if max_kernel is None else max(0, n - max_kernel)
    hi = min(d, n)
    rank = int(rng.integers(max(min(lo, hi), min(min_rank, hi)), hi + 1))
    if complex_field is None:
        complex_field = bool(rng.integers(2))
    return from_matrix(low_rank(rng, d, n, rank, complex_field), "complex" if complex_field else "real")


def random_edits(rng, max_edits=4, max_pos=5):
    edits = []
    for _ in range(int(rng.integers(0, max_edits + 1))):
        kind = int(rng.integers(3))
        pos = int(rng.integers(1, max_pos + 1))
        vec = tuple(float(x) for x in rng.integers(-2, 3, size=int(rng.integers(1, 5))))
        if not any(vec):
            vec = vec[:-1] + (1.0,)
        edits.append([Drop(pos), Insert(pos, vec), Replace(pos, vec)][kind])
    return make_structured(edits)


def random_rule(rng):
    while True:
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            a = int(rng.integers(0, 4))
            b = int(rng.integers(1 - a, 4))
            deg = int(rng.integers(0, 2)) if rng.random() < 0.3 else 0
            poly = tuple(float(x) for x in rng.integers(1, 3, size=deg + 1))
            terms.append(RuleTerm(a, b, poly))
        try:
            return make_rule(terms)
        except InvalidInput:
            continue
