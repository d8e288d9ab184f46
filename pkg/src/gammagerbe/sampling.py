"""Seeded, schedule-independent sampling of verification inputs.

Every sample draws from its own Philox stream keyed by ``(seed, suite)``
with the sample index in the high counter word, so a sample's inputs
depend only on ``(seed, suite, index)`` and never on worker scheduling.
"""

from __future__ import annotations

import math
import zlib
from typing import Sequence

import numpy as np

from .family import _framing, pair_data
from .lattice import GroupElement, Vec, dot, generators, matvec, neg, primitive_vectors
from .special import normal_vector

#: Smallest admissible |Im| of an effective period (keeps products short).
MIN_IM = 0.12

_PRIMS = {b: primitive_vectors(b) for b in (1, 2, 3)}


def rng_for(seed: int, suite: str, index: int) -> np.random.Generator:
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF) | (zlib.crc32(suite.encode()) << 64)
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, 0, int(index)]))


def uniform_complex(rng, re: tuple[float, float], im: tuple[float, float]) -> complex:
    return complex(rng.uniform(*re), rng.uniform(*im))


def standard_periods(rng, im=(0.4, 1.5)) -> tuple[complex, complex]:
    return uniform_complex(rng, (-0.5, 0.5), im), uniform_complex(rng, (-0.5, 0.5), im)


def w_disc(rng, radius: float = 0.4) -> complex:
    r = radius * math.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2.0 * math.pi)
    return r * complex(math.cos(t), math.sin(t))


def group_word(rng, max_len: int, translations: bool = True) -> GroupElement:
    gens = generators()
    pool = len(gens) if translations else 12
    length = int(rng.integers(1, max_len + 1))
    out = GroupElement()
    for i in rng.integers(0, pool, size=length):
        out = out * gens[int(i)]
    return out


def moduli_x(rng, max_len: int = 2) -> tuple[complex, ...]:
    """Standard point ``(tau, sigma, 1)`` moved to another chart by a random SL_3(Z) word."""
    tau, sigma = standard_periods(rng)
    g = group_word(rng, max_len, translations=False)
    return tuple(complex(c) for c in matvec(g.g, (tau, sigma, 1.0)))


def chart_vectors(rng, x: Sequence[complex], k: int, bound: int = 3, margin: float = 0.25) -> list[Vec]:
    """``k`` primitive vectors whose charts all contain ``x``, no two parallel.

    Membership is ``<a, Im x cross Re x> > 0``; ``margin`` is a lower bound on
    the cosine of the angle, which keeps ``x`` away from chart boundaries.
    """
    nv = normal_vector(x)
    nn = math.sqrt(sum(c * c for c in nv))
    ok = [v for v in _PRIMS[bound] if dot(v, nv) > margin * nn * math.sqrt(dot(v, v))]
    if len(ok) < k:
        raise LookupError("chart intersection too thin at this x")
    out: list[Vec] = []
    while len(out) < k:
        v = ok[int(rng.integers(len(ok)))]
        if v not in out and neg(v) not in out:
            out.append(v)
    return out


def any_pair(rng, bound: int = 3) -> tuple[Vec, Vec]:
    prims = _PRIMS[bound]
    while True:
        a = prims[int(rng.integers(len(prims)))]
        b = prims[int(rng.integers(len(prims)))]
        if any(a[i] * b[j] != a[j] * b[i] for i in range(3) for j in range(3)):
            return a, b


def pair_conditioned(a: Vec, b: Vec, x: Sequence[complex], min_im: float = MIN_IM) -> bool:
    if a == b or a == neg(b):
        return True
    pd = pair_data(a, b)
    gx = dot(pd.gamma, x)
    return min(abs((dot(pd.alpha, x) / gx).imag), abs((dot(pd.beta, x) / gx).imag)) >= min_im


def chart_conditioned(a: Vec, x: Sequence[complex], min_im: float = MIN_IM) -> bool:
    fr = _framing(a)
    return (dot(fr.alpha2, x) / dot(fr.alpha3, x)).imag >= min_im


def conditioned(vectors: Sequence[Vec], x: Sequence[complex], min_im: float = MIN_IM) -> bool:
    if not all(chart_conditioned(v, x, min_im) for v in vectors):
        return False
    return all(
        pair_conditioned(p, q, x, min_im) for i, p in enumerate(vectors) for q in vectors[i + 1 :]
    )
