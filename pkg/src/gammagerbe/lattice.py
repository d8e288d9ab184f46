"""Exact integer linear algebra on the rank-3 lattice and its dual.

Lattice vectors and dual vectors are plain tuples of Python ints.  A dual
vector ``d`` evaluates on a vector ``v`` (integer or complex) as
``sum(d[i] * v[i])``.  All arithmetic is exact; inputs are bounded so that
every intermediate determinant fits comfortably in a signed 64-bit word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence

Vec = tuple[int, int, int]
Mat = tuple[Vec, Vec, Vec]

#: Largest accepted magnitude of a lattice entry (keeps 3x3 dets < 2**63).
MAX_ENTRY = 1 << 20


class LatticeError(ValueError):
    """Invalid lattice input (zero vector, non-primitive, bad framing data)."""


class DegeneratePairError(LatticeError):
    """The two lattice vectors are parallel."""


def as_vec(v: Sequence[int]) -> Vec:
    if len(v) != 3:
        raise LatticeError(f"expected 3 entries, got {len(v)}")
    out = []
    for e in v:
        if int(e) != e:
            raise LatticeError(f"non-integer entry {e!r}")
        e = int(e)
        if abs(e) > MAX_ENTRY:
            raise LatticeError(f"entry {e} exceeds the supported range")
        out.append(e)
    return (out[0], out[1], out[2])


def dot(d: Sequence, v: Sequence):
    """Evaluate the covector ``d`` on ``v`` (works for complex ``v``)."""
    return d[0] * v[0] + d[1] * v[1] + d[2] * v[2]


def cross(a: Sequence[int], b: Sequence[int]) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def det3(r0: Sequence[int], r1: Sequence[int], r2: Sequence[int]) -> int:
    return dot(r0, cross(r1, r2))


def neg(v: Sequence[int]) -> Vec:
    return (-v[0], -v[1], -v[2])


def add(u: Sequence[int], v: Sequence[int], k: int = 1) -> Vec:
    return (u[0] + k * v[0], u[1] + k * v[1], u[2] + k * v[2])


def content(v: Sequence[int]) -> int:
    return gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))


def is_primitive(v: Sequence[int]) -> bool:
    v = as_vec(v)
    if v == (0, 0, 0):
        raise LatticeError("zero vector has no primitivity")
    return content(v) == 1


def _require_primitive(v: Sequence[int], name: str = "a") -> Vec:
    v = as_vec(v)
    if v == (0, 0, 0) or content(v) != 1:
        raise LatticeError(f"{name}={v} is not a primitive lattice vector")
    return v


def primitive_vectors(bound: int) -> list[Vec]:
    """All primitive vectors with entries in ``[-bound, bound]``, sorted."""
    r = range(-bound, bound + 1)
    return [v for v in itertools.product(r, r, r) if v != (0, 0, 0) and content(v) == 1]


# --------------------------------------------------------------------------
# Column Hermite reduction


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """Return ``(g, p, q)`` with ``p*x + q*y == g == gcd(x, y) >= 0``."""
    old_r, r = x, y
    old_p, p = 1, 0
    old_q, q = 0, 1
    while r:
        t = old_r // r
        old_r, r = r, old_r - t * r
        old_p, p = p, old_p - t * p
        old_q, q = q, old_q - t * q
    if old_r < 0:
        old_r, old_p, old_q = -old_r, -old_p, -old_q
    return old_r, old_p, old_q


def column_hermite(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style Hermite reduction of a small integer matrix.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = M @ U`` lower
    echelon: each pivot is positive, entries right of a pivot vanish, and
    entries left of a pivot in the same row are reduced into ``[0, pivot)``.
    Columns are processed in a fixed order so the result is deterministic.
    """
    m = [list(map(int, r)) for r in rows]
    nrows, ncols = len(m), len(m[0])
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (m, u):
            for row in mat:
                ci, cj = row[i], row[j]
                row[i], row[j] = p * ci + q * cj, r * ci + s * cj

    piv_col = 0
    pivots = []
    for i in range(nrows):
        if piv_col >= ncols:
            break
        for j in range(piv_col + 1, ncols):
            x, y = m[i][piv_col], m[i][j]
            if y == 0:
                continue
            g, p, q = _ext_gcd(x, y)
            colop(piv_col, j, p, q, -y // g, x // g)
        if m[i][piv_col] == 0:
            continue
        if m[i][piv_col] < 0:
            colop(piv_col, piv_col, -1, 0, -1, 0)
        pivots.append((i, piv_col))
        piv_col += 1
    for i, c in pivots:
        h = m[i][c]
        for j in range(c):
            k = m[i][j] // h
            if k:
                colop(j, c, 1, -k, 0, 1)
    return m, u


def _col(u: list[list[int]], j: int) -> Vec:
    return (u[0][j], u[1][j], u[2][j])


# --------------------------------------------------------------------------
# Pairs (a, b)


def primitive_gamma(a: Sequence[int], b: Sequence[int]) -> tuple[Vec, int]:
    """Primitive covector ``gamma`` and ``s > 0`` with ``det(a, b, .) = s * gamma``."""
    a, b = _require_primitive(a, "a"), _require_primitive(b, "b")
    d = cross(a, b)
    s = content(d)
    if s == 0:
        raise DegeneratePairError(f"a={a} and b={b} are parallel")
    return (d[0] // s, d[1] // s, d[2] // s), s


def _canonical_mod(v: Vec, gamma: Vec) -> Vec:
    """Representative of ``v + Z gamma`` of least norm, ties lexicographic."""
    gg = dot(gamma, gamma)
    k0 = -dot(v, gamma) // gg
    cands = [add(v, gamma, k) for k in (k0 - 1, k0, k0 + 1, k0 + 2)]
    return min(cands, key=lambda c: (dot(c, c), c))


@dataclass(frozen=True)
class ConeBasis:
    """Parametrisation of the dual lattice modulo ``Z gamma`` by ``(d(a), d(b))``.

    The image lattice ``{(d(a), d(b))}`` is ``{(h11 k1, h21 k1 + h22 k2)}``;
    ``gen1``/``gen2`` are the dual vectors mapping to ``k1 = 1`` and
    ``k2 = 1`` respectively.
    """

    a: Vec
    b: Vec
    gamma: Vec
    s: int
    h11: int
    h21: int
    h22: int
    gen1: Vec
    gen2: Vec

    def contains(self, m: int, n: int) -> bool:
        if m % self.h11:
            return False
        return (n - self.h21 * (m // self.h11)) % self.h22 == 0

    def coords(self, m: int, n: int) -> tuple[int, int]:
        if not self.contains(m, n):
            raise LatticeError(f"({m}, {n}) is not in the image lattice")
        k1 = m // self.h11
        return k1, (n - self.h21 * k1) // self.h22

    def section(self, m: int, n: int) -> Vec:
        k1, k2 = self.coords(m, n)
        return add(add((0, 0, 0), self.gen1, k1), self.gen2, k2)


def cone_basis(a: Sequence[int], b: Sequence[int]) -> ConeBasis:
    gamma, s = primitive_gamma(a, b)
    a, b = as_vec(a), as_vec(b)
    h, u = column_hermite([a, b])
    if h[0][0] <= 0 or h[1][1] <= 0:
        raise DegeneratePairError(f"a={a} and b={b} are parallel")
    kern = _col(u, 2)
    if kern != gamma and kern != neg(gamma):
        raise AssertionError("kernel column does not match gamma")
    if h[0][0] * h[1][1] != s:
        raise AssertionError("image lattice index differs from s")
    return ConeBasis(a, b, gamma, s, h[0][0], h[1][0], h[1][1], _col(u, 0), _col(u, 1))


def annihilator_pair(a: Sequence[int], b: Sequence[int]) -> tuple[Vec, Vec]:
    """Canonical ``(alpha, beta)`` with ``alpha(b) = beta(a) = 0`` and minimal
    positive ``alpha(a)``, ``beta(b)``; each reduced modulo ``Z gamma``."""
    cb = cone_basis(a, b)
    g = gcd(cb.h21, cb.h22)
    alpha = add(add((0, 0, 0), cb.gen1, cb.h22 // g), cb.gen2, -cb.h21 // g)
    beta = cb.gen2
    alpha, beta = _canonical_mod(alpha, cb.gamma), _canonical_mod(beta, cb.gamma)
    assert dot(alpha, cb.b) == 0 and dot(alpha, cb.a) > 0
    assert dot(beta, cb.a) == 0 and dot(beta, cb.b) > 0
    return alpha, beta


def fundamental_set(
    a: Sequence[int], b: Sequence[int], alpha: Sequence[int], beta: Sequence[int]
) -> list[Vec]:
    """One representative per class of ``F / Z gamma`` where
    ``F = {d : 0 <= d(a) < alpha(a), 0 <= d(b) < beta(b)}``."""
    a, b = as_vec(a), as_vec(b)
    alpha, beta = as_vec(alpha), as_vec(beta)
    if dot(alpha, b) != 0 or dot(alpha, a) <= 0:
        raise LatticeError(f"alpha={alpha} must vanish on b and be positive on a")
    if dot(beta, a) != 0 or dot(beta, b) <= 0:
        raise LatticeError(f"beta={beta} must vanish on a and be positive on b")
    cb = cone_basis(a, b)
    out = []
    for m in range(dot(alpha, a)):
        for n in range(dot(beta, b)):
            if cb.contains(m, n):
                out.append(cb.section(m, n))
    return out


# --------------------------------------------------------------------------
# Framings


@dataclass(frozen=True)
class Framing:
    alpha1: Vec
    alpha2: Vec
    alpha3: Vec

    def det(self) -> int:
        return det3(self.alpha1, self.alpha2, self.alpha3)


def framing(a: Sequence[int]) -> Framing:
    """Canonical integral framing of a primitive vector.

    ``alpha1`` comes from the extended gcd of the entries of ``a``;
    ``(alpha2, alpha3)`` is the Hermite basis of the annihilator of ``a``,
    with ``alpha3`` negated when needed for positive orientation.
    """
    a = _require_primitive(a, "a")
    _, u = column_hermite([a])
    alpha1 = _col(u, 0)
    hb, _ = column_hermite([list(r) for r in zip(_col(u, 1), _col(u, 2))])
    alpha2 = (hb[0][0], hb[1][0], hb[2][0])
    alpha3 = (hb[0][1], hb[1][1], hb[2][1])
    if det3(alpha1, alpha2, alpha3) < 0:
        alpha3 = neg(alpha3)
    fr = Framing(alpha1, alpha2, alpha3)
    assert dot(alpha1, a) == 1 and dot(alpha2, a) == 0 and dot(alpha3, a) == 0
    assert fr.det() == 1
    return fr


# --------------------------------------------------------------------------
# ISL_3(Z)


def matmul(g: Mat, h: Mat) -> Mat:
    return tuple(
        tuple(sum(g[i][k] * h[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )  # type: ignore[return-value]


def matvec(g: Sequence[Sequence], v: Sequence):
    return tuple(g[i][0] * v[0] + g[i][1] * v[1] + g[i][2] * v[2] for i in range(3))


def transpose(g: Mat) -> Mat:
    return tuple(tuple(g[j][i] for j in range(3)) for i in range(3))  # type: ignore[return-value]


def adjugate(g: Mat) -> Mat:
    cols = [cross(g[1], g[2]), cross(g[2], g[0]), cross(g[0], g[1])]
    return transpose(tuple(cols))  # type: ignore[arg-type]


IDENTITY: Mat = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class GroupElement:
    """``(g, mu)`` in SL_3(Z) x| Z^3 acting by ``(w, x) -> (w - mu(x), g x)``.

    The product is ``(g, mu)(h, nu) = (g h, nu + mu o h)`` so that
    ``act(p * q, .) == act(p, act(q, .))``.
    """

    g: Mat = IDENTITY
    mu: Vec = (0, 0, 0)

    def __post_init__(self):
        g = tuple(as_vec(r) for r in self.g)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "mu", as_vec(self.mu))
        if det3(*g) != 1:
            raise LatticeError(f"det(g) = {det3(*g)}, expected 1")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(matmul(self.g, other.g), add(other.mu, matvec(transpose(other.g), self.mu)))

    def inverse(self) -> "GroupElement":
        ginv = adjugate(self.g)
        return GroupElement(ginv, neg(matvec(transpose(ginv), self.mu)))

    def is_identity(self) -> bool:
        return self.g == IDENTITY and self.mu == (0, 0, 0)

    def pull_vector(self, a: Sequence[int]) -> Vec:
        """``g^{-1} a`` for a lattice vector ``a``."""
        return matvec(adjugate(self.g), a)  # type: ignore[return-value]

    def to_json(self) -> dict:
        return {"g": [list(r) for r in self.g], "mu": list(self.mu)}

    @classmethod
    def from_json(cls, d: dict) -> "GroupElement":
        return cls(tuple(tuple(r) for r in d["g"]), tuple(d["mu"]))


def compose(p: GroupElement, q: GroupElement) -> GroupElement:
    return p * q


def act(p: GroupElement, w: complex, x: Sequence[complex]) -> tuple[complex, tuple]:
    """``(w, x) -> (w - mu(x), g x)``."""
    return w - dot(p.mu, x), matvec(p.g, x)


def pull(p: GroupElement, w: complex, x: Sequence[complex]) -> tuple[complex, tuple]:
    """Action of ``p^{-1}``: ``(w + mu(g^{-1} x), g^{-1} x)``."""
    xg = matvec(adjugate(p.g), x)
    return w + dot(p.mu, xg), xg


def generators() -> list[GroupElement]:
    """Elementary matrices ``I +- E_ij`` and unit translations, in fixed order."""
    gens = []
    for i, j in itertools.permutations(range(3), 2):
        for sgn in (1, -1):
            m = [list(r) for r in IDENTITY]
            m[i][j] = sgn
            gens.append(GroupElement(tuple(tuple(r) for r in m)))
    for i in range(3):
        for sgn in (1, -1):
            mu = [0, 0, 0]
            mu[i] = sgn
            gens.append(GroupElement(IDENTITY, tuple(mu)))
    return gens


def word(indices: Sequence[int]) -> GroupElement:
    gens = generators()
    out = GroupElement()
    for i in indices:
        out = out * gens[i]
    return out


def iter_shell(r: int) -> Iterator[tuple[int, int]]:
    """Points of Z^2 with L-infinity norm ``r``, lexicographic."""
    if r == 0:
        yield (0, 0)
        return
    for m in range(-r, r + 1):
        if abs(m) == r:
            for n in range(-r, r + 1):
                yield (m, n)
        else:
            yield (m, -r)
            yield (m, r)
