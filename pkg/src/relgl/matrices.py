"""Exact n x n matrix arithmetic over a table-backed finite ring.

The hot paths (closure BFS, exhaustive theorem scans) work on numpy
batches of entry-index arrays; the Mat class is a thin hashable wrapper
for the public API and for witnesses in reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .rings import FiniteRing
from .ideals import Ideal, ideal_quotient, relative_centraliser_mask

_BMM_CHUNK = 1 << 16


class MatrixError(ValueError):
    pass


class NotInvertible(ValueError):
    """Distinct signal for a singular matrix (not an error of usage)."""


# -- batch engine -----------------------------------------------------------

def bmm(ring: FiniteRing, X, Y):
    """Batched matrix product over the ring tables.

    X: (..., n, n), Y: (n, n) or (..., n, n); standard broadcasting.
    """
    X = np.asarray(X)
    Y = np.asarray(Y)
    n = X.shape[-1]
    if X.ndim == 3 and X.shape[0] > _BMM_CHUNK:
        out = np.empty(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int16)
        for lo in range(0, X.shape[0], _BMM_CHUNK):
            hi = lo + _BMM_CHUNK
            yc = Y if Y.ndim == 2 else Y[lo:hi]
            out[lo:hi] = bmm(ring, X[lo:hi], yc)
        return out
    # prod[..., i, k, j] = X[..., i, k] * Y[..., k, j]
    prod = ring.mul[X[..., :, :, None], Y[..., None, :, :]]
    acc = prod[..., :, 0, :]
    for k in range(1, n):
        acc = ring.add[acc, prod[..., :, k, :]]
    return acc.astype(np.int16)


def bsub(ring: FiniteRing, X, Y):
    """Entrywise X - Y."""
    return ring.add[X, ring.neg[Y]]


def identity_entries(ring: FiniteRing, n: int):
    E = np.full((n, n), ring.zero_index, dtype=np.int16)
    np.fill_diagonal(E, ring.one_index)
    return E


def key_fits_int64(ring: FiniteRing, n: int) -> bool:
    return ring.size ** (n * n) < 2 ** 62


def batch_keys(ring: FiniteRing, X):
    """Canonical injective key per matrix: row-major mixed-radix integer."""
    X = np.asarray(X)
    n = X.shape[-1]
    flat = X.reshape(X.shape[:-2] + (n * n,)).astype(np.int64)
    if key_fits_int64(ring, n):
        pw = ring.size ** np.arange(n * n, dtype=np.int64)
        return flat @ pw
    # large rings: pair of int64 halves, combined into python tuples
    half = (n * n) // 2
    pw1 = ring.size ** np.arange(half, dtype=np.int64)
    pw2 = ring.size ** np.arange(n * n - half, dtype=np.int64)
    hi = flat[..., :half] @ pw1
    lo = flat[..., half:] @ pw2
    out = np.empty(hi.shape, dtype=object)
    it = np.nditer(hi, flags=["multi_index"])
    for h in it:
        out[it.multi_index] = (int(h), int(lo[it.multi_index]))
    return out


def det_batch(ring: FiniteRing, X):
    """Determinant by permutation expansion (commutative rings, small n)."""
    if not ring.commutative:
        raise MatrixError("determinant needs a commutative ring")
    X = np.asarray(X)
    n = X.shape[-1]
    acc = None
    for sigma in itertools.permutations(range(n)):
        sign = _perm_sign(sigma)
        term = X[..., 0, sigma[0]]
        for i in range(1, n):
            term = ring.mul[term, X[..., i, sigma[i]]]
        if sign < 0:
            term = ring.neg[term]
        acc = term if acc is None else ring.add[acc, term]
    return acc


def _perm_sign(sigma):
    inv = sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma))
              if sigma[i] > sigma[j])
    return -1 if inv % 2 else 1


def invert_batch_commutative(ring: FiniteRing, X):
    """Batched inverse via adjugate and the determinant-is-a-unit test.

    Returns (inverses, invertible_mask); rows with a non-unit determinant
    hold junk and are flagged False.
    """
    X = np.asarray(X)
    n = X.shape[-1]
    det = det_batch(ring, X)
    ok = ring.unit_mask[det]
    _, inv_table = ring._unit_data()
    dinv = inv_table[det]
    adj = np.empty_like(X)
    rows = list(range(n))
    for i in range(n):
        for j in range(n):
            keep_r = rows[:i] + rows[i + 1:]
            keep_c = rows[:j] + rows[j + 1:]
            minor = X[..., keep_r, :][..., :, keep_c]
            c = det_batch(ring, minor)
            if (i + j) % 2:
                c = ring.neg[c]
            adj[..., j, i] = c
    return ring.mul[dinv[..., None, None], adj].astype(np.int16), ok


# -- Mat --------------------------------------------------------------------

class Mat:
    """An n x n matrix over a FiniteRing; immutable and hashable."""

    __slots__ = ("ring", "n", "entries", "_key")

    def __init__(self, ring: FiniteRing, entries):
        entries = np.ascontiguousarray(np.asarray(entries, dtype=np.int16))
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise MatrixError("entries must be a square array")
        if entries.min() < 0 or entries.max() >= ring.size:
            raise MatrixError("entry index out of ring range")
        entries.setflags(write=False)
        self.ring = ring
        self.n = entries.shape[0]
        self.entries = entries
        key = batch_keys(ring, entries[None])[0]
        self._key = int(key) if not isinstance(key, tuple) else key

    @property
    def canonical_key(self):
        return self._key

    def __matmul__(self, other):
        if not isinstance(other, Mat) or other.ring is not self.ring \
                or other.n != self.n:
            raise MatrixError("invalid-pair: mismatched ring or degree")
        return Mat(self.ring, bmm(self.ring, self.entries[None],
                                  other.entries)[0])

    __mul__ = __matmul__

    def __eq__(self, other):
        return (isinstance(other, Mat) and other.ring is self.ring
                and other._key == self._key)

    def __hash__(self):
        return hash((id(self.ring), self._key))

    def is_identity(self):
        return bool((self.entries == identity_entries(self.ring, self.n)).all())

    def inverse(self) -> "Mat":
        return Mat(self.ring, _invert_entries(self.ring, self.entries))

    def is_invertible(self) -> bool:
        try:
            self.inverse()
            return True
        except NotInvertible:
            return False

    def text(self):
        """Row-major entry-index text form used in reports."""
        return "[" + ",".join(
            "[" + ",".join(str(int(x)) for x in row) + "]"
            for row in self.entries) + "]"

    def __repr__(self):
        return f"Mat({self.ring.descriptor}, {self.text()})"


def mat_mul(X: Mat, Y: Mat) -> Mat:
    return X @ Y


def mat_inverse(X: Mat) -> Mat:
    """Exact inverse; raises NotInvertible when none exists."""
    return X.inverse()


def _invert_entries(ring: FiniteRing, entries):
    n = entries.shape[0]
    if ring.commutative:
        inv, ok = invert_batch_commutative(ring, entries[None])
        if not ok[0]:
            raise NotInvertible("determinant is not a unit")
        return inv[0]
    # noncommutative: check that v -> Xv is a bijection of R^n, then read
    # the inverse columns off the inverted map
    if ring.size ** n > 1 << 22:
        raise MatrixError("module too large for direct invertibility scan")
    vecs = np.array(list(itertools.product(range(ring.size), repeat=n)),
                    dtype=np.int16)  # (|R|^n, n)
    prod = ring.mul[entries[None, :, :], vecs[:, None, :]]  # (M, n, n): X[i,k]*v[k]
    img = prod[:, :, 0]
    for k in range(1, n):
        img = ring.add[img, prod[:, :, k]]
    pw = ring.size ** np.arange(n, dtype=np.int64)
    img_keys = img.astype(np.int64) @ pw
    if len(np.unique(img_keys)) != len(vecs):
        raise NotInvertible("columns do not generate the free module")
    lookup = dict(zip(img_keys.tolist(), range(len(vecs))))
    inv = np.empty((n, n), dtype=np.int16)
    for j in range(n):
        e_j = np.full(n, ring.zero_index, dtype=np.int64)
        e_j[j] = ring.one_index
        inv[:, j] = vecs[lookup[int(e_j @ pw)]]
    eye = identity_entries(ring, n)
    if not (bmm(ring, inv[None], entries)[0] == eye).all():
        raise NotInvertible("one-sided inverse only")
    return inv


# -- generator matrices ------------------------------------------------------

def _check_pos(n, i, j):
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise MatrixError(f"invalid-position: ({i},{j}) for degree {n}")


def transvection(ring: FiniteRing, n: int, i: int, j: int, xi) -> Mat:
    """t_ij(xi) = identity + xi placed at (i, j); positions are 1-based."""
    _check_pos(n, i, j)
    xi = getattr(xi, "index", xi)
    E = identity_entries(ring, n).copy()
    E[i - 1, j - 1] = xi
    return Mat(ring, E)


def z_gen(ring: FiniteRing, n: int, i: int, j: int, a, c) -> Mat:
    """t_ij(c) t_ji(a) t_ij(-c): conjugated transvection generator."""
    _check_pos(n, i, j)
    a = getattr(a, "index", a)
    c = getattr(c, "index", c)
    return (transvection(ring, n, i, j, c)
            @ transvection(ring, n, j, i, a)
            @ transvection(ring, n, i, j, ring.neg_e(c)))


def y_gen(ring: FiniteRing, n: int, i: int, j: int, a, b) -> Mat:
    """[t_ij(a), t_ji(b)]: elementary commutator generator."""
    _check_pos(n, i, j)
    a = getattr(a, "index", a)
    b = getattr(b, "index", b)
    return (transvection(ring, n, i, j, a)
            @ transvection(ring, n, j, i, b)
            @ transvection(ring, n, i, j, ring.neg_e(a))
            @ transvection(ring, n, j, i, ring.neg_e(b)))


# -- congruence subgroup membership ------------------------------------------

FAMILIES = ("principal", "full", "brimming", "homothety", "c_omega")


@dataclass(frozen=True)
class CongruenceSpec:
    """Which congruence family, over which ideal data."""

    ring: FiniteRing
    n: int
    family: str
    I: Ideal = None
    A: Ideal = None
    B: Ideal = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise MatrixError(f"unknown congruence family {self.family!r}")
        if self.family == "c_omega":
            if self.A is None or self.B is None:
                raise MatrixError("c_omega needs ideals A and B")
            if self.A.ring is not self.ring or self.B.ring is not self.ring:
                raise MatrixError("ideal ring mismatch")
        else:
            if self.I is None or self.I.ring is not self.ring:
                raise MatrixError("family needs an ideal I of the ring")

    def level(self) -> Ideal:
        """The ideal governing the off-diagonal congruences."""
        if self.family == "c_omega":
            return ideal_quotient(self.B, self.A)
        return self.I


_central_masks = {}


def central_mod_mask(ring: FiniteRing, I: Ideal):
    """Boolean mask of elements commuting with all of R modulo I.

    Checked against every ring element, not a generating set.
    """
    key = (id(ring), I.members)
    if key not in _central_masks:
        _central_masks[key] = relative_centraliser_mask(
            ring, range(ring.size), I)
    return _central_masks[key]


_cent_pair_masks = {}


def cent_pair_mask(ring: FiniteRing, A: Ideal, B: Ideal):
    """Mask of Cent_R(A, B) = {x : xa - ax in B for all a in A}."""
    key = (id(ring), A.members, B.members)
    if key not in _cent_pair_masks:
        _cent_pair_masks[key] = relative_centraliser_mask(ring, A, B)
    return _cent_pair_masks[key]


def in_congruence_batch(E, spec: CongruenceSpec):
    """Family membership for a batch of matrices assumed invertible."""
    ring, n = spec.ring, spec.n
    E = np.asarray(E)
    lvl = spec.level()
    diag = E[..., np.arange(n), np.arange(n)]
    off = ~np.eye(n, dtype=bool)
    offvals = E[..., off]

    if spec.family == "principal":
        diffs = bsub(ring, E, identity_entries(ring, n))
        return lvl.mask[diffs].all(axis=(-1, -2))

    ok = lvl.mask[offvals].all(axis=-1)
    if spec.family == "brimming":
        return ok
    for i in range(n):
        for j in range(i + 1, n):
            ok &= lvl.mask[bsub(ring, diag[..., i], diag[..., j])]
    if spec.family == "homothety":
        return ok
    if spec.family == "full":
        return ok & central_mod_mask(ring, lvl)[diag].all(axis=-1)
    # c_omega: diagonal entries commute with A modulo B
    return ok & cent_pair_mask(ring, spec.A, spec.B)[diag].all(axis=-1)


def in_congruence(g: Mat, spec: CongruenceSpec) -> bool:
    """Single-matrix congruence membership; g must be invertible."""
    if g.ring is not spec.ring or g.n != spec.n:
        raise MatrixError("invalid-pair: matrix does not match spec")
    if not g.is_invertible():
        raise MatrixError("invalid-input: matrix is not invertible")
    return bool(in_congruence_batch(g.entries[None], spec)[0])


# -- GL order and random words ------------------------------------------------

def gl_order_zmod(m: int, n: int) -> int:
    """|GL(n, Z/m)| via CRT and the prime-power lifting formula."""
    total = 1
    mm = m
    p = 2
    while mm > 1:
        if mm % p == 0:
            k = 0
            while mm % p == 0:
                mm //= p
                k += 1
            glp = reduce(lambda acc, i: acc * (p ** n - p ** i),
                         range(n), 1)
            total *= p ** ((k - 1) * n * n) * glp
        p += 1
    return total


def sample_gl_words(ring: FiniteRing, n: int, count: int, length: int,
                    rng, track_inverse=False, diag_fraction=0.25):
    """Random elements of GL(n,R) as words in transvections and unit
    diagonals. Coverage sampler, not uniform; seeded and reproducible.
    """
    units_arr = np.array(ring.unit_indices(), dtype=np.int16)
    pairs = np.array([(i, j) for i in range(n) for j in range(n) if i != j])
    W = np.tile(identity_entries(ring, n), (count, 1, 1))
    Winv = W.copy() if track_inverse else None
    _, unit_inv = ring._unit_data()
    rows = np.arange(count)
    for _ in range(length):
        is_diag = rng.random(count) < diag_fraction
        step = np.tile(identity_entries(ring, n), (count, 1, 1))
        stepinv = step.copy()
        # transvection steps
        tsel = ~is_diag
        k = int(tsel.sum())
        if k:
            pi = pairs[rng.integers(0, len(pairs), k)]
            xi = rng.integers(0, ring.size, k).astype(np.int16)
            step[rows[tsel], pi[:, 0], pi[:, 1]] = xi
            stepinv[rows[tsel], pi[:, 0], pi[:, 1]] = ring.neg[xi]
        # unit-diagonal steps
        k = int(is_diag.sum())
        if k:
            d = units_arr[rng.integers(0, len(units_arr), (k, n))]
            sub = rows[is_diag]
            for t in range(n):
                step[sub, t, t] = d[:, t]
                stepinv[sub, t, t] = unit_inv[d[:, t]]
        W = bmm(ring, W, step)
        if track_inverse:
            Winv = bmm(ring, stepinv, Winv)
    return (W, Winv) if track_inverse else W
