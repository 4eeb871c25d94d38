"""Finite associative unital rings, represented by explicit operation tables.

Elements are indices 0..size-1; addition and multiplication are numpy
lookup tables so that matrix arithmetic and exhaustive scans vectorise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TABLE_SIZE_LIMIT = 4096


class RingConstructionError(ValueError):
    """Raised for invalid constructor parameters or broken tables."""


class FiniteRing:
    """A finite ring with 1 on indices 0..size-1, with full lookup tables.

    Immutable after construction; safe to share between workers.
    """

    def __init__(self, add, mul, zero, one, names=None, descriptor=None):
        add = np.ascontiguousarray(np.asarray(add, dtype=np.int16))
        mul = np.ascontiguousarray(np.asarray(mul, dtype=np.int16))
        size = add.shape[0]
        if size > TABLE_SIZE_LIMIT:
            raise RingConstructionError(
                f"ring size {size} exceeds table limit {TABLE_SIZE_LIMIT}")
        if add.shape != (size, size) or mul.shape != (size, size):
            raise RingConstructionError("tables must be square and same size")
        self.size = size
        self.add = add
        self.mul = mul
        self.zero_index = int(zero)
        self.one_index = int(one)
        self.names = list(names) if names is not None else [str(i) for i in range(size)]
        self.descriptor = descriptor or {"kind": "custom", "size": size}

        idx = np.arange(size)
        if not (add[self.zero_index] == idx).all() or not (add[:, self.zero_index] == idx).all():
            raise RingConstructionError("zero_index is not an additive identity")
        if not (mul[self.one_index] == idx).all() or not (mul[:, self.one_index] == idx).all():
            raise RingConstructionError("one_index is not a two-sided identity")
        # additive inverses must exist and be unique
        zero_hits = add == self.zero_index
        if not (zero_hits.sum(axis=1) == 1).all():
            raise RingConstructionError("additive inverses not unique")
        self.neg = np.argmax(zero_hits, axis=1).astype(np.int16)
        # computed, never supplied
        self.commutative = bool((mul == mul.T).all())
        self._unit_cache = None

        add.setflags(write=False)
        mul.setflags(write=False)
        self.neg.setflags(write=False)

    # -- scalar helpers ---------------------------------------------------
    def add_e(self, x, y):
        return int(self.add[x, y])

    def mul_e(self, x, y):
        return int(self.mul[x, y])

    def sub_e(self, x, y):
        return int(self.add[x, self.neg[y]])

    def neg_e(self, x):
        return int(self.neg[x])

    def element(self, index):
        return RingElement(self, int(index))

    def elements(self):
        return [RingElement(self, i) for i in range(self.size)]

    # -- units ------------------------------------------------------------
    def _unit_data(self):
        if self._unit_cache is None:
            right = self.mul == self.one_index
            both = right & right.T
            is_unit = both.any(axis=1)
            inv = np.argmax(both, axis=1).astype(np.int16)
            self._unit_cache = (is_unit, inv)
        return self._unit_cache

    @property
    def unit_mask(self):
        return self._unit_data()[0]

    def unit_indices(self):
        return [int(i) for i in np.flatnonzero(self.unit_mask)]

    def is_unit(self, x):
        return bool(self.unit_mask[x])

    def inverse_of(self, x):
        is_unit, inv = self._unit_data()
        if not is_unit[x]:
            raise RingConstructionError(f"element {self.names[x]} is not a unit")
        return int(inv[x])

    def __repr__(self):
        return f"FiniteRing({self.descriptor}, size={self.size})"

    def __len__(self):
        return self.size


@dataclass(frozen=True)
class RingElement:
    """Thin wrapper giving operator syntax over a ring's index arithmetic."""

    ring: FiniteRing
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.ring.size:
            raise RingConstructionError(f"index {self.index} out of range")

    def _check(self, other):
        if not isinstance(other, RingElement) or other.ring is not self.ring:
            raise RingConstructionError("elements from different rings")

    def __add__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.add_e(self.index, other.index))

    def __sub__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.sub_e(self.index, other.index))

    def __mul__(self, other):
        self._check(other)
        return RingElement(self.ring, self.ring.mul_e(self.index, other.index))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg_e(self.index))

    def __repr__(self):
        return self.ring.names[self.index]


@dataclass(frozen=True)
class RingHom:
    """A unital ring homomorphism given by a total index map."""

    source: FiniteRing
    target: FiniteRing
    image_map: tuple

    def __call__(self, x):
        if isinstance(x, RingElement):
            return RingElement(self.target, self.image_map[x.index])
        return self.image_map[x]

    def is_valid(self):
        f = np.asarray(self.image_map)
        S, T = self.source, self.target
        if f[S.zero_index] != T.zero_index or f[S.one_index] != T.one_index:
            return False
        i = np.arange(S.size)[:, None]
        j = np.arange(S.size)[None, :]
        if not (T.add[f[i], f[j]] == f[S.add]).all():
            return False
        return bool((T.mul[f[i], f[j]] == f[S.mul]).all())


# -- constructors ----------------------------------------------------------

@lru_cache(maxsize=None)
def make_zmod(m: int) -> FiniteRing:
    """The ring Z/m with residues 0..m-1 as indices."""
    if m < 2:
        raise RingConstructionError("make_zmod requires m >= 2")
    idx = np.arange(m)
    add = (idx[:, None] + idx[None, :]) % m
    mul = (idx[:, None] * idx[None, :]) % m
    return FiniteRing(add, mul, 0, 1, descriptor={"kind": "zmod", "m": m})


def make_product(R: FiniteRing, S: FiniteRing) -> FiniteRing:
    """Componentwise product ring; index of (r, s) is r*|S| + s."""
    size = R.size * S.size
    if size > TABLE_SIZE_LIMIT:
        raise RingConstructionError(f"product ring size {size} too large")
    r1, s1 = np.divmod(np.arange(size), S.size)
    r = r1[:, None]
    s = s1[:, None]
    r2 = r1[None, :]
    s2 = s1[None, :]
    add = R.add[r, r2].astype(np.int64) * S.size + S.add[s, s2]
    mul = R.mul[r, r2].astype(np.int64) * S.size + S.mul[s, s2]
    names = [f"({R.names[a]},{S.names[b]})" for a, b in zip(r1, s1)]
    return FiniteRing(
        add, mul,
        R.zero_index * S.size + S.zero_index,
        R.one_index * S.size + S.one_index,
        names=names,
        descriptor={"kind": "product", "factors": [R.descriptor, S.descriptor]})


def product_projections(P: FiniteRing, R: FiniteRing, S: FiniteRing):
    """The two coordinate projections of make_product(R, S)."""
    r, s = np.divmod(np.arange(P.size), S.size)
    return (RingHom(P, R, tuple(int(x) for x in r)),
            RingHom(P, S, tuple(int(x) for x in s)))


@lru_cache(maxsize=None)
def make_triangular(m: int) -> FiniteRing:
    """2x2 upper-triangular matrices over Z/m; index = a + m*b + m^2*c
    for the matrix [[a, b], [0, c]] (entry-major order)."""
    if m < 2:
        raise RingConstructionError("make_triangular requires m >= 2")
    size = m ** 3
    if size > TABLE_SIZE_LIMIT:
        raise RingConstructionError(f"triangular ring size {size} too large")
    idx = np.arange(size)
    a, rest = idx % m, idx // m
    b, c = rest % m, rest // m

    def pack(aa, bb, cc):
        return (aa % m) + m * (bb % m) + m * m * (cc % m)

    A1, A2 = a[:, None], a[None, :]
    B1, B2 = b[:, None], b[None, :]
    C1, C2 = c[:, None], c[None, :]
    add = pack(A1 + A2, B1 + B2, C1 + C2)
    mul = pack(A1 * A2, A1 * B2 + B1 * C2, C1 * C2)
    names = [f"[[{ai},{bi}],[0,{ci}]]" for ai, bi, ci in zip(a, b, c)]
    return FiniteRing(add, mul, 0, pack(1, 0, 1), names=names,
                      descriptor={"kind": "triangular", "m": m})


def triangular_e12(R: FiniteRing) -> int:
    """Index of the matrix unit e12 in a make_triangular ring."""
    m = R.descriptor["m"]
    return m


@lru_cache(maxsize=None)
def make_local_f2() -> FiniteRing:
    """F2[x,y]/(x^2, xy, yx, y^2): local commutative ring of size 8.

    Index = c1 + 2*cx + 4*cy for the element c1 + cx*x + cy*y.
    """
    size = 8
    idx = np.arange(size)
    c1, cx, cy = idx % 2, (idx // 2) % 2, idx // 4

    def pack(u, v, w):
        return (u % 2) + 2 * (v % 2) + 4 * (w % 2)

    U1, U2 = c1[:, None], c1[None, :]
    V1, V2 = cx[:, None], cx[None, :]
    W1, W2 = cy[:, None], cy[None, :]
    add = pack(U1 + U2, V1 + V2, W1 + W2)
    # x^2 = xy = yx = y^2 = 0, so only the constant-times terms survive
    mul = pack(U1 * U2, U1 * V2 + V1 * U2, U1 * W2 + W1 * U2)
    names = []
    for u, v, w in zip(c1, cx, cy):
        terms = [t for t, on in (("1", u), ("x", v), ("y", w)) if on]
        names.append("+".join(terms) if terms else "0")
    return FiniteRing(add, mul, 0, 1, names=names,
                      descriptor={"kind": "local-f2"})


def units(R: FiniteRing):
    """All elements with a two-sided inverse, as RingElements."""
    return [RingElement(R, i) for i in R.unit_indices()]


def quotient_ring(R: FiniteRing, ideal_members):
    """Quotient R/I with smallest-index coset representatives.

    Returns (quotient ring, projection hom). ideal_members may be an
    Ideal or any collection of element indices; two-sidedness is checked.
    """
    members = getattr(ideal_members, "members", ideal_members)
    I = np.array(sorted(int(i) for i in members), dtype=np.int64)
    mask = np.zeros(R.size, dtype=bool)
    mask[I] = True
    if not mask[R.zero_index]:
        raise RingConstructionError("invalid-ideal: missing 0")
    if not mask[R.add[np.ix_(I, I)]].all():
        raise RingConstructionError("invalid-ideal: not additively closed")
    if not mask[R.mul[:, I]].all() or not mask[R.mul[I, :]].all():
        raise RingConstructionError("invalid-ideal: not two-sided")

    rep = R.add[:, I].min(axis=1)  # smallest index in each coset
    reps = np.unique(rep)
    qsize = len(reps)
    if qsize * len(I) != R.size:
        raise RingConstructionError("invalid-ideal: cosets do not partition R")
    to_q = np.full(R.size, -1, dtype=np.int64)
    to_q[reps] = np.arange(qsize)
    proj = to_q[rep]  # source index -> quotient index
    qadd = proj[R.add[np.ix_(reps, reps)]]
    qmul = proj[R.mul[np.ix_(reps, reps)]]
    names = [R.names[r] for r in reps]
    Q = FiniteRing(qadd, qmul, proj[R.zero_index], proj[R.one_index],
                   names=names,
                   descriptor={"kind": "quotient", "of": R.descriptor,
                               "ideal": [int(i) for i in I]})
    hom = RingHom(R, Q, tuple(int(x) for x in proj))
    return Q, hom


def ring_from_descriptor(desc) -> FiniteRing:
    """Build a ring from a config descriptor dict."""
    kind = desc.get("kind")
    if kind == "zmod":
        return make_zmod(int(desc["m"]))
    if kind == "triangular":
        return make_triangular(int(desc["m"]))
    if kind == "local-f2":
        return make_local_f2()
    if kind == "product":
        factors = [ring_from_descriptor(d) for d in desc["factors"]]
        if len(factors) < 2:
            raise RingConstructionError("product needs at least two factors")
        ring = factors[0]
        for f in factors[1:]:
            ring = make_product(ring, f)
        return ring
    raise RingConstructionError(f"unknown ring kind {kind!r}")


def verify_ring_axioms(R: FiniteRing, exhaustive_limit=512, samples=20000, seed=0):
    """Check associativity, distributivity and the additive group axioms.

    Exhaustive over all triples when size <= exhaustive_limit, sampled
    above. Returns a list of violation descriptions (empty = clean).
    """
    bad = []
    s = R.size
    add, mul = R.add, R.mul
    if s <= exhaustive_limit:
        a = np.arange(s)
        # chunk over the first coordinate to bound memory
        for a0 in range(s):
            b = a[:, None]
            c = a[None, :]
            if not (add[add[a0, b], c] == add[a0, add[b, c]]).all():
                bad.append(f"add not associative at a={a0}")
            if not (mul[mul[a0, b], c] == mul[a0, mul[b, c]]).all():
                bad.append(f"mul not associative at a={a0}")
            if not (mul[a0, add[b, c]] == add[mul[a0, b], mul[a0, c]]).all():
                bad.append(f"left distributivity fails at a={a0}")
            if not (mul[add[b, c], a0] == add[mul[b, a0], mul[c, a0]]).all():
                bad.append(f"right distributivity fails at a={a0}")
        if not (add == add.T).all():
            bad.append("addition not commutative")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, s, size=(3, samples))
        if not (add[add[a, b], c] == add[a, add[b, c]]).all():
            bad.append("add associativity (sampled)")
        if not (mul[mul[a, b], c] == mul[a, mul[b, c]]).all():
            bad.append("mul associativity (sampled)")
        if not (mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all():
            bad.append("left distributivity (sampled)")
        if not (mul[add[a, b], c] == add[mul[a, c], mul[b, c]]).all():
            bad.append("right distributivity (sampled)")
        if not (add[a, b] == add[b, a]).all():
            bad.append("add commutativity (sampled)")
    return bad
