"""Two-sided ideals of a finite ring and the quotient calculus on them.

Ideals carry an explicit member set (as a boolean mask over element
indices) so that sums, intersections, products and the one- and
two-sided ideal quotients reduce to vectorised scans.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product

import numpy as np

from .rings import FiniteRing, RingElement
from .reports import VerificationReport, PASS, FAIL, REFUSED_CAP


class IdealError(ValueError):
    pass


class IdealCapExceeded(RuntimeError):
    pass


class Ideal:
    """A two-sided ideal as an explicit element-index set plus generators."""

    def __init__(self, ring: FiniteRing, members, generators=(), _validated=False):
        self.ring = ring
        self.members = frozenset(int(m) for m in members)
        self.generators = tuple(int(g) for g in generators)
        self.array = np.array(sorted(self.members), dtype=np.int64)
        self.mask = np.zeros(ring.size, dtype=bool)
        self.mask[self.array] = True
        if not _validated:
            self._validate()

    def _validate(self):
        R, A = self.ring, self.array
        if not self.mask[R.zero_index]:
            raise IdealError("ideal must contain 0")
        if not self.mask[R.add[np.ix_(A, A)]].all():
            raise IdealError("not closed under addition")
        if not self.mask[R.mul[:, A]].all() or not self.mask[R.mul[A, :]].all():
            raise IdealError("not closed under two-sided multiplication")

    def __contains__(self, x):
        if isinstance(x, RingElement):
            x = x.index
        return bool(self.mask[x])

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return (isinstance(other, Ideal) and other.ring is self.ring
                and other.members == self.members)

    def __le__(self, other):
        _same_ring(self, other)
        return self.members <= other.members

    def __lt__(self, other):
        _same_ring(self, other)
        return self.members < other.members

    def __hash__(self):
        return hash((id(self.ring), self.members))

    def __repr__(self):
        gens = ",".join(self.ring.names[g] for g in self.generators)
        return f"Ideal(({gens}), size={len(self.members)})"

    def is_whole_ring(self):
        return len(self.members) == self.ring.size

    def label(self):
        if self.generators:
            return "(" + ",".join(self.ring.names[g] for g in self.generators) + ")"
        if len(self) == self.ring.size:
            return "(" + self.ring.names[self.ring.one_index] + ")"
        if len(self) == 1:
            return "(" + self.ring.names[self.ring.zero_index] + ")"
        return "{" + ",".join(self.ring.names[m] for m in self.array) + "}"


def _same_ring(A, B):
    if A.ring is not B.ring:
        raise IdealError("invalid-pair: ideals over different rings")


def ideal_generated(R: FiniteRing, gens) -> Ideal:
    """Smallest two-sided ideal containing gens (closure under +, R*, *R)."""
    gens = [g.index if isinstance(g, RingElement) else int(g) for g in gens]
    mask = np.zeros(R.size, dtype=bool)
    mask[R.zero_index] = True
    mask[gens] = True
    while True:
        cur = np.flatnonzero(mask)
        new = mask.copy()
        new[R.add[np.ix_(cur, cur)].ravel()] = True
        new[R.mul[:, cur].ravel()] = True
        new[R.mul[cur, :].ravel()] = True
        if (new == mask).all():
            break
        mask = new
    return Ideal(R, np.flatnonzero(mask), generators=gens, _validated=True)


def zero_ideal(R: FiniteRing) -> Ideal:
    return Ideal(R, [R.zero_index], generators=(), _validated=True)


def unit_ideal(R: FiniteRing) -> Ideal:
    return ideal_generated(R, [R.one_index])


def ideal_from_descriptor(R: FiniteRing, desc) -> Ideal:
    """Build an ideal from config: {"gens": [indices]} (residues for Z/m)."""
    if isinstance(desc, Ideal):
        return desc
    gens = desc["gens"] if isinstance(desc, dict) else list(desc)
    return ideal_generated(R, gens)


def ideal_sum(A: Ideal, B: Ideal) -> Ideal:
    _same_ring(A, B)
    R = A.ring
    members = np.unique(R.add[np.ix_(A.array, B.array)])
    return Ideal(R, members, generators=A.generators + B.generators,
                 _validated=True)


def ideal_intersection(A: Ideal, B: Ideal) -> Ideal:
    _same_ring(A, B)
    return Ideal(A.ring, np.flatnonzero(A.mask & B.mask), _validated=True)


def ideal_product(A: Ideal, B: Ideal) -> Ideal:
    """Ideal generated by all products ab, a in A, b in B."""
    _same_ring(A, B)
    R = A.ring
    prods = np.unique(R.mul[np.ix_(A.array, B.array)])
    return ideal_generated(R, prods)


def symmetrised_product(A: Ideal, B: Ideal) -> Ideal:
    """A o B = AB + BA, the level of mixed commutator subgroups."""
    return ideal_sum(ideal_product(A, B), ideal_product(B, A))


def right_quotient(B: Ideal, A: Ideal) -> Ideal:
    """B A^{-1} = {x : xA <= B}; a two-sided ideal."""
    _same_ring(A, B)
    R = A.ring
    ok = B.mask[R.mul[:, A.array]].all(axis=1)
    return Ideal(R, np.flatnonzero(ok))


def left_quotient(A: Ideal, B: Ideal) -> Ideal:
    """A^{-1} B = {x : Ax <= B}; a two-sided ideal."""
    _same_ring(A, B)
    R = A.ring
    ok = B.mask[R.mul[A.array, :]].all(axis=0)
    return Ideal(R, np.flatnonzero(ok))


def ideal_quotient(B: Ideal, A: Ideal) -> Ideal:
    """(B:A) = {x : xA <= B and Ax <= B}."""
    _same_ring(A, B)
    R = A.ring
    ok = (B.mask[R.mul[:, A.array]].all(axis=1)
          & B.mask[R.mul[A.array, :]].all(axis=0))
    return Ideal(R, np.flatnonzero(ok))


def centraliser(R: FiniteRing, Z) -> frozenset:
    """{x : xz = zx for all z in Z}; a unital subring of R."""
    return relative_centraliser_ring(R, Z, zero_ideal(R))


def relative_centraliser_ring(R: FiniteRing, Z, B: Ideal) -> frozenset:
    """{x : xz - zx in B for all z in Z}; a unital subring containing B."""
    return frozenset(int(i) for i in np.flatnonzero(
        relative_centraliser_mask(R, Z, B)))


def relative_centraliser_mask(R: FiniteRing, Z, B: Ideal):
    z = np.array(sorted(_indices(Z)), dtype=np.int64)
    if len(z) == 0:
        return np.ones(R.size, dtype=bool)
    comm = R.add[R.mul[:, z], R.neg[R.mul[z, :].T]]  # (size, |Z|): xz - zx
    return B.mask[comm].all(axis=1)


def _indices(Z):
    if isinstance(Z, Ideal):
        return [int(i) for i in Z.array]
    return [z.index if isinstance(z, RingElement) else int(z) for z in Z]


def all_ideals(R: FiniteRing, cap: int = 64):
    """All two-sided ideals obtained by closing subsets of <= 2 generators.

    The bundled rings have all ideals <= 2-generated, so this is the full
    ideal lattice for them. Raises IdealCapExceeded past the cap.
    """
    seen = {}
    zero = zero_ideal(R)
    seen[zero.members] = zero
    for gens in combinations_with_replacement(range(R.size), 2):
        I = ideal_generated(R, set(gens) - {R.zero_index})
        if I.members not in seen:
            seen[I.members] = I
            if len(seen) > cap:
                raise IdealCapExceeded(
                    f"ideal count exceeds cap {cap} on {R.descriptor}")
    return sorted(seen.values(), key=lambda I: (len(I), tuple(I.array)))


def verify_ideal_identities(R: FiniteRing, cap: int = 64) -> VerificationReport:
    """Check the quotient-calculus identities over all ideal pairs/triples.

    Equalities must hold exactly; for the two one-sided inequalities any
    witness of strictness is recorded (a feature, not a failure).
    """
    rep = VerificationReport(claim="ideal-identities", ring=R.descriptor, n=0)
    try:
        ideals = all_ideals(R, cap=cap)
    except IdealCapExceeded as exc:
        rep.verdict = REFUSED_CAP
        rep.details["reason"] = str(exc)
        return rep
    rep.details["ideal_count"] = len(ideals)
    whole = [I for I in ideals if I.is_whole_ring()][0]

    def record_fail(identity, parts, extra=None):
        w = {"identity": identity,
             "ideals": [p.label() for p in parts]}
        if extra:
            w.update(extra)
        rep.witnesses.append(w)

    checked = 0
    for A, B in product(ideals, repeat=2):
        checked += 1
        Q = ideal_quotient(B, A)
        # (B:A) >= B always; A <= B forces (B:A) = R
        if not (B <= Q):
            record_fail("(B:A) >= B", [A, B])
        if A <= B and Q != whole:
            record_fail("A <= B => (B:A) = R", [A, B])
        # (A:A) = R and (A:R) = A
        if ideal_quotient(A, A) != whole:
            record_fail("(A:A) = R", [A])
        if ideal_quotient(A, whole) != A:
            record_fail("(A:R) = A", [A])
        # (B:A) o A <= B
        if not (symmetrised_product(Q, A) <= B):
            record_fail("(B:A)oA <= B", [A, B])

    strict = []
    for A, B, C in product(ideals, repeat=3):
        checked += 1
        if ideal_quotient(A, ideal_sum(B, C)) != ideal_intersection(
                ideal_quotient(A, B), ideal_quotient(A, C)):
            record_fail("(A:(B+C)) = (A:B) n (A:C)", [A, B, C])
        if ideal_quotient(ideal_intersection(A, B), C) != ideal_intersection(
                ideal_quotient(A, C), ideal_quotient(B, C)):
            record_fail("((AnB):C) = (A:C) n (B:C)", [A, B, C])
        # pairwise intersections of the three iterated quotients lie in the third
        t1 = ideal_quotient(ideal_quotient(A, B), C)
        t2 = ideal_quotient(A, symmetrised_product(B, C))
        t3 = ideal_quotient(ideal_quotient(A, C), B)
        for x, y, z, tag in ((t1, t2, t3, "t1&t2<=t3"),
                             (t1, t3, t2, "t1&t3<=t2"),
                             (t2, t3, t1, "t2&t3<=t1")):
            if not (ideal_intersection(x, y) <= z):
                record_fail(f"triple-quotient {tag}", [A, B, C])
        # the two inequalities, with strictness witnesses
        lhs = ideal_quotient(ideal_sum(A, B), C)
        rhs = ideal_sum(ideal_quotient(A, C), ideal_quotient(B, C))
        if not (rhs <= lhs):
            record_fail("((A+B):C) >= (A:C)+(B:C)", [A, B, C])
        elif rhs < lhs:
            strict.append({"identity": "((A+B):C) > (A:C)+(B:C)",
                           "ideals": [A.label(), B.label(), C.label()]})
        lhs = ideal_quotient(A, ideal_intersection(B, C))
        rhs = ideal_sum(ideal_quotient(A, B), ideal_quotient(A, C))
        if not (rhs <= lhs):
            record_fail("(A:(BnC)) >= (A:B)+(A:C)", [A, B, C])
        elif rhs < lhs:
            strict.append({"identity": "(A:(BnC)) > (A:B)+(A:C)",
                           "ideals": [A.label(), B.label(), C.label()]})

    if R.commutative:
        for A, B in product(ideals, repeat=2):
            if not (right_quotient(B, A) == left_quotient(A, B) == ideal_quotient(B, A)):
                record_fail("commutative: one-sided quotients agree", [A, B])

    rep.checked_count = checked
    rep.details["strictness_witnesses"] = strict
    rep.verdict = FAIL if rep.witnesses else PASS
    return rep


def verify_level_identity(R: FiniteRing, A: Ideal, B: Ideal) -> VerificationReport:
    """((B:A)A : A) = (B:A), the level computation behind the second theorem."""
    rep = VerificationReport(claim="level-identity", ring=R.descriptor, n=0,
                             ideals={"A": A.label(), "B": B.label()})
    Q = ideal_quotient(B, A)
    lhs = ideal_quotient(ideal_product(Q, A), A)
    rep.checked_count = 1
    if lhs == Q:
        rep.verdict = PASS
    else:
        rep.verdict = FAIL
        rep.witnesses.append({
            "identity": "((B:A)A:A) = (B:A)",
            "lhs": sorted(int(i) for i in lhs.array),
            "rhs": sorted(int(i) for i in Q.array)})
    return rep
