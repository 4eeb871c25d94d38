import numpy as np

from relgl.rings import make_zmod, make_triangular
from relgl.ideals import (ideal_generated, zero_ideal, unit_ideal,
                          ideal_quotient, all_ideals)
from relgl.matrices import (Mat, identity_entries, transvection,
                            sample_gl_words, CongruenceSpec,
                            in_congruence_batch)
from relgl.subgroups import (SubgroupSet, enumerate_gl, E_rel, E_sub,
                             trivial_subgroup, full_congruence)
from relgl.centralisers import (theorem1_predicate, theorem1_predicate_batch,
                                theorem1_predicate_direct,
                                relative_centraliser, verify_theorem1,
                                verify_theorem2)


def test_predicate_easy_cases():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    B = zero_ideal(R)
    eye = Mat(R, identity_entries(R, 3))
    assert theorem1_predicate(eye, A, B)
    # a unit scalar commutes with everything over a commutative ring
    scal = Mat(R, np.diag([3, 3, 3]).astype(np.int16))
    assert theorem1_predicate(scal, A, B)
    # t12(1) does not centralise E(3,(2)) mod (0): [t12(1), t21(2)] != e
    assert not theorem1_predicate(transvection(R, 3, 1, 2, 1), A, B)
    # ...but it does mod B = (2)
    assert theorem1_predicate(transvection(R, 3, 1, 2, 1), A,
                              ideal_generated(R, [2]))


def test_predicate_matches_direct_oracle():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    B = zero_ideal(R)
    rng = np.random.default_rng(11)
    W = sample_gl_words(R, 3, 300, 16, rng)
    fast = theorem1_predicate_batch(R, 3, W, A, B)
    slow = np.array([theorem1_predicate_direct(Mat(R, w), A, B) for w in W])
    assert np.array_equal(fast, slow)


def test_predicate_matches_direct_oracle_noncommutative():
    T = make_triangular(2)
    ids = all_ideals(T)
    A = next(I for I in ids if 1 < len(I) < T.size)
    B = zero_ideal(T)
    rng = np.random.default_rng(13)
    W = sample_gl_words(T, 2, 150, 12, rng)
    fast = theorem1_predicate_batch(T, 2, W, A, B)
    slow = np.array([theorem1_predicate_direct(Mat(T, w), A, B) for w in W])
    assert np.array_equal(fast, slow)


def test_predicate_set_is_a_subgroup():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    B = zero_ideal(R)
    G = enumerate_gl(R, 3)
    pred = theorem1_predicate_batch(R, 3, G.elems, A, B)
    idx = np.flatnonzero(pred)
    S = SubgroupSet(R, 3, G.elems[idx], G.invs[idx])
    assert S.verify_group(seed=3)


def test_relative_centraliser_degenerate_cases():
    R = make_zmod(2)
    G = enumerate_gl(R, 2)
    triv = trivial_subgroup(R, 2)
    # F trivial: every commutator is e, so everything centralises
    assert len(relative_centraliser(G, triv, triv)) == len(G)
    # H = G: membership is automatic
    assert len(relative_centraliser(G, G, G)) == len(G)
    # H trivial: the honest centraliser of G in G; for GL(2,Z/2) ~ S3
    # the centre is trivial
    assert len(relative_centraliser(G, G, triv)) == 1


def test_relative_centraliser_generator_mode_agrees():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    G = enumerate_gl(R, 3)
    E = E_rel(R, 3, A)
    H = full_congruence(R, 3, A)  # normal in GL, so the shortcut is exact
    full = relative_centraliser(G, E, H)
    gens = relative_centraliser(G, E, H, use_generators=True)
    assert full.same_set(gens)


def test_theorem1_exhaustive_small():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    B = ideal_generated(R, [2])
    rep = verify_theorem1(R, 3, A, B)
    assert rep.verdict == "pass"
    assert rep.checked_count == 86016
    # level (B:A) = (2:2) = R, so the congruence set is all of GL
    assert rep.details["level"] == "(1)"
    assert rep.details["centraliser_size"] == 86016


def test_theorem1_centraliser_matches_congruence_set():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    B = zero_ideal(R)
    rep = verify_theorem1(R, 3, A, B)
    assert rep.verdict == "pass"
    spec = CongruenceSpec(R, 3, "c_omega", A=A, B=B)
    G = enumerate_gl(R, 3)
    size = int(in_congruence_batch(G.elems, spec).sum())
    assert rep.details["centraliser_size"] == size


def test_theorem1_sampled_mode_noncommutative():
    T = make_triangular(2)
    ids = all_ideals(T)
    A = next(I for I in ids if 1 < len(I) < T.size)
    rep = verify_theorem1(T, 3, A, zero_ideal(T), mode="sample",
                          sample_count=20_000, seed=0)
    assert rep.verdict == "pass"
    assert rep.checked_count == 20_000
    rep2 = verify_theorem1(T, 3, A, zero_ideal(T), mode="sample",
                           sample_count=20_000, seed=0)
    assert rep2.details == rep.details  # seeded determinism


def test_theorem2_smallest_instance():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    B = zero_ideal(R)
    rep = verify_theorem2(R, 3, A, B)
    assert rep.verdict == "pass"
    assert rep.details["Q"] == ideal_quotient(B, A).label()
    assert rep.details["sizes"]["centraliser"] == \
        rep.details["sizes"]["C(n,R,Q)"]


def test_theorem2_rejects_noncommutative():
    T = make_triangular(2)
    rep = verify_theorem2(T, 3, zero_ideal(T), zero_ideal(T))
    assert rep.verdict == "hypothesis-violated"
