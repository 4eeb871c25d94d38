import numpy as np
import pytest

from relgl.rings import make_zmod, make_triangular, triangular_e12
from relgl.ideals import (ideal_generated, zero_ideal, unit_ideal,
                          symmetrised_product)
from relgl.matrices import Mat, batch_keys, det_batch, identity_entries
from relgl.reports import CapExceeded
from relgl.subgroups import (additive_generators, closure, normal_closure,
                             elementary_subgroup, relative_elementary,
                             enumerate_gl, count_invertible_by_scan,
                             congruence_set, principal_congruence,
                             full_congruence, mixed_commutator,
                             commutator_via_lemma2, trivial_subgroup,
                             is_normalised_by, verify_lemma1, verify_lemma3,
                             verify_lemma7, verify_lemma8, k1_data, z_group,
                             explore_lemma9_equation, E_rel)
from relgl.matrices import CongruenceSpec, transvection


def test_additive_generators():
    R = make_zmod(12)
    assert additive_generators(R) == [1]
    I = ideal_generated(R, [4])
    assert additive_generators(R, I.array) == [4]
    T = make_triangular(2)
    gens = additive_generators(T)
    assert len(gens) == 3  # one per matrix entry position


def test_closure_tiny():
    R = make_zmod(5)
    t = transvection(R, 2, 1, 2, 1)
    S = closure([t])
    assert len(S) == 5  # cyclic of order 5
    assert S.verify_group(full=True)


def test_closure_cap_refusal():
    R = make_zmod(4)
    with pytest.raises(CapExceeded):
        closure([transvection(R, 3, 1, 2, 1), transvection(R, 3, 2, 3, 1),
                 transvection(R, 3, 3, 1, 1)], cap=10)


def test_gl_enumeration_cross_checked():
    # enumerate_gl internally asserts the lifting formula and (when
    # feasible) a brute-force scan; sizes pinned here again
    assert len(enumerate_gl(make_zmod(2), 3)) == 168
    assert len(enumerate_gl(make_zmod(4), 3)) == 86016
    assert count_invertible_by_scan(make_zmod(3), 2) == 48


def test_elementary_is_determinant_one():
    R = make_zmod(4)
    E = elementary_subgroup(R, 3, unit_ideal(R))
    assert len(E) == 43008
    assert (det_batch(R, E.elems) == R.one_index).all()


def test_relative_elementary_sizes():
    R = make_zmod(4)
    assert len(relative_elementary(R, 3, ideal_generated(R, [2]))) == 256
    assert len(relative_elementary(R, 3, zero_ideal(R))) == 1
    R8 = make_zmod(8)
    assert len(relative_elementary(R8, 3, ideal_generated(R8, [2]))) == 65536


def test_normal_closure_basics():
    R = make_zmod(4)
    G = enumerate_gl(R, 3)
    # normal closure of the trivial group is trivial
    t = trivial_subgroup(R, 3)
    eye = Mat(R, identity_entries(R, 3))
    assert len(normal_closure([eye], G)) == 1
    # normal closure of a central element is the cyclic group it generates
    c = Mat(R, np.diag([3, 3, 3]).astype(np.int16))
    nc = normal_closure([c], G)
    assert len(nc) == 2


def test_lemma1_instances():
    R = make_zmod(4)
    rep = verify_lemma1(R, 3, ideal_generated(R, [2]))
    assert rep.verdict == "pass"
    T = make_triangular(2)
    rep = verify_lemma1(T, 3, ideal_generated(T, [triangular_e12(T)]))
    assert rep.verdict == "pass"
    assert rep.details["z_closure_size"] == 512


def test_congruence_set_sizes():
    R = make_zmod(4)
    I = ideal_generated(R, [2])
    assert len(principal_congruence(R, 3, I)) == 512
    assert len(full_congruence(R, 3, I)) == 512
    assert len(principal_congruence(R, 3, zero_ideal(R))) == 1
    S = principal_congruence(R, 3, I)
    assert S.verify_group(seed=1)


def test_mixed_commutator_small_oracle():
    # [G, G] for G = GL(2, Z/2) ~ S3 is A3, order 3
    R = make_zmod(2)
    G = enumerate_gl(R, 2)
    assert len(G) == 6
    D = mixed_commutator(G, G)
    assert len(D) == 3


def test_mixed_commutator_generator_mode_agrees():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    EA = E_rel(R, 3, A)
    G = enumerate_gl(R, 3)
    full_pairs = mixed_commutator(EA, G, pair_cap=1 << 26)
    gen_mode = mixed_commutator(EA, G, pair_cap=1)
    assert full_pairs.same_set(gen_mode)


def test_lemma2_constructions_match_over_z8():
    R = make_zmod(8)
    A = ideal_generated(R, [2])
    full = commutator_via_lemma2(R, 3, A, A)
    single = commutator_via_lemma2(R, 3, A, A, single_pair=True)
    direct = mixed_commutator(E_rel(R, 3, A), E_rel(R, 3, A))
    assert full.same_set(single) and full.same_set(direct)
    assert len(full) == 256


def test_lemma3_records_strictness():
    R = make_zmod(8)
    A = ideal_generated(R, [2])
    rep = verify_lemma3(R, 3, A, A)
    assert rep.verdict == "pass"
    assert rep.details["outer_bound_strict"] is True


def test_lemma7_requires_comaximality():
    R = make_zmod(8)
    A = ideal_generated(R, [2])
    rep = verify_lemma7(R, 3, A, A)  # (2)+(2) != R
    assert rep.verdict == "hypothesis-violated"
    R6 = make_zmod(6)
    rep = verify_lemma7(R6, 3, ideal_generated(R6, [2]),
                        ideal_generated(R6, [3]))
    assert rep.verdict == "pass"


def test_lemma8_noncommutative_guard():
    T = make_triangular(2)
    J = ideal_generated(T, [triangular_e12(T)])
    rep = verify_lemma8(T, 3, J, J)
    assert rep.verdict == "hypothesis-violated"


def test_is_normalised_by():
    R = make_zmod(4)
    G = enumerate_gl(R, 3)
    E = E_rel(R, 3, ideal_generated(R, [2]))
    gh = np.stack([g for (_, g, _) in G.gens])
    ghi = np.stack([gi for (_, _, gi) in G.gens])
    assert is_normalised_by(E, gh, ghi)
    # a non-normal subgroup: the cyclic group of one transvection
    t = transvection(R, 3, 1, 2, 1)
    C = closure([t])
    assert not is_normalised_by(C, gh, ghi)


def test_k1_quotient():
    R = make_zmod(4)
    rep = k1_data(R, 3, ideal_generated(R, [2]))
    assert rep.verdict == "pass"
    assert rep.details["quotient_order"] == 2
    assert rep.details["quotient_abelian"] is True


def test_z_group_centre():
    R = make_zmod(4)
    Z = z_group(R, 3, zero_ideal(R))
    assert len(Z) == 2
    keys = set(Z.key_set)
    eye = identity_entries(R, 3)
    scal = np.diag([3, 3, 3]).astype(np.int16)
    assert keys == set(batch_keys(R, np.stack([eye, scal])).tolist())


def test_explore_lemma9_is_informational():
    R = make_zmod(4)
    A = ideal_generated(R, [2])
    rep = explore_lemma9_equation(R, 3, A, A)
    assert rep.verdict == "informational"
    assert "equation_holds" in rep.details


def test_subgroupset_membership_api():
    R = make_zmod(4)
    E = E_rel(R, 3, ideal_generated(R, [2]))
    t = transvection(R, 3, 1, 2, 2)
    assert t in E
    assert transvection(R, 3, 1, 2, 1) not in E
    assert E.subset_of(enumerate_gl(R, 3))
