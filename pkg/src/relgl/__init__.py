"""Verifiable computations with relative subgroups of GL(n, R) over
finite rings: ideal quotient calculus, congruence subgroups, relative
elementary subgroups, and exhaustive machine checks of the centraliser
theorems at desk scale."""

from .rings import (FiniteRing, RingElement, RingHom, make_zmod,
                    make_product, product_projections, make_triangular,
                    triangular_e12, make_local_f2, quotient_ring,
                    ring_from_descriptor, verify_ring_axioms,
                    RingConstructionError)
from .ideals import (Ideal, IdealError, IdealCapExceeded, ideal_generated,
                     zero_ideal, unit_ideal, ideal_from_descriptor,
                     ideal_sum, ideal_intersection, ideal_product,
                     symmetrised_product, right_quotient, left_quotient,
                     ideal_quotient, centraliser, relative_centraliser_ring,
                     all_ideals, verify_ideal_identities,
                     verify_level_identity)
from .matrices import (Mat, MatrixError, NotInvertible, CongruenceSpec,
                       transvection, z_gen, y_gen, in_congruence,
                       gl_order_zmod, sample_gl_words, det_batch)
from .reports import (VerificationReport, CapExceeded, EXIT_CODES, PASS,
                      FAIL, HYPOTHESIS_VIOLATED, REFUSED_CAP, INFORMATIONAL)
from .subgroups import (SubgroupSet, closure, normal_closure,
                        elementary_subgroup, relative_elementary,
                        enumerate_gl, congruence_set, principal_congruence,
                        full_congruence, mixed_commutator,
                        commutator_via_lemma2, verify_lemma1, verify_lemma2,
                        verify_lemma3, verify_lemma4, verify_lemma5,
                        verify_lemma6, verify_lemma7, verify_lemma8,
                        k1_data, z_group, explore_lemma9_equation)
from .centralisers import (relative_centraliser, theorem1_predicate,
                           verify_theorem1, verify_theorem2)

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "1.0.0"
