"""The bundled acceptance suite: one callable per criterion, each with a
wall-clock budget where one is stated, runnable via the CLI or pytest."""

from __future__ import annotations

import time

import numpy as np

from .rings import make_zmod, make_triangular, make_local_f2, triangular_e12
from .ideals import (ideal_generated, zero_ideal, unit_ideal, all_ideals,
                     symmetrised_product, verify_ideal_identities,
                     verify_level_identity)
from .matrices import CongruenceSpec, batch_keys, det_batch, in_congruence_batch
from .reports import PASS, FAIL, EXIT_CODES
from .subgroups import (E_rel, elementary_subgroup, enumerate_gl, k1_data,
                        principal_congruence, verify_lemma1, verify_lemma2,
                        verify_lemma3, verify_lemma4, verify_lemma5,
                        verify_lemma6, verify_lemma7, verify_lemma8, z_group)
from .centralisers import verify_theorem1, verify_theorem2


def _z4_ideals():
    R = make_zmod(4)
    return R, {"(0)": zero_ideal(R), "(2)": ideal_generated(R, [2]),
               "(1)": unit_ideal(R)}


def _all_pass(reports):
    bad = [r for r in reports if r.verdict != PASS]
    return (PASS if not bad else FAIL,
            {"reports": [r.to_dict(include_timing=False) for r in bad]}
            if bad else {})


def criterion_1(workers=1, seed=0):
    """Theorem 1 exhaustive over Z/4, n=3, all 9 ordered ideal pairs."""
    R, ideals = _z4_ideals()
    reports = []
    for A in ideals.values():
        for B in ideals.values():
            reports.append(verify_theorem1(R, 3, A, B, workers=workers))
    verdict, details = _all_pass(reports)
    details["pairs"] = len(reports)
    details["checked"] = sum(r.checked_count for r in reports)
    details["centraliser_keys"] = {
        (r.ideals["A"], r.ideals["B"]): r.extras.get("centraliser_keys")
        for r in reports}
    return verdict, details


def criterion_2(workers=1, seed=0):
    """Theorem 1 sampled on the noncommutative triangular ring."""
    T = make_triangular(2)
    A = ideal_generated(T, [triangular_e12(T)])
    rep = verify_theorem1(T, 3, A, zero_ideal(T), mode="sample",
                          sample_count=100_000, seed=seed, workers=workers)
    return rep.verdict, {"checked": rep.checked_count,
                         "predicate_true": rep.details.get("predicate_true")}


def criterion_3(workers=1, seed=0):
    """Theorem 2 exhaustive on three Z/4 ideal pairs."""
    R, ideals = _z4_ideals()
    reports = [verify_theorem2(R, 3, ideals[a], ideals[b],
                               seed=seed, workers=workers)
               for a, b in [("(2)", "(0)"), ("(2)", "(2)"), ("(1)", "(2)")]]
    verdict, details = _all_pass(reports)
    details["sizes"] = [r.details.get("sizes") for r in reports]
    return verdict, details


def criterion_4(workers=1, seed=0):
    """Lemma 1 set equalities on Z/4 and Z/8."""
    reports = []
    R4 = make_zmod(4)
    reports.append(verify_lemma1(R4, 3, ideal_generated(R4, [2])))
    R8 = make_zmod(8)
    reports.append(verify_lemma1(R8, 3, ideal_generated(R8, [2])))
    reports.append(verify_lemma1(R8, 3, ideal_generated(R8, [4])))
    verdict, details = _all_pass(reports)
    details["sizes"] = [r.details.get("z_closure_size") for r in reports]
    return verdict, details


def criterion_5(workers=1, seed=0):
    """Lemma 2: three constructions, one subgroup (Z/4 and Z/8)."""
    reports = []
    for m in (4, 8):
        R = make_zmod(m)
        A = ideal_generated(R, [2])
        reports.append(verify_lemma2(R, 3, A, A))
    verdict, details = _all_pass(reports)
    details["sizes"] = [r.details.get("sizes") for r in reports]
    return verdict, details


def criterion_6(workers=1, seed=0):
    """Lemma 3 inclusion chain on Z/8, with the outer relation recorded."""
    R = make_zmod(8)
    A = ideal_generated(R, [2])
    rep = verify_lemma3(R, 3, A, A)
    return rep.verdict, {"sizes": rep.details.get("sizes"),
                         "outer_bound_strict":
                         rep.details.get("outer_bound_strict")}


def criterion_7(workers=1, seed=0):
    """Lemmas 4-6 on Z/8, all parameter tuples, zero failures."""
    R = make_zmod(8)
    A = ideal_generated(R, [2])
    reports = [verify_lemma4(R, 3, A, A, x_samples=100, seed=seed),
               verify_lemma5(R, 3, A, A),
               verify_lemma6(R, 3, A, A)]
    verdict, details = _all_pass(reports)
    details["checked"] = [r.checked_count for r in reports]
    details["lemma5_literal_divergences"] = reports[1].details.get(
        "literal_repeated_factor_divergences")
    return verdict, details


def criterion_8(workers=1, seed=0):
    """Lemma 7 on comaximal pairs with trivial symmetrised product."""
    reports, sizes = [], []
    for m, a, b in [(6, 2, 3), (12, 3, 4)]:
        R = make_zmod(m)
        A, B = ideal_generated(R, [a]), ideal_generated(R, [b])
        assert len(symmetrised_product(A, B)) == 1
        rep = verify_lemma7(R, 3, A, B)
        reports.append(rep)
        sizes.append(rep.details.get("sizes"))
    ok = all(r.verdict == PASS and
             r.details["sizes"]["[E(n,A),E(n,B)]"] == 1 for r in reports)
    return (PASS if ok else FAIL), {"sizes": sizes}


def criterion_9(workers=1, seed=0):
    """Lemma 8 on Z/4 with B = (2) and B = R."""
    R, ideals = _z4_ideals()
    reports = [verify_lemma8(R, 3, ideals["(2)"], ideals["(2)"]),
               verify_lemma8(R, 3, ideals["(2)"], ideals["(1)"])]
    verdict, details = _all_pass(reports)
    details["sizes"] = [r.details.get("sizes") for r in reports]
    return verdict, details


def criterion_10(workers=1, seed=0):
    """Ideal-identity suite over four rings, with a strictness witness
    required in the local F2 ring."""
    reports = [verify_ideal_identities(R) for R in
               (make_zmod(8), make_zmod(12), make_triangular(2),
                make_local_f2())]
    verdict, details = _all_pass(reports)
    local = reports[3]
    hits = [w for w in local.details.get("strictness_witnesses", [])
            if w["identity"].startswith("(A:(BnC))")]
    if not hits:
        verdict = FAIL
        details["missing"] = "no (A:(BnC)) strictness witness in local F2 ring"
    details["local_f2_strict_count"] = len(hits)
    return verdict, details


def criterion_11(workers=1, seed=0):
    """Level identity ((B:A)A : A) = (B:A) over all pairs of Z/8, Z/12."""
    reports = []
    for m in (8, 12):
        R = make_zmod(m)
        ideals = all_ideals(R)
        for A in ideals:
            for B in ideals:
                reports.append(verify_level_identity(R, A, B))
    verdict, details = _all_pass(reports)
    details["pairs"] = len(reports)
    return verdict, details


def criterion_12(workers=1, seed=0):
    """K1 orders against the determinant oracle on Z/4."""
    R, ideals = _z4_ideals()
    G = enumerate_gl(R, 3)
    det1 = det_batch(R, G.elems) == R.one_index
    E_whole = elementary_subgroup(R, 3, ideals["(1)"])
    checks = {
        "index_2": len(G) // len(E_whole) == 2,
        "E_is_det1": set(G.keys[det1].tolist()) == set(E_whole.key_set),
    }
    GLI = principal_congruence(R, 3, ideals["(2)"])
    det1_i = det_batch(R, GLI.elems) == R.one_index
    E_rel2 = E_rel(R, 3, ideals["(2)"])
    checks["Erel_is_det1_part"] = (
        set(GLI.keys[det1_i].tolist()) == set(E_rel2.key_set))
    k1_whole = k1_data(R, 3, ideals["(1)"])
    k1_two = k1_data(R, 3, ideals["(2)"])
    checks["k1_whole"] = (k1_whole.verdict == PASS
                          and k1_whole.details["quotient_order"] == 2)
    checks["k1_two"] = (k1_two.verdict == PASS
                        and k1_two.details["quotient_order"] == 2
                        and k1_two.details["order_gl"] == 512)
    return (PASS if all(checks.values()) else FAIL), {"checks": checks}


def criterion_13(workers=1, seed=0):
    """Z-group sanity: Z(3,Z/4,(0)) is the centre {e, 3e} and z_group
    is inside the full congruence subgroup for every ideal."""
    R, ideals = _z4_ideals()
    Z0 = z_group(R, 3, ideals["(0)"])
    centre = np.tile(np.eye(3, dtype=np.int16), (2, 1, 1))
    centre[1][np.diag_indices(3)] = 3
    expected = set(batch_keys(R, centre).tolist())
    checks = {"centre": set(Z0.key_set) == expected and len(Z0) == 2}
    for name, I in ideals.items():
        ZI = z_group(R, 3, I)
        spec = CongruenceSpec(R, 3, "full", I=I)
        inside = bool(in_congruence_batch(ZI.elems, spec).all())
        checks[f"Z_in_C_{name}"] = inside
    return (PASS if all(checks.values()) else FAIL), {"checks": checks}


def criterion_14(workers=1, seed=0):
    """Determinism: criterion 1 with 1 vs 8 workers gives identical
    verdicts and identical centraliser sets; criterion 2 with two seeds
    gives identical verdicts."""
    v1, d1 = criterion_1(workers=1)
    v8, d8 = criterion_1(workers=8)
    same_sets = d1["centraliser_keys"] == d8["centraliser_keys"]
    s1, _ = criterion_2(workers=workers, seed=seed)
    s2, _ = criterion_2(workers=workers, seed=seed + 1)
    ok = (v1 == v8 == PASS) and same_sets and (s1 == s2 == PASS)
    return (PASS if ok else FAIL), {
        "worker_verdicts": [v1, v8], "sets_identical": same_sets,
        "sample_verdicts": [s1, s2]}


CRITERIA = [
    (1, "theorem 1 exhaustive, Z/4, 9 ideal pairs", criterion_1, 300),
    (2, "theorem 1 sampled, triangular ring", criterion_2, 120),
    (3, "theorem 2 exhaustive, Z/4, 3 ideal pairs", criterion_3, 600),
    (4, "lemma 1 z-closure vs normal closure", criterion_4, None),
    (5, "lemma 2 three constructions", criterion_5, None),
    (6, "lemma 3 inclusion chain", criterion_6, None),
    (7, "lemmas 4-6 congruences", criterion_7, None),
    (8, "lemma 7 comaximal pairs", criterion_8, None),
    (9, "lemma 8 full congruence factor", criterion_9, None),
    (10, "ideal-identity suite", criterion_10, 60),
    (11, "level identity", criterion_11, None),
    (12, "K1 determinant oracle", criterion_12, None),
    (13, "Z-group sanity", criterion_13, None),
    (14, "determinism across workers and seeds", criterion_14, None),
]


def run_acceptance_suite(workers=1, seed=0, emit=None):
    """Run all criteria in order; returns a summary dict. `emit` gets one
    human-readable line per criterion as it finishes."""
    results = []
    for num, name, fn, budget in CRITERIA:
        t0 = time.perf_counter()
        try:
            verdict, details = fn(workers=workers, seed=seed)
        except Exception as exc:  # an error is a failure, with the reason
            verdict, details = FAIL, {"error": f"{type(exc).__name__}: {exc}"}
        elapsed = time.perf_counter() - t0
        if budget is not None and elapsed > budget and verdict == PASS:
            verdict = FAIL
            details["budget_exceeded"] = {"budget_s": budget,
                                          "elapsed_s": round(elapsed, 1)}
        details.pop("centraliser_keys", None)  # bulky, not serialisable
        results.append({"criterion": num, "name": name, "verdict": verdict,
                        "elapsed_s": round(elapsed, 2), "budget_s": budget,
                        "details": details})
        if emit:
            emit(f"criterion {num:2d} [{verdict.upper():4s}] {name} "
                 f"({elapsed:.1f}s)")
    worst = max((EXIT_CODES.get(r["verdict"], 1) for r in results),
                default=0)
    return {"results": results, "exit_code": worst,
            "all_pass": all(r["verdict"] == PASS for r in results)}
