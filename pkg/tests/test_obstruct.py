"""Obstruction layer: torsion classes, divisibility criteria, the pipeline."""

import math
import random

import pytest

from acso.gradedring import (
    CoefficientMap,
    DegreeError,
    Generator,
    GradedRing,
    IntMatrix,
    RewriteRule,
    RingPresentation,
    RingSystem,
    any_integral_lift,
    divide_by,
)
from acso.intlin import AbelianGroupDescriptor
from acso.obstruct import (
    BudgetExceeded,
    BundleData,
    ChernCandidate,
    DataValidationError,
    NoSolution,
    Pairing,
    Verdict,
    acs_verdict,
    canonical_witness,
    construct_w4m_lift,
    first_obstruction,
    homotopy_group,
    integral_sw,
    obstruction_denominator,
    rank6_second_obstruction,
    search_vanishing_lifts,
    survey_candidates,
    theorem1_obstruction,
    theorem2_class,
    validate_candidate,
    wu_dim4_obstruction,
)


def torsion_top_system(cutoff=12, degree=11):
    """Ring system whose only content is one order-2 class in `degree`."""
    integral = GradedRing(RingPresentation(
        modulus=0, cutoff=cutoff,
        generators=(Generator("tau", degree, order=2),), rules=()))
    mod2 = GradedRing(RingPresentation(
        modulus=2, cutoff=cutoff,
        generators=(Generator("taub", degree),), rules=()))
    mod4 = GradedRing(RingPresentation(
        modulus=4, cutoff=cutoff,
        generators=(Generator("tau4", degree, order=2),), rules=()))
    one = IntMatrix.from_rows([[1]])
    return RingSystem(
        integral, mod2, mod4,
        rho2=CoefficientMap("rho2", integral, mod2, 0, {0: one, degree: one}),
        rho4=CoefficientMap("rho4", integral, mod4, 0, {0: one, degree: one}),
        theta2=CoefficientMap("theta2", mod2, mod4, 0,
                              {0: IntMatrix.from_rows([[2]])}),
        rho24=CoefficientMap("rho24", mod4, mod2, 0, {0: one, degree: one}),
        beta=CoefficientMap("beta", mod2, integral, 1, {}))


@pytest.fixture(scope="module")
def torsion_bundle():
    sys = torsion_top_system()
    return BundleData(rank=12, rings=sys, w={}, p={},
                      euler=sys.integral.zero(12), base_dimension=11)


@pytest.fixture(scope="module")
def two_sphere_six_sphere():
    # rank-6 data over a product of a 2-sphere and a 6-sphere
    pres = RingPresentation(
        modulus=0, cutoff=8,
        generators=(Generator("a", 2), Generator("v", 6)),
        rules=(RewriteRule((2, 0), ()), RewriteRule((0, 2), ())))
    sys = RingSystem.with_reduction_defaults(pres)
    e = sys.integral.from_terms(6, {"v": 2})
    return BundleData(rank=6, rings=sys, w={}, p={}, euler=e,
                      pairing=Pairing(8, (1,)), base_dimension=8)


# -- torsion classes ----------------------------------------------------------


def test_first_obstruction_values(cp2, s1xwu):
    clear = first_obstruction(cp2)
    assert clear.status == "Zero"
    assert clear.denominator == 1
    hit = first_obstruction(s1xwu)
    assert hit.status == "NonZero"
    assert hit.witness == s1xwu.rings.integral.from_terms(3, {"c": 1})


def test_integral_sw_is_bockstein(s1xwu):
    w3 = integral_sw(s1xwu, 1)
    assert w3 == s1xwu.rings.beta(s1xwu.w_class(2))
    assert (2 * w3).is_zero
    with pytest.raises(ValueError):
        integral_sw(s1xwu, -1)
    with pytest.raises(DegreeError):
        integral_sw(s1xwu, 6)  # degree 13 above the cutoff


def test_two_torsion_for_all_corpus_classes(corpus):
    for space in corpus.values():
        data = space.bundle
        for i in range((data.cutoff - 1) // 2 + 1):
            assert (2 * integral_sw(data, i)).is_zero


def test_obstruction_denominators():
    assert [obstruction_denominator(k) for k in (1, 2, 3)] == [1, 24, 360]
    assert obstruction_denominator(4) == math.factorial(8)
    assert obstruction_denominator(5) == math.factorial(10) // 2
    with pytest.raises(ValueError):
        obstruction_denominator(0)


def test_theorem1_zero_in_empty_degree(hp2):
    v = theorem1_obstruction(hp2, 1)
    assert v.status == "Zero"
    assert v.denominator == 1


def test_theorem1_requires_room(cp2, hp2):
    with pytest.raises(ValueError):
        theorem1_obstruction(cp2, 1)  # 4k+3 = 7 is not below rank 4
    with pytest.raises(ValueError):
        theorem1_obstruction(hp2, 2)  # 11 is not below rank 8


def test_theorem1_torsion_is_inconclusive(torsion_bundle):
    v = theorem1_obstruction(torsion_bundle, 2)
    assert v.status == "Inconclusive"
    assert v.denominator == 24
    assert "24" in v.note
    # k=1 has denominator 1, so an empty degree-7 piece settles it
    assert theorem1_obstruction(torsion_bundle, 1).status == "Zero"


# -- divisibility criteria ------------------------------------------------------


def test_theorem2_class_values(cp2):
    a = cp2.rings.integral.from_terms(2, {"a": 1})
    q, sols = theorem2_class(cp2, ChernCandidate((3 * a,)))
    assert q.is_zero
    assert sols == (cp2.rings.integral.zero(4),)
    q, sols = theorem2_class(cp2, ChernCandidate((a,)))
    assert q == cp2.rings.integral.from_terms(4, {"a^2": 8})
    assert sols == (cp2.rings.integral.from_terms(4, {"a^2": 2}),)


def test_theorem2_rank_check(corpus):
    s6 = corpus["s6"].bundle
    with pytest.raises(ValueError):
        theorem2_class(s6, ChernCandidate((s6.rings.integral.zero(2),
                                           s6.rings.integral.zero(4))))


def test_validate_candidate(cp2):
    ring = cp2.rings.integral
    with pytest.raises(DataValidationError):
        validate_candidate(cp2, ChernCandidate((2 * ring.from_terms(2, {"a": 1}),)))
    with pytest.raises(DataValidationError):
        validate_candidate(cp2, ChernCandidate((ring.from_terms(4, {"a^2": 1}),)))
    with pytest.raises(DataValidationError):
        validate_candidate(cp2, ChernCandidate(()))
    validate_candidate(cp2, ChernCandidate((ring.from_terms(2, {"a": -3}),)))


def test_wu_dim4_values(cp2, corpus):
    ring = cp2.rings.integral
    a = ring.from_terms(2, {"a": 1})
    assert wu_dim4_obstruction(cp2, 3 * a).status == "Zero"
    hit = wu_dim4_obstruction(cp2, a)
    assert hit.status == "NonZero"
    assert hit.witness == ring.from_terms(4, {"a^2": 2})
    s4 = corpus["s4"].bundle
    sphere = wu_dim4_obstruction(s4, s4.rings.integral.zero(2))
    assert sphere.status == "NonZero"
    assert "pairs to 4" in sphere.note
    assert sphere.witness == s4.rings.integral.from_terms(4, {"s": 1})


def test_rank6_criterion_values(corpus, two_sphere_six_sphere):
    over_s8 = corpus["s8_rank6"].bundle
    zeros = ChernCandidate((over_s8.rings.integral.zero(2),
                            over_s8.rings.integral.zero(4)))
    v = rank6_second_obstruction(over_s8, zeros)
    assert v.status == "NonZero"
    assert "pairs to -4" in v.note
    # witness is only defined up to sign; the canonical pick is positive
    assert v.witness == over_s8.rings.integral.from_terms(8, {"s8": 1})

    prod = two_sphere_six_sphere
    cand = ChernCandidate((prod.rings.integral.zero(2),
                           prod.rings.integral.zero(4)))
    assert rank6_second_obstruction(prod, cand).status == "Zero"

    s6 = corpus["s6"].bundle
    empty = ChernCandidate((s6.rings.integral.zero(2),
                            s6.rings.integral.zero(4)))
    assert rank6_second_obstruction(s6, empty).status == "Zero"


def test_rank6_nonzero_euler_pairing_term(two_sphere_six_sphere):
    prod = two_sphere_six_sphere
    ring = prod.rings.integral
    # c1 = 2a makes the cross term -2 c1 e = -8 a*v survive
    cand = ChernCandidate((ring.from_terms(2, {"a": 2}), ring.zero(4)))
    v = rank6_second_obstruction(prod, cand)
    assert v.status == "NonZero"
    assert "pairs to -8" in v.note


def test_canonical_witness_sign(cp2):
    ring = cp2.rings.integral
    x = ring.from_terms(4, {"a^2": -2})
    assert canonical_witness(x) == -x
    assert canonical_witness(-x) == -x
    assert canonical_witness(ring.zero(4)) == ring.zero(4)


def test_verdict_validation(cp2):
    with pytest.raises(ValueError):
        Verdict("Maybe")
    with pytest.raises(ValueError):
        Verdict("NonZero", witness=cp2.rings.integral.zero(4))


# -- candidate searches ------------------------------------------------------------


def test_survey_on_complex_projective_plane(cp2):
    outcome = survey_candidates(cp2, bound=10)
    assert outcome.enumerated == 10
    assert outcome.admissible == 10
    assert not outcome.complete  # a free lift family is never exhausted
    assert outcome.no_lift_degree is None
    coeffs = [rec.candidate.classes[0].coeffs[0] for rec in outcome.records]
    assert coeffs == [-9, -7, -5, -3, -1, 1, 3, 5, 7, 9]
    vanishing = [c.classes[0].coeffs[0] for c in outcome.vanishing]
    assert vanishing == [-3, 3]
    assert search_vanishing_lifts(cp2, bound=10) == outcome.vanishing
    pairings = {rec.candidate.classes[0].coeffs[0]: rec.pairing
                for rec in outcome.records}
    for c, value in pairings.items():
        assert value == 9 - c * c  # <2e - c1^2 + p1, fundamental class>


def test_survey_reversed_orientation_never_vanishes(cp2bar):
    outcome = survey_candidates(cp2bar, bound=10)
    assert outcome.vanishing == ()
    for rec in outcome.records:
        assert rec.verdict.status == "NonZero"
        c = rec.candidate.classes[0].coeffs[0]
        assert rec.pairing == 3 + c * c


def test_survey_forces_quaternionic_candidate(hp2):
    outcome = survey_candidates(hp2, bound=10)
    assert outcome.enumerated == 10
    assert outcome.admissible == 1
    [rec] = outcome.records
    u = hp2.rings.integral.from_terms(4, {"u": 1})
    assert rec.candidate.classes[1] == -u
    assert rec.verdict.status == "Zero"
    assert rec.pairing == 0
    assert outcome.vanishing == (rec.candidate,)


def test_survey_stops_at_missing_lift(s1xwu):
    outcome = survey_candidates(s1xwu, bound=3)
    assert outcome.no_lift_degree == 2
    assert outcome.records == ()
    assert outcome.complete  # a proven missing lift settles the search
    assert "no integral lift" in outcome.note


def test_survey_budget(cp2):
    with pytest.raises(BudgetExceeded):
        survey_candidates(cp2, bound=10, cap=5)


def test_candidate_sign_flip_preserves_verdict(cp2, hp2):
    for data in (cp2, hp2):
        for rec in survey_candidates(data, bound=6).records:
            flipped = ChernCandidate(tuple(-c for c in rec.candidate.classes))
            validate_candidate(data, flipped)
            q0, _ = theorem2_class(data, rec.candidate)
            q1, _ = theorem2_class(data, flipped)
            assert q0.is_zero == q1.is_zero
            if data.rank == 4:
                again = wu_dim4_obstruction(data, flipped.classes[0])
                assert again.status == rec.verdict.status


def test_lift_perturbation_changes_q_by_multiples_of_four(cp2, hp2):
    rng = random.Random(4242)
    for data in (cp2, hp2):
        base = survey_candidates(data, bound=6).records
        for rec in base:
            q0, _ = theorem2_class(data, rec.candidate)
            for _ in range(10):
                classes = []
                for c in rec.candidate.classes:
                    piece = data.rings.integral.basis(c.degree)
                    shift = [2 * rng.randint(-3, 3) for _ in piece]
                    classes.append(c + data.rings.integral.element(c.degree, shift))
                q1, _ = theorem2_class(data, ChernCandidate(tuple(classes)))
                assert divide_by(4, q1 - q0), "delta q must be divisible by 4"


# -- lift construction ---------------------------------------------------------------


def test_construct_lift_on_projective_planes(cp2, hp2):
    a = cp2.rings.integral.from_terms(2, {"a": 1})
    z = construct_w4m_lift(cp2, 1, (a,))
    assert z == cp2.rings.integral.from_terms(4, {"a^2": -1})
    assert cp2.rings.rho2(z) == cp2.w_class(4)

    u = hp2.rings.integral.from_terms(4, {"u": 1})
    z1 = construct_w4m_lift(hp2, 1, (hp2.rings.integral.zero(2),))
    assert z1 == -u
    assert hp2.rings.rho2(z1) == hp2.w_class(4)
    z2 = construct_w4m_lift(hp2, 2, (hp2.rings.integral.zero(2), -u,
                                     hp2.rings.integral.zero(6)))
    assert z2 == hp2.rings.integral.from_terms(8, {"u^2": -3})
    assert hp2.rings.rho2(z2) == hp2.w_class(8)


def test_construct_lift_with_zero_data(corpus):
    s8 = corpus["s8"].bundle
    ring = s8.rings.integral
    z = construct_w4m_lift(s8, 1, (ring.zero(2),))
    assert z.is_zero
    z = construct_w4m_lift(s8, 2, (ring.zero(2), ring.zero(4), ring.zero(6)))
    assert z.is_zero


def test_construct_lift_reduces_correctly_everywhere(corpus):
    for space in corpus.values():
        data = space.bundle
        for m in (1, 2):
            if 4 * m > data.cutoff:
                continue
            lifts = []
            ok = True
            for j in range(1, 2 * m):
                found = any_integral_lift(data.rings, data.w_class(2 * j))
                if found is None:
                    ok = False
                    break
                lifts.append(found)
            if not ok:
                continue
            z = construct_w4m_lift(data, m, tuple(lifts))
            assert data.rings.rho2(z) == data.w_class(4 * m)


def test_construct_lift_validates_input(cp2):
    ring = cp2.rings.integral
    with pytest.raises(ValueError):
        construct_w4m_lift(cp2, 1, ())
    with pytest.raises(DataValidationError):
        construct_w4m_lift(cp2, 1, (2 * ring.from_terms(2, {"a": 1}),))
    with pytest.raises(DegreeError):
        construct_w4m_lift(cp2, 3, tuple(ring.zero(2 * j) for j in range(1, 6)))


def test_construct_lift_no_solution_on_inconsistent_data():
    # w4 = 0 but p1 = 2b contradicts Wu's formula; with validation off the
    # second solve has no target and must say so
    pres = RingPresentation(
        modulus=0, cutoff=8,
        generators=(Generator("b", 4),), rules=(RewriteRule((2,), ()),))
    sys = RingSystem.with_reduction_defaults(pres)
    b = sys.integral.from_terms(4, {"b": 1})
    data = BundleData(rank=8, rings=sys, w={}, p={1: 2 * b},
                      euler=sys.integral.zero(8), validate=False)
    with pytest.raises(NoSolution):
        construct_w4m_lift(data, 1, (sys.integral.zero(2),))


# -- homotopy groups ------------------------------------------------------------------


def test_homotopy_group_table_through_degree_fourteen():
    Z = AbelianGroupDescriptor.free(1)
    Z2 = AbelianGroupDescriptor.cyclic(2)
    O = AbelianGroupDescriptor.trivial()
    expected = [O, Z, O, O, O, Z, Z2, Z2, O, Z, O, O, O, Z]
    got = [homotopy_group(8, q) for q in range(1, 15)]
    assert got == expected


def test_homotopy_group_top_degree():
    assert str(homotopy_group(4, 7)) == "Z + Z/2"
    assert str(homotopy_group(5, 9)) == "Z/24"
    assert str(homotopy_group(6, 11)) == "Z"
    assert str(homotopy_group(7, 13)) == "Z/360"
    assert homotopy_group(3, 5).is_trivial  # (n-1)!/2 = 1
    assert str(homotopy_group(2, 3)) == "Z"


def test_homotopy_group_stability():
    for q in range(1, 7):
        values = {str(homotopy_group(n, q)) for n in range(4, 9)}
        assert len(values) == 1


def test_homotopy_group_range_errors():
    with pytest.raises(ValueError):
        homotopy_group(0, 1)
    with pytest.raises(ValueError):
        homotopy_group(4, 0)
    with pytest.raises(ValueError):
        homotopy_group(4, 8)


# -- the full pipeline -----------------------------------------------------------------


def test_pipeline_statuses(corpus):
    expected = {
        "cp2": ("clear", "admits"),
        "cp2bar": ("obstructed", "excluded"),
        "hp2": ("clear", "undetermined"),
        "s4": ("obstructed", "excluded"),
        "s6": ("clear", "admits"),
        "s2xs4": ("clear", "admits"),
        "s8": ("obstructed", "excluded"),
        "s8_rank6": ("obstructed", "excluded"),
        "s1xwu": ("obstructed", "excluded"),
    }
    for name, (status, existence) in expected.items():
        report = acs_verdict(corpus[name].bundle, bound=10)
        assert report.status == status, name
        assert report.existence == existence, name


def test_pipeline_dimension_six_rule(corpus):
    for name in ("s6", "s2xs4"):
        report = acs_verdict(corpus[name].bundle, bound=10)
        assert report.sole_obstruction
        assert report.first.status == "Zero"
        assert report.final is None
        assert report.gaps == ()


def test_pipeline_undetected_torsion_component(hp2):
    report = acs_verdict(hp2, bound=10)
    assert report.final.status == "Zero"
    assert "Z/2 component" in report.final.note
    assert any("Z/2 component" in g for g in report.gaps)
    assert report.ehresmann_w7 is not None
    assert report.ehresmann_w7.status == "Zero"


def test_pipeline_first_obstruction_blocks_everything(s1xwu):
    report = acs_verdict(s1xwu, bound=3)
    assert report.first.status == "NonZero"
    assert report.existence != "admits"  # the pipeline is monotone
    # degree 8 exceeds the 6-dimensional base, so no search is attempted
    assert report.search is None
    assert report.final is None
    assert report.sole_obstruction


def test_pipeline_inconclusive_torsion(torsion_bundle):
    report = acs_verdict(torsion_bundle, bound=2)
    assert report.status == "inconclusive"
    assert report.existence == "undetermined"
    rows = dict(report.theorem1)
    assert rows[1].status == "Zero"
    assert rows[2].status == "Inconclusive"
    assert report.final is None
    assert any("exceeds" in n or "dimension" in n for n in report.notes)


def test_pipeline_wu_checks_recorded(cp2, s1xwu):
    assert [c.status for c in acs_verdict(cp2).wu_checks] == ["ok", "ok"]
    checks = {c.m: c for c in acs_verdict(s1xwu).wu_checks}
    assert checks[1].status == "skipped"
    assert "no integral lift" in checks[1].note
    assert checks[2].status == "ok"


def test_pipeline_rank_two_is_immediate():
    pres = RingPresentation(
        modulus=0, cutoff=4, generators=(Generator("a", 2),),
        rules=(RewriteRule((2,), ()),))
    sys = RingSystem.with_reduction_defaults(pres)
    data = BundleData(rank=2, rings=sys, w={2: sys.mod2.from_terms(2, {"a": 1})},
                      p={}, euler=sys.integral.from_terms(2, {"a": 1}),
                      base_dimension=2)
    report = acs_verdict(data)
    assert report.status == "clear"
    assert report.existence == "admits"
