"""Obstructions to almost complex structures on oriented real bundles.

An oriented rank-2n bundle carries an almost complex structure precisely
when its structure group reduces from SO(2n) to U(n).  The obstructions to
building such a reduction cell by cell live in H^q(X; pi_{q-1}(SO(2n)/U(n))),
and in low degrees they are computable from characteristic classes:

  * degree 3: the integral class W_3 = beta(w_2), exactly (Ehresmann);
  * degrees 4k+3 < 2n: Massey's Theorem I writes the integral class
    W_{4k+3} as an integer multiple l(k) of the obstruction;
  * the top degree of a rank-4k bundle: Massey's Theorem II expresses four
    times the obstruction through Chern class candidates, Pontryagin
    classes and the Euler class;
  * rank 6, degree 8: the same shape with c_3 pinned to the Euler class.

`BundleData` packages the characteristic classes of one bundle over the
three coefficient rings and cross-checks the classical identities among
them (including Wu's formula relating Pontryagin squares to Pontryagin
classes).  `acs_verdict` runs every criterion the rank admits and reports
what was proven, what failed, and what stayed out of reach.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .gradedring import (
    DegreeError,
    NoIntegralLift,
    RingElement,
    RingSystem,
    divide_by,
    integral_lifts,
    pontryagin_square,
)
from .intlin import AbelianGroupDescriptor, solve_integer_linear


class DataValidationError(Exception):
    """Bundle data violates a structural or classical identity."""


class DivisibilityViolation(Exception):
    """A class that must reduce to zero mod 4 fails to."""


class BudgetExceeded(Exception):
    """Candidate enumeration grew past the configured cap."""


class NoSolution(Exception):
    """The degree-4m lift construction ran out of options."""


_STATUSES = ("Zero", "NonZero", "Inconclusive")


@dataclass(frozen=True)
class Verdict:
    """Outcome of one obstruction test.

    `witness` is a representative of the obstruction (or of the class that
    forces it nonzero); `denominator` is the integer l with l*o = computed
    class, when the test has that shape.
    """

    status: str
    witness: Optional[RingElement] = None
    denominator: Optional[int] = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.status not in _STATUSES:
            raise ValueError("unknown verdict status %r" % (self.status,))
        if self.status == "NonZero" and (self.witness is None or self.witness.is_zero):
            raise ValueError("NonZero verdict requires a nonzero witness")


def canonical_witness(x: RingElement) -> RingElement:
    # obstruction classes are only pinned up to sign by the data; pick the
    # lexicographically larger of x and -x so reruns agree
    neg = -x
    return x if x.coeffs >= neg.coeffs else neg


@dataclass(frozen=True)
class WuCheck:
    """Result of checking Wu's formula for one m."""

    m: int
    status: str  # "ok" | "failed" | "skipped"
    discrepancy: Optional[RingElement] = None
    note: str = ""


@dataclass(frozen=True)
class Pairing:
    """Evaluation against a fundamental class in one degree.

    `values` lists the integer each basis element of the integral piece
    pairs to.  Torsion basis elements must pair to zero.
    """

    degree: int
    values: tuple

    def __init__(self, degree: int, values: Iterable[int]) -> None:
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "values", tuple(int(v) for v in values))

    def pair(self, x: RingElement) -> int:
        if x.degree != self.degree:
            raise DegreeError("pairing is defined in degree %d, not %d"
                              % (self.degree, x.degree))
        if len(x.coeffs) != len(self.values):
            raise ValueError("pairing has %d values for a %d-dimensional piece"
                             % (len(self.values), len(x.coeffs)))
        return sum(c * v for c, v in zip(x.coeffs, self.values))


class BundleData:
    """Characteristic-class data of one oriented real bundle.

    `w` maps i to the i-th Stiefel-Whitney class (mod 2 ring), `p` maps k
    to the k-th Pontryagin class (integral ring), `euler` is the Euler
    class in degree `rank`.  Missing entries mean zero.  Construction
    validates the classical identities: w_1 = 0, w_i = 0 above the rank,
    p_k = 0 above rank/2, rho_2(p_k) = w_{2k}^2, rho_2(e) = w_rank, and
    Wu's formula for every m in range (skipped, with a note, when w_{2m}
    has no integral lift).
    """

    def __init__(self, rank: int, rings: RingSystem,
                 w: Mapping[int, RingElement],
                 p: Mapping[int, RingElement],
                 euler: RingElement,
                 pairing: Optional[Pairing] = None,
                 base_dimension: Optional[int] = None,
                 validate: bool = True) -> None:
        self.rank = int(rank)
        self.rings = rings
        self.w = {int(i): wi for i, wi in w.items() if not wi.is_zero}
        self.p = {int(k): pk for k, pk in p.items() if not pk.is_zero}
        self.euler = euler
        self.pairing = pairing
        self.base_dimension = None if base_dimension is None else int(base_dimension)
        self.wu_checks: tuple = ()
        if validate:
            self._validate()

    # -- accessors ---------------------------------------------------

    @property
    def cutoff(self) -> int:
        return self.rings.integral.presentation.cutoff

    def w_class(self, i: int) -> RingElement:
        if i < 0:
            raise ValueError("Stiefel-Whitney index must be nonnegative")
        if i == 0:
            return self.rings.mod2.unit()
        if i in self.w:
            return self.w[i]
        return self.rings.mod2.zero(i)

    def p_class(self, k: int) -> RingElement:
        if k < 0:
            raise ValueError("Pontryagin index must be nonnegative")
        if k == 0:
            return self.rings.integral.unit()
        if k in self.p:
            return self.p[k]
        return self.rings.integral.zero(4 * k)

    def pair(self, x: RingElement) -> Optional[int]:
        if self.pairing is None or x.degree != self.pairing.degree:
            return None
        return self.pairing.pair(x)

    def __eq__(self, other: object):
        if not isinstance(other, BundleData):
            return NotImplemented
        return (self.rank == other.rank
                and self.base_dimension == other.base_dimension
                and self.rings == other.rings
                and self.w == other.w
                and self.p == other.p
                and self.euler == other.euler
                and self.pairing == other.pairing)

    # -- validation --------------------------------------------------

    def _validate(self) -> None:
        rings = self.rings
        cutoff = self.cutoff
        if self.rank < 2 or self.rank % 2:
            raise DataValidationError("rank must be an even integer >= 2, got %d"
                                      % self.rank)
        if self.rank > cutoff:
            raise DataValidationError("ring cutoff %d lies below the rank %d"
                                      % (cutoff, self.rank))
        if self.base_dimension is not None and self.base_dimension < 0:
            raise DataValidationError("base dimension must be nonnegative")
        for i, wi in self.w.items():
            if i < 1:
                raise DataValidationError("w index %d out of range" % i)
            if wi.ring is not rings.mod2 and wi.ring != rings.mod2:
                raise DataValidationError("w%d must live in the mod-2 ring" % i)
            if wi.degree != i:
                raise DataValidationError("w%d has degree %d" % (i, wi.degree))
            if i == 1:
                raise DataValidationError("w1 must vanish for an oriented bundle")
            if i > self.rank:
                raise DataValidationError("w%d must vanish for a rank-%d bundle"
                                          % (i, self.rank))
        for k, pk in self.p.items():
            if k < 1:
                raise DataValidationError("p index %d out of range" % k)
            if pk.ring != rings.integral:
                raise DataValidationError("p%d must live in the integral ring" % k)
            if pk.degree != 4 * k:
                raise DataValidationError("p%d has degree %d, expected %d"
                                          % (k, pk.degree, 4 * k))
            if k > self.rank // 2:
                raise DataValidationError("p%d must vanish for a rank-%d bundle"
                                          % (k, self.rank))
        if self.euler.ring != rings.integral:
            raise DataValidationError("the Euler class must live in the integral ring")
        if self.euler.degree != self.rank:
            raise DataValidationError("the Euler class has degree %d, expected %d"
                                      % (self.euler.degree, self.rank))

        diff = rings.rho2(self.euler) - self.w_class(self.rank)
        if not diff.is_zero:
            raise DataValidationError(
                "rho2(e) != w%d, discrepancy %s" % (self.rank, diff))
        for k in range(1, cutoff // 4 + 1):
            w2k = self.w_class(2 * k)
            diff = rings.rho2(self.p_class(k)) - w2k * w2k
            if not diff.is_zero:
                raise DataValidationError(
                    "rho2(p%d) != w%d^2, discrepancy %s" % (k, 2 * k, diff))

        if self.pairing is not None:
            deg = self.pairing.degree
            if deg < 0 or deg > cutoff:
                raise DataValidationError("pairing degree %d outside the ring" % deg)
            orders = rings.integral.orders(deg)
            if len(self.pairing.values) != len(orders):
                raise DataValidationError(
                    "pairing lists %d values for a %d-dimensional piece"
                    % (len(self.pairing.values), len(orders)))
            for o, v in zip(orders, self.pairing.values):
                if o != 0 and v != 0:
                    raise DataValidationError(
                        "pairing must vanish on torsion basis elements")

        checks = []
        for m in range(1, cutoff // 4 + 1):
            chk = validate_wu_formula(self, m)
            if chk.status == "failed":
                raise DataValidationError(
                    "Wu's formula fails at m=%d: discrepancy %s"
                    % (m, chk.discrepancy))
            checks.append(chk)
        self.wu_checks = tuple(checks)


def validate_wu_formula(data: BundleData, m: int) -> WuCheck:
    """Check P(w_{2m}) = rho4(p_m) + theta2(sum_{j<m} w_{2j} w_{4m-2j}).

    P is the Pontryagin square.  When w_{2m} admits no integral lift the
    square is not computed here and the check is skipped with a note.
    """
    if m < 1 or 4 * m > data.cutoff:
        raise ValueError("m=%d out of range for cutoff %d" % (m, data.cutoff))
    rings = data.rings
    w2m = data.w_class(2 * m)
    try:
        lhs = pontryagin_square(rings, w2m)
    except NoIntegralLift:
        return WuCheck(m, "skipped",
                       note="w%d has no integral lift" % (2 * m))
    acc = rings.mod2.zero(4 * m)
    for j in range(m):
        acc = acc + data.w_class(2 * j) * data.w_class(4 * m - 2 * j)
    rhs = rings.rho4(data.p_class(m)) + rings.theta2(acc)
    diff = lhs - rhs
    if diff.is_zero:
        return WuCheck(m, "ok")
    return WuCheck(m, "failed", discrepancy=diff,
                   note="Pontryagin square of w%d disagrees with p%d" % (2 * m, m))


# -- elementary integral classes --------------------------------------


def integral_sw(data: BundleData, i: int) -> RingElement:
    """Integral Stiefel-Whitney class W_{2i+1} = beta(w_{2i})."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    if 2 * i + 1 > data.cutoff:
        raise DegreeError("degree %d exceeds cutoff %d" % (2 * i + 1, data.cutoff))
    return data.rings.beta(data.w_class(2 * i))


def first_obstruction(data: BundleData) -> Verdict:
    """W_3 = beta(w_2), the exact first obstruction.  Never Inconclusive."""
    w3 = integral_sw(data, 1)
    if w3.is_zero:
        return Verdict("Zero", denominator=1, note="W3 = beta(w2) vanishes")
    return Verdict("NonZero", witness=canonical_witness(w3), denominator=1,
                   note="W3 = beta(w2) is nonzero")


def obstruction_denominator(k: int) -> int:
    """Multiplier l(k) with W_{4k+3} = l(k) * o_{4k+3}: (2k)!, halved for odd k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    f = math.factorial(2 * k)
    return f if k % 2 == 0 else f // 2


def _annihilated_by(orders: Sequence[int], n: int) -> bool:
    # does the group with these cyclic orders contain x != 0 with n*x = 0?
    return any(o != 0 and math.gcd(o, n) > 1 for o in orders)


def theorem1_obstruction(data: BundleData, k: int) -> Verdict:
    """Massey Theorem I test in degree 4k+3: W_{4k+3} = l(k) * o.

    Valid for 4k+3 < rank.  A nonzero W forces o nonzero.  W = 0 gives
    Zero only when no nonzero class of the degree-(4k+3) piece is killed
    by l(k); otherwise the test is Inconclusive.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    degree = 4 * k + 3
    if degree >= data.rank:
        raise ValueError("Theorem I needs 4k+3 < rank, got 4*%d+3 >= %d"
                         % (k, data.rank))
    if degree > data.cutoff:
        raise DegreeError("degree %d exceeds cutoff %d" % (degree, data.cutoff))
    ell = obstruction_denominator(k)
    w_int = integral_sw(data, 2 * k + 1)
    if not w_int.is_zero:
        return Verdict("NonZero", witness=canonical_witness(w_int),
                       denominator=ell,
                       note="W%d = l*o with l = %d is nonzero, so o != 0"
                            % (degree, ell))
    orders = data.rings.integral.orders(degree)
    if not _annihilated_by(orders, ell):
        return Verdict("Zero", denominator=ell,
                       note="W%d = 0 and no nonzero degree-%d class is killed by %d"
                            % (degree, degree, ell))
    return Verdict("Inconclusive", denominator=ell,
                   note="W%d = 0 but l = %d kills torsion in degree %d"
                        % (degree, ell, degree))


# -- Chern class candidates and the top-degree criteria ----------------


@dataclass(frozen=True)
class ChernCandidate:
    """Proposed integral Chern classes c_1..c_{n-1}; c_n is the Euler class."""

    classes: tuple

    def __init__(self, classes: Iterable[RingElement]) -> None:
        object.__setattr__(self, "classes", tuple(classes))

    def chern(self, data: BundleData, i: int) -> RingElement:
        n = data.rank // 2
        if i == 0:
            return data.rings.integral.unit()
        if 1 <= i <= n - 1:
            return self.classes[i - 1]
        if i == n:
            return data.euler
        return data.rings.integral.zero(2 * i)


def validate_candidate(data: BundleData, cand: ChernCandidate) -> None:
    n = data.rank // 2
    if len(cand.classes) != n - 1:
        raise DataValidationError("rank %d needs %d candidate classes, got %d"
                                  % (data.rank, n - 1, len(cand.classes)))
    for i, ci in enumerate(cand.classes, start=1):
        if ci.ring != data.rings.integral:
            raise DataValidationError("c%d must live in the integral ring" % i)
        if ci.degree != 2 * i:
            raise DataValidationError("c%d has degree %d, expected %d"
                                      % (i, ci.degree, 2 * i))
        diff = data.rings.rho2(ci) - data.w_class(2 * i)
        if not diff.is_zero:
            raise DataValidationError(
                "rho2(c%d) != w%d, discrepancy %s" % (i, 2 * i, diff))


def theorem2_class(data: BundleData, cand: ChernCandidate):
    """Massey Theorem II class for rank 4k:

        q = sum_{i+j=2k} (-1)^i c_i c_j - (-1)^k p_k = 4 * o.

    Returns (q, solutions of 4x = q).  Raises DivisibilityViolation when
    rho4(q) != 0, which consistent data never produces.
    """
    if data.rank % 4:
        raise ValueError("Theorem II applies to ranks divisible by 4, got %d"
                         % data.rank)
    k = data.rank // 4
    validate_candidate(data, cand)
    q = data.rings.integral.zero(4 * k)
    for i in range(2 * k + 1):
        term = cand.chern(data, i) * cand.chern(data, 2 * k - i)
        q = q + term if i % 2 == 0 else q - term
    pk = data.p_class(k)
    q = q - pk if k % 2 == 0 else q + pk
    if not data.rings.rho4(q).is_zero:
        raise DivisibilityViolation("q = %s is not divisible by 4 (rho4(q) = %s)"
                                    % (q, data.rings.rho4(q)))
    return q, divide_by(4, q)


def _rank6_q(data: BundleData, cand: ChernCandidate):
    # q = -2 c1 c3 + c2^2 - p2 with c3 pinned to the Euler class
    if data.rank != 6:
        raise ValueError("this criterion applies to rank 6, got %d" % data.rank)
    if 8 > data.cutoff:
        raise DegreeError("degree 8 exceeds cutoff %d" % data.cutoff)
    validate_candidate(data, cand)
    c1, c2 = cand.classes
    q = c2 * c2 - 2 * (c1 * data.euler) - data.p_class(2)
    if not data.rings.rho4(q).is_zero:
        raise DivisibilityViolation("q = %s is not divisible by 4 (rho4(q) = %s)"
                                    % (q, data.rings.rho4(q)))
    return q, divide_by(4, q)


def _divisibility_verdict(data: BundleData, q: RingElement,
                          solutions: Sequence[RingElement],
                          rule: str) -> Verdict:
    paired = data.pair(q)
    tail = "" if paired is None else "; q pairs to %d" % paired
    if not q.is_zero:
        rep = solutions[0] if solutions else q
        return Verdict("NonZero", witness=canonical_witness(rep), denominator=4,
                       note="%s: 4o = q is nonzero, so o != 0%s" % (rule, tail))
    orders = data.rings.integral.orders(q.degree)
    if not _annihilated_by(orders, 4):
        return Verdict("Zero", denominator=4,
                       note="%s: q = 0 and no nonzero degree-%d class is killed by 4%s"
                            % (rule, q.degree, tail))
    return Verdict("Inconclusive", denominator=4,
                   note="%s: q = 0 but 4 kills torsion in degree %d%s"
                        % (rule, q.degree, tail))


def wu_dim4_obstruction(data: BundleData, c1: RingElement) -> Verdict:
    """Rank-4 criterion: p_1 - c_1^2 + 2e = 4 * o for a lift c_1 of w_2."""
    if data.rank != 4:
        raise ValueError("this criterion applies to rank 4, got %d" % data.rank)
    cand = ChernCandidate((c1,))
    q, sols = theorem2_class(data, cand)
    return _divisibility_verdict(data, q, sols, _final_rule(4))


def rank6_second_obstruction(data: BundleData, cand: ChernCandidate) -> Verdict:
    """Rank-6, degree-8 criterion: -2 c1 c3 + c2^2 - p2 = 4 * o, c3 = e."""
    q, sols = _rank6_q(data, cand)
    return _divisibility_verdict(data, q, sols, _final_rule(6))


# -- candidate enumeration ---------------------------------------------


@dataclass(frozen=True)
class CandidateRecord:
    candidate: ChernCandidate
    q: RingElement
    verdict: Verdict
    pairing: Optional[int]


@dataclass(frozen=True)
class SearchOutcome:
    """Everything one enumeration of Chern candidates established."""

    bound: int
    rule: str
    enumerated: int = 0
    records: tuple = ()
    vanishing: tuple = ()
    no_lift_degree: Optional[int] = None
    complete: bool = False
    note: str = ""

    @property
    def admissible(self) -> int:
        return len(self.records)


def _final_rule(rank: int) -> str:
    if rank == 4:
        return "Wu's dimension-4 criterion (p1 - c1^2 + 2e = 4o)"
    if rank == 6:
        return "rank-6 degree-8 criterion (c2^2 - 2 c1 e - p2 = 4o)"
    return "Massey Theorem II (rank %d, k=%d)" % (rank, rank // 4)


def survey_candidates(data: BundleData, bound: int = 10,
                      cap: int = 10 ** 6) -> SearchOutcome:
    """Enumerate Chern candidates within `bound` and test each one.

    Lifts are enumerated degree by degree; combinations must satisfy the
    intermediate identities (-1)^j p_j = sum_{i<=2j} (-1)^i c_i c_{2j-i}
    for every j below the final index before the top-degree class is
    evaluated.  Deterministic: candidates come out in lexicographic order
    of their coefficient vectors.
    """
    rank = data.rank
    if rank == 6:
        k_final = 2
    elif rank % 4 == 0:
        k_final = rank // 4
    else:
        raise ValueError("no top-degree criterion for rank %d" % rank)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    rule = _final_rule(rank)
    n = rank // 2
    rings = data.rings

    lift_sets = []
    for i in range(1, n):
        found = integral_lifts(rings, data.w_class(2 * i), bound)
        if found.no_lift_proven:
            return SearchOutcome(bound=bound, rule=rule, no_lift_degree=2 * i,
                                 complete=True,
                                 note="w%d admits no integral lift" % (2 * i))
        lift_sets.append(found.lifts)
    complete = all(o != 0
                   for i in range(1, n)
                   for o in rings.integral.orders(2 * i))

    enumerated = 0
    records = []
    for combo in itertools.product(*lift_sets):
        enumerated += 1
        if enumerated > cap:
            raise BudgetExceeded("candidate enumeration exceeded the cap %d" % cap)
        cand = ChernCandidate(combo)
        ok = True
        for j in range(1, k_final):
            acc = rings.integral.zero(4 * j)
            for i in range(2 * j + 1):
                term = cand.chern(data, i) * cand.chern(data, 2 * j - i)
                acc = acc + term if i % 2 == 0 else acc - term
            pj = data.p_class(j)
            want = pj if j % 2 == 0 else -pj
            if acc != want:
                ok = False
                break
        if not ok:
            continue
        if rank == 6:
            q, sols = _rank6_q(data, cand)
        else:
            q, sols = theorem2_class(data, cand)
        verdict = _divisibility_verdict(data, q, sols, rule)
        records.append(CandidateRecord(cand, q, verdict, data.pair(q)))

    vanishing = tuple(r.candidate for r in records
                      if r.verdict.status == "Zero")
    return SearchOutcome(bound=bound, rule=rule, enumerated=enumerated,
                         records=tuple(records), vanishing=vanishing,
                         complete=complete)


def search_vanishing_lifts(data: BundleData, bound: int = 10,
                           cap: int = 10 ** 6):
    """Chern candidates within `bound` whose top-degree obstruction vanishes."""
    return survey_candidates(data, bound, cap).vanishing


def _aggregate_final(data: BundleData, outcome: SearchOutcome) -> Verdict:
    rule = outcome.rule
    if outcome.no_lift_degree is not None:
        i2 = outcome.no_lift_degree
        w_int = integral_sw(data, i2 // 2)
        witness = w_int if not w_int.is_zero else data.w_class(i2)
        return Verdict("NonZero", witness=canonical_witness(witness),
                       denominator=4,
                       note="%s: w%d admits no integral lift, so no reduction "
                            "reaches this degree" % (rule, i2))
    if not outcome.records:
        return Verdict("Inconclusive", denominator=4,
                       note="%s: no admissible candidates within bound %d"
                            % (rule, outcome.bound))
    statuses = [r.verdict.status for r in outcome.records]
    if "Zero" in statuses:
        count = statuses.count("Zero")
        return Verdict("Zero", denominator=4,
                       note="%s: obstruction vanishes for %d of %d candidates"
                            % (rule, count, len(statuses)))
    if all(s == "NonZero" for s in statuses):
        scope = ("every candidate" if outcome.complete
                 else "every candidate within bound %d" % outcome.bound)
        witness = outcome.records[0].verdict.witness
        note = ("%s: nonzero obstruction for %s (%d tested)"
                % (rule, scope, len(statuses)))
        pairings = {r.pairing for r in outcome.records}
        if len(pairings) == 1 and None not in pairings:
            note += "; q pairs to %d" % outcome.records[0].pairing
        return Verdict("NonZero", witness=witness, denominator=4, note=note)
    return Verdict("Inconclusive", denominator=4,
                   note="%s: no vanishing candidate, but some verdicts are "
                        "inconclusive (%d tested)" % (rule, len(statuses)))


# -- the degree-4m lift construction ------------------------------------


def construct_w4m_lift(data: BundleData, m: int,
                       lifts: Sequence[RingElement]) -> RingElement:
    """Integral lift of w_{4m} built from lifts c_1..c_{2m-1} of w_2..w_{4m-2}.

    Solves 2x = c_m^2 - p_m - 2 * sum_{j<m} c_j c_{2m-j}, corrects x by a
    Bockstein so that the mod-2 reduction hits w_{4m} on the nose, and
    returns z = x + beta(y).  Raises NoSolution when no choice of x admits
    the correction.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if 4 * m > data.cutoff:
        raise DegreeError("degree %d exceeds cutoff %d" % (4 * m, data.cutoff))
    if len(lifts) != 2 * m - 1:
        raise ValueError("need %d lift classes c_1..c_%d, got %d"
                         % (2 * m - 1, 2 * m - 1, len(lifts)))
    rings = data.rings
    for i, ci in enumerate(lifts, start=1):
        if ci.ring != rings.integral or ci.degree != 2 * i:
            raise DataValidationError("c%d must be integral of degree %d"
                                      % (i, 2 * i))
        diff = rings.rho2(ci) - data.w_class(2 * i)
        if not diff.is_zero:
            raise DataValidationError("rho2(c%d) != w%d" % (i, 2 * i))

    cm = lifts[m - 1]
    rhs = cm * cm - data.p_class(m)
    for j in range(1, m):
        rhs = rhs - 2 * (lifts[j - 1] * lifts[2 * m - j - 1])

    w4m = data.w_class(4 * m)
    mod2 = rings.mod2
    deg_y = 4 * m - 1
    sq1_mat = rings.sq1.matrix(deg_y)
    # solve modulo the order-2 relations of the target piece
    relations = mod2.relation_matrix(4 * m)
    system = sq1_mat.hstack(relations) if relations.cols else sq1_mat

    for x in divide_by(2, rhs):
        target = rings.rho2(x) + w4m
        if target.is_zero:
            return x
        solved = solve_integer_linear(system, list(target.coeffs))
        if solved is None:
            continue
        yvec = solved[0][:sq1_mat.cols]
        y = mod2.element(deg_y, yvec)
        z = x + rings.beta(y)
        if (rings.rho2(z) - w4m).is_zero:
            return z
    raise NoSolution("no integral lift of w%d arises from the given classes"
                     % (4 * m))


# -- homotopy of SO(2n)/U(n) --------------------------------------------


_STABLE_BY_RESIDUE = {
    0: "torsion",   # Z/2
    1: "zero",
    2: "free",      # Z
    3: "zero",
    4: "zero",
    5: "zero",
    6: "free",      # Z
    7: "torsion",   # Z/2
}


def homotopy_group(n: int, q: int) -> AbelianGroupDescriptor:
    """pi_q(SO(2n)/U(n)) for 1 <= q <= 2n-1.

    Below the top (q <= 2n-2) the groups are stable and 8-periodic:
    Z in degrees 2 and 6 mod 8, Z/2 in degrees 7 and 0 mod 8, zero
    otherwise.  At q = 2n-1 the answer depends on n mod 4.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if q < 1 or q > 2 * n - 1:
        raise ValueError("q=%d outside the computed range 1..%d" % (q, 2 * n - 1))
    if q <= 2 * n - 2:
        kind = _STABLE_BY_RESIDUE[q % 8]
        if kind == "free":
            return AbelianGroupDescriptor.free(1)
        if kind == "torsion":
            return AbelianGroupDescriptor.cyclic(2)
        return AbelianGroupDescriptor.trivial()
    r = n % 4
    if r == 0:
        return AbelianGroupDescriptor(free_rank=1, torsion_factors=(2,))
    if r == 2:
        return AbelianGroupDescriptor.free(1)
    f = math.factorial(n - 1)
    return AbelianGroupDescriptor.cyclic(f if r == 1 else f // 2)


# -- the full pipeline ---------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    """Everything `acs_verdict` established for one bundle."""

    rank: int
    base_dimension: Optional[int]
    first: Verdict
    ehresmann_w7: Optional[Verdict]
    theorem1: tuple
    final: Optional[Verdict]
    final_rule: Optional[str]
    search: Optional[SearchOutcome]
    searched_candidates: int
    vanishing_candidates: tuple
    sole_obstruction: bool
    wu_checks: tuple
    gaps: tuple
    notes: tuple
    status: str        # "clear" | "obstructed" | "inconclusive"
    existence: str     # "admits" | "excluded" | "undetermined"


def _piece_trivial(data: BundleData, q: int) -> bool:
    if q > data.cutoff:
        return False
    return (len(data.rings.integral.basis(q)) == 0
            and len(data.rings.mod2.basis(q)) == 0)


def _aggregate_status(verdicts: Iterable[Verdict]) -> str:
    seen = [v.status for v in verdicts if v is not None]
    if any(s == "NonZero" for s in seen):
        return "obstructed"
    if any(s == "Inconclusive" for s in seen):
        return "inconclusive"
    return "clear"


def acs_verdict(data: BundleData, bound: int = 10,
                cap: int = 10 ** 6) -> ObstructionReport:
    """Run every obstruction criterion the rank admits and assemble a report.

    `status` summarizes the tests that ran; `existence` additionally
    accounts for the degrees no implemented criterion covers (`gaps`), so
    a clear run with gaps stays "undetermined".
    """
    rank = data.rank
    n = rank // 2
    cutoff = data.cutoff
    dim = data.base_dimension
    notes = []
    gaps = []

    if rank == 2:
        first = (first_obstruction(data) if cutoff >= 3
                 else Verdict("Zero", note="degree 3 beyond the ring cutoff"))
        notes.append("oriented rank-2 bundles are complex line bundles")
        return ObstructionReport(
            rank=rank, base_dimension=dim, first=first, ehresmann_w7=None,
            theorem1=(), final=None, final_rule=None, search=None,
            searched_candidates=0, vanishing_candidates=(),
            sole_obstruction=False, wu_checks=data.wu_checks, gaps=(),
            notes=tuple(notes), status="clear", existence="admits")

    first = first_obstruction(data)

    theorem1 = []
    k = 1
    while 4 * k + 3 < rank:
        degree = 4 * k + 3
        if degree <= cutoff:
            theorem1.append((k, theorem1_obstruction(data, k)))
        elif dim is None or degree <= dim:
            gaps.append("degree %d lies beyond the ring cutoff %d"
                        % (degree, cutoff))
        k += 1
    theorem1 = tuple(theorem1)
    ehresmann_w7 = dict(theorem1).get(1)

    if rank == 4 or rank % 4 == 0:
        final_degree = rank
    elif rank == 6:
        final_degree = 8
    else:
        final_degree = None

    final = None
    final_rule = None
    search = None
    if final_degree is not None:
        if dim is not None and final_degree > dim:
            notes.append("final degree %d exceeds the base dimension %d; "
                         "nothing to check there" % (final_degree, dim))
        elif final_degree > cutoff:
            gaps.append("final degree %d lies beyond the ring cutoff %d"
                        % (final_degree, cutoff))
        else:
            search = survey_candidates(data, bound, cap)
            final_rule = search.rule
            final = _aggregate_final(data, search)

    sole = rank == 6 and dim is not None and dim <= 6
    if sole:
        notes.append("W3 is the sole obstruction for rank 6 over bases of "
                     "dimension <= 6")

    horizon = dim if dim is not None else cutoff
    if dim is None:
        gaps.append("base dimension not given; degrees assessed only up to "
                    "the cutoff %d" % cutoff)
    for q in range(4, horizon + 1):
        if rank == 6 and q in (7, 8):
            continue  # pi_6 of the fiber vanishes; degree 8 is the final test
        if q <= 2 * n:
            group = homotopy_group(n, q - 1)
            if group.is_trivial:
                continue
            if q % 4 == 3 and q < 2 * n:
                continue  # Theorem I row
            if q == 2 * n and rank % 4 == 0:
                if n % 4 == 0 and final is not None and final.status != "NonZero":
                    gaps.append("Z/2 component of the degree-%d obstruction "
                                "undetected" % q)
                continue
            if _piece_trivial(data, q):
                continue
            if q == 2 * n:
                gaps.append("no top-degree criterion for rank %d" % rank)
            else:
                gaps.append("mod-2 obstruction in degree %d has no "
                            "implemented criterion" % q)
        else:
            if _piece_trivial(data, q):
                continue
            gaps.append("degree %d lies above the top covered degree" % q)

    verdicts = [first] + [v for _, v in theorem1] + ([final] if final else [])
    status = _aggregate_status(verdicts)
    if status == "obstructed":
        existence = "excluded"
    elif status == "clear" and not gaps:
        existence = "admits"
    else:
        existence = "undetermined"

    if final is not None and final.status != "NonZero":
        for g in gaps:
            if g.startswith("Z/2 component"):
                final = Verdict(final.status, final.witness, final.denominator,
                                final.note + "; " + g)
                break

    return ObstructionReport(
        rank=rank, base_dimension=dim, first=first, ehresmann_w7=ehresmann_w7,
        theorem1=theorem1, final=final, final_rule=final_rule, search=search,
        searched_candidates=search.enumerated if search else 0,
        vanishing_candidates=search.vanishing if search else (),
        sole_obstruction=sole, wu_checks=data.wu_checks, gaps=tuple(gaps),
        notes=tuple(notes), status=status, existence=existence)
