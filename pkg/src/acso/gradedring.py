"""Finitely presented graded-commutative rings with exact coefficients.

A ring here is presented by generators with degrees and additive orders,
a global coefficient modulus (0, 2, or 4), homogeneous rewrite rules for
products of generators, and a degree cutoff.  Monomial bases per degree
are enumerated once; products are computed through confluent rewriting
with Koszul signs, so odd-degree generators anticommute the way graded
commutativity demands.

On top of single rings, a RingSystem bundles an integral ring with its
mod-2 and mod-4 reductions plus the standard coefficient maps (rho2,
rho4, theta2, rho24, the Bockstein beta, and Sq^1) and checks the
compatibilities between them, e.g. theta2(rho2(z)) = rho4(2z).  The
operations at the bottom of the module (divide_by, integral lifts,
Pontryagin squares) are what the obstruction evaluator consumes.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from .intlin import IntMatrix, solve_integer_linear


class RingError(Exception):
    """Base class for structural problems in a ring or map."""


class DegreeError(RingError):
    """An operation left the degree range the presentation covers."""


class ConfluenceError(RingError):
    """The rewrite rules do not define a unique normal form."""


class SignRuleError(RingError):
    """A product table violates graded commutativity."""


class NoIntegralLift(RingError):
    """A mod-2 class has no integral preimage."""


_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Generator:
    """Ring generator: additive order 0 means infinite order."""

    name: str
    degree: int
    order: int = 0

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ValueError("bad generator name %r" % (self.name,))
        if self.degree < 1:
            raise ValueError("generator degree must be positive")
        if self.order < 0 or self.order == 1:
            raise ValueError("generator order must be 0 or >= 2")


@dataclass(frozen=True)
class RewriteRule:
    """lhs is an exponent tuple; rhs a sum of (coefficient, exponent tuple)."""

    lhs: tuple[int, ...]
    rhs: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lhs", tuple(int(e) for e in self.lhs))
        rhs = tuple((int(c), tuple(int(e) for e in m)) for c, m in self.rhs)
        object.__setattr__(self, "rhs", rhs)
        if not any(self.lhs):
            raise ValueError("rewrite rule with trivial left-hand side")


@dataclass(frozen=True)
class RingPresentation:
    modulus: int
    cutoff: int
    generators: tuple[Generator, ...]
    rules: tuple[RewriteRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.modulus not in (0, 2, 4):
            raise ValueError("modulus must be 0, 2, or 4")
        if self.cutoff < 0:
            raise ValueError("negative cutoff")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        width = len(self.generators)
        for rule in self.rules:
            if len(rule.lhs) != width:
                raise ValueError("rule arity differs from generator count")
            d = self._exp_degree(rule.lhs)
            for coeff, mon in rule.rhs:
                if len(mon) != width:
                    raise ValueError("rule arity differs from generator count")
                if self._exp_degree(mon) != d:
                    raise ValueError("rewrite rule is not homogeneous")

    def _exp_degree(self, exps) -> int:
        return sum(e * g.degree for e, g in zip(exps, self.generators))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)


def format_exponents(names: Sequence[str], exps: Sequence[int]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def parse_exponents(names: Sequence[str], text: str) -> tuple[int, ...]:
    """Inverse of format_exponents; raises ValueError on unknown names."""
    index = {n: i for i, n in enumerate(names)}
    exps = [0] * len(names)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        factor = factor.strip()
        if "^" in factor:
            name, _, power = factor.partition("^")
            name = name.strip()
            e = int(power)
            if e < 1:
                raise ValueError("bad exponent in %r" % (factor,))
        else:
            name, e = factor, 1
        if name not in index:
            raise ValueError("unknown generator %r" % (name,))
        exps[index[name]] += e
    return tuple(exps)


def _norm_coeff(c: int, order: int) -> int:
    return c % order if order else c


class GradedRing:
    """Graded-commutative ring truncated above a degree cutoff.

    Construction enumerates monomial bases, verifies that the rewrite
    rules are confluent inside the truncation, materializes the product
    table, and checks it against graded commutativity and the additive
    orders.  A presentation that survives construction is safe to
    compute in.
    """

    def __init__(self, presentation: RingPresentation):
        self.presentation = presentation
        self.cutoff = presentation.cutoff
        self.modulus = presentation.modulus
        self.generators = presentation.generators
        self.names = presentation.names
        self._degrees = tuple(g.degree for g in self.generators)
        self._gen_orders = tuple(g.order for g in self.generators)
        self._odd = tuple(d % 2 for d in self._degrees)
        self._nf_cache: dict = {}
        self._nf_active: set = set()
        self._enumerate_monomials()
        self._check_confluence()
        self._build_table()
        self._check_table()

    # -- presentation machinery -------------------------------------------

    def _exp_degree(self, exps) -> int:
        return sum(e * d for e, d in zip(exps, self._degrees))

    def _order_of(self, exps) -> int:
        g = self.modulus
        for e, o in zip(exps, self._gen_orders):
            if e:
                g = math.gcd(g, o)
        return g

    def _enumerate_monomials(self):
        ranges = [range(self.cutoff // d + 1) for d in self._degrees]
        by_degree: dict[int, list] = {d: [] for d in range(self.cutoff + 1)}
        for exps in itertools.product(*ranges):
            d = self._exp_degree(exps)
            if d <= self.cutoff:
                by_degree[d].append(exps)
        for d in by_degree:
            by_degree[d].sort()
        self._monomials = {d: tuple(v) for d, v in by_degree.items()}
        self._basis = {}
        self._orders = {}
        self._index = {}
        for d, mons in self._monomials.items():
            basis = tuple(m for m in mons
                          if self._first_rule(m) is None and self._order_of(m) != 1)
            self._basis[d] = basis
            self._orders[d] = tuple(self._order_of(m) for m in basis)
            self._index[d] = {m: i for i, m in enumerate(basis)}

    def _first_rule(self, exps) -> Optional[RewriteRule]:
        for rule in self.presentation.rules:
            if all(l <= e for l, e in zip(rule.lhs, exps)):
                return rule
        return None

    def _koszul(self, a, b) -> int:
        # sign putting sorted(a)*sorted(b) into sorted(a + b)
        s = 0
        for j, bj in enumerate(b):
            if bj and self._odd[j]:
                for i in range(j + 1, len(a)):
                    if a[i] and self._odd[i]:
                        s += a[i] * bj
        return -1 if s & 1 else 1

    def _apply_rule(self, exps, rule):
        rem = tuple(e - l for e, l in zip(exps, rule.lhs))
        s0 = self._koszul(rule.lhs, rem)
        out = []
        for coeff, mon in rule.rhs:
            s1 = self._koszul(mon, rem)
            out.append((coeff * s0 * s1, tuple(m + r for m, r in zip(mon, rem))))
        return out

    def _normal_form(self, exps) -> dict:
        cached = self._nf_cache.get(exps)
        if cached is not None:
            return cached
        if exps in self._nf_active:
            raise ConfluenceError(
                "rewriting does not terminate at %s"
                % format_exponents(self.names, exps))
        rule = self._first_rule(exps)
        if rule is None:
            result = {} if self._order_of(exps) == 1 else {exps: 1}
        else:
            self._nf_active.add(exps)
            try:
                acc: dict = {}
                for coeff, mon in self._apply_rule(exps, rule):
                    for m2, c2 in self._normal_form(mon).items():
                        acc[m2] = acc.get(m2, 0) + coeff * c2
            finally:
                self._nf_active.discard(exps)
            result = {m: c for m, c in acc.items() if c}
        self._nf_cache[exps] = result
        return result

    def _vector(self, degree: int, combo: Mapping) -> tuple[int, ...]:
        coeffs = [0] * len(self._basis[degree])
        index = self._index[degree]
        for mon, c in combo.items():
            if mon in index:
                coeffs[index[mon]] += c
            elif self._order_of(mon) != 1:
                raise RingError("normal form left the basis in degree %d" % degree)
        return tuple(_norm_coeff(c, o) for c, o in zip(coeffs, self._orders[degree]))

    def _check_confluence(self):
        for d, mons in self._monomials.items():
            for exps in mons:
                canonical = None
                for rule in self.presentation.rules:
                    if not all(l <= e for l, e in zip(rule.lhs, exps)):
                        continue
                    if canonical is None:
                        canonical = self._vector(d, self._normal_form(exps))
                    acc: dict = {}
                    for coeff, mon in self._apply_rule(exps, rule):
                        for m2, c2 in self._normal_form(mon).items():
                            acc[m2] = acc.get(m2, 0) + coeff * c2
                    if self._vector(d, acc) != canonical:
                        raise ConfluenceError(
                            "rules disagree on %s"
                            % format_exponents(self.names, exps))

    def _build_table(self):
        self._table = {}
        for d1 in range(self.cutoff + 1):
            for d2 in range(self.cutoff + 1 - d1):
                b1, b2 = self._basis[d1], self._basis[d2]
                for i, a in enumerate(b1):
                    for j, b in enumerate(b2):
                        sign = self._koszul(a, b)
                        prod = tuple(x + y for x, y in zip(a, b))
                        nf = self._normal_form(prod)
                        vec = self._vector(
                            d1 + d2, {m: sign * c for m, c in nf.items()})
                        self._table[(d1, i, d2, j)] = vec

    def _check_table(self):
        for (d1, i, d2, j), v12 in self._table.items():
            d = d1 + d2
            orders = self._orders[d]
            v21 = self._table[(d2, j, d1, i)]
            sign = -1 if (d1 * d2) % 2 else 1
            flipped = tuple(_norm_coeff(sign * c, o) for c, o in zip(v21, orders))
            if v12 != flipped:
                raise SignRuleError(
                    "product of %s and %s breaks graded commutativity"
                    % (format_exponents(self.names, self._basis[d1][i]),
                       format_exponents(self.names, self._basis[d2][j])))
            o_left = self._orders[d1][i]
            if o_left:
                for c, o in zip(v12, orders):
                    if _norm_coeff(o_left * c, o):
                        raise RingError(
                            "product of %s and %s violates additive orders"
                            % (format_exponents(self.names, self._basis[d1][i]),
                               format_exponents(self.names, self._basis[d2][j])))

    # -- public API --------------------------------------------------------

    def basis(self, degree: int) -> tuple[tuple[int, ...], ...]:
        self._check_degree(degree)
        return self._basis[degree]

    def orders(self, degree: int) -> tuple[int, ...]:
        self._check_degree(degree)
        return self._orders[degree]

    def basis_strings(self, degree: int) -> tuple[str, ...]:
        return tuple(format_exponents(self.names, m) for m in self.basis(degree))

    def relation_matrix(self, degree: int) -> IntMatrix:
        """Diagonal matrix of additive orders of the degree-d basis."""
        return IntMatrix.diagonal(self.orders(degree))

    def _check_degree(self, degree: int):
        if not 0 <= degree <= self.cutoff:
            raise DegreeError("degree %d outside [0, %d]" % (degree, self.cutoff))

    def element(self, degree: int, coeffs: Sequence[int]) -> "RingElement":
        return RingElement(self, degree, coeffs)

    def zero(self, degree: int) -> "RingElement":
        self._check_degree(degree)
        return RingElement(self, degree, [0] * len(self._basis[degree]))

    def unit(self) -> "RingElement":
        return self.monomial((0,) * len(self.generators))

    def monomial(self, exps: Sequence[int]) -> "RingElement":
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(self.generators) or any(e < 0 for e in exps):
            raise RingError("bad exponent tuple %r" % (exps,))
        d = self._exp_degree(exps)
        self._check_degree(d)
        return RingElement(self, d, self._vector(d, self._normal_form(exps)))

    def from_terms(self, degree: int, terms: Mapping[str, int]) -> "RingElement":
        """Build an element from {monomial string: coefficient}."""
        self._check_degree(degree)
        acc = self.zero(degree)
        for text, coeff in terms.items():
            try:
                exps = parse_exponents(self.names, text)
            except ValueError as exc:
                raise RingError(str(exc)) from None
            if self._exp_degree(exps) != degree:
                raise DegreeError(
                    "monomial %r has degree %d, expected %d"
                    % (text, self._exp_degree(exps), degree))
            acc = acc + int(coeff) * self.monomial(exps)
        return acc

    def product_vector(self, d1: int, i: int, d2: int, j: int) -> tuple[int, ...]:
        return self._table[(d1, i, d2, j)]

    def check_associativity(self) -> None:
        """Verify (xy)z == x(yz) for all basis triples inside the cutoff."""
        for da in range(self.cutoff + 1):
            for db in range(self.cutoff + 1 - da):
                for dc in range(self.cutoff + 1 - da - db):
                    for a in self._basis_elements(da):
                        for b in self._basis_elements(db):
                            for c in self._basis_elements(dc):
                                if (a * b) * c != a * (b * c):
                                    raise RingError(
                                        "associativity fails on %s, %s, %s"
                                        % (a, b, c))

    def _basis_elements(self, d):
        n = len(self._basis[d])
        for i in range(n):
            coeffs = [0] * n
            coeffs[i] = 1
            yield RingElement(self, d, coeffs)

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self.presentation == other.presentation

    def __hash__(self):
        return hash(self.presentation)

    def __repr__(self):
        return "GradedRing(modulus=%d, cutoff=%d, generators=%s)" % (
            self.modulus, self.cutoff, ",".join(self.names))


class RingElement:
    """Homogeneous element, stored as coefficients over the degree basis."""

    __slots__ = ("ring", "degree", "coeffs")

    def __init__(self, ring: GradedRing, degree: int, coeffs: Sequence[int]):
        ring._check_degree(degree)
        orders = ring.orders(degree)
        if len(coeffs) != len(orders):
            raise RingError(
                "expected %d coefficients in degree %d, got %d"
                % (len(orders), degree, len(coeffs)))
        self.ring = ring
        self.degree = degree
        self.coeffs = tuple(_norm_coeff(int(c), o) for c, o in zip(coeffs, orders))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _require_peer(self, other):
        if not isinstance(other, RingElement) or other.ring != self.ring:
            raise RingError("operands live in different rings")
        if other.degree != self.degree:
            raise DegreeError("operands live in different degrees")

    def __add__(self, other):
        self._require_peer(other)
        return RingElement(self.ring, self.degree,
                           [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._require_peer(other)
        return RingElement(self.ring, self.degree,
                           [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return RingElement(self.ring, self.degree, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, self.degree,
                               [other * c for c in self.coeffs])
        if not isinstance(other, RingElement) or other.ring != self.ring:
            raise RingError("operands live in different rings")
        d = self.degree + other.degree
        if d > self.ring.cutoff:
            raise DegreeError(
                "product degree %d exceeds cutoff %d" % (d, self.ring.cutoff))
        coeffs = [0] * len(self.ring.basis(d))
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                vec = self.ring.product_vector(self.degree, i, other.degree, j)
                for k, v in enumerate(vec):
                    coeffs[k] += a * b * v
        return RingElement(self.ring, d, coeffs)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = self.ring.unit()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, RingElement) and self.ring == other.ring
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def terms(self) -> dict[str, int]:
        """Nonzero coefficients keyed by monomial string."""
        names = self.ring.names
        basis = self.ring.basis(self.degree)
        return {format_exponents(names, m): c
                for m, c in zip(basis, self.coeffs) if c}

    def __str__(self):
        parts = []
        names = self.ring.names
        for mon, c in zip(self.ring.basis(self.degree), self.coeffs):
            if not c:
                continue
            text = format_exponents(names, mon)
            if text == "1":
                parts.append("%d" % c)
            elif c == 1:
                parts.append(text)
            elif c == -1:
                parts.append("-%s" % text)
            else:
                parts.append("%d*%s" % (c, text))
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return "<%s in degree %d>" % (self, self.degree)


def parse_monomial(ring: GradedRing, text: str) -> tuple[int, ...]:
    try:
        return parse_exponents(ring.names, text)
    except ValueError as exc:
        raise RingError(str(exc)) from None


class CoefficientMap:
    """Additive degree-shifting map between rings, one matrix per degree.

    The matrix in source degree d has one column per source basis
    monomial and one row per target basis monomial in degree d + shift.
    Degrees whose image would exceed the target cutoff are undefined.
    """

    def __init__(self, name: str, source: GradedRing, target: GradedRing,
                 shift: int, matrices: Mapping[int, IntMatrix] | None = None):
        self.name = name
        self.source = source
        self.target = target
        self.shift = shift
        given = dict(matrices or {})
        self.matrices: dict[int, IntMatrix] = {}
        for d in range(source.cutoff + 1):
            td = d + shift
            if not 0 <= td <= target.cutoff:
                continue
            rows = len(target.basis(td))
            cols = len(source.basis(d))
            M = given.pop(d, None)
            if M is None:
                M = IntMatrix.zero(rows, cols)
            if M.rows != rows or M.cols != cols:
                raise RingError(
                    "map %s: matrix in degree %d should be %dx%d, got %dx%d"
                    % (name, d, rows, cols, M.rows, M.cols))
            t_orders = target.orders(td)
            norm = IntMatrix(rows, cols,
                             [_norm_coeff(M[i, j], t_orders[i])
                              for i in range(rows) for j in range(cols)])
            self._check_orders(d, norm)
            self.matrices[d] = norm
        if given:
            raise RingError(
                "map %s: matrices supplied for undefined degrees %s"
                % (name, sorted(given)))

    def _check_orders(self, d: int, M: IntMatrix):
        s_orders = self.source.orders(d)
        t_orders = self.target.orders(d + self.shift)
        for j, o in enumerate(s_orders):
            if not o:
                continue
            for i, ot in enumerate(t_orders):
                if _norm_coeff(o * M[i, j], ot):
                    raise RingError(
                        "map %s does not respect additive orders in degree %d"
                        % (self.name, d))

    def defined(self, degree: int) -> bool:
        return degree in self.matrices

    def matrix(self, degree: int) -> IntMatrix:
        if degree not in self.matrices:
            raise DegreeError(
                "map %s undefined in degree %d" % (self.name, degree))
        return self.matrices[degree]

    def __call__(self, x: RingElement) -> RingElement:
        if x.ring != self.source:
            raise RingError("map %s applied outside its source ring" % self.name)
        M = self.matrix(x.degree)
        return self.target.element(x.degree + self.shift, M.mul_vector(x.coeffs))

    @classmethod
    def compose(cls, name: str, outer: "CoefficientMap",
                inner: "CoefficientMap") -> "CoefficientMap":
        if outer.source != inner.target:
            raise RingError("composition mismatch: %s after %s"
                            % (outer.name, inner.name))
        mats = {}
        for d, M in inner.matrices.items():
            mid = d + inner.shift
            if outer.defined(mid):
                mats[d] = outer.matrix(mid) @ M
        return cls(name, inner.source, outer.target,
                   inner.shift + outer.shift, mats)

    @classmethod
    def scaled_identity(cls, name: str, source: GradedRing, target: GradedRing,
                        scale: int = 1) -> "CoefficientMap":
        mats = {}
        for d in range(source.cutoff + 1):
            if d > target.cutoff:
                break
            if source.basis(d) != target.basis(d):
                raise RingError(
                    "rings do not share a monomial basis in degree %d" % d)
            n = len(source.basis(d))
            mats[d] = IntMatrix(n, n, [scale if i == j else 0
                                       for i in range(n) for j in range(n)])
        return cls(name, source, target, 0, mats)

    def __eq__(self, other):
        return (isinstance(other, CoefficientMap) and self.name == other.name
                and self.source == other.source and self.target == other.target
                and self.shift == other.shift and self.matrices == other.matrices)

    def __repr__(self):
        return "CoefficientMap(%s, shift=%d)" % (self.name, self.shift)


class RingSystem:
    """Integral, mod-2, and mod-4 rings tied together by coefficient maps.

    Validation happens at construction: the three rings must share a
    cutoff and carry moduli 0, 2, 4, and the maps must satisfy

        theta2 . rho2 = rho4 . (2 id)      rho24 . rho4 = rho2
        2 beta = 0                          beta . rho2 = 0
        rho2 . beta = sq1

    degree by degree on every basis monomial.
    """

    def __init__(self, integral: GradedRing, mod2: GradedRing, mod4: GradedRing,
                 rho2: CoefficientMap, rho4: CoefficientMap,
                 theta2: CoefficientMap, rho24: CoefficientMap,
                 beta: CoefficientMap, sq1: CoefficientMap | None = None):
        self.integral = integral
        self.mod2 = mod2
        self.mod4 = mod4
        self.rho2 = rho2
        self.rho4 = rho4
        self.theta2 = theta2
        self.rho24 = rho24
        self.beta = beta
        self.sq1 = sq1 if sq1 is not None else CoefficientMap.compose(
            "sq1", rho2, beta)
        self.validate()

    def validate(self) -> None:
        if self.integral.modulus != 0 or self.mod2.modulus != 2 or self.mod4.modulus != 4:
            raise RingError("ring moduli must be 0, 2, 4")
        if not (self.integral.cutoff == self.mod2.cutoff == self.mod4.cutoff):
            raise RingError("rings must share a cutoff")
        for m, src, tgt, shift in (
                (self.rho2, self.integral, self.mod2, 0),
                (self.rho4, self.integral, self.mod4, 0),
                (self.theta2, self.mod2, self.mod4, 0),
                (self.rho24, self.mod4, self.mod2, 0),
                (self.beta, self.mod2, self.integral, 1),
                (self.sq1, self.mod2, self.mod2, 1)):
            if m.source != src or m.target != tgt or m.shift != shift:
                raise RingError("map %s has the wrong signature" % m.name)
        cutoff = self.integral.cutoff
        for d in range(cutoff + 1):
            self._expect(d, self.mod4,
                         self.theta2.matrix(d) @ self.rho2.matrix(d),
                         self._scale(self.rho4.matrix(d), 2),
                         "theta2 . rho2 = rho4 . 2")
            self._expect(d, self.mod2,
                         self.rho24.matrix(d) @ self.rho4.matrix(d),
                         self.rho2.matrix(d),
                         "rho24 . rho4 = rho2")
            if self.beta.defined(d):
                B = self.beta.matrix(d)
                self._expect(d + 1, self.integral, self._scale(B, 2),
                             IntMatrix.zero(B.rows, B.cols), "2 beta = 0")
                self._expect(d + 1, self.mod2,
                             self.rho2.matrix(d + 1) @ B,
                             self.sq1.matrix(d),
                             "rho2 . beta = sq1")
                if d + 1 <= cutoff:
                    self._expect(d + 1, self.integral,
                                 B @ self.rho2.matrix(d),
                                 IntMatrix.zero(B.rows, self.rho2.matrix(d).cols),
                                 "beta . rho2 = 0")

    @staticmethod
    def _scale(M: IntMatrix, k: int) -> IntMatrix:
        return IntMatrix(M.rows, M.cols, [k * M[i, j]
                                          for i in range(M.rows)
                                          for j in range(M.cols)])

    def _expect(self, degree: int, ring: GradedRing,
                left: IntMatrix, right: IntMatrix, law: str):
        orders = ring.orders(degree)

        def norm(M):
            return tuple(_norm_coeff(M[i, j], orders[i])
                         for i in range(M.rows) for j in range(M.cols))

        if left.rows != right.rows or left.cols != right.cols or norm(left) != norm(right):
            raise RingError("identity %s fails in degree %d" % (law, degree))

    @classmethod
    def with_reduction_defaults(cls, presentation: RingPresentation) -> "RingSystem":
        """System for a torsion-free integral ring: reductions are literal.

        The mod-2 and mod-4 rings reuse the presentation with the modulus
        swapped, all reduction maps are (scaled) identities on monomials,
        and the Bockstein vanishes, as it must without 2-torsion.
        """
        if presentation.modulus != 0:
            raise RingError("expected an integral presentation")
        if any(g.order for g in presentation.generators):
            raise RingError("defaults require a torsion-free presentation")
        integral = GradedRing(presentation)
        mod2 = GradedRing(replace(presentation, modulus=2))
        mod4 = GradedRing(replace(presentation, modulus=4))
        rho2 = CoefficientMap.scaled_identity("rho2", integral, mod2)
        rho4 = CoefficientMap.scaled_identity("rho4", integral, mod4)
        theta2 = CoefficientMap.scaled_identity("theta2", mod2, mod4, 2)
        rho24 = CoefficientMap.scaled_identity("rho24", mod4, mod2)
        beta = CoefficientMap("beta", mod2, integral, 1)
        sq1 = CoefficientMap("sq1", mod2, mod2, 1)
        return cls(integral, mod2, mod4, rho2, rho4, theta2, rho24, beta, sq1)

    def __eq__(self, other):
        return (isinstance(other, RingSystem)
                and self.integral == other.integral
                and self.mod2 == other.mod2 and self.mod4 == other.mod4
                and self.rho2 == other.rho2 and self.rho4 == other.rho4
                and self.theta2 == other.theta2 and self.rho24 == other.rho24
                and self.beta == other.beta and self.sq1 == other.sq1)


@dataclass(frozen=True)
class LiftSearch:
    """Integral preimages under rho2 found within a coefficient bound."""

    lifts: tuple[RingElement, ...]
    no_lift_proven: bool = False


def divide_by(n: int, y: RingElement) -> tuple[RingElement, ...]:
    """All x in y's ring with n*x = y, in coefficient-lexicographic order.

    Division happens coordinatewise against the additive order of each
    basis monomial, so the answer is exact: an empty tuple means n*x = y
    has no solution at all.
    """
    if n == 0:
        raise ValueError("division by zero scalar")
    ring = y.ring
    axes = []
    for c, o in zip(y.coeffs, ring.orders(y.degree)):
        if o == 0:
            if c % n:
                return ()
            axes.append([c // n])
            continue
        g = math.gcd(n, o)
        if c % g:
            return ()
        step = o // g
        base = (c // g) * pow(n // g, -1, step) % step if step > 1 else 0
        axes.append(sorted((base + k * step) % o for k in range(g)))
    return tuple(ring.element(y.degree, combo)
                 for combo in itertools.product(*axes))


def _lift_axes(system: RingSystem, degree: int, bound: int):
    axes = []
    for o in system.integral.orders(degree):
        if o == 0:
            axes.append(range(-bound, bound + 1))
        else:
            axes.append(range(o))
    return axes


def _lift_system(system: RingSystem, u: RingElement) -> Optional[tuple[int, ...]]:
    # solve rho2(x) = u as an integer system: M x + diag(orders) t = u
    M = system.rho2.matrix(u.degree)
    A = M.hstack(system.mod2.relation_matrix(u.degree))
    solved = solve_integer_linear(A, u.coeffs)
    if solved is None:
        return None
    particular, _ = solved
    return particular[:M.cols]


def any_integral_lift(system: RingSystem, u: RingElement) -> Optional[RingElement]:
    """One integral x with rho2(x) = u, or None when provably none exists."""
    if u.ring != system.mod2:
        raise RingError("lift source must be the mod-2 ring")
    coeffs = _lift_system(system, u)
    if coeffs is None:
        return None
    return system.integral.element(u.degree, coeffs)


def integral_lifts(system: RingSystem, u: RingElement, bound: int) -> LiftSearch:
    """All lifts of u with free coefficients in [-bound, bound].

    Torsion coordinates range over their full residue system regardless
    of the bound.  no_lift_proven is True exactly when the underlying
    congruences are unsolvable, which no bound can repair.
    """
    if u.ring != system.mod2:
        raise RingError("lift source must be the mod-2 ring")
    if bound < 0:
        raise ValueError("negative bound")
    if _lift_system(system, u) is None:
        return LiftSearch(lifts=(), no_lift_proven=True)
    found = []
    for combo in itertools.product(*_lift_axes(system, u.degree, bound)):
        x = system.integral.element(u.degree, combo)
        if system.rho2(x) == u:
            found.append(x)
    return LiftSearch(lifts=tuple(found), no_lift_proven=False)


def pontryagin_square(system: RingSystem, u: RingElement) -> RingElement:
    """rho4 of the square of any integral lift of u.

    On classes that lift, the value is independent of the chosen lift:
    (x + 2k)^2 = x^2 + 4(kx + k^2) and the correction dies mod 4.
    Raises NoIntegralLift when u has no integral preimage.
    """
    lift = any_integral_lift(system, u)
    if lift is None:
        raise NoIntegralLift(
            "no integral lift in degree %d" % u.degree)
    return system.rho4(lift * lift)


def build_ring(presentation: RingPresentation) -> GradedRing:
    return GradedRing(presentation)


def cup(x: RingElement, y: RingElement) -> RingElement:
    return x * y


def apply_map(m: CoefficientMap, x: RingElement) -> RingElement:
    return m(x)


def sq1_derivation(ring: GradedRing,
                   images: Mapping[str, RingElement]) -> CoefficientMap:
    """Extend generator images to a degree +1 derivation on a mod-2 ring.

    images maps generator names to elements one degree up; the extension
    follows the Leibniz rule, which needs no signs mod 2.  Generators
    missing from images are sent to zero.
    """
    if ring.modulus != 2:
        raise RingError("derivations here live on mod-2 rings")
    gen_image = []
    for g in ring.generators:
        img = images.get(g.name)
        if img is None:
            if g.degree + 1 <= ring.cutoff:
                img = ring.zero(g.degree + 1)
        else:
            if img.ring != ring or img.degree != g.degree + 1:
                raise RingError("image of %s must live one degree up" % g.name)
        gen_image.append(img)
    mats = {}
    for d in range(ring.cutoff):
        basis = ring.basis(d)
        rows = len(ring.basis(d + 1))
        cols = []
        for exps in basis:
            acc = ring.zero(d + 1)
            for i, e in enumerate(exps):
                if not e or e % 2 == 0:
                    continue
                img = gen_image[i]
                if img is None or img.is_zero:
                    continue
                rest = list(exps)
                rest[i] -= 1
                acc = acc + ring.monomial(rest) * img
            cols.append(acc.coeffs)
        entries = [cols[j][i] for i in range(rows) for j in range(len(basis))]
        mats[d] = IntMatrix(rows, len(basis), entries)
    return CoefficientMap("sq1", ring, ring, 1, mats)
