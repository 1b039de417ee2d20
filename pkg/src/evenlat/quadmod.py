"""Finite quadratic modules, isotropy, and glue groups.

A module here is a finite abelian group d_1 Z x ... x d_k Z carrying a
quadratic form q with values in Q/Z, presented by rational lifts of its
generators into the dual of an even lattice. Elements are coordinate tuples
taken mod the divisors; q is evaluated exactly. The central predicates:

* anisotropic (q vanishes only at 0), which is equivalent to the source
  lattice having no proper even overlattice;
* totally isotropic subgroups, whose members are exactly the glue groups of
  even overlattices, maximal subgroups giving maximal overlattices.

Scans are guarded by explicit caps and fail loudly instead of degrading.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, prod

from .matrices import Matrix, denominator_lcm

MAX_ORDER = 10**6  # element-scan guard
MAX_GLUE_ORDER = 4096  # subgroup-enumeration guard


class CapExceeded(RuntimeError):
    """An enumeration cap was hit; the requested scan was not performed."""


class FiniteQuadraticModule:
    """Discriminant form presented by divisors and dual-vector lifts.

    divisors: the nontrivial invariant factors d_1 | d_2 | ... (each > 1).
    generator_lifts: for each divisor, a rational coordinate vector in the
        source lattice basis whose class generates the corresponding cyclic
        factor; entries reduced into [0, 1).
    lift_gram: exact Gram matrix of the lifts under the source form, so
        q(x) = (1/2) x^t lift_gram x mod 1.
    """

    def __init__(self, divisors, generator_lifts, lift_gram: Matrix,
                 source_gram=None, snf_row_transform=None, full_divisors=None):
        divisors = tuple(int(d) for d in divisors)
        if any(d <= 1 for d in divisors):
            raise ValueError("divisors must all exceed 1")
        for a, b in zip(divisors, divisors[1:]):
            if b % a != 0:
                raise ValueError("divisors must form a chain d_i | d_{i+1}")
        k = len(divisors)
        lifts = tuple(tuple(Fraction(x) - (Fraction(x) // 1) for x in v)
                      for v in generator_lifts)
        if len(lifts) != k:
            raise ValueError("one lift per divisor required")
        if lift_gram.shape != (k, k) or not lift_gram.is_symmetric:
            raise ValueError("lift_gram must be symmetric k x k")
        self.divisors = divisors
        self.generator_lifts = lifts
        self.lift_gram = lift_gram
        # integer fast path: q(x) = (x^t N*G x) / (2N) mod 1
        n = denominator_lcm(x for row in lift_gram.rows for x in row)
        self._den = 2 * n
        self._igram = [[int(x * n) for x in row] for row in lift_gram.rows]
        self._source_gram = source_gram
        self._snf_u = snf_row_transform
        self._full_divisors = full_divisors

    # -- group structure -----------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.divisors)

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.divisors)

    def elements(self):
        """All elements, lexicographically."""
        return product(*(range(d) for d in self.divisors))

    def add(self, x: tuple, y: tuple) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.divisors))

    def neg(self, x: tuple) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.divisors))

    def scale(self, j: int, x: tuple) -> tuple:
        return tuple((j * a) % d for a, d in zip(x, self.divisors))

    def element_order(self, x: tuple) -> int:
        out = 1
        for a, d in zip(x, self.divisors):
            o = d // gcd(a, d)
            out = out * o // gcd(out, o)
        return out

    def lift(self, x: tuple) -> tuple:
        """A rational dual vector representing the class x, entries in [0,1)."""
        n = len(self.generator_lifts[0]) if self.generator_lifts else 0
        acc = [Fraction(0)] * n
        for c, vec in zip(x, self.generator_lifts):
            for i, val in enumerate(vec):
                acc[i] += c * val
        return tuple(v - (v // 1) for v in acc)

    # -- quadratic form --------------------------------------------------------

    def _qnum(self, x: tuple) -> int:
        # numerator of q(x) over the fixed denominator 2N
        g = self._igram
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = g[i]
                total += xi * xi * row[i]
                for j in range(i + 1, len(x)):
                    total += 2 * xi * x[j] * row[j]
        return total % self._den

    def q_value(self, x: tuple) -> Fraction:
        """q(x) as an exact rational in [0, 1)."""
        self._check_element(x)
        return Fraction(self._qnum(x), self._den)

    def bilinear(self, x: tuple, y: tuple) -> Fraction:
        """b(x, y) = q(x+y) - q(x) - q(y) mod 1, in [0, 1)."""
        s = self._qnum(self.add(x, y)) - self._qnum(x) - self._qnum(y)
        return Fraction(s % self._den, self._den)

    def _check_element(self, x: tuple):
        if len(x) != len(self.divisors) or any(
            not (0 <= a < d) for a, d in zip(x, self.divisors)
        ):
            raise ValueError(f"{x!r} is not a reduced element of this module")

    def q_table(self) -> dict:
        """Full element -> q(x) map. Only sensible for small modules."""
        return {x: self.q_value(x) for x in self.elements()}

    # -- isotropy ---------------------------------------------------------------

    def _guard(self, max_order: int):
        if self.order > max_order:
            raise CapExceeded(
                f"module order {self.order} exceeds the scan cap {max_order}"
            )

    def is_anisotropic(self, max_order: int = MAX_ORDER) -> bool:
        """True iff q(x) = 0 only for x = 0."""
        self._guard(max_order)
        zero = self.zero
        for x in self.elements():
            if x != zero and self._qnum(x) == 0:
                return False
        return True

    def isotropic_elements(self, max_order: int = MAX_ORDER) -> list:
        """Nonzero isotropic elements, lexicographically ordered."""
        self._guard(max_order)
        zero = self.zero
        return [x for x in self.elements() if x != zero and self._qnum(x) == 0]

    # -- subgroups ---------------------------------------------------------------

    def _closure_with(self, span: frozenset, g: tuple):
        # span is a subgroup; returns span + <g>
        out = set(span)
        step = set(span)
        for _ in range(self.element_order(g) - 1):
            step = {self.add(s, g) for s in step}
            out |= step
        return frozenset(out)

    def _isotropic_extension(self, span: frozenset, x: tuple):
        # closure of span and x if totally isotropic, else None
        new = self._closure_with(span, x)
        for y in new:
            if y not in span and self._qnum(y) != 0:
                return None
        return new

    def maximal_isotropic_subgroups(self, max_order: int = MAX_GLUE_ORDER) -> list:
        """All maximal totally isotropic subgroups as GlueGroups.

        Each subgroup is produced once, via its canonical generator chain
        (repeatedly adjoin the least element outside the current span). For an
        anisotropic module the answer is the trivial subgroup alone.
        """
        self._guard(max_order)
        iso = self.isotropic_elements(max_order)
        found = []

        def is_maximal(span):
            return all(
                x in span or self._isotropic_extension(span, x) is None
                for x in iso
            )

        def dfs(chain, span):
            floor = chain[-1] if chain else None
            for x in iso:
                if floor is not None and x <= floor:
                    continue
                if x in span:
                    continue
                new = self._isotropic_extension(span, x)
                if new is None:
                    continue
                if min(new - span) != x:
                    continue  # not the canonical chain for that subgroup
                dfs(chain + [x], new)
            if is_maximal(span):
                found.append((tuple(chain), span))

        dfs([], frozenset([self.zero]))
        found.sort(key=lambda t: (len(t[1]), t[0]))
        return [GlueGroup(self, gens, span) for gens, span in found]


class GlueGroup:
    """A totally isotropic subgroup of a finite quadratic module."""

    def __init__(self, parent: FiniteQuadraticModule, generators, _span=None):
        gens = tuple(tuple(int(a) % d for a, d in zip(g, parent.divisors))
                     for g in generators)
        span = _span
        if span is None:
            span = frozenset([parent.zero])
            for g in gens:
                span = parent._closure_with(span, g)
            for y in span:
                if parent._qnum(y) != 0:
                    raise ValueError(
                        f"glue group is not isotropic: q{y!r} != 0"
                    )
            gens = _canonical_chain(parent, span)
        self.parent = parent
        self.generators = gens
        self._span = span

    @property
    def order(self) -> int:
        return len(self._span)

    def elements(self) -> frozenset:
        return self._span

    def __eq__(self, other):
        return (
            isinstance(other, GlueGroup)
            and self.parent is other.parent
            and self._span == other._span
        )

    def __hash__(self):
        return hash(self._span)

    def __repr__(self):
        return f"GlueGroup(order={self.order}, generators={list(self.generators)})"


def _canonical_chain(mod: FiniteQuadraticModule, span: frozenset) -> tuple:
    # greedy: repeatedly take the least element not yet spanned
    chain = []
    cur = frozenset([mod.zero])
    rest = sorted(span - cur)
    while rest:
        g = rest[0]
        chain.append(g)
        cur = mod._closure_with(cur, g)
        rest = sorted(span - cur)
    return tuple(chain)


def is_maximal_even(lattice, max_order: int = MAX_ORDER) -> bool:
    """True iff the even lattice admits no proper even overlattice.

    Equivalent to its discriminant form being anisotropic; applies to definite
    and indefinite nondegenerate forms alike.
    """
    return lattice.discriminant_group().is_anisotropic(max_order)
