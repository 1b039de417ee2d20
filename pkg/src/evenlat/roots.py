"""Root lattices of the A, D, E series and their standard glue data.

Gram matrices come from the usual simple-root models:

* A_n: differences of consecutive unit vectors, giving the tridiagonal
  2/-1 matrix of rank n and determinant n+1;
* D_n: e1+e2 followed by consecutive differences, determinant 4;
* E6, E7, E8: the Dynkin-diagram Cartan matrices (chain 1-3-4-5-...-N with
  node 2 hanging off node 4), determinants 3, 2, 1;
* D_n with a plus suffix: the index-2 even overlattice of D_n glued along
  the half-sum of the unit vectors, which is even exactly when 8 | n.

Names such as "A7", "D8+", or "4A1" (a multiplicity prefix means an
orthogonal direct sum of copies) are parsed by ``root_lattice``. The closed
form for maximality of a single ADE lattice is ``maximality_formula``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .lattices import EvenLattice, direct_sum, overlattice_from_glue
from .matrices import Matrix
from .quadmod import GlueGroup

_NAME_RE = re.compile(r"^(\d*)([ADE])(\d+)(\+?)$")

_E_EDGES = {
    6: [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
    7: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
    8: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
}

_E_DETS = {6: 3, 7: 2, 8: 1}


def squarefree(n: int) -> bool:
    """True iff no square > 1 divides n (n >= 1)."""
    if n < 1:
        raise ValueError("need a positive integer")
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


def _a_gram(n: int) -> Matrix:
    return Matrix([
        [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)]
        for i in range(n)
    ])


def _d_gram(n: int) -> Matrix:
    # basis: e1+e2, e1-e2, e2-e3, ..., e_{n-1}-e_n
    basis = []
    basis.append([1, 1] + [0] * (n - 2))
    basis.append([1, -1] + [0] * (n - 2))
    for i in range(2, n):
        row = [0] * n
        row[i - 1] = 1
        row[i] = -1
        basis.append(row)
    b = Matrix(basis)
    return b @ b.T


def _e_gram(n: int) -> Matrix:
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in _E_EDGES[n]:
        rows[a - 1][b - 1] = -1
        rows[b - 1][a - 1] = -1
    return Matrix(rows)


def a_generator_class(lat: EvenLattice) -> tuple:
    """Class of the standard generator of the A_n discriminant group.

    Takes an A_n lattice in the simple-root basis and returns the class of
    the dual vector with coordinates (n+1-i)/(n+1); its q value is
    n / (2(n+1)).
    """
    n = lat.rank
    coords = [Fraction(n + 1 - i, n + 1) for i in range(1, n + 1)]
    return lat.element_from_dual(coords)


def _d_plus_glue_class(lat: EvenLattice) -> tuple:
    # half-sum of unit vectors, written in the e1+e2, e1-e2, diffs basis
    n = lat.rank
    coords = [Fraction(n, 4), Fraction(2 - n, 4)]
    coords += [Fraction(-(n - i + 1), 2) for i in range(3, n + 1)]
    return lat.element_from_dual(coords)


def _single(family: str, n: int, plus: bool) -> EvenLattice:
    if family == "A":
        if n < 1:
            raise ValueError("A-series needs rank >= 1")
        if plus:
            raise ValueError("a plus suffix applies only to the D series")
        return EvenLattice(_a_gram(n), name=f"A{n}")
    if family == "D":
        if n < 2:
            raise ValueError("D-series needs rank >= 2")
        lat = EvenLattice(_d_gram(n), name=f"D{n}")
        if not plus:
            return lat
        if n % 8:
            raise ValueError(
                "the glued D-series lattice is even only when 8 divides the rank"
            )
        glue = GlueGroup(lat.discriminant_group(), [_d_plus_glue_class(lat)])
        over, _ = overlattice_from_glue(lat, glue)
        over.name = f"D{n}+"
        return over
    if family == "E":
        if n not in _E_EDGES:
            raise ValueError("E-series exists for ranks 6, 7, 8")
        if plus:
            raise ValueError("a plus suffix applies only to the D series")
        lat = EvenLattice(_e_gram(n), name=f"E{n}")
        if lat.determinant != _E_DETS[n]:
            raise AssertionError("E-series determinant check failed")
        return lat
    raise ValueError(f"unknown family {family!r}")


def parse_name(name: str):
    """Split a lattice name like ``4A1`` or ``D8+`` into parts."""
    m = _NAME_RE.match(name.strip())
    if not m:
        raise ValueError(
            f"cannot parse lattice name {name!r}; expected e.g. A7, D8+, 4A1"
        )
    mult = int(m.group(1)) if m.group(1) else 1
    if mult < 1:
        raise ValueError("multiplicity must be at least 1")
    return mult, m.group(2), int(m.group(3)), bool(m.group(4))


def root_lattice(name: str) -> EvenLattice:
    """Build the even lattice named by an ADE symbol with optional multiplicity."""
    mult, family, n, plus = parse_name(name)
    one = _single(family, n, plus)
    if mult == 1:
        return one
    out = direct_sum(*[_single(family, n, plus) for _ in range(mult)])
    out.name = name.strip()
    return out


def maximality_formula(family: str, n: int) -> bool:
    """Closed-form test: does the ADE lattice admit no proper even overlattice?

    A_n: yes iff n+1 is squarefree (n even) or (n+1)/2 is squarefree (n odd).
    D_n: yes iff n is not divisible by 8. E6, E7, E8: always.
    """
    if family == "A":
        if n < 1:
            raise ValueError("A-series needs rank >= 1")
        return squarefree(n + 1) if n % 2 == 0 else squarefree((n + 1) // 2)
    if family == "D":
        if n < 2:
            raise ValueError("D-series needs rank >= 2")
        return n % 8 != 0
    if family == "E":
        if n not in (6, 7, 8):
            raise ValueError("E-series exists for ranks 6, 7, 8")
        return True
    raise ValueError(f"unknown family {family!r}")
