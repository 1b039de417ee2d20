"""The integral orthogonal group of the hyperbolic extension of an even base.

Starting from an even positive-definite base lattice with Gram matrix S of
rank n, two hyperbolic planes are adjoined to produce a form of signature
(2, n+2). Coordinates are ordered so that index 0 pairs with index n+3,
index 1 pairs with index n+2, and indices 2..n+1 carry the base lattice with
its sign flipped.

The module provides:

* ``ExtendedForm``: the (n+4)-dimensional form, its Gram matrix and inverse;
* ``Membership``/``classify``: where a given rational matrix sits in the
  chain orthogonal < special < special-plus < integral special-plus <
  discriminant kernel (each level includes all later ones);
* the standard generators: the corner-swapping involution and the two
  families of unipotent transvections indexed by base-extension vectors;
* ``complete_isotropic``: writes down, as an explicit word in those
  generators, a group element whose first column is a prescribed primitive
  isotropic vector.

Everything is exact integer/rational arithmetic.
"""

from __future__ import annotations

from enum import IntEnum
from math import gcd

from .lattices import EvenLattice
from .matrices import Matrix, det, vec_gcd
from .quadmod import MAX_ORDER, is_maximal_even

_COMPLETION_CAP = 10000


class Membership(IntEnum):
    """Increasing chain of membership levels for a rational matrix."""

    NOT_ORTHOGONAL = 0
    ORTHOGONAL = 1  # preserves the form
    SPECIAL = 2  # ... and has determinant +1
    SPECIAL_PLUS = 3  # ... and preserves the oriented positive 2-plane
    INTEGRAL_SPECIAL_PLUS = 4  # ... and is integral (the arithmetic group)
    DISCRIMINANT_KERNEL = 5  # ... and acts trivially on dual/lattice


class GroupElement:
    """An element of the integral special-plus group of an extended form.

    Optionally carries a word in the standard generators: a tuple of tokens
    ("J",), ("T", lam), ("T*", lam) whose left-to-right product equals the
    matrix.
    """

    def __init__(self, form: "ExtendedForm", matrix: Matrix, word=None):
        if not isinstance(matrix, Matrix):
            matrix = Matrix(matrix)
        if not matrix.is_integral:
            raise ValueError("group elements must be integral")
        if form.classify(matrix) < Membership.INTEGRAL_SPECIAL_PLUS:
            raise ValueError("matrix is not in the integral special-plus group")
        self.form = form
        self.matrix = matrix
        self.word = tuple(word) if word is not None else None

    def classify(self) -> Membership:
        return self.form.classify(self.matrix)

    def in_discriminant_kernel(self) -> bool:
        return self.classify() >= Membership.DISCRIMINANT_KERNEL

    def inverse(self) -> "GroupElement":
        word = None
        if self.word is not None:
            word = tuple(_token_inverse(t) for t in reversed(self.word))
        return GroupElement(
            self.form, self.form.orthogonal_inverse(self.matrix), word
        )

    def __matmul__(self, other):
        if isinstance(other, GroupElement):
            if self.form.s1 != other.form.s1:
                raise ValueError("elements live over different forms")
            word = None
            if self.word is not None and other.word is not None:
                word = self.word + other.word
            return GroupElement(self.form, self.matrix @ other.matrix, word)
        return self.matrix @ other

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.form.identity()
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.form.s1 == other.form.s1
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        w = f", word of length {len(self.word)}" if self.word is not None else ""
        return f"GroupElement(dim={self.matrix.nrows}{w})"


def _token_inverse(tok):
    if tok[0] == "J":
        return tok
    kind, lam = tok
    return (kind, tuple(-x for x in lam))


def _int_vec(v) -> tuple:
    out = []
    for x in v:
        if x != int(x):
            raise ValueError("transvection vector must be integral")
        out.append(int(x))
    return tuple(out)


def _first_mismatch(a: Matrix, b: Matrix) -> tuple:
    for i in range(a.nrows):
        for j in range(a.ncols):
            if a[i, j] != b[i, j]:
                return i, j
    raise AssertionError("matrices agree everywhere")


def _first_non_integral(a: Matrix) -> tuple:
    for i in range(a.nrows):
        for j in range(a.ncols):
            if a[i, j] != int(a[i, j]):
                return i, j
    raise AssertionError("matrix is integral")


class ExtendedForm:
    """Signature (2, n+2) hyperbolic extension of an even base lattice."""

    def __init__(self, base: EvenLattice):
        if not isinstance(base, EvenLattice):
            raise TypeError("base must be an EvenLattice")
        self.base = base
        n = base.rank
        self.n = n
        self.dim = n + 4
        s = base.gram
        self.s0 = self._corner_form(n + 2, s, invert=False)
        self.s0_inv = self._corner_form(n + 2, s, invert=True)
        self.s1 = self._nest(self.s0)
        self.s1_inv = self._nest(self.s0_inv)
        self._tokens = {}

    @staticmethod
    def _corner_form(size: int, s: Matrix, invert: bool) -> Matrix:
        from .matrices import inverse

        n = size - 2
        mid = inverse(s) if invert else s
        rows = [[0] * size for _ in range(size)]
        rows[0][size - 1] = 1
        rows[size - 1][0] = 1
        for i in range(n):
            for j in range(n):
                rows[1 + i][1 + j] = -mid[i, j]
        return Matrix(rows)

    @staticmethod
    def _nest(inner: Matrix) -> Matrix:
        size = inner.nrows + 2
        rows = [[0] * size for _ in range(size)]
        rows[0][size - 1] = 1
        rows[size - 1][0] = 1
        for i in range(inner.nrows):
            for j in range(inner.nrows):
                rows[1 + i][1 + j] = inner[i, j]
        return Matrix(rows)

    # -- basic form arithmetic -------------------------------------------------

    def quad(self, h) -> int:
        """Value of the extended quadratic form, h^t S1 h."""
        w = self.s1 @ tuple(h)
        return sum(a * b for a, b in zip(h, w))

    def mid_quad_half(self, lam):
        """Half the middle-form value of a base-extension vector (an integer)."""
        w = self.s0 @ tuple(lam)
        t = sum(a * b for a, b in zip(lam, w))
        if t % 2:
            raise AssertionError("middle form is even; half-value must be integral")
        return t // 2

    # -- generators ---------------------------------------------------------------

    def _token_matrix(self, tok) -> Matrix:
        if tok in self._tokens:
            return self._tokens[tok]
        d = self.dim
        n = self.n
        if tok[0] == "J":
            rows = [[0] * d for _ in range(d)]
            rows[0][d - 1] = -1
            rows[1][d - 2] = -1
            rows[d - 2][1] = -1
            rows[d - 1][0] = -1
            for i in range(n):
                rows[2 + i][2 + i] = 1
            m = Matrix(rows)
        else:
            kind, lam = tok
            if len(lam) != n + 2 or any(not isinstance(x, int) for x in lam):
                raise ValueError("transvection vector must be integral of length n+2")
            slam = self.s0 @ lam
            q = self.mid_quad_half(lam)
            rows = [[int(i == j) for j in range(d)] for i in range(d)]
            if kind == "T":
                for j in range(n + 2):
                    rows[0][1 + j] = -slam[j]
                    rows[1 + j][d - 1] = lam[j]
                rows[0][d - 1] = -q
            elif kind == "T*":
                for j in range(n + 2):
                    rows[1 + j][0] = lam[j]
                    rows[d - 1][1 + j] = -slam[j]
                rows[d - 1][0] = -q
            else:
                raise ValueError(f"unknown token {tok!r}")
            m = Matrix(rows)
        self._tokens[tok] = m
        return m

    def identity(self) -> GroupElement:
        return GroupElement(self, Matrix.identity(self.dim), ())

    def involution(self) -> GroupElement:
        """Swaps the two hyperbolic pairs (with signs); squares to the identity."""
        tok = ("J",)
        return GroupElement(self, self._token_matrix(tok), (tok,))

    def transvection(self, lam) -> GroupElement:
        """Unipotent element translating the second isotropic line by lam."""
        tok = ("T", _int_vec(lam))
        return GroupElement(self, self._token_matrix(tok), (tok,))

    def dual_transvection(self, lam) -> GroupElement:
        """Mirror unipotent element translating the first isotropic line by lam."""
        tok = ("T*", _int_vec(lam))
        return GroupElement(self, self._token_matrix(tok), (tok,))

    def element_from_word(self, word) -> GroupElement:
        """Left-to-right product of generator tokens."""
        m = Matrix.identity(self.dim)
        for tok in word:
            m = m @ self._token_matrix(tok)
        return GroupElement(self, m, tuple(word))

    def embed_rotation(self, q) -> GroupElement:
        """Extend a special isometry of the base lattice by identity corners."""
        if not isinstance(q, Matrix):
            q = Matrix(q)
        s = self.base.gram
        if q.shape != (self.n, self.n) or not q.is_integral:
            raise ValueError("rotation must be an integral base-sized matrix")
        if q.T @ s @ q != s:
            raise ValueError("rotation must preserve the base form")
        if det(q) != 1:
            raise ValueError("rotation must have determinant one")
        rows = [[int(i == j) for j in range(self.dim)] for i in range(self.dim)]
        for i in range(self.n):
            for j in range(self.n):
                rows[2 + i][2 + j] = q[i, j]
        return GroupElement(self, Matrix(rows))

    # -- membership ----------------------------------------------------------------

    def classify(self, m) -> Membership:
        """Highest level of the membership chain a rational matrix satisfies."""
        return self.classify_witness(m)[0]

    def classify_witness(self, m) -> tuple:
        """Membership level plus the datum that blocks the next level.

        The witness dict names the first failing check: the entry where the
        form congruence fails, a determinant different from one, a
        non-positive orientation value, a non-integral entry, or the entry
        of (M - I)·S1^{-1} showing nontrivial discriminant action. Kernel
        members get an empty witness.
        """
        if not isinstance(m, Matrix):
            m = Matrix(m)
        d = self.dim
        if m.shape != (d, d):
            raise ValueError("matrix has the wrong size for this form")
        w = m.T @ self.s1 @ m
        if w != self.s1:
            i, j = _first_mismatch(w, self.s1)
            return Membership.NOT_ORTHOGONAL, {
                "check": "form-congruence",
                "entry": (i, j),
                "got": w[i, j],
                "expected": self.s1[i, j],
            }
        dt = det(m)
        if dt != 1:
            return Membership.ORTHOGONAL, {"check": "determinant", "value": dt}
        orient = self._orientation_value(m)
        if orient <= 0:
            return Membership.SPECIAL, {"check": "orientation", "value": orient}
        if not m.is_integral:
            i, j = _first_non_integral(m)
            return Membership.SPECIAL_PLUS, {
                "check": "integrality",
                "entry": (i, j),
                "value": m[i, j],
            }
        delta = (m - Matrix.identity(d)) @ self.s1_inv
        if not delta.is_integral:
            i, j = _first_non_integral(delta)
            return Membership.INTEGRAL_SPECIAL_PLUS, {
                "check": "kernel-congruence",
                "entry": (i, j),
                "value": delta[i, j],
            }
        return Membership.DISCRIMINANT_KERNEL, {}

    def _plus_oriented(self, m) -> bool:
        return self._orientation_value(m) > 0

    def _orientation_value(self, m):
        # orientation of the positive 2-plane, read off the corner blocks
        d = self.dim
        r0, r1 = d - 2, d - 1
        # (C P + D) with P the off-diagonal 2x2 corner pairing
        a = m[r0, 1] + m[r0, r0]
        b = m[r0, 0] + m[r0, r1]
        c = m[r1, 1] + m[r1, r0]
        e = m[r1, 0] + m[r1, r1]
        return a * e - b * c

    def orthogonal_inverse(self, m) -> Matrix:
        """Inverse of an orthogonal matrix via the form: S1^{-1} m^t S1."""
        if not isinstance(m, Matrix):
            m = Matrix(m)
        out = self.s1_inv @ m.T @ self.s1
        return out.to_int() if out.is_integral else out

    def in_discriminant_kernel(self, m) -> bool:
        return self.classify(m) >= Membership.DISCRIMINANT_KERNEL

    # -- isotropic vectors -----------------------------------------------------------

    def is_isotropic(self, h) -> bool:
        return self.quad(h) == 0

    def is_primitive_isotropic(self, h) -> bool:
        """Isotropic, and the linear form pairing against h is onto the integers.

        The second condition is the gcd of the form-gram times h being 1; it is
        exactly what makes h completable to a first column of a group element.
        """
        h = tuple(h)
        if len(h) != self.dim or any(not isinstance(x, int) for x in h):
            raise ValueError("need an integral vector of full dimension")
        if all(x == 0 for x in h):
            return False
        if self.quad(h) != 0:
            return False
        return vec_gcd(self.s1 @ h) == 1

    def complete_isotropic(self, h) -> GroupElement:
        """Group element with prescribed primitive isotropic first column.

        Returns an element carrying an explicit generator word. Raises
        ValueError if the vector is not primitive isotropic.
        """
        h = _int_vec(h)
        if not self.is_primitive_isotropic(h):
            raise ValueError("vector is not primitive isotropic for this form")
        n = self.n
        d = self.dim
        i2, i3 = d - 2, d - 1
        hv = list(h)
        applied = []

        def do(tok):
            applied.append(tok)
            new = self._token_matrix(tok) @ tuple(hv)
            hv[:] = list(new)

        def mid(i, t=1):
            # middle basis vector (length n+2) scaled by t
            v = [0] * (n + 2)
            v[i] = t
            return tuple(v)

        def s_times_y():
            return self.base.gram @ tuple(hv[2:2 + n])

        # bootstrap: make the leading entry nonzero
        if hv[0] == 0:
            if hv[i3] != 0:
                do(("J",))
            elif hv[1] != 0:
                do(("T", mid(n + 1)))
            elif hv[i2] != 0:
                do(("T", mid(0)))
            else:
                sy = s_times_y()
                j = next(i for i in range(n) if sy[i] != 0)
                do(("T", mid(1 + j)))
        if hv[0] == 0:
            raise AssertionError("bootstrap failed to produce a nonzero corner")

        def euclid(idx, reduce_other, reduce_lead):
            # drive hv[idx] to zero, keeping hv[0] nonzero
            while hv[idx] != 0:
                q = hv[idx] // hv[0]
                if q:
                    reduce_other(-q)
                if hv[idx] == 0:
                    break
                q2, r2 = divmod(hv[0], hv[idx])
                if r2 == 0:
                    q2 -= 1
                if q2:
                    reduce_lead(q2)

        # moves: each changes exactly the stated entries plus harmless others
        def h1_add(t):  # hv[1] += t*hv[0]
            do(("T*", mid(0, t)))

        def h0_sub_h1(t):  # hv[0] -= t*hv[1]
            do(("T", mid(n + 1, t)))

        def h2_add(t):  # hv[i2] += t*hv[0]
            do(("T*", mid(n + 1, t)))

        def h0_sub_h2(t):  # hv[0] -= t*hv[i2]
            do(("T", mid(0, t)))

        for _ in range(_COMPLETION_CAP):
            euclid(1, h1_add, h0_sub_h1)
            euclid(i2, h2_add, h0_sub_h2)
            if hv[1] != 0:
                continue
            if hv[i3] % hv[0]:
                do(("T", mid(0)))  # feeds the last entry into position 1
                continue
            sy = s_times_y()
            bad = [i for i in range(n) if sy[i] % hv[0]]
            if bad:
                do(("T*", mid(1 + bad[0])))  # feeds the base obstruction downward
                continue
            break
        else:
            raise AssertionError("completion did not stabilize")

        if abs(hv[0]) != 1:
            raise AssertionError("corner is a unit exactly for primitive input")
        if any(hv[2:2 + n]):
            lam = [0] * (n + 2)
            for i in range(n):
                lam[1 + i] = -hv[2 + i] * hv[0]
            do(("T*", tuple(lam)))
        if hv[i3] != 0 or hv[1] != 0 or hv[i2] != 0:
            raise AssertionError("isotropy should clear the remaining entries")
        if hv[0] == -1:
            do(("T*", mid(0)))
            do(("T", mid(n + 1, 2)))
            do(("T*", mid(0)))
        if hv != [1] + [0] * (d - 1):
            raise AssertionError("completion did not reach the unit vector")

        word = tuple(_token_inverse(t) for t in applied)
        out = self.element_from_word(word)
        if out.matrix.col(0) != h:
            raise AssertionError("completed element does not start with h")
        return out

    def orbit_transporter(self, h_from, h_to) -> GroupElement:
        """Group element mapping one primitive isotropic vector to another."""
        a = self.complete_isotropic(h_from)
        b = self.complete_isotropic(h_to)
        out = b @ a.inverse()
        if out.matrix @ tuple(h_from) != tuple(h_to):
            raise AssertionError("transporter failed to map the vectors")
        return out


def has_single_cusp(form: ExtendedForm, max_order: int = MAX_ORDER) -> bool:
    """Whether the primitive isotropic dual vectors form a single orbit.

    The orbits of primitive isotropic vectors of the extended dual lattice
    under the discriminant kernel collapse to one exactly when the base
    lattice admits no proper even overlattice, so the verdict is computed
    from anisotropy of the base discriminant form.
    """
    return is_maximal_even(form.base, max_order)


def base_reflection(lat: EvenLattice, v) -> Matrix:
    """Reflection of the base lattice in a vector of norm 2 or -2."""
    v = tuple(int(x) for x in v)
    norm = lat.norm(v)
    if norm not in (2, -2):
        raise ValueError("reflections are integral only for norm +-2 vectors here")
    s = lat.gram
    n = lat.rank
    sv = s @ v
    sign = 1 if norm == 2 else -1
    rows = [
        [int(i == j) - sign * v[i] * sv[j] for j in range(n)]
        for i in range(n)
    ]
    m = Matrix(rows)
    if m.T @ s @ m != s:
        raise AssertionError("reflection must preserve the form")
    return m


def classify(form: ExtendedForm, m) -> Membership:
    return form.classify(m)


def complete_isotropic(form: ExtendedForm, h) -> GroupElement:
    return form.complete_isotropic(h)


def is_primitive_isotropic(form: ExtendedForm, h) -> bool:
    return form.is_primitive_isotropic(h)
