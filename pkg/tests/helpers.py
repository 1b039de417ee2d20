"""Shared fixtures and samplers for the test suite."""

from evenlat import ExtendedForm, Matrix


def random_token(rng, n, spread=2):
    c = rng.randrange(3)
    if c == 0:
        return ("J",)
    lam = tuple(rng.randint(-spread, spread) for _ in range(n + 2))
    return ("T" if c == 1 else "T*", lam)


def random_word(rng, n, length, spread=2):
    return tuple(random_token(rng, n, spread) for _ in range(length))


def random_element(form: ExtendedForm, rng, max_len=5, spread=2):
    return form.element_from_word(
        random_word(rng, form.n, rng.randint(1, max_len), spread)
    )


def corner_scaling(dim: int, d: int) -> Matrix:
    """diag(d^2, d, ..., d, 1): scales the extended form by d^2."""
    rows = [[0] * dim for _ in range(dim)]
    rows[0][0] = d * d
    for i in range(1, dim - 1):
        rows[i][i] = d
    rows[dim - 1][dim - 1] = 1
    return Matrix(rows)


def scale_matrix(m: Matrix, s: int) -> Matrix:
    return Matrix([[s * x for x in row] for row in m.rows])


# A matrix over the 4A1 extended form that scales it by 4 but whose
# first column is not divisible by its pairing content: the reduction
# hypothesis fails for this non-maximal base. Produced by conjugating a
# scaled matrix over the glued (index-2) overlattice back down.
HYPOTHESIS_VIOLATOR_4A1 = [
    [120, 2, 26, -14, 50, 78, 42, 19],
    [-76, 0, -16, 8, -32, -48, -26, -12],
    [6, 0, 3, -1, 3, 3, 2, 1],
    [86, 2, 19, -9, 37, 57, 30, 14],
    [-2, 0, -1, 1, -1, -3, -2, -1],
    [18, 0, 3, -3, 9, 11, 6, 3],
    [-20, 0, -4, 4, -8, -12, -4, -3],
    [52, 2, 12, -4, 24, 36, 20, 9],
]
