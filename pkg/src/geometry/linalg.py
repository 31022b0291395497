"""Exact linear algebra over Q and Z, backed by sympy."""

from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import ZZ

from .rational import RatVec, Scalar, primitive

Rows = Tuple[Tuple[Scalar, ...], ...]


def _sym(value: Scalar) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _frac(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _matrix(rows: Sequence[Sequence[Scalar]]) -> sympy.Matrix:
    return sympy.Matrix([[_sym(x) for x in row] for row in rows])


def _freeze(rows: Sequence[Sequence[Scalar]]) -> Rows:
    return tuple(tuple(row) for row in rows)


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank of the matrix whose rows are given (0 for no rows)."""
    if not rows:
        return 0
    return _rank(_freeze(rows))


@lru_cache(maxsize=65536)
def _rank(rows: Rows) -> int:
    return _matrix(rows).rank()


def determinant(rows: Sequence[Sequence[Scalar]]) -> Fraction:
    return _frac(_matrix(rows).det())


def solve_square(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> Optional[RatVec]:
    """
    Solve a square system exactly.

    Args:
        rows: n x n coefficient rows
        rhs: right-hand side of length n

    Returns:
        The unique solution, or None when the matrix is singular
    """
    return _solve_square(_freeze(rows), tuple(rhs))


@lru_cache(maxsize=262144)
def _solve_square(rows: Rows, rhs: Tuple[Scalar, ...]) -> Optional[RatVec]:
    matrix = _matrix(rows)
    if matrix.det() == 0:
        return None
    solution = matrix.LUsolve(sympy.Matrix([_sym(b) for b in rhs]))
    return tuple(_frac(x) for x in solution)


def solve_unique(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> Optional[RatVec]:
    """
    Solve a possibly overdetermined system with full column rank.

    Returns:
        The unique solution, or None when the system is inconsistent or the
        solution is not unique
    """
    return _solve_unique(_freeze(rows), tuple(rhs))


@lru_cache(maxsize=65536)
def _solve_unique(rows: Rows, rhs: Tuple[Scalar, ...]) -> Optional[RatVec]:
    matrix = _matrix(rows)
    if matrix.rank() < matrix.cols:
        return None
    try:
        solution, params = matrix.gauss_jordan_solve(sympy.Matrix([_sym(b) for b in rhs]))
    except ValueError:
        return None
    if params.shape[0]:
        return None
    return tuple(_frac(x) for x in solution)


def coordinates(basis: Sequence[Sequence[Scalar]], vector: Sequence[Scalar]) -> Optional[RatVec]:
    """Coordinates of ``vector`` in the linearly independent ``basis`` (None if outside the span)."""
    columns = [[basis[j][i] for j in range(len(basis))] for i in range(len(vector))]
    return solve_unique(columns, vector)


def nullspace(rows: Sequence[Sequence[Scalar]], dim: int) -> List[RatVec]:
    """Basis of {x in Q^dim : row . x = 0 for every row}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    return list(_nullspace(_freeze(rows)))


@lru_cache(maxsize=65536)
def _nullspace(rows: Rows) -> Tuple[RatVec, ...]:
    return tuple(tuple(_frac(x) for x in column) for column in _matrix(rows).nullspace())


def kernel_line(rows: Sequence[Sequence[Scalar]], dim: int) -> Optional[Tuple[int, ...]]:
    """Primitive generator of a one-dimensional null space, None otherwise."""
    basis = nullspace(rows, dim)
    if len(basis) != 1:
        return None
    return primitive(basis[0])


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """
    Index of the lattice spanned by integer rows inside its saturation.

    Computed as the product of the invariant factors (Smith normal form).
    """
    factors = invariant_factors(sympy.Matrix([list(row) for row in rows]), domain=ZZ)
    return abs(reduce(lambda acc, f: acc * int(f), factors, 1))


def maximal_minor_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors; an independent route to ``lattice_index``."""
    k = len(rows)
    n = len(rows[0])
    result = 0
    for cols in combinations(range(n), k):
        minor = determinant([[row[c] for c in cols] for row in rows])
        result = gcd(result, abs(int(minor)))
    return result
