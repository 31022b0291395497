"""Exact rational scalars and vectors."""

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence, Tuple, Union

RatVec = Tuple[Fraction, ...]
IntVec = Tuple[int, ...]
Scalar = Union[int, Fraction]


def as_fraction(value: Union[int, Fraction, str]) -> Fraction:
    """
    Convert an exact scalar to a normalized Fraction.

    Args:
        value: int, Fraction or a "p/q" string

    Returns:
        Reduced Fraction with positive denominator

    Raises:
        TypeError: for floats, bools and anything inexact
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"inexact or boolean value {value!r} is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot read {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q" (no decimal points, no exponents)."""
    stripped = text.strip()
    if any(ch in stripped for ch in ".eE"):
        raise ValueError(f"{text!r} is not an exact rational")
    numerator, _, denominator = stripped.partition("/")
    if not denominator:
        return Fraction(int(numerator))
    return Fraction(int(numerator), int(denominator))


def format_rational(value: Scalar) -> str:
    """Render a rational as "p" or "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch {len(a)} != {len(b)}")
    return Fraction(sum(x * y for x, y in zip(a, b)))


def common_denominator(values: Iterable[Scalar]) -> int:
    """Least common multiple of the denominators (1 for an empty input)."""
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def primitive(vector: Sequence[Scalar]) -> IntVec:
    """
    Scale a nonzero rational vector to the primitive integer vector on its ray.

    Args:
        vector: rational coordinates, not all zero

    Returns:
        Integer vector with gcd 1 pointing in the same direction
    """
    scale = common_denominator(vector)
    ints = [int(Fraction(v) * scale) for v in vector]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ValueError("the zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def is_primitive(vector: Sequence[int]) -> bool:
    return reduce(gcd, vector, 0) == 1


def integral(vector: Sequence[Scalar]) -> bool:
    return all(Fraction(v).denominator == 1 for v in vector)


def to_ints(vector: Sequence[Scalar]) -> IntVec:
    """Convert an integral rational vector to ints (raises if not integral)."""
    if not integral(vector):
        raise ValueError(f"{vector} is not integral")
    return tuple(int(Fraction(v)) for v in vector)


def scale(vector: Sequence[Scalar], factor: Scalar) -> RatVec:
    return tuple(Fraction(v) * factor for v in vector)


def add(a: Sequence[Scalar], b: Sequence[Scalar]) -> RatVec:
    return tuple(Fraction(x) + y for x, y in zip(a, b))


def sub(a: Sequence[Scalar], b: Sequence[Scalar]) -> RatVec:
    return tuple(Fraction(x) - y for x, y in zip(a, b))
