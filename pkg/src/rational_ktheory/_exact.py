"""Exact Gaussian-rational arithmetic for certified orbit computations."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class GaussQ:
    """a + b i with a, b rational."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def from_complex(cls, z: complex, max_denominator: int | None = None) -> "GaussQ":
        re, im = Fraction(z.real), Fraction(z.imag)
        if max_denominator is not None:
            re, im = re.limit_denominator(max_denominator), im.limit_denominator(max_denominator)
        return cls(re, im)

    def __add__(self, other: "GaussQ") -> "GaussQ":
        return GaussQ(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussQ") -> "GaussQ":
        return GaussQ(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussQ") -> "GaussQ":
        return GaussQ(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def __truediv__(self, other: "GaussQ") -> "GaussQ":
        n = other.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussQ(num.re / n, num.im / n)

    def conjugate(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def denominator_bits(self) -> int:
        return max(self.re.denominator.bit_length(), self.im.denominator.bit_length())

    def numerator_bits(self) -> int:
        return max(abs(self.re.numerator).bit_length(), abs(self.im.numerator).bit_length())

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        return isinstance(other, GaussQ) and self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussQ({self.re}, {self.im})"


def horner(coeffs: Sequence[GaussQ], z: GaussQ) -> GaussQ:
    acc = GaussQ(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def derivative_coeffs(coeffs: Sequence[GaussQ]) -> list[GaussQ]:
    return [c * GaussQ(k) for k, c in enumerate(coeffs)][1:]
