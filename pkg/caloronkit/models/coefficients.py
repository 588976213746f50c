"""
Coefficient tables for CaloronKit.
Exact rational coefficients of the Chern-Weil, Chern-Simons and string series.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from ..errors import ConfigError

# Recurrence check depth for the string coefficient table
VALIDATED_ORDER = 12


def string_coefficient(i: int, j: int) -> Fraction:
    """c_{i,j} = (−1/2)^i · j!(j−1)! / ((j+i)!(j−1−i)!) for 0 ≤ i ≤ j−1."""
    if not 0 <= i <= j - 1:
        raise ConfigError("String coefficient index out of range", i=i, j=j)
    return Fraction(-1, 2) ** i * Fraction(
        factorial(j) * factorial(j - 1), factorial(j + i) * factorial(j - 1 - i)
    )


def odd_chern_coefficient(j: int) -> Fraction:
    """Rational part −j!/(2j+1)! of the degree-(2j+1) odd Chern term."""
    return -Fraction(factorial(j), factorial(2 * j + 1))


def transgression_coefficient(j: int) -> Fraction:
    """Rational part −j!/(2j)! of the degree-2j transgressed term."""
    return -Fraction(factorial(j), factorial(2 * j))


@dataclass(frozen=True)
class StringCoefficients:
    """
    Table of c_{i,j} for 1 ≤ j ≤ cutoff.

    Construction checks c_{0,1} = 1 and 2(2j−1)c_{j−1,j} = −c_{j−2,j} in exact
    arithmetic up to j = 12.

    Attributes:
        cutoff: Largest j in the table
        table: c_{i,j} keyed by (i, j), exact rationals
    """

    cutoff: int
    table: dict[tuple[int, int], Fraction] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.cutoff < 1:
            raise ConfigError("String coefficient tables start at j = 1", cutoff=self.cutoff)
        depth = max(self.cutoff, VALIDATED_ORDER)
        table = {(i, j): string_coefficient(i, j) for j in range(1, depth + 1) for i in range(j)}
        if table[(0, 1)] != 1:
            raise ConfigError("c_{0,1} must equal 1")
        for j in range(2, depth + 1):
            if 2 * (2 * j - 1) * table[(j - 1, j)] != -table[(j - 2, j)]:
                raise ConfigError("String coefficient recurrence failed", j=j)
        object.__setattr__(self, "table", {k: v for k, v in table.items() if k[1] <= self.cutoff})

    def __getitem__(self, key: tuple[int, int]) -> float:
        return float(self.table[key])
