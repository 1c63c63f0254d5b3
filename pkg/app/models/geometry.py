"""
Exact planar geometry value types.

Coordinates are always `Fraction`s; nothing here ever rounds.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, List, Sequence, Tuple, Union

from app.utils.errors import ParameterError, SizeError

Rational = Union[int, Fraction]


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ParameterError("float coordinates are not accepted; use integers or p/q text")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise ParameterError(f"invalid rational coordinate {value!r}: {e}")


@dataclass(frozen=True)
class ExactPoint:
    """Planar point with exact rational coordinates"""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _to_fraction(self.x))
        object.__setattr__(self, "y", _to_fraction(self.y))

    @classmethod
    def parse(cls, text: str) -> "ExactPoint":
        """Parse `x y` where each coordinate is an integer, `p/q` or a decimal"""
        parts = text.split()
        if len(parts) != 2:
            raise ParameterError(f"expected two coordinates, got {text!r}")
        return cls(_to_fraction(parts[0]), _to_fraction(parts[1]))

    def to_text(self) -> str:
        return f"{self.x} {self.y}"

    def as_tuple(self) -> Tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def to_row(self) -> List[int]:
        """[x_num, x_den, y_num, y_den]"""
        return [self.x.numerator, self.x.denominator, self.y.numerator, self.y.denominator]

    def __repr__(self):
        return f"ExactPoint({self.x}, {self.y})"


@dataclass(frozen=True)
class Configuration:
    """Ordered point sequence; general position is checked by geom, not here"""

    points: Tuple[ExactPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(
            p if isinstance(p, ExactPoint) else ExactPoint(*p) for p in self.points
        ))

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index: int) -> ExactPoint:
        return self.points[index]

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[Rational]]) -> "Configuration":
        return cls(tuple(ExactPoint(x, y) for x, y in coords))

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        """One point per line; blank lines and `#` comments ignored"""
        points = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                points.append(ExactPoint.parse(line))
        return cls(tuple(points))

    def to_text(self) -> str:
        return "".join(p.to_text() + "\n" for p in self.points)

    def subset(self, indices: Iterable[int]) -> "Configuration":
        return Configuration(tuple(self.points[i] for i in indices))

    def scaled(self, factor: Rational) -> "Configuration":
        f = _to_fraction(factor)
        return Configuration(tuple(ExactPoint(p.x * f, p.y * f) for p in self.points))

    def coords(self) -> List[Tuple[Fraction, Fraction]]:
        return [p.as_tuple() for p in self.points]


@lru_cache(maxsize=None)
def triple_rank_table(n: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """table[i][j][k] = lexicographic rank of i < j < k (other cells -1)"""
    table = [[[-1] * n for _ in range(n)] for _ in range(n)]
    rank = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                table[i][j][k] = rank
                rank += 1
    return tuple(tuple(tuple(row) for row in plane) for plane in table)


@dataclass(frozen=True)
class OrderTypeSignature:
    """±1 orientation vector indexed by lexicographic triple rank"""

    n: int
    signs: Tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        object.__setattr__(self, "signs", signs)
        if self.n < 0:
            raise SizeError(f"negative point count {self.n}")
        expected = comb(self.n, 3)
        if len(signs) != expected:
            raise SizeError(
                f"signature for n={self.n} needs {expected} signs, got {len(signs)}"
            )
        if any(s not in (-1, 1) for s in signs):
            raise ParameterError("signature entries must be -1 or +1")

    def sign(self, i: int, j: int, k: int) -> int:
        """Orientation of an arbitrary (unsorted, distinct) index triple"""
        parity = 1
        # sort three values while tracking the permutation parity
        if i > j:
            i, j = j, i
            parity = -parity
        if j > k:
            j, k = k, j
            parity = -parity
        if i > j:
            i, j = j, i
            parity = -parity
        return parity * self.signs[triple_rank_table(self.n)[i][j][k]]

    def flipped(self) -> "OrderTypeSignature":
        return OrderTypeSignature(self.n, tuple(-s for s in self.signs))

    def to_bytes(self) -> bytes:
        """Pack signs little-endian within bytes, bit set for +1"""
        out = bytearray((len(self.signs) + 7) // 8)
        for idx, s in enumerate(self.signs):
            if s > 0:
                out[idx >> 3] |= 1 << (idx & 7)
        return bytes(out)

    @classmethod
    def from_bytes(cls, n: int, data: bytes) -> "OrderTypeSignature":
        count = comb(n, 3)
        if len(data) != (count + 7) // 8:
            raise SizeError(f"packed signature for n={n} must be {(count + 7) // 8} bytes")
        return cls(n, tuple(1 if data[i >> 3] >> (i & 7) & 1 else -1 for i in range(count)))

    @staticmethod
    def packed_size(n: int) -> int:
        return (comb(n, 3) + 7) // 8
