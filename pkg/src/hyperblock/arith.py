"""Exact Gaussian-integer arithmetic and residue fields Z[i]/I of odd order.

Admissible orders q are exactly the odd norms of prime elements of Z[i]:
q = p prime with p = 1 (mod 4) ("split", the ideal is (a+bi) with a^2+b^2=q)
or q = p^2 with p prime, p = 3 (mod 4) ("inert", the ideal is (p)).

Field elements are plain ints in range(q), ordered by the field's canonical
total order: the residue itself in split mode, and x*p + y for the element
x + y*i in inert mode (so int order is lexicographic on (x, y)). All
downstream canonical forms rely on that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import BothZero, InadmissibleOrder

# Far beyond desk scale; keeps every loop here trivially fast.
MAX_ADMISSIBLE_ORDER = 1 << 15


@dataclass(frozen=True, order=True)
class GaussianInt:
    """x + y*i with integer parts; a Euclidean domain element."""

    x: int
    y: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.x - other.x, self.y - other.y)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.x * other.x - self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.x, -self.y)

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.x, -self.y)

    def norm(self) -> int:
        return self.x * self.x + self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self) -> str:
        return f"{self.x}{self.y:+d}i"


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)


def _round_nearest(n: int, d: int) -> int:
    """Nearest integer to n/d for d > 0; ties round toward +infinity."""
    return (2 * n + d) // (2 * d)


def divmod_nearest(z: GaussianInt, w: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Euclidean division: z = q*w + r with norm(r) <= norm(w)/2."""
    if w.is_zero():
        raise ZeroDivisionError("division by zero Gaussian integer")
    num = z * w.conj()
    n = w.norm()
    q = GaussianInt(_round_nearest(num.x, n), _round_nearest(num.y, n))
    return q, z - q * w


def divide_exact(z: GaussianInt, w: GaussianInt) -> GaussianInt:
    """z / w when w divides z exactly."""
    q, r = divmod_nearest(z, w)
    if not r.is_zero():
        raise ValueError(f"{w} does not divide {z}")
    return q


def unit_normalize(z: GaussianInt) -> GaussianInt:
    """The associate of z in the quadrant x > 0, y >= 0 (0 stays 0)."""
    if z.is_zero():
        return z
    x, y = z.x, z.y
    for _ in range(4):
        if x > 0 and y >= 0:
            return GaussianInt(x, y)
        x, y = -y, x
    raise AssertionError("no normalized associate found")


def gauss_gcd(z: GaussianInt, w: GaussianInt) -> GaussianInt:
    """Greatest common divisor by the Euclidean algorithm, unit-normalized."""
    if z.is_zero() and w.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    a, b = z, w
    while not b.is_zero():
        _, r = divmod_nearest(a, b)
        a, b = b, r
    return unit_normalize(a)


def is_prime(n: int) -> bool:
    """Trial division; adequate for the capped desk-scale orders."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def classify_order(q: int) -> tuple[str, int]:
    """Return (mode, characteristic) for an admissible order, else raise."""
    if not isinstance(q, int) or q < 3:
        raise InadmissibleOrder(f"q={q!r} is not an odd prime power >= 5")
    if q % 2 == 0:
        raise InadmissibleOrder(f"q={q}: characteristic 2 is excluded")
    if q > MAX_ADMISSIBLE_ORDER:
        raise InadmissibleOrder(f"q={q} exceeds the cap {MAX_ADMISSIBLE_ORDER}")
    if is_prime(q):
        if q % 4 == 1:
            return "split", q
        raise InadmissibleOrder(f"q={q} is prime but not 1 mod 4")
    p = isqrt(q)
    if p * p == q and is_prime(p) and p % 4 == 3:
        return "inert", p
    raise InadmissibleOrder(f"q={q} is neither a 1-mod-4 prime nor the square of a 3-mod-4 prime")


def find_prime_element(q: int) -> GaussianInt:
    """Canonical generator of the norm-q prime ideal of Z[i].

    Split mode: the unique a+bi with a^2 + b^2 = q and a > b > 0, found by
    exhaustive search over a. Inert mode: p itself.
    """
    mode, p = classify_order(q)
    if mode == "inert":
        return GaussianInt(p, 0)
    for a in range(1, isqrt(q) + 1):
        b2 = q - a * a
        b = isqrt(b2)
        if b * b == b2 and a > b > 0:
            return GaussianInt(a, b)
    raise InadmissibleOrder(f"q={q}: no two-square decomposition with a > b > 0")


class PrimeField:
    """Arithmetic mod an odd prime p; elements are ints in range(p).

    This is the coefficient field for the 2D surface construction over
    Z/q; it carries no designated square root of -1.
    """

    mode = "plain"

    def __init__(self, p: int):
        if not is_prime(p) or p == 2:
            raise InadmissibleOrder(f"p={p} is not an odd prime")
        self.p = p
        self.q = p
        self.zero = 0
        self.one = 1

    def add(self, e: int, f: int) -> int:
        return (e + f) % self.p

    def sub(self, e: int, f: int) -> int:
        return (e - f) % self.p

    def mul(self, e: int, f: int) -> int:
        return (e * f) % self.p

    def neg(self, e: int) -> int:
        return -e % self.p

    def inv(self, e: int) -> int:
        if e % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(e, self.p - 2, self.p)

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(q={self.q})"


class SplitField(PrimeField):
    """Z[i]/(a+bi) = F_p for p = a^2 + b^2 prime, p = 1 (mod 4).

    The image of i is the designated s with s^2 = -1, namely -a * b^(-1).
    """

    mode = "split"

    def __init__(self, p: int, pi: GaussianInt):
        super().__init__(p)
        self.pi = pi
        self.s = (-pi.x * pow(pi.y, p - 2, p)) % p
        if self.s * self.s % p != p - 1:
            raise AssertionError(f"s^2 != -1 for q={p}")

    def reduce(self, z: GaussianInt) -> int:
        return (z.x + z.y * self.s) % self.p

    def canonical_lift(self, e: int) -> GaussianInt:
        return GaussianInt(e % self.p, 0)


class InertField:
    """Z[i]/(p) = F_{p^2} for p = 3 (mod 4); elements x + y*i.

    The element x + y*i is encoded as the int x*p + y, so int order agrees
    with the canonical lexicographic order on (x, y).
    """

    mode = "inert"

    def __init__(self, p: int):
        if not is_prime(p) or p % 4 != 3:
            raise InadmissibleOrder(f"p={p} is not a 3-mod-4 prime")
        self.p = p
        self.q = p * p
        self.pi = GaussianInt(p, 0)
        self.zero = 0
        self.one = 1 * p + 0
        self.s = 0 * p + 1  # the element 0 + 1*i

    def _pair(self, e: int) -> tuple[int, int]:
        return divmod(e, self.p)

    def _enc(self, x: int, y: int) -> int:
        return (x % self.p) * self.p + (y % self.p)

    def add(self, e: int, f: int) -> int:
        x1, y1 = divmod(e, self.p)
        x2, y2 = divmod(f, self.p)
        return self._enc(x1 + x2, y1 + y2)

    def sub(self, e: int, f: int) -> int:
        x1, y1 = divmod(e, self.p)
        x2, y2 = divmod(f, self.p)
        return self._enc(x1 - x2, y1 - y2)

    def mul(self, e: int, f: int) -> int:
        x1, y1 = divmod(e, self.p)
        x2, y2 = divmod(f, self.p)
        return self._enc(x1 * x2 - y1 * y2, x1 * y2 + y1 * x2)

    def neg(self, e: int) -> int:
        x, y = divmod(e, self.p)
        return self._enc(-x, -y)

    def inv(self, e: int) -> int:
        if e == 0:
            raise ZeroDivisionError("inverse of 0")
        x, y = divmod(e, self.p)
        # x^2 + y^2 is nonzero mod p since -1 is a non-residue for p = 3 mod 4
        n = (x * x + y * y) % self.p
        ninv = pow(n, self.p - 2, self.p)
        return self._enc(x * ninv, -y * ninv)

    def from_int(self, n: int) -> int:
        return self._enc(n, 0)

    def reduce(self, z: GaussianInt) -> int:
        return self._enc(z.x, z.y)

    def canonical_lift(self, e: int) -> GaussianInt:
        x, y = divmod(e, self.p)
        return GaussianInt(x, y)

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"InertField(q={self.q})"


ResidueField = SplitField | InertField


def make_field(q: int) -> SplitField | InertField:
    """Construct Z[i]/I as the field of order q, with s^2 = -1 designated."""
    mode, p = classify_order(q)
    if mode == "split":
        return SplitField(p, find_prime_element(q))
    return InertField(p)
