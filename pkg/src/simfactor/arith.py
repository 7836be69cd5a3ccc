"""Square classes of Q and local Hilbert symbols."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from sympy import factorint

from .errors import ZeroInput

Rational = Union[int, Fraction]


_FACTOR_CACHE: dict = {}
_FACTOR_CACHE_LIMIT = 1 << 18


def _remember(n: int, pairs: tuple) -> tuple:
    if len(_FACTOR_CACHE) < _FACTOR_CACHE_LIMIT:
        _FACTOR_CACHE[n] = pairs
    return pairs


def _factor(n: int) -> tuple:
    """Sorted ``(prime, exponent)`` pairs of ``|n|``."""
    n = abs(n)
    if n <= 1:
        return ()
    hit = _FACTOR_CACHE.get(n)
    if hit is None:
        hit = _remember(n, tuple(sorted(factorint(n).items())))
    return hit


def squarefree_of_product(factors) -> int:
    """Square-free part of a product, factoring each factor separately.

    The factorization of the result is cached, so later queries about it
    (square roots modulo it, its prime support) need no new factoring.
    """
    exps = {}
    sign = 1
    for n in factors:
        if n == 0:
            raise ZeroInput("zero has no square class")
        if n < 0:
            sign = -sign
        for p, e in _factor(n):
            exps[p] = exps.get(p, 0) + e
    primes = tuple(sorted(p for p, e in exps.items() if e & 1))
    r = 1
    for p in primes:
        r *= p
    if r > 1:
        _remember(r, tuple((p, 1) for p in primes))
    return sign * r


def prime_support(n: int) -> tuple:
    return tuple(p for p, _ in _factor(n))


@lru_cache(maxsize=65536)
def _squarefree_int(n: int) -> int:
    if n == 0:
        raise ZeroInput("zero has no square class")
    r = 1
    for p, e in _factor(n):
        if e & 1:
            r *= p
    return r if n > 0 else -r


def to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, SquareClass):
        return Fraction(q.value)
    if isinstance(q, str):
        return Fraction(q.strip())
    raise TypeError(f"expected an exact rational, got {type(q).__name__}")


def squarefree_part(q) -> int:
    """Signed square-free integer in the square class of the nonzero rational ``q``."""
    q = to_fraction(q)
    if q == 0:
        raise ZeroInput("zero has no square class")
    # n/d ~ n*d modulo squares
    return _squarefree_int(q.numerator * q.denominator)


@dataclass(frozen=True)
class SquareClass:
    """Element of Q^x / (Q^x)^2, stored as a sign and a sorted prime list."""

    sign: int
    primes: tuple = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if list(self.primes) != sorted(set(self.primes)):
            raise ValueError("primes must be strictly increasing")

    @property
    def value(self) -> int:
        r = self.sign
        for p in self.primes:
            r *= p
        return r

    @classmethod
    def of(cls, q) -> "SquareClass":
        return squarefree_class(q)

    def is_square(self) -> bool:
        return self.sign == 1 and not self.primes

    def __mul__(self, other):
        return squarefree_class(self.value * SquareClass.of(other).value)

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def squarefree_class(q) -> SquareClass:
    """Canonical square class of a nonzero rational.

    >>> squarefree_class(18).value
    2
    >>> squarefree_class(Fraction(-4, 9)).value
    -1
    """
    if isinstance(q, SquareClass):
        return q
    n = squarefree_part(q)
    return SquareClass(1 if n > 0 else -1, prime_support(n))


def is_rational_square(q) -> bool:
    return squarefree_part(q) == 1


@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime=None`` is the real place."""

    prime: int | None = None

    @property
    def is_real(self) -> bool:
        return self.prime is None

    def sort_key(self):
        return (0, 0) if self.prime is None else (1, self.prime)

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)


REAL = Place(None)


def FinitePrime(p: int) -> Place:  # noqa: N802 - mirrors the tagged-union name
    if p < 2 or len(_factor(p)) != 1 or _factor(p)[0][1] != 1:
        raise ValueError(f"{p} is not prime")
    return Place(p)


def sorted_places(places: Iterable[Place]) -> list:
    return sorted(set(places), key=Place.sort_key)


def bad_places(values) -> list:
    """Real place, 2, and every odd prime dividing a numerator or denominator."""
    primes = {2}
    for q in values:
        q = to_fraction(q)
        if q == 0:
            raise ZeroInput("bad_places needs nonzero values")
        primes.update(prime_support(q.numerator))
        primes.update(prime_support(q.denominator))
    return [REAL] + [Place(p) for p in sorted(primes)]


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _split_off(n: int, p: int):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


@lru_cache(maxsize=262144)
def _hilbert_int(a: int, b: int, p) -> int:
    if p is None:
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = _split_off(a, p)
    beta, v = _split_off(b, p)
    if p == 2:
        eps_u = ((u - 1) // 2) & 1
        eps_v = ((v - 1) // 2) & 1
        om_u = ((u * u - 1) // 8) & 1
        om_v = ((v * v - 1) // 8) & 1
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e & 1 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) & 1 else 1
    if beta & 1:
        s *= _legendre(u, p)
    if alpha & 1:
        s *= _legendre(v, p)
    return s


def hilbert_symbol(a, b, v: Place) -> int:
    """Local Hilbert symbol ``(a, b)_v`` of two nonzero rationals."""
    a = squarefree_part(a)
    b = squarefree_part(b)
    if a > b:
        a, b = b, a
    return _hilbert_int(a, b, v.prime)


def is_local_square(q, v: Place) -> bool:
    """Whether the nonzero rational ``q`` is a square in the completion at ``v``."""
    n = squarefree_part(q)
    if v.prime is None:
        return n > 0
    p = v.prime
    if n % p == 0:
        return False
    if p == 2:
        return n % 8 == 1
    return _legendre(n, p) == 1
