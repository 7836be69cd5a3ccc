"""Pfister forms <<a_1, ..., a_n>> = <1,-a_1> x ... x <1,-a_n>."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import nextprime

from .arith import SquareClass, bad_places, squarefree_class, squarefree_part, to_fraction
from .errors import DegenerateForm, NotASimilarityFactor, ParseError, SearchExhausted
from .forms import (
    QuadraticForm,
    RepVector,
    find_representation,
    format_rational,
    is_hyperbolic,
    is_isotropic,
    is_similarity_factor,
    is_subform,
    orth_sum,
    parse_rational,
    represents,
    scale,
    tensor,
    witt_decompose,
)
from . import _solve

# square classes tried by the last-resort search in similitude_witness
WITNESS_SEARCH_EXTRA_PRIMES = 6


@dataclass(frozen=True)
class PfisterForm:
    slots: tuple = ()

    def __post_init__(self):
        s = tuple(to_fraction(a) for a in self.slots)
        if any(a == 0 for a in s):
            raise DegenerateForm("Pfister slot must be nonzero")
        object.__setattr__(self, "slots", s)

    @cached_property
    def expansion(self) -> QuadraticForm:
        out = QuadraticForm((1,))
        for a in self.slots:
            out = tensor(out, QuadraticForm((1, -a)))
        return out

    @property
    def fold(self) -> int:
        return len(self.slots)

    @property
    def dim(self) -> int:
        return 2 ** len(self.slots)

    def pure_part(self) -> QuadraticForm:
        return pure_part(self)

    def times(self, other: "PfisterForm") -> "PfisterForm":
        return PfisterForm(self.slots + other.slots)

    def __str__(self):
        return format_pfister(self)


def make_pfister(slots) -> PfisterForm:
    return PfisterForm(tuple(slots))


def pure_part(pi: PfisterForm) -> QuadraticForm:
    """Drop the leading 1 of the canonical expansion."""
    return QuadraticForm(pi.expansion.coeffs[1:])


def is_hyperbolic_pfister(pi: PfisterForm) -> bool:
    # isotropic Pfister forms are hyperbolic
    return pi.fold > 0 and is_isotropic(pi.expansion)


def hyperbolic_over_sqrt_routes(pi: PfisterForm, d) -> tuple:
    """The two independent decisions ``(subform route, pure-part route)``."""
    d = squarefree_part(d)
    if pi.fold == 0:
        return (False, False)
    if d == 1:
        h = is_isotropic(pi.expansion)
        return (h, h)
    hyp = is_hyperbolic_pfister(pi)
    via_subform = hyp or is_subform(QuadraticForm((1, -d)), pi.expansion)
    via_pure = hyp or represents(pure_part(pi), -d)
    return (via_subform, via_pure)


def hyperbolic_over_sqrt(pi: PfisterForm, d) -> bool:
    """Whether ``pi`` becomes hyperbolic over ``Q(sqrt(d))``."""
    a, b = hyperbolic_over_sqrt_routes(pi, d)
    if a != b:
        raise AssertionError(f"routes disagree for {pi} over sqrt({d})")
    return a


def _norm_one(d: int):
    for t in (1, 2, 3, 5):
        den = 1 - d * t * t
        if den != 0:
            return Fraction(1 + d * t * t, den), Fraction(2 * t, den)
    raise AssertionError("unreachable")


def binary_rep(d, value) -> RepVector:
    """``(x, y)`` with ``x^2 - d y^2 = value`` and ``y != 0``.

    A second coordinate of zero is rotated away by a norm-one element so the
    vector pins down ``d``.
    """
    d = squarefree_part(d)
    value = to_fraction(value)
    form = QuadraticForm((1, -d))
    rv = find_representation(form, value)
    x, y = rv.coords
    if y == 0:
        p, q = _norm_one(d)
        x, y = x * p, x * q
    out = RepVector((x, y), value)
    assert out.check(form)
    return out


def _verified(pi: PfisterForm, c: Fraction, d: int) -> bool:
    return represents(QuadraticForm((1, -d)), c) and hyperbolic_over_sqrt(pi, d)


def similitude_witness(pi: PfisterForm, c) -> SquareClass:
    """A class ``d`` with ``c in D<<d>>`` and ``pi`` hyperbolic over ``Q(sqrt(d))``.

    Main route: a zero ``(x, y)`` of ``pi _|_ -c pi`` gives two vectors whose
    span is a binary subform ``beta`` with ``<<c>> x beta`` isotropic; ``d`` is
    the discriminant of ``beta``.
    """
    c = to_fraction(c)
    if pi.fold == 0:
        raise ValueError("the trivial Pfister form <1> is never hyperbolic")
    form = pi.expansion
    if not is_similarity_factor(form, c):
        raise NotASimilarityFactor(f"{c} is not a similarity factor of {pi}")
    if is_hyperbolic_pfister(pi):
        if c == 1:
            return squarefree_class(-1)
        return squarefree_class(1 - c)
    n = form.dim
    joint = orth_sum(form, scale(-c, form))
    v = _solve.isotropic_vector(joint.coeffs)
    x, y = v[:n], v[n:]
    det = form.evaluate(x) * form.evaluate(y) - form.bilinear(x, y) ** 2
    if det != 0:
        d = squarefree_part(-det)
        if _verified(pi, c, d):
            return squarefree_class(d)
    # c is a square (x, y dependent): pi contains <1, -a> for its last slot
    d = squarefree_part(pi.slots[-1])
    if _verified(pi, c, d):
        return squarefree_class(d)
    # plane through e_0 and a representation of c
    rv = find_representation(form, c)
    x0 = rv.coords[0]
    if c != x0 * x0:
        d = squarefree_part(x0 * x0 - c)
        if _verified(pi, c, d):
            return squarefree_class(d)
    return _search_witness(pi, c)


def _search_witness(pi: PfisterForm, c: Fraction) -> SquareClass:
    primes = [v.prime for v in bad_places(list(pi.slots) + [c])[1:]]
    extra = primes[-1]
    for _ in range(WITNESS_SEARCH_EXTRA_PRIMES + 1):
        for mask in range(1 << len(primes)):
            base = 1
            for i, p in enumerate(primes):
                if mask >> i & 1:
                    base *= p
            for d in (base, -base):
                if d != 1 and _verified(pi, c, d):
                    return squarefree_class(d)
        extra = nextprime(extra)
        primes.append(extra)
    raise SearchExhausted("similitude_witness", f"no class found for c={c} on {pi}")


def pfister_factorize(alpha: PfisterForm, phi: QuadraticForm) -> QuadraticForm:
    """``phi'`` with ``alpha x phi'`` anisotropic and Witt equivalent to ``alpha x phi``."""
    a = alpha.expansion
    if alpha.fold > 0 and is_isotropic(a):
        raise ValueError(f"{alpha} is isotropic")
    rest = witt_decompose(tensor(a, phi)).anisotropic
    out = []
    while rest.dim:
        for t in rest.coeffs:
            ta = scale(t, a)
            if is_subform(ta, rest):
                break
        else:
            raise SearchExhausted("pfister_factorize", f"no slot t with t*{alpha} inside {rest}")
        out.append(t)
        rest = witt_decompose(orth_sum(rest, scale(-1, ta))).anisotropic
    result = QuadraticForm(tuple(out))
    prod = tensor(a, result)
    assert (result.dim - phi.dim) % 2 == 0
    assert not is_isotropic(prod)
    assert is_hyperbolic(orth_sum(prod, scale(-1, tensor(a, phi))))
    return result


def parse_pfister(text: str, line: int = 1) -> PfisterForm:
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("<<") and s.endswith(">>")):
        raise ParseError(f"Pfister literal must look like <<a,b>>: {text!r}", line, lead + 1)
    body = s[2:-2]
    if not body.strip():
        return PfisterForm(())
    slots = []
    col = lead + 3
    for piece in body.split(","):
        off = col + (len(piece) - len(piece.lstrip()))
        q = parse_rational(piece, line, off)
        if q == 0:
            raise ParseError("zero Pfister slot", line, off)
        slots.append(q)
        col += len(piece) + 1
    return PfisterForm(tuple(slots))


def format_pfister(pi: PfisterForm) -> str:
    return "<<" + ",".join(format_rational(a) for a in pi.slots) + ">>"

