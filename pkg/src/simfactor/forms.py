"""Diagonal quadratic forms over Q.

Every yes/no answer here (isotropy, Witt index, isometry, representation,
subforms) is decided exactly from local invariants.  Explicit vectors come
from the constructive layer and are re-evaluated before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from sympy import nextprime

from . import _solve
from .arith import (
    REAL,
    Place,
    SquareClass,
    bad_places,
    is_local_square,
    sorted_places,
    squarefree_class,
    squarefree_part,
    to_fraction,
)
from .errors import DegenerateForm, NotRepresented, ParseError, SearchExhausted
from .local import hasse_at, is_isotropic_ints, isotropic_at, witt_index_ints


@dataclass(frozen=True)
class QuadraticForm:
    """Regular diagonal form ``<c_1, ..., c_n>``; the empty form is allowed."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = tuple(to_fraction(c) for c in self.coeffs)
        if any(c == 0 for c in cs):
            raise DegenerateForm(f"zero coefficient in {[str(c) for c in cs]}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, x) -> Fraction:
        return self.evaluate(x)

    def evaluate(self, x) -> Fraction:
        if len(x) != self.dim:
            raise ValueError(f"vector of length {len(x)} for form of dim {self.dim}")
        return sum((c * to_fraction(a) ** 2 for c, a in zip(self.coeffs, x)), Fraction(0))

    def bilinear(self, x, y) -> Fraction:
        return sum((c * to_fraction(a) * to_fraction(b) for c, a, b in zip(self.coeffs, x, y)), Fraction(0))

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        return orth_sum(self, other)

    def __neg__(self) -> "QuadraticForm":
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, QuadraticForm):
            return tensor(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    @cached_property
    def classes(self) -> tuple:
        """Coefficients reduced to signed square-free integers."""
        return tuple(squarefree_part(c) for c in self.coeffs)

    @cached_property
    def invariants(self) -> "FormInvariants":
        return invariants(self)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"QuadraticForm(<{format_form(self)}>)"


HYPERBOLIC_PLANE = QuadraticForm((1, -1))


def make_form(coeffs: Sequence) -> QuadraticForm:
    return QuadraticForm(tuple(coeffs))


def orth_sum(phi: QuadraticForm, psi: QuadraticForm) -> QuadraticForm:
    return QuadraticForm(phi.coeffs + psi.coeffs)


def tensor(phi: QuadraticForm, psi: QuadraticForm) -> QuadraticForm:
    return QuadraticForm(tuple(a * b for a in phi.coeffs for b in psi.coeffs))


def scale(c, phi: QuadraticForm) -> QuadraticForm:
    c = to_fraction(c)
    if c == 0:
        raise DegenerateForm("scaling by zero")
    return QuadraticForm(tuple(c * a for a in phi.coeffs))


def combine(kind: str, phi: QuadraticForm, psi: Optional[QuadraticForm] = None, c=None) -> QuadraticForm:
    """Dispatch on ``kind`` in ``{"orthsum", "tensor", "scale"}``."""
    kind = kind.lower()
    if kind == "scale":
        return scale(c, phi)
    if psi is None:
        raise ValueError(f"{kind} needs two forms")
    if kind in ("orthsum", "orth_sum", "sum"):
        return orth_sum(phi, psi)
    if kind == "tensor":
        return tensor(phi, psi)
    raise ValueError(f"unknown combination {kind!r}")


def hyperbolic(m: int) -> QuadraticForm:
    return QuadraticForm((1, -1) * m)


# ---------------------------------------------------------------------------
# invariants and decisions


@dataclass(frozen=True)
class FormInvariants:
    dim: int
    det: SquareClass
    disc: SquareClass
    signature: tuple
    hasse: dict = field(compare=False, hash=False)

    def hasse_at(self, v: Place) -> int:
        return self.hasse.get(v, 1)


def invariants(phi: QuadraticForm) -> FormInvariants:
    n = phi.dim
    det = 1
    for k in phi.classes:
        det = squarefree_part(det * k)
    disc = squarefree_part((-1) ** (n * (n - 1) // 2) * det)
    pos = sum(1 for c in phi.coeffs if c > 0)
    places = bad_places(phi.coeffs)
    hasse = {v: _hasse(phi.classes, v) for v in places}
    return FormInvariants(n, squarefree_class(det), squarefree_class(disc), (pos, n - pos), hasse)


def _hasse(classes, v: Place) -> int:
    return hasse_at(classes, v.prime)


def is_isotropic(phi: QuadraticForm) -> bool:
    return is_isotropic_ints(phi.classes)


def witt_index(phi: QuadraticForm) -> int:
    """Exact Witt index, the minimum over all places of the local index."""
    return witt_index_ints(phi.classes)


def is_hyperbolic(phi: QuadraticForm) -> bool:
    return phi.dim % 2 == 0 and witt_index(phi) == phi.dim // 2


def is_isometric(phi: QuadraticForm, psi: QuadraticForm) -> bool:
    if phi.dim != psi.dim:
        return False
    a, b = phi.invariants, psi.invariants
    if a.det != b.det or a.signature != b.signature:
        return False
    places = sorted_places(list(a.hasse) + list(b.hasse))
    return all(_hasse(phi.classes, v) == _hasse(psi.classes, v) for v in places if not v.is_real)


def represents(phi: QuadraticForm, c) -> bool:
    c = to_fraction(c)
    if c == 0:
        raise ValueError("represents() takes a nonzero value; use is_isotropic for 0")
    return is_isotropic(orth_sum(phi, QuadraticForm((-c,))))


def is_similarity_factor(phi: QuadraticForm, c) -> bool:
    return is_isometric(scale(c, phi), phi)


def is_subform(tau: QuadraticForm, phi: QuadraticForm) -> bool:
    """``tau`` embeds in ``phi`` iff ``i(phi _|_ -tau) >= dim tau``."""
    if tau.dim > phi.dim:
        return False
    if tau.dim == 0:
        return True
    return witt_index(orth_sum(phi, scale(-1, tau))) >= tau.dim


def isotropic_over_sqrt(phi: QuadraticForm, d) -> bool:
    """Whether ``phi`` becomes isotropic over ``Q(sqrt(d))``.

    Over a quadratic extension of ``Q_p`` every form of dimension >= 3 is
    isotropic, so only the places where ``d`` is a local square (and the real
    place when ``d > 0``) can obstruct.
    """
    d = squarefree_part(d)
    if d == 1:
        return is_isotropic(phi)
    n = phi.dim
    if n <= 1:
        return False
    k = phi.classes
    if n == 2:
        return squarefree_part(-k[0] * k[1]) in (1, d)
    if d > 0 and not isotropic_at(k, REAL):
        return False
    if n >= 5:
        return True
    for v in bad_places(phi.coeffs)[1:]:
        if is_local_square(d, v) and not isotropic_at(k, v):
            return False
    return True


# ---------------------------------------------------------------------------
# constructions


@dataclass(frozen=True)
class RepVector:
    coords: tuple
    value: Fraction

    def check(self, phi: QuadraticForm) -> bool:
        if len(self.coords) != phi.dim:
            return False
        if phi.evaluate(self.coords) != self.value:
            return False
        return self.value != 0 or any(x != 0 for x in self.coords)


@dataclass(frozen=True)
class WittDecomposition:
    witt_index: int
    anisotropic: QuadraticForm


def _rep(phi, coords, value) -> RepVector:
    rv = RepVector(tuple(Fraction(x) for x in coords), Fraction(value))
    if not rv.check(phi):
        raise AssertionError(f"constructed vector does not evaluate to {value} on {phi!r}")
    return rv


def find_isotropic_vector(phi: QuadraticForm) -> RepVector:
    if not is_isotropic(phi):
        raise NotRepresented(f"{phi!r} is anisotropic")
    return _rep(phi, _solve.isotropic_vector(phi.coeffs), 0)


def find_representation(phi: QuadraticForm, c) -> RepVector:
    """Explicit ``x`` with ``phi(x) = c``; ``c = 0`` asks for a nonzero zero.

    ``NotRepresented`` is a proven negative, ``SearchExhausted`` is not.
    """
    c = to_fraction(c)
    if c == 0:
        return find_isotropic_vector(phi)
    for i, a in enumerate(phi.coeffs):
        if squarefree_part(a) == squarefree_part(c):
            x = [Fraction(0)] * phi.dim
            k, s = _solve.split_square(c / a)
            x[i] = s
            return _rep(phi, x, c)
    if is_isotropic(phi):
        v = _solve.isotropic_vector(phi.coeffs)
        i = next(j for j, x in enumerate(v) if x != 0)
        ci = phi.coeffs[i]
        # phi(t v + e_i) = 2 t c_i v_i + c_i
        t = (c - ci) / (2 * ci * v[i])
        x = [t * vj for vj in v]
        x[i] += 1
        return _rep(phi, x, c)
    ext = orth_sum(phi, QuadraticForm((-c,)))
    if not is_isotropic(ext):
        raise NotRepresented(f"{c} is not represented by {phi!r}")
    v = _solve.isotropic_vector(ext.coeffs)
    z = v[-1]
    return _rep(phi, [x / z for x in v[:-1]], c)


# extra primes admitted, one at a time, when searching for a small value of a
# complement form
SPLIT_EXTRA_PRIMES = 12


def _small_classes(base_primes):
    """Signed square-free integers over ``base_primes``, enlarged prime by prime."""
    primes = sorted(set(base_primes))
    seen = set()
    extra = primes[-1] if primes else 2
    for _ in range(SPLIT_EXTRA_PRIMES + 1):
        batch = []
        for mask in range(1 << len(primes)):
            t = 1
            for j, p in enumerate(primes):
                if mask >> j & 1:
                    t *= p
            for u in (t, -t):
                if u not in seen:
                    seen.add(u)
                    batch.append(u)
        yield from sorted(batch, key=lambda u: (abs(u), u < 0))
        extra = nextprime(extra)
        primes.append(extra)


def _complement(ks, i):
    """Square-free ``gamma`` with ``<ks> ~= gamma _|_ i x H``, given ``i(ks) >= i``.

    ``gamma`` represents ``t`` exactly when ``i(ks _|_ <-t>) > i``, so its
    entries are peeled off one at a time from small square classes.
    """
    m = len(ks) - 2 * i
    if m == 0:
        return []
    delta = squarefree_part((-1) ** i * _det(ks))
    if m == 1:
        return [delta]
    primes = [v.prime for v in bad_places(ks)[1:]]
    for t in _small_classes(primes):
        if witt_index_ints(list(ks) + [-t]) > i:
            return [t] + _complement(list(ks) + [-t], i + 1)
    raise SearchExhausted("witt_decompose", f"no small value found for the complement of {ks}")


def _det(ks) -> int:
    d = 1
    for k in ks:
        d = squarefree_part(d * k)
    return d


def _split_hyperbolic(ks):
    """Split one hyperbolic plane off an isotropic list of square-free integers.

    The plane is found inside the smallest isotropic block of coefficients,
    where an explicit zero is constructed and checked; the block is then
    replaced by its (at most 3-dimensional) complement.
    """
    n = len(ks)
    for size in range(2, min(n, 5) + 1):
        for block in combinations(range(n), size):
            sub = [ks[j] for j in block]
            if not is_isotropic_ints(sub):
                continue
            v = _solve.isotropic_vector(sub)
            if not any(v) or sum(k * x * x for k, x in zip(sub, v)) != 0:
                raise AssertionError(f"bad isotropic vector for {sub}")
            rest = [ks[j] for j in range(n) if j not in block]
            return rest + _complement(sub, 1)
    raise AssertionError(f"{ks} has no isotropic block")


def witt_decompose(phi: QuadraticForm) -> WittDecomposition:
    """``phi ~= anisotropic _|_ i x H`` by repeatedly splitting off hyperbolic planes."""
    target = witt_index(phi)
    ks = list(phi.classes)
    i = 0
    while i < target:
        ks = _split_hyperbolic(ks)
        i += 1
    an = QuadraticForm(tuple(ks))
    if is_isotropic(an):
        raise AssertionError("anisotropic part is isotropic")
    if not is_isometric(orth_sum(an, hyperbolic(i)), phi):
        raise AssertionError("Witt decomposition does not reproduce the form")
    return WittDecomposition(i, an)


def anisotropic_part(phi: QuadraticForm) -> QuadraticForm:
    return witt_decompose(phi).anisotropic


def find_embedding(tau: QuadraticForm, phi: QuadraticForm):
    """Vectors ``v_1..v_k`` in ``phi``'s space, pairwise orthogonal, with ``phi(v_j) = tau_j``.

    Greedy: by Witt cancellation any representation of ``tau_1`` extends.
    """
    if not is_subform(tau, phi):
        raise NotRepresented(f"{tau!r} is not a subform of {phi!r}")
    n = phi.dim
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    vals = list(phi.coeffs)
    chosen = []
    for t in tau.coeffs:
        sub = QuadraticForm(tuple(vals))
        rv = find_representation(sub, t)
        x = [sum(rv.coords[j] * basis[j][m] for j in range(len(basis))) for m in range(n)]
        chosen.append(x)
        if len(chosen) == tau.dim:
            break
        cvals, cvecs = _solve.orthogonal_complement(list(phi.coeffs), chosen)
        vals, basis = cvals, cvecs
    for a in range(len(chosen)):
        for b in range(len(chosen)):
            expect = tau.coeffs[a] if a == b else 0
            if phi.bilinear(chosen[a], chosen[b]) != expect:
                raise AssertionError("embedding is not Gram-compatible")
    return [tuple(x) for x in chosen]


@dataclass(frozen=True)
class ProductFactorization:
    c1: Fraction
    c2: Fraction
    x: RepVector
    y: RepVector


def product_factorization(phi1: QuadraticForm, phi2: QuadraticForm, c) -> Optional[ProductFactorization]:
    """Write ``c = c1 c2`` modulo squares with ``c1 in D(phi1)``, ``c2 in D(phi2)``.

    Returns ``None`` exactly when ``c`` is not in ``D(phi1) D(phi2)``.  The
    pair satisfies ``c1 * c2 == c * (c2 / c) ** 2`` i.e. ``c / (c1 c2)`` is a
    square.
    """
    c = to_fraction(c)
    if phi1.dim == 0 or phi2.dim == 0:
        raise ValueError("product_factorization needs nonempty forms")
    joint = orth_sum(scale(c, phi1), scale(-1, phi2))
    if not is_isotropic(joint):
        return None
    if is_isotropic(phi1) or is_isotropic(phi2):
        return _factor_universal(phi1, phi2, c)
    v = _solve.isotropic_vector(joint.coeffs)
    n1 = phi1.dim
    x, y = v[:n1], v[n1:]
    c1, c2 = phi1.evaluate(x), phi2.evaluate(y)
    # both pieces anisotropic, so neither block vanishes
    return ProductFactorization(c1, c2, _rep(phi1, x, c1), _rep(phi2, y, c2))


def _factor_universal(phi1, phi2, c):
    if is_isotropic(phi1):
        c2 = phi2.coeffs[0]
        c1 = c / c2
    else:
        c1 = phi1.coeffs[0]
        c2 = c / c1
    return ProductFactorization(c1, c2, find_representation(phi1, c1), find_representation(phi2, c2))


# ---------------------------------------------------------------------------
# literal syntax


def parse_rational(text: str, line: int = 1, column: int = 1) -> Fraction:
    s = text.strip()
    try:
        if not s or any(ch in s for ch in ".eE_ "):
            raise ValueError
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not an exact rational: {text!r}", line, column) from None


def parse_form(text: str, line: int = 1) -> QuadraticForm:
    """Parse ``"1,-2,3/5"`` or a Pfister literal ``"<<2,-1>>"`` into a form."""
    s = text.strip()
    if s.startswith("<<"):
        from .pfister import parse_pfister

        return parse_pfister(s, line).expansion
    if not s:
        return QuadraticForm(())
    coeffs = []
    col = 1
    for piece in text.split(","):
        stripped = piece.strip()
        offset = col + (len(piece) - len(piece.lstrip()))
        q = parse_rational(stripped, line, offset)
        if q == 0:
            raise ParseError("zero coefficient (form must be regular)", line, offset)
        coeffs.append(q)
        col += len(piece) + 1
    return QuadraticForm(tuple(coeffs))


def format_rational(q) -> str:
    q = to_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_form(phi: QuadraticForm) -> str:
    return ",".join(format_rational(c) for c in phi.coeffs)
