"""Totally decomposable algebras with involution, modelled by their presentations.

A presentation ``(psi, rho, a, b, kind)`` stands for

* orthogonal:  ``Ad(psi x rho) x (a .| b)``, the quaternion algebra ``(a, b)``
  with the orthogonal involution fixing ``j`` and negating ``i``;
* symplectic:  ``Ad(psi x rho) x ((a, b), canonical involution)``.

No matrix algebra is ever built.  Multiplier and hyperbolicity questions are
answered through the forms ``pi = <<a>> x rho`` and
``pi~ = <<a>> x (<b> _|_ rho')``, or ``rho x <<a, b>>`` in the symplectic case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .arith import bad_places, hilbert_symbol, squarefree_part, to_fraction
from .errors import InvalidPresentation, ParseError
from .forms import (
    QuadraticForm,
    format_form,
    format_rational,
    is_isotropic,
    isotropic_over_sqrt,
    orth_sum,
    parse_form,
    parse_rational,
    represents,
    scale,
    tensor,
)
from .pfister import (
    PfisterForm,
    format_pfister,
    hyperbolic_over_sqrt,
    is_hyperbolic_pfister,
    parse_pfister,
    pure_part,
)

ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"

BRANCH_SYMPLECTIC = "symplectic"
BRANCH_DEG2 = "ortho-deg2mod4"
BRANCH_DEG0 = "ortho-deg0mod4"


def quaternion_splits(a, b) -> bool:
    return all(hilbert_symbol(a, b, v) == 1 for v in bad_places([a, b]))


@dataclass(frozen=True)
class DecomposablePresentation:
    psi: QuadraticForm
    rho: PfisterForm
    a: Fraction
    b: Fraction
    kind: str = ORTHOGONAL

    def __post_init__(self):
        if self.kind not in (ORTHOGONAL, SYMPLECTIC):
            raise InvalidPresentation(f"kind must be orthogonal or symplectic, got {self.kind!r}")
        if self.psi.dim % 2 == 0:
            raise InvalidPresentation(f"psi must have odd dimension, got {self.psi.dim}")
        try:
            a, b = to_fraction(self.a), to_fraction(self.b)
        except TypeError as exc:
            raise InvalidPresentation(str(exc)) from None
        if a == 0 or b == 0:
            raise InvalidPresentation("a and b must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degree(self) -> int:
        return 2 * self.psi.dim * self.rho.dim

    @cached_property
    def brauer_index(self) -> int:
        return 1 if quaternion_splits(self.a, self.b) else 2

    @property
    def branch(self) -> str:
        if self.kind == SYMPLECTIC:
            return BRANCH_SYMPLECTIC
        return BRANCH_DEG2 if self.rho.fold == 0 else BRANCH_DEG0

    @cached_property
    def derived(self) -> "DerivedForms":
        return derived_forms(self)

    def with_psi(self, psi: QuadraticForm) -> "DecomposablePresentation":
        return DecomposablePresentation(psi, self.rho, self.a, self.b, self.kind)

    def twisted(self, c) -> "DecomposablePresentation":
        """``Ad<<c>> x (A, sigma)``, realised by prepending ``c`` to rho's slots."""
        return DecomposablePresentation(
            self.psi, PfisterForm((to_fraction(c),) + self.rho.slots), self.a, self.b, self.kind
        )


def make_presentation(psi, rho, a, b, kind=ORTHOGONAL) -> DecomposablePresentation:
    if not isinstance(psi, QuadraticForm):
        psi = QuadraticForm(tuple(psi))
    if not isinstance(rho, PfisterForm):
        rho = PfisterForm(tuple(rho))
    return DecomposablePresentation(psi, rho, a, b, kind)


@dataclass(frozen=True)
class DerivedForms:
    pi: PfisterForm
    pi_tilde: QuadraticForm
    tau_norm: PfisterForm
    nu: PfisterForm
    phi_symp: Optional[PfisterForm]


def derived_forms(pres: DecomposablePresentation) -> DerivedForms:
    a, b = pres.a, pres.b
    pi = PfisterForm((a,) + pres.rho.slots)
    pi_tilde = tensor(QuadraticForm((1, -a)), orth_sum(QuadraticForm((b,)), pure_part(pres.rho)))
    norm = PfisterForm((a, b))
    symp = pres.rho.times(norm) if pres.kind == SYMPLECTIC else None
    return DerivedForms(pi, pi_tilde, norm, norm, symp)


def is_multiplier(pres: DecomposablePresentation, c) -> bool:
    """Membership of ``c`` in the multiplier group.

    In the degree 2 mod 4 branch this is the group ``D<<a>>`` of multipliers
    of proper similitudes.
    """
    c = to_fraction(c)
    if c == 0:
        raise ValueError("multipliers are nonzero")
    der = pres.derived
    branch = pres.branch
    if branch == BRANCH_SYMPLECTIC:
        return represents(der.phi_symp.expansion, c)
    if branch == BRANCH_DEG2:
        return represents(QuadraticForm((1, -pres.a)), c)
    # c in D(pi).D(pi~) exactly when c.pi _|_ -pi~ is isotropic; this is the
    # decision behind product_factorization, without building the factors
    return is_isotropic(orth_sum(scale(c, der.pi.expansion), scale(-1, der.pi_tilde)))


def is_hyperbolic(pres: DecomposablePresentation) -> bool:
    der = pres.derived
    branch = pres.branch
    if branch == BRANCH_SYMPLECTIC:
        return is_hyperbolic_pfister(der.phi_symp)
    if branch == BRANCH_DEG2:
        return squarefree_part(pres.a) == 1
    # sigma is adjoint to rho viewed as a hermitian form over (a .| b); on the
    # subfield Q(i) its trace form is pi, so pi hyperbolic forces sigma
    # hyperbolic.  For a 1-fold rho this case is not visible on pi~ alone.
    return is_isotropic(der.pi_tilde) or is_hyperbolic_pfister(der.pi)


def is_hyperbolic_over_sqrt(pres: DecomposablePresentation, d) -> bool:
    d = squarefree_part(d)
    if d == 1:
        return is_hyperbolic(pres)
    der = pres.derived
    branch = pres.branch
    if branch == BRANCH_SYMPLECTIC:
        return hyperbolic_over_sqrt(der.phi_symp, d)
    if branch == BRANCH_DEG2:
        return squarefree_part(pres.a) in (1, d)
    return isotropic_over_sqrt(der.pi_tilde, d) or hyperbolic_over_sqrt(der.pi, d)


# ---------------------------------------------------------------------------
# presentation files

_KEYS = ("kind", "psi", "rho", "a", "b")


def parse_presentation(text: str) -> DecomposablePresentation:
    """Parse ``key=value`` lines (``kind``, ``psi``, ``rho``, ``a``, ``b``)."""
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise ParseError("expected key=value", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split("=", 1)
        kcol = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        vcol = len(line.split("=", 1)[0]) + 2
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, kcol)
        if key in seen:
            raise ParseError(f"duplicate key {key!r}", lineno, kcol)
        seen[key] = (value, lineno, vcol)
    missing = [k for k in _KEYS if k not in seen]
    if missing:
        raise ParseError(f"missing key(s): {', '.join(missing)}", len(text.splitlines()) + 1, 1)
    kind, ln, col = seen["kind"]
    kind = kind.strip().lower()
    if kind not in (ORTHOGONAL, SYMPLECTIC):
        raise ParseError(f"kind must be orthogonal or symplectic, got {kind!r}", ln, col)
    psi = _field(parse_form, seen["psi"])
    rho = _field(parse_pfister, seen["rho"])
    a = _field(parse_rational, seen["a"])
    b = _field(parse_rational, seen["b"])
    if psi.dim % 2 == 0:
        raise ParseError(f"psi must have odd dimension, got {psi.dim}", seen["psi"][1], seen["psi"][2])
    for key, q in (("a", a), ("b", b)):
        if q == 0:
            raise ParseError(f"{key} must be nonzero", seen[key][1], seen[key][2])
    return DecomposablePresentation(psi, rho, a, b, kind)


def _field(parser, entry):
    value, line, col = entry
    try:
        return parser(value, line)
    except ParseError as exc:
        raise exc.shifted(col - 1) from None


def format_presentation(pres: DecomposablePresentation) -> str:
    return (
        f"kind={pres.kind}\n"
        f"psi={format_form(pres.psi)}\n"
        f"rho={format_pfister(pres.rho)}\n"
        f"a={format_rational(pres.a)}\n"
        f"b={format_rational(pres.b)}\n"
    )
