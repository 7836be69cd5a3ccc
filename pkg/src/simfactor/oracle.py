"""Brute-force ground truth and seeded instance generation.

The oracle only ever evaluates forms; it shares no decision code with
``forms``.  A miss from ``brute_search`` is a bounded-search miss, never a
proof of anything.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

import numpy as np

from .errors import GenerationExhausted
from .forms import QuadraticForm, RepVector
from .involution import (
    BRANCH_DEG0,
    BRANCH_DEG2,
    BRANCH_SYMPLECTIC,
    ORTHOGONAL,
    SYMPLECTIC,
    DecomposablePresentation,
    is_multiplier,
)
from .pfister import PfisterForm

_BRANCHES = (BRANCH_SYMPLECTIC, BRANCH_DEG2, BRANCH_DEG0)


def _integral(coeffs, target):
    """Scale ``coeffs`` and ``target`` by one common denominator."""
    den = lcm(*(Fraction(c).denominator for c in coeffs), Fraction(target).denominator)
    return [int(Fraction(c) * den) for c in coeffs], int(Fraction(target) * den)


def brute_search(phi: QuadraticForm, target, H: int) -> Optional[RepVector]:
    """Exhaustive scan of integer vectors with entries in ``[0, H]``.

    For ``target != 0`` the scan runs over ``(z, t)`` with ``phi(z) = target t^2``
    and ``1 <= t <= H``, returning ``z / t``.  Signs are irrelevant for a
    diagonal form, so only nonnegative entries are visited.  Among all hits the
    one that is smallest when compared from the last entry backwards (``t``
    first) is returned; for ``target = 0`` that hit is automatically primitive.
    """
    if H < 1:
        raise ValueError("H must be at least 1")
    target = Fraction(target)
    n = phi.dim
    if n == 0:
        return None
    k, T = _integral(phi.coeffs, target)
    homog = T != 0
    # the first coordinate is solved for; the others (and t) are enumerated,
    # the last of them being the most significant
    outer = k[1:] + ([-T] if homog else [])
    m = len(outer)
    if m == 0:
        return None
    if max(abs(c) for c in k + [T]) * (H + 1) ** 2 * (m + 1) >= 2**62:
        raise ValueError("coefficients too large for the int64 scan")
    k0 = k[0]
    sq = np.arange(H + 1, dtype=np.int64) ** 2
    shape = (H + 1,) * (m - 1)
    inner = np.zeros(shape, dtype=np.int64)
    if m >= 2:
        # axis i of the mesh carries outer coordinate m-2-i, so a C-order
        # ravel puts the more significant coordinates first
        mesh = np.meshgrid(*([sq] * (m - 1)), indexing="ij")
        for i, g in enumerate(mesh):
            inner = inner + outer[m - 2 - i] * g
    inner = inner.ravel()
    for last in range(1 if homog else 0, H + 1):
        resid = -(inner + outer[-1] * last * last)  # must equal k0 * x0^2
        r = np.where(resid % k0 == 0, resid // k0, -1)
        s = np.rint(np.sqrt(np.maximum(r, 0).astype(np.float64))).astype(np.int64)
        ok = (r >= 0) & (s * s == r) & (s <= H)
        if not homog and last == 0:
            ok[0] = False  # the zero vector
        hits = np.flatnonzero(ok)
        if hits.size == 0:
            continue
        j = int(hits[0])
        rest = [int(x) for x in np.unravel_index(j, shape)][::-1] if m >= 2 else []
        vec = [int(s[j])] + rest + [last]
        if homog:
            coords = tuple(Fraction(x, vec[-1]) for x in vec[:-1])
        else:
            coords = tuple(Fraction(x) for x in vec)
        rv = RepVector(coords, target)
        assert rv.check(phi), (phi, target, coords)
        return rv
    return None


# ---------------------------------------------------------------------------
# seeded generation


def random_rational(rng: random.Random, height: int, integral_bias: float = 0.75) -> Fraction:
    """Nonzero rational with numerator and denominator bounded by ``height``."""
    num = 0
    while num == 0:
        num = rng.randint(-height, height)
    den = 1 if rng.random() < integral_bias else rng.randint(1, height)
    return Fraction(num, den)


def random_form(rng: random.Random, dim: int, height: int, integral_bias: float = 0.75) -> QuadraticForm:
    return QuadraticForm(tuple(random_rational(rng, height, integral_bias) for _ in range(dim)))


def random_pfister(rng: random.Random, slots: int, height: int) -> PfisterForm:
    return PfisterForm(tuple(random_rational(rng, height, 1.0) for _ in range(slots)))


def form_corpus(seed: int, count: int, max_dim: int = 4, height: int = 30) -> list:
    """Deterministic list of ``count`` forms with ``1 <= dim <= max_dim``."""
    rng = random.Random(seed)
    return [random_form(rng, rng.randint(1, max_dim), height) for _ in range(count)]


@dataclass(frozen=True)
class InstanceSpec:
    seed: int = 0
    max_slots: int = 2
    height: int = 20
    branch: Optional[str] = None
    member: Optional[bool] = None
    force_a: Optional[Fraction] = None
    tries: int = 200


def _small_vector(rng: random.Random, dim: int, bound: int = 3) -> list:
    while True:
        v = [rng.randint(-bound, bound) for _ in range(dim)]
        if any(v):
            return v


def _random_value(rng: random.Random, phi: QuadraticForm) -> Fraction:
    while True:
        val = phi.evaluate(_small_vector(rng, phi.dim))
        if val != 0:
            return val


def random_presentation(rng: random.Random, spec: InstanceSpec) -> DecomposablePresentation:
    branch = spec.branch or rng.choice(_BRANCHES)
    psi = QuadraticForm((1,)) if rng.random() < 0.5 else random_form(rng, 3, spec.height, 1.0)
    a = Fraction(spec.force_a) if spec.force_a is not None else random_rational(rng, spec.height, 1.0)
    b = random_rational(rng, spec.height, 1.0)
    if branch == BRANCH_DEG2:
        rho = PfisterForm(())
    elif branch == BRANCH_DEG0:
        rho = random_pfister(rng, rng.randint(1, max(1, spec.max_slots)), spec.height)
    else:
        rho = random_pfister(rng, rng.randint(0, spec.max_slots), spec.height)
    kind = SYMPLECTIC if branch == BRANCH_SYMPLECTIC else ORTHOGONAL
    return DecomposablePresentation(psi, rho, a, b, kind)


def manufactured_multiplier(rng: random.Random, pres: DecomposablePresentation) -> Fraction:
    """A multiplier built as a product of explicit values of the defining forms."""
    der = pres.derived
    if pres.branch == BRANCH_SYMPLECTIC:
        return _random_value(rng, der.phi_symp.expansion)
    if pres.branch == BRANCH_DEG2:
        return _random_value(rng, QuadraticForm((1, -pres.a)))
    return _random_value(rng, der.pi.expansion) * _random_value(rng, der.pi_tilde)


def random_instance(spec: InstanceSpec):
    """``(presentation, c, c_in_G)``, deterministic in ``spec``."""
    rng = random.Random(spec.seed)
    member = spec.member if spec.member is not None else rng.random() < 0.5
    for _ in range(spec.tries):
        pres = random_presentation(rng, spec)
        if member:
            return pres, manufactured_multiplier(rng, pres), True
        for _ in range(10):
            c = random_rational(rng, spec.height, 1.0)
            if not is_multiplier(pres, c):
                return pres, c, False
    raise GenerationExhausted(f"no non-multiplier found for seed {spec.seed} after {spec.tries} presentations")
