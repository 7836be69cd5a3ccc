"""Local invariants and local isotropy of diagonal forms over Q.

Forms are given as sequences of signed square-free integers. At a finite
place the isometry class is fixed by ``(dim, det, hasse)`` and isotropy is
read off with the classical criteria; at the real place the signature
decides.  The Hasse invariant is the product over pairs ``i < j`` of
``(c_i, c_j)_v``.
"""

from __future__ import annotations

from .arith import (
    REAL,
    Place,
    _hilbert_int,
    bad_places,
    is_local_square,
    squarefree_part,
)


def _hs(a: int, b: int, p) -> int:
    if a > b:
        a, b = b, a
    return _hilbert_int(a, b, p)


def hasse_at(coeffs, p) -> int:
    eps = 1
    prod = 1
    for c in coeffs:
        if prod != 1:
            eps *= _hs(prod, c, p)
        prod = squarefree_part(prod * c)
    return eps


def det_class(coeffs) -> int:
    prod = 1
    for c in coeffs:
        prod = squarefree_part(prod * c)
    return prod


def _isotropic_from_invariants(n: int, d: int, eps: int, p: int) -> bool:
    v = Place(p)
    if n <= 1:
        return False
    if n == 2:
        return is_local_square(-d, v)
    if n == 3:
        return _hs(-1, squarefree_part(-d), p) == eps
    if n == 4:
        return (not is_local_square(d, v)) or eps == _hs(-1, -1, p)
    return True


def isotropic_at(coeffs, place: Place) -> bool:
    if place.is_real:
        return any(c > 0 for c in coeffs) and any(c < 0 for c in coeffs)
    p = place.prime
    return _isotropic_from_invariants(len(coeffs), det_class(coeffs), hasse_at(coeffs, p), p)


def local_witt_index(coeffs, place: Place) -> int:
    if place.is_real:
        pos = sum(1 for c in coeffs if c > 0)
        return min(pos, len(coeffs) - pos)
    p = place.prime
    n, d, eps = len(coeffs), det_class(coeffs), hasse_at(coeffs, p)
    i = 0
    while _isotropic_from_invariants(n, d, eps, p):
        # split off <1,-1>: the complement has det -d and hasse eps*(-1, -d)
        d = squarefree_part(-d)
        eps *= _hs(-1, d, p)
        n -= 2
        i += 1
    return i


def is_isotropic_ints(coeffs) -> bool:
    n = len(coeffs)
    if n <= 1:
        return False
    if not isotropic_at(coeffs, REAL):
        return False
    if n == 2:
        return squarefree_part(-coeffs[0] * coeffs[1]) == 1
    if n >= 5:
        return True
    return all(isotropic_at(coeffs, v) for v in bad_places(coeffs)[1:])


def witt_index_ints(coeffs) -> int:
    """Global Witt index as the minimum of the local indices.

    Places outside ``bad_places`` only contribute the bound coming from the
    discriminant (they see a unimodular form).
    """
    n = len(coeffs)
    if n <= 1:
        return 0
    if n % 2:
        cap = n // 2
    else:
        disc = squarefree_part((-1) ** (n // 2) * det_class(coeffs))
        cap = n // 2 if disc == 1 else n // 2 - 1
    best = cap
    for v in bad_places(coeffs):
        if best == 0:
            break
        best = min(best, local_witt_index(coeffs, v))
    return best
