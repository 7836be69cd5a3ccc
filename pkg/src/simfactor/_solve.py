"""Constructive layer: explicit zeros of diagonal forms and exact linear algebra.

Nothing in here decides a yes/no question.  Callers check isotropy with the
local criteria first; these routines only produce vectors, and a bounded
search that runs dry raises ``SearchExhausted``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from sympy.ntheory.modular import crt
from sympy.ntheory.residue_ntheory import sqrt_mod

from .arith import _factor, squarefree_of_product, squarefree_part
from .errors import SearchExhausted
from .local import is_isotropic_ints

# coprime pairs (x, y) with max(|x|, |y|) <= this are scanned for common values
VALUE_SEARCH_HEIGHT = 400


def split_square(q: Fraction):
    """Return ``(k, s)`` with ``q = k * s**2``, ``k`` square-free integer, ``s`` rational."""
    q = Fraction(q)
    nd = q.numerator * q.denominator
    k = squarefree_part(nd)
    m = isqrt(nd // k)
    return k, Fraction(m, q.denominator)


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g > 1:
        vec = [x // g for x in vec]
    return vec


def _sqrt_mod_squarefree(a: int, mod: int):
    """A root of ``x^2 = a`` modulo the square-free ``mod``, or ``None``.

    Works prime by prime from the cached factorization and glues with CRT.
    """
    if mod == 1:
        return 0
    primes, roots = [], []
    for p, _ in _factor(mod):
        r = sqrt_mod(a % p, p)
        if r is None:
            return None
        primes.append(p)
        roots.append(r)
    return int(crt(primes, roots)[0])


def _legendre(A: int, B: int):
    """Nonzero integer ``(x, y, z)`` with ``x^2 = A y^2 + B z^2``; ``A, B`` square-free."""
    if A == 1:
        return (1, 1, 0)
    if B == 1:
        return (1, 0, 1)
    if abs(A) > abs(B):
        x, y, z = _legendre(B, A)
        return (x, z, y)
    mod = abs(B)
    t = _sqrt_mod_squarefree(A, mod)
    if t is None:
        raise ValueError(f"x^2 = {A}y^2 + {B}z^2 has no solution")
    if t > mod // 2:
        t -= mod
    k = (t * t - A) // B
    kk = squarefree_part(k)
    m = isqrt(k // kk)
    X, Y, Z = _legendre(A, kk)
    x, y, z = t * X + A * Y, X + t * Y, kk * m * Z
    return tuple(_primitive([x, y, z]))


def ternary_zero(a: int, b: int, c: int):
    """Nonzero integer zero of ``a x^2 + b y^2 + c z^2`` (square-free coefficients)."""
    A0, B0 = -a * c, -b * c
    A, B = squarefree_of_product((-a, c)), squarefree_of_product((-b, c))
    sA, sB = isqrt(A0 // A), isqrt(B0 // B)
    X, Y, Z = _legendre(A, B)
    # X = c z, Y = sA x, Z = sB y
    vec = _primitive([Y * sB * c, Z * sA * c, X * sA * sB])
    assert a * vec[0] ** 2 + b * vec[1] ** 2 + c * vec[2] ** 2 == 0
    return vec


def _coprime_pairs(height: int):
    yield (1, 0)
    yield (0, 1)
    for h in range(1, height + 1):
        for x in range(h + 1):
            if gcd(x, h) != 1:
                continue
            yield (h, x)
            if x != h:
                yield (x, h)


def _opposite_pair(k):
    idx = {}
    for i, c in enumerate(k):
        if -c in idx:
            return idx[-c], i
        idx.setdefault(c, i)
    return None


def _quaternary_zero(k):
    """Zero of a 4-dim isotropic form via a common value of two binary pieces."""
    pair = _opposite_pair(k)
    if pair is not None:
        v = [0, 0, 0, 0]
        v[pair[0]] = v[pair[1]] = 1
        return v
    for tri in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        sub = [k[i] for i in tri]
        if is_isotropic_ints(sub):
            z = ternary_zero(*sub)
            v = [0, 0, 0, 0]
            for i, x in zip(tri, z):
                v[i] = x
            return v
    # values are drawn from the binary piece with the smallest coefficients,
    # so each one stays cheap to factor
    i0, i1, i2, i3 = sorted(range(4), key=lambda i: (abs(k[i]), i))
    k0, k1, k2, k3 = k[i0], k[i1], k[i2], k[i3]
    seen = set()
    for x, y in _coprime_pairs(VALUE_SEARCH_HEIGHT):
        t = k0 * x * x + k1 * y * y
        if t == 0:
            continue
        tk = squarefree_part(t)
        if tk in seen:
            continue
        seen.add(tk)
        if not is_isotropic_ints([k2, k3, tk]):
            continue
        y2, y3, z = ternary_zero(k2, k3, tk)
        s = isqrt(t // tk)
        # k2 y2^2 + k3 y3^2 = -tk z^2 = -t (z/s)^2
        v = [0, 0, 0, 0]
        v[i0], v[i1], v[i2], v[i3] = x * z, y * z, s * y2, s * y3
        return _primitive(v)
    raise SearchExhausted("quaternary zero", f"no common value up to height {VALUE_SEARCH_HEIGHT}")


def _quinary_zero(k):
    """Zero of an indefinite 5-dim form: ternary piece against binary values."""
    pos = [i for i in range(5) if k[i] > 0]
    neg = [i for i in range(5) if k[i] < 0]
    first = [pos[0], neg[0]]
    rest = sorted((i for i in range(5) if i not in first), key=lambda i: (abs(k[i]), i))
    tri = first + rest[2:]
    duo = rest[:2]
    a = [k[i] for i in tri]
    out = [0] * 5
    if is_isotropic_ints(a):
        for i, x in zip(tri, ternary_zero(*a)):
            out[i] = x
        return out
    b0, b1 = k[duo[0]], k[duo[1]]
    seen = set()
    for x, y in _coprime_pairs(VALUE_SEARCH_HEIGHT):
        t = b0 * x * x + b1 * y * y
        if t == 0:
            out[duo[0]], out[duo[1]] = x, y
            return out
        tk = squarefree_part(t)
        if tk in seen:
            continue
        seen.add(tk)
        if not is_isotropic_ints(a + [tk]):
            continue
        w = _quaternary_zero(a + [tk])
        z = w[3]
        s = isqrt(t // tk)
        for i, yi in zip(tri, w[:3]):
            out[i] = yi * s
        out[duo[0]], out[duo[1]] = x * z, y * z
        return _primitive(out)
    raise SearchExhausted("quinary zero", f"no common value up to height {VALUE_SEARCH_HEIGHT}")


def _pick_indefinite_five(k):
    order = sorted(range(len(k)), key=lambda i: (abs(k[i]), i))
    pos = [i for i in order if k[i] > 0]
    neg = [i for i in order if k[i] < 0]
    chosen = [pos[0], neg[0]]
    for i in order:
        if len(chosen) == 5:
            break
        if i not in chosen:
            chosen.append(i)
    return sorted(chosen)


def integer_zero(k):
    """Integer zero of the isotropic diagonal form with square-free coefficients ``k``."""
    n = len(k)
    pair = _opposite_pair(k)
    if pair is not None:
        v = [0] * n
        v[pair[0]] = v[pair[1]] = 1
        return v
    if n <= 2:
        raise ValueError("form is anisotropic")
    if n == 3:
        return ternary_zero(*k)
    if n == 4:
        return _quaternary_zero(k)
    sub = _pick_indefinite_five(k)
    z = _quinary_zero([k[i] for i in sub])
    v = [0] * n
    for i, x in zip(sub, z):
        v[i] = x
    return v


def isotropic_vector(coeffs):
    """Rational nonzero zero of an isotropic diagonal form with rational coefficients."""
    split = [split_square(c) for c in coeffs]
    z = integer_zero([k for k, _ in split])
    # c_i x_i^2 = k_i (s_i x_i)^2, so x_i = z_i / s_i
    return [Fraction(zi) / s for zi, (_, s) in zip(z, split)]


# ---------------------------------------------------------------------------
# exact linear algebra over Q


def nullspace(rows, n):
    """Basis of ``{x in Q^n : r . x = 0 for r in rows}``."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def diag_bilinear(coeffs, x, y):
    return sum(c * a * b for c, a, b in zip(coeffs, x, y))


def diagonalize(coeffs, basis):
    """Orthogonal basis of ``span(basis)`` for the diagonal form ``coeffs``.

    Returns ``(values, vectors)``; raises ``ValueError`` if the restriction is
    degenerate.
    """
    vecs = [list(v) for v in basis]
    values, out = [], []
    while vecs:
        q = [diag_bilinear(coeffs, v, v) for v in vecs]
        j = next((i for i, x in enumerate(q) if x != 0), None)
        if j is None:
            hit = None
            for i in range(len(vecs)):
                for l in range(i + 1, len(vecs)):
                    if diag_bilinear(coeffs, vecs[i], vecs[l]) != 0:
                        hit = (i, l)
                        break
                if hit:
                    break
            if hit is None:
                raise ValueError("degenerate restriction")
            i, l = hit
            vecs[i] = [a + b for a, b in zip(vecs[i], vecs[l])]
            continue
        v = vecs.pop(j)
        qv = q[j]
        values.append(qv)
        out.append(v)
        new = []
        for w in vecs:
            f = diag_bilinear(coeffs, v, w) / qv
            new.append([a - f * b for a, b in zip(w, v)])
        vecs = new
    return values, out


def orthogonal_complement(coeffs, vectors, support=None):
    """Diagonalized orthogonal complement of ``span(vectors)``.

    If ``support`` is given, every vector lies in the coordinate subspace it
    indexes and the complement is computed inside that subspace only; the
    remaining coordinates pass through unchanged.
    """
    n = len(coeffs)
    idx = list(range(n)) if support is None else sorted(support)
    sub = [coeffs[i] for i in idx]
    rows = [[sub[j] * v[i] for j, i in enumerate(idx)] for v in vectors]
    ns = nullspace(rows, len(idx))
    vals, vecs = diagonalize(sub, ns)
    full_vals, full_vecs = [], []
    for val, v in zip(vals, vecs):
        w = [Fraction(0)] * n
        for j, i in enumerate(idx):
            w[i] = v[j]
        full_vals.append(val)
        full_vecs.append(w)
    if support is not None:
        for i in range(n):
            if i not in support:
                w = [Fraction(0)] * n
                w[i] = Fraction(1)
                full_vals.append(Fraction(coeffs[i]))
                full_vecs.append(w)
    return full_vals, full_vecs
