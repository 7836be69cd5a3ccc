"""Witness pairs for multipliers: ``c in D<<d1>> . D<<d2>>`` with the involution
hyperbolic over both ``Q(sqrt(d1))`` and ``Q(sqrt(d2))``.

``decompose_multiplier`` builds a certificate; ``verify_certificate`` re-checks
it using exact decisions and plain evaluation of the recorded vectors only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from . import involution as inv
from ._solve import split_square
from .arith import SquareClass, is_rational_square, squarefree_class, to_fraction
from .errors import MalformedCertificate, NotAMultiplier, ParseError, SimFactorError
from .forms import (
    QuadraticForm,
    RepVector,
    find_representation,
    format_form,
    format_rational,
    is_isotropic,
    is_subform,
    orth_sum,
    parse_rational,
    product_factorization,
    scale,
)
from .pfister import binary_rep, format_pfister, hyperbolic_over_sqrt, pure_part, similitude_witness

HEADER = "simfactor-witness/1"

# statement asserted by each named check
CLAIMS = {
    "c_in_G": "c is a multiplier of the involution; witness c_rep evaluates to c on its form",
    "c_equiv_c1c2": "c / (c1 c2) is a square",
    "c1_in_D_pi": "pi(x) = c1 with pi = <<a>> x rho",
    "c2_in_D_pi_tilde": "pi~(y) = c2 with pi~ = <<a>> x (<b> _|_ rho')",
    "e_in_D_rho_pure": "rho'(e_rep) = e",
    "c1_over_e_in_D_d1": "<1,-d1>(rep_d1) = c1/e",
    "c1_in_D_d1": "<1,-d1>(rep_d1) = c1",
    "c2_in_D_d2": "<1,-d2>(rep_d2) = c2",
    "pi_hyperbolic_over_sqrt_d1": "pi is hyperbolic over Q(sqrt(d1))",
    "phi_hyperbolic_over_sqrt_d1": "rho x <<a,b>> is hyperbolic over Q(sqrt(d1))",
    "ec2_in_D_d2": "<1,-d2>(rep_d2) = e c2",
    "d2_plane_in_e_pi_tilde_or_sigma_hyperbolic": (
        "<1,-d2> is a subform of e pi~ or the involution is hyperbolic; "
        "u, v span that plane or v is an isotropic vector of e pi~"
    ),
    "sigma_hyperbolic_over_sqrt_d1": "the involution is hyperbolic over Q(sqrt(d1))",
    "sigma_hyperbolic_over_sqrt_d2": "the involution is hyperbolic over Q(sqrt(d2))",
    "c_in_D_d1_times_D_d2": "c <<d1>> _|_ -<<d2>> is isotropic",
}

CHECKS = {
    inv.BRANCH_SYMPLECTIC: (
        "c_in_G",
        "c_equiv_c1c2",
        "c1_in_D_d1",
        "c2_in_D_d2",
        "phi_hyperbolic_over_sqrt_d1",
        "sigma_hyperbolic_over_sqrt_d1",
        "sigma_hyperbolic_over_sqrt_d2",
        "c_in_D_d1_times_D_d2",
    ),
    inv.BRANCH_DEG2: (
        "c_in_G",
        "c_equiv_c1c2",
        "c1_in_D_d1",
        "c2_in_D_d2",
        "sigma_hyperbolic_over_sqrt_d1",
        "sigma_hyperbolic_over_sqrt_d2",
        "c_in_D_d1_times_D_d2",
    ),
    inv.BRANCH_DEG0: (
        "c_equiv_c1c2",
        "c1_in_D_pi",
        "c2_in_D_pi_tilde",
        "e_in_D_rho_pure",
        "c1_over_e_in_D_d1",
        "pi_hyperbolic_over_sqrt_d1",
        "ec2_in_D_d2",
        "d2_plane_in_e_pi_tilde_or_sigma_hyperbolic",
        "sigma_hyperbolic_over_sqrt_d1",
        "sigma_hyperbolic_over_sqrt_d2",
        "c_in_D_d1_times_D_d2",
    ),
}

WITNESSES = {
    inv.BRANCH_SYMPLECTIC: ("c_rep", "rep_d1", "rep_d2"),
    inv.BRANCH_DEG2: ("c_rep", "rep_d1", "rep_d2"),
    inv.BRANCH_DEG0: ("x", "y", "e_rep", "rep_d1", "rep_d2", "u", "v"),
}


@dataclass(frozen=True)
class WitnessCertificate:
    presentation: inv.DecomposablePresentation
    branch: str
    c: Fraction
    c1: Fraction
    c2: Fraction
    e: Optional[Fraction]
    d1: SquareClass
    d2: SquareClass
    witnesses: tuple  # ((name, coords), ...)
    checks: tuple  # ((name, passed), ...)

    def witness(self, name: str) -> tuple:
        for n, coords in self.witnesses:
            if n == name:
                return coords
        raise MalformedCertificate(f"missing witness {name!r}")

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def __bool__(self):
        return self.passed


# ---------------------------------------------------------------------------
# construction


def decompose_multiplier(pres: inv.DecomposablePresentation, c) -> WitnessCertificate:
    """Certificate for the multiplier ``c``; raises ``NotAMultiplier`` otherwise."""
    c = to_fraction(c)
    if c == 0 or not inv.is_multiplier(pres, c):
        raise NotAMultiplier(f"{format_rational(c)} is not a multiplier of the given involution")
    branch = pres.branch
    if branch == inv.BRANCH_DEG0:
        fields = _decompose_deg0(pres, c)
    else:
        if branch == inv.BRANCH_SYMPLECTIC:
            phi = pres.derived.phi_symp
            d = similitude_witness(phi, c)
            c_rep = find_representation(phi.expansion, c)
        else:
            d = squarefree_class(pres.a)
            c_rep = find_representation(QuadraticForm((1, -pres.a)), c)
        fields = dict(
            c1=c,
            c2=Fraction(1),
            e=None,
            d1=d,
            d2=d,
            witnesses=(
                ("c_rep", c_rep.coords),
                ("rep_d1", binary_rep(d.value, c).coords),
                ("rep_d2", binary_rep(d.value, 1).coords),
            ),
        )
    cert = WitnessCertificate(presentation=pres, branch=branch, c=c, checks=(), **fields)
    report = verify_certificate(pres, cert)
    if not report.passed:
        names = ", ".join(r.name for r in report.failures)
        raise AssertionError(f"constructed certificate fails its own checks: {names}")
    return replace(cert, checks=tuple((r.name, r.passed) for r in report.results))


def _unit(n: int, i: int, value=1) -> list:
    out = [Fraction(0)] * n
    out[i] = Fraction(value)
    return out


def _decompose_deg0(pres, c: Fraction) -> dict:
    der = pres.derived
    pi, pt = der.pi, der.pi_tilde
    fac = product_factorization(pi.expansion, pt, c)
    if fac is None:
        raise NotAMultiplier(f"{format_rational(c)} is not in D(pi) D(pi~)")
    c1, c2 = fac.c1, fac.c2
    # pi~ = <1,-a> x (<b> _|_ rho'), so its second coefficient is e
    rho_pure = pure_part(pres.rho)
    e = rho_pure.coeffs[0]
    d1 = similitude_witness(pi, c1 / e)
    rep_d1 = binary_rep(d1.value, c1 / e)

    ept = scale(e, pt)
    n = pt.dim
    u = _unit(n, 1, 1 / e)
    w = list(fac.y.coords)
    proj = ept.bilinear(u, w)
    v = [wi - proj * ui for wi, ui in zip(w, u)]
    m = ept.evaluate(v)
    target = e * c2
    if m != 0:
        # beta = <1, m> spanned by u, v; e c2 = proj^2 + m
        k, s = split_square(m)
        d2 = squarefree_class(-k)
        rep_d2 = (proj, s)
    elif all(x == 0 for x in v):
        # w is a multiple of u: use the plane of u and the first basis vector
        v = _unit(n, 0)
        d2 = squarefree_class(-ept.coeffs[0])
        rep_d2 = binary_rep(d2.value, target).coords
    else:
        # v is an isotropic vector of e pi~, so the involution is hyperbolic
        d2 = squarefree_class(1 - target) if target != 1 else squarefree_class(-1)
        rep_d2 = binary_rep(d2.value, target).coords
    return dict(
        c1=c1,
        c2=c2,
        e=e,
        d1=d1,
        d2=d2,
        witnesses=(
            ("x", fac.x.coords),
            ("y", fac.y.coords),
            ("e_rep", tuple(_unit(rho_pure.dim, 0))),
            ("rep_d1", rep_d1.coords),
            ("rep_d2", tuple(rep_d2)),
            ("u", tuple(u)),
            ("v", tuple(v)),
        ),
    )


# ---------------------------------------------------------------------------
# verification


def _evaluates(phi: QuadraticForm, coords, value) -> bool:
    return RepVector(tuple(coords), to_fraction(value)).check(phi)


def _binary(d: SquareClass) -> QuadraticForm:
    return QuadraticForm((1, -d.value))


def _plane_ok(ept: QuadraticForm, u, v, d2: SquareClass) -> bool:
    if len(u) != ept.dim or len(v) != ept.dim:
        return False
    if ept.evaluate(v) == 0:
        return any(x != 0 for x in v)
    return (
        ept.evaluate(u) == 1
        and ept.bilinear(u, v) == 0
        and squarefree_class(-ept.evaluate(v)) == d2
    )


def _run_checks(pres, cert) -> dict:
    c, c1, c2, d1, d2 = cert.c, cert.c1, cert.c2, cert.d1, cert.d2
    der = pres.derived
    w = cert.witness
    q = {
        "c_equiv_c1c2": lambda: is_rational_square(c / (c1 * c2)),
        "c_in_D_d1_times_D_d2": lambda: is_isotropic(orth_sum(scale(c, _binary(d1)), scale(-1, _binary(d2)))),
        "sigma_hyperbolic_over_sqrt_d1": lambda: inv.is_hyperbolic_over_sqrt(pres, d1.value),
        "sigma_hyperbolic_over_sqrt_d2": lambda: inv.is_hyperbolic_over_sqrt(pres, d2.value),
    }
    if cert.branch == inv.BRANCH_DEG0:
        e = cert.e
        pi, pt = der.pi, der.pi_tilde
        ept = scale(e, pt)
        q.update(
            {
                "c1_in_D_pi": lambda: _evaluates(pi.expansion, w("x"), c1),
                "c2_in_D_pi_tilde": lambda: _evaluates(pt, w("y"), c2),
                "e_in_D_rho_pure": lambda: _evaluates(pure_part(pres.rho), w("e_rep"), e),
                "c1_over_e_in_D_d1": lambda: _evaluates(_binary(d1), w("rep_d1"), c1 / e),
                "pi_hyperbolic_over_sqrt_d1": lambda: hyperbolic_over_sqrt(pi, d1.value),
                "ec2_in_D_d2": lambda: _evaluates(_binary(d2), w("rep_d2"), e * c2),
                "d2_plane_in_e_pi_tilde_or_sigma_hyperbolic": lambda: (
                    (is_subform(_binary(d2), ept) or inv.is_hyperbolic(pres))
                    and _plane_ok(ept, w("u"), w("v"), d2)
                ),
            }
        )
    else:
        if cert.branch == inv.BRANCH_SYMPLECTIC:
            g_form = der.phi_symp.expansion
        else:
            g_form = QuadraticForm((1, -pres.a))
        q.update(
            {
                "c_in_G": lambda: inv.is_multiplier(pres, c) and _evaluates(g_form, w("c_rep"), c),
                "c1_in_D_d1": lambda: _evaluates(_binary(d1), w("rep_d1"), c1),
                "c2_in_D_d2": lambda: _evaluates(_binary(d2), w("rep_d2"), c2),
                "phi_hyperbolic_over_sqrt_d1": lambda: hyperbolic_over_sqrt(der.phi_symp, d1.value),
            }
        )
    return q


def verify_certificate(pres: inv.DecomposablePresentation, cert: WitnessCertificate) -> VerificationReport:
    """Re-derive every check of ``cert`` against ``pres`` from scratch."""
    if inv.format_presentation(cert.presentation) != inv.format_presentation(pres):
        raise MalformedCertificate("certificate was issued for a different presentation")
    if cert.branch != pres.branch:
        raise MalformedCertificate(f"branch {cert.branch!r} does not match presentation branch {pres.branch!r}")
    if cert.branch == inv.BRANCH_DEG0 and cert.e is None:
        raise MalformedCertificate("field e is required in this branch")
    for field in ("c", "c1", "c2"):
        if getattr(cert, field) == 0:
            raise MalformedCertificate(f"field {field} must be nonzero")
    if cert.e == 0:
        raise MalformedCertificate("field e must be nonzero")
    have = {n for n, _ in cert.witnesses}
    missing = [n for n in WITNESSES[cert.branch] if n not in have]
    if missing:
        raise MalformedCertificate(f"missing witness(es): {', '.join(missing)}")
    table = _run_checks(pres, cert)
    results = []
    for name in CHECKS[cert.branch]:
        try:
            ok = bool(table[name]())
            detail = "" if ok else f"fails: {CLAIMS[name]}"
        except (SimFactorError, ValueError, ZeroDivisionError) as exc:
            ok, detail = False, f"error: {exc}"
        results.append(CheckResult(name, ok, detail))
    return VerificationReport(tuple(results))


# ---------------------------------------------------------------------------
# mutations used by the soundness tests

MUTATIONS = ("d1_sign", "d2_sign", "c1_scale", "c2_scale", "witness_coord")


def _bump(x: Fraction) -> Fraction:
    # c (x + 1)^2 = c x^2 only when x = -1/2
    return x + (2 if x == Fraction(-1, 2) else 1)


def mutate(cert: WitnessCertificate, kind: str, prime: int = 2) -> WitnessCertificate:
    """Change one field of ``cert``; the result must fail verification."""
    if kind == "d1_sign":
        return replace(cert, d1=squarefree_class(-cert.d1.value))
    if kind == "d2_sign":
        return replace(cert, d2=squarefree_class(-cert.d2.value))
    if kind == "c1_scale":
        return replace(cert, c1=cert.c1 * prime)
    if kind == "c2_scale":
        return replace(cert, c2=cert.c2 * prime)
    if kind == "witness_coord":
        name = "x" if cert.branch == inv.BRANCH_DEG0 else "rep_d1"
        out = []
        for n, coords in cert.witnesses:
            if n == name:
                coords = (_bump(coords[0]),) + tuple(coords[1:])
            out.append((n, coords))
        return replace(cert, witnesses=tuple(out))
    raise ValueError(f"unknown mutation {kind!r}")


# ---------------------------------------------------------------------------
# serialization


def _coords_text(coords) -> str:
    return ",".join(format_rational(x) for x in coords)


def certificate_items(cert: WitnessCertificate) -> list:
    """Ordered ``(key, value)`` pairs shared by the text and JSON renderings."""
    pres = cert.presentation
    items = [
        ("certificate", HEADER),
        ("kind", pres.kind),
        ("psi", format_form(pres.psi)),
        ("rho", format_pfister(pres.rho)),
        ("a", format_rational(pres.a)),
        ("b", format_rational(pres.b)),
        ("branch", cert.branch),
        ("c", format_rational(cert.c)),
        ("c1", format_rational(cert.c1)),
        ("c2", format_rational(cert.c2)),
    ]
    if cert.e is not None:
        items.append(("e", format_rational(cert.e)))
    items += [("d1", str(cert.d1.value)), ("d2", str(cert.d2.value))]
    for name, coords in cert.witnesses:
        items.append((f"witness.{name}.coords", _coords_text(coords)))
    for name, ok in cert.checks:
        items.append((f"check.{name}", "pass" if ok else "fail"))
        items.append((f"claim.{name}", CLAIMS[name]))
    return items


def format_certificate(cert: WitnessCertificate) -> str:
    return "".join(f"{k}={v}\n" for k, v in certificate_items(cert))


def certificate_to_json(cert: WitnessCertificate) -> str:
    return json.dumps(dict(certificate_items(cert)), indent=2) + "\n"


def _items_from_text(text: str) -> list:
    items = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if "=" not in raw:
            raise ParseError("expected key=value", lineno, 1)
        key, value = raw.split("=", 1)
        items.append((key.strip(), value.strip(), lineno, len(key) + 2))
    return items


def _items_from_json(text: str) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise MalformedCertificate("JSON certificate must be an object")
    return [(str(k), str(v), 1, 1) for k, v in data.items()]


def parse_certificate(text: str) -> WitnessCertificate:
    """Read a certificate from its ``key=value`` text or its JSON rendering."""
    items = _items_from_json(text) if text.lstrip().startswith("{") else _items_from_text(text)
    scalars, witnesses, checks = {}, [], []
    for key, value, line, col in items:
        if key.startswith("witness.") and key.endswith(".coords"):
            name = key[len("witness.") : -len(".coords")]
            coords = tuple(parse_rational(p, line, col) for p in value.split(",")) if value else ()
            witnesses.append((name, coords))
        elif key.startswith("check."):
            name = key[len("check.") :]
            if name not in CLAIMS or value not in ("pass", "fail"):
                raise MalformedCertificate(f"bad check line {key}={value}")
            checks.append((name, value == "pass"))
        elif key.startswith("claim."):
            continue
        elif key in ("certificate", "kind", "psi", "rho", "a", "b", "branch", "c", "c1", "c2", "e", "d1", "d2"):
            if key in scalars:
                raise MalformedCertificate(f"duplicate field {key!r}")
            scalars[key] = (value, line, col)
        else:
            raise MalformedCertificate(f"unknown field {key!r}")
    required = ("certificate", "kind", "psi", "rho", "a", "b", "branch", "c", "c1", "c2", "d1", "d2")
    missing = [k for k in required if k not in scalars]
    if missing:
        raise MalformedCertificate(f"missing field(s): {', '.join(missing)}")
    if scalars["certificate"][0] != HEADER:
        raise MalformedCertificate(f"unsupported certificate version {scalars['certificate'][0]!r}")
    pres_text = "".join(f"{k}={scalars[k][0]}\n" for k in ("kind", "psi", "rho", "a", "b"))
    try:
        pres = inv.parse_presentation(pres_text)
    except ParseError as exc:
        raise MalformedCertificate(f"embedded presentation: {exc.message}") from None

    def num(key):
        value, line, col = scalars[key]
        return parse_rational(value, line, col)

    def sq(key):
        q = num(key)
        if q == 0:
            raise MalformedCertificate(f"field {key} must be nonzero")
        return squarefree_class(q)

    return WitnessCertificate(
        presentation=pres,
        branch=scalars["branch"][0],
        c=num("c"),
        c1=num("c1"),
        c2=num("c2"),
        e=num("e") if "e" in scalars else None,
        d1=sq("d1"),
        d2=sq("d2"),
        witnesses=tuple(witnesses),
        checks=tuple(checks),
    )


def format_report(report: VerificationReport) -> str:
    lines = []
    for r in report.results:
        lines.append(f"check.{r.name}={'pass' if r.passed else 'fail'}")
        if r.detail:
            lines.append(f"detail.{r.name}={r.detail}")
    lines.append(f"overall={'pass' if report.passed else 'fail'}")
    return "\n".join(lines) + "\n"
