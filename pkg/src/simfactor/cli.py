"""Command-line interface.

Exit codes: 0 true / success, 1 false / negative answer, 2 input error,
3 a constructive search ran out of room.  Negative numbers and form literals
starting with ``-`` may be passed directly (``simfactor form isotropy -1,2``).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import involution as inv
from . import oracle, witness
from .arith import squarefree_part
from .errors import (
    InvalidPresentation,
    MalformedCertificate,
    NotAMultiplier,
    ParseError,
    SearchExhausted,
    SimFactorError,
    Undecided,
)
from .forms import (
    QuadraticForm,
    find_representation,
    format_form,
    format_rational,
    invariants,
    is_isometric,
    is_isotropic,
    is_similarity_factor,
    parse_form,
    parse_rational,
    represents,
    witt_decompose,
)

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_SEARCH = 0, 1, 2, 3

# height of the brute-force cross-check used by selftest
SELFTEST_BRUTE_HEIGHT = 60


class InputError(Exception):
    pass


def _coords(coords) -> str:
    return ",".join(format_rational(x) for x in coords)


def _form(text: str) -> QuadraticForm:
    s = text.strip()
    if s.startswith("<") and not s.startswith("<<"):
        if not s.endswith(">"):
            raise ParseError("unbalanced '<'", 1, len(text) - len(text.lstrip()) + 1)
        return parse_form(s[1:-1])
    return parse_form(text)


def _rational(text: str) -> Fraction:
    return parse_rational(text)


def _nonzero(text: str) -> Fraction:
    q = parse_rational(text)
    if q == 0:
        raise ParseError("value must be nonzero", 1, 1)
    return q


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _presentation(path: str) -> inv.DecomposablePresentation:
    try:
        return inv.parse_presentation(_read(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# command handlers return (exit code, ordered items) or (exit code, raw text)


def cmd_form_invariants(args):
    phi = _form(args.form)
    inv_ = invariants(phi)
    items = [
        ("form", format_form(phi)),
        ("dim", inv_.dim),
        ("det", inv_.det.value),
        ("disc", inv_.disc.value),
        ("signature", f"{inv_.signature[0]},{inv_.signature[1]}"),
    ]
    for v, h in inv_.hasse.items():
        if not v.is_real:
            items.append((f"hasse.{v.prime}", h))
    return EXIT_TRUE, items


def cmd_form_isotropy(args):
    phi = _form(args.form)
    if not is_isotropic(phi):
        return EXIT_FALSE, [("form", format_form(phi)), ("result", "anisotropic")]
    rv = find_representation(phi, 0)
    return EXIT_TRUE, [("form", format_form(phi)), ("result", "isotropic"), ("vector", _coords(rv.coords))]


def cmd_form_witt(args):
    phi = _form(args.form)
    wd = witt_decompose(phi)
    return EXIT_TRUE, [
        ("form", format_form(phi)),
        ("witt_index", wd.witt_index),
        ("anisotropic_part", format_form(wd.anisotropic)),
    ]


def cmd_form_isometric(args):
    phi, psi = _form(args.form), _form(args.other)
    ok = is_isometric(phi, psi)
    return (EXIT_TRUE if ok else EXIT_FALSE), [("result", "isometric" if ok else "not isometric")]


def cmd_form_represents(args):
    phi, c = _form(args.form), _nonzero(args.value)
    if not represents(phi, c):
        return EXIT_FALSE, [("form", format_form(phi)), ("value", format_rational(c)), ("result", "not represented")]
    rv = find_representation(phi, c)
    return EXIT_TRUE, [
        ("form", format_form(phi)),
        ("value", format_rational(c)),
        ("result", "represented"),
        ("vector", _coords(rv.coords)),
    ]


def cmd_form_gfactor(args):
    phi, c = _form(args.form), _nonzero(args.value)
    ok = is_similarity_factor(phi, c)
    return (EXIT_TRUE if ok else EXIT_FALSE), [
        ("form", format_form(phi)),
        ("value", format_rational(c)),
        ("result", "similarity factor" if ok else "not a similarity factor"),
    ]


def cmd_alg_multiplier(args):
    pres, c = _presentation(args.presentation), _nonzero(args.value)
    ok = inv.is_multiplier(pres, c)
    return (EXIT_TRUE if ok else EXIT_FALSE), [
        ("branch", pres.branch),
        ("value", format_rational(c)),
        ("result", "multiplier" if ok else "not a multiplier"),
    ]


def cmd_alg_hyperbolic(args):
    pres = _presentation(args.presentation)
    items = [("branch", pres.branch)]
    if args.sqrt is None:
        ok = inv.is_hyperbolic(pres)
    else:
        d = _nonzero(args.sqrt)
        items.append(("sqrt", squarefree_part(d)))
        ok = inv.is_hyperbolic_over_sqrt(pres, d)
    items.append(("result", "hyperbolic" if ok else "not hyperbolic"))
    return (EXIT_TRUE if ok else EXIT_FALSE), items


def cmd_alg_witness(args):
    pres, c = _presentation(args.presentation), _nonzero(args.value)
    try:
        cert = witness.decompose_multiplier(pres, c)
    except NotAMultiplier as exc:
        return EXIT_FALSE, [("result", "not a multiplier"), ("detail", str(exc))]
    text = witness.certificate_to_json(cert) if args.json else witness.format_certificate(cert)
    return EXIT_TRUE, text


def cmd_alg_verify(args):
    pres = _presentation(args.presentation)
    try:
        cert = witness.parse_certificate(_read(args.certificate))
        report = witness.verify_certificate(pres, cert)
    except (MalformedCertificate, ParseError) as exc:
        raise InputError(f"certificate: {exc}") from None
    items = [(f"check.{r.name}", "pass" if r.passed else "fail") for r in report.results]
    items += [(f"detail.{r.name}", r.detail) for r in report.failures]
    items.append(("overall", "pass" if report.passed else "fail"))
    return (EXIT_TRUE if report.passed else EXIT_FALSE), items


def cmd_selftest(args):
    forms = oracle.form_corpus(args.seed, args.count, 4, args.height)
    agree = certified = 0
    for phi in forms:
        iso = is_isotropic(phi)
        hit = oracle.brute_search(phi, 0, SELFTEST_BRUTE_HEIGHT)
        if hit is None or iso:
            agree += 1
        if iso and find_representation(phi, 0).check(phi):
            certified += 1
    n_iso = sum(1 for phi in forms if is_isotropic(phi))
    passed = 0
    for i in range(args.count):
        spec = oracle.InstanceSpec(seed=args.seed * 100003 + i, member=True)
        pres, c, _ = oracle.random_instance(spec)
        cert = witness.decompose_multiplier(pres, c)
        back = witness.parse_certificate(witness.format_certificate(cert))
        if witness.verify_certificate(pres, back).passed:
            passed += 1
    ok = agree == len(forms) and certified == n_iso and passed == args.count
    return (EXIT_TRUE if ok else EXIT_FALSE), [
        ("seed", args.seed),
        ("forms", len(forms)),
        ("isotropy_agreements", agree),
        ("isotropic_certified", f"{certified}/{n_iso}"),
        ("certificates_verified", f"{passed}/{args.count}"),
        ("result", "pass" if ok else "fail"),
    ]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simfactor", description="Similarity factors of decomposable algebras with involution over Q.")
    p.add_argument("--json", action="store_true", help="structured JSON output")
    top = p.add_subparsers(dest="group", required=True)

    form = top.add_parser("form", help="quadratic form queries").add_subparsers(dest="command", required=True)
    for name, fn, extra in (
        ("invariants", cmd_form_invariants, ()),
        ("isotropy", cmd_form_isotropy, ()),
        ("witt", cmd_form_witt, ()),
        ("isometric", cmd_form_isometric, ("other",)),
        ("represents", cmd_form_represents, ("value",)),
        ("gfactor", cmd_form_gfactor, ("value",)),
    ):
        sp = form.add_parser(name)
        sp.add_argument("form", help="form literal such as 1,-2,3/5 or <<2,-1>>")
        for e in extra:
            sp.add_argument(e)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=fn)

    alg = top.add_parser("alg", help="algebra with involution queries").add_subparsers(dest="command", required=True)
    sp = alg.add_parser("multiplier")
    sp.add_argument("presentation")
    sp.add_argument("value")
    sp.set_defaults(func=cmd_alg_multiplier)
    sp = alg.add_parser("hyperbolic")
    sp.add_argument("presentation")
    sp.add_argument("--sqrt", metavar="d")
    sp.set_defaults(func=cmd_alg_hyperbolic)
    sp = alg.add_parser("witness")
    sp.add_argument("presentation")
    sp.add_argument("value")
    sp.set_defaults(func=cmd_alg_witness)
    sp = alg.add_parser("verify")
    sp.add_argument("presentation")
    sp.add_argument("certificate", help="certificate file, or - for standard input")
    sp.set_defaults(func=cmd_alg_verify)
    for sub in alg.choices.values():
        sub.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    sp = top.add_parser("selftest", help="seeded differential self-test")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--height", type=int, default=30)
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_selftest)
    return p


_NEGATIVE = re.compile(r"^-[\d<(]")


def _protect_negatives(argv):
    # a leading space keeps argparse from reading "-1,2" as an option
    return [" " + a if _NEGATIVE.match(a) else a for a in argv]


def _render(items, as_json: bool) -> str:
    if as_json:
        return json.dumps({k: v for k, v in items}, indent=2) + "\n"
    return "".join(f"{k}={v}\n" for k, v in items)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_protect_negatives(argv))
    try:
        code, out = args.func(args)
    except (InputError, ParseError, InvalidPresentation, MalformedCertificate) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchExhausted as exc:
        print(f"search exhausted: step={exc.step}: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except Undecided as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except SimFactorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out if isinstance(out, str) else _render(out, args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
