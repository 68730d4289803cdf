"""Command-line front end: enumerate, family, link, germ and blowup subcommands."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .birational import BlowupModel, DivClass, kawamata_model, product_class, quotdiv_list
from .errors import InputError, NonTerminalError, TruncationError
from .families import enumerate_families, family_record, rational_text
from .germs import (
    NOT_CE,
    CD2Std,
    cd2_invariants,
    cd2_uniqueness_check,
    classify,
    disc1_candidates,
    high_disc_necessary,
    parse_germ,
)
from .links import FAMILIES, SOURCE_NAMES, build_hat_link, sample_member, verify_link
from .qpoly import parse_poly

SCHEMA_VERSION = 1
EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("fanolinks")


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    bound: int = 168
    family: int | None = None
    degree: int | None = None
    weights: tuple[int, ...] = ()
    seed: int = 0
    variant: str | None = None
    realized: tuple[int, ...] | None = None
    r: int | None = None
    a: int | None = None
    action: str | None = None
    classes: tuple[tuple[Fraction, Fraction], ...] = ()
    atop: Fraction | None = None
    etop: Fraction | None = None
    lam: Fraction = Fraction(0)
    g_text: str | None = None
    verbosity: int = 0

    def __post_init__(self):
        if self.bound < 1:
            raise InputError("bound must be at least 1")


def _jsonify(x):
    if isinstance(x, Fraction):
        return rational_text(x)
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonify(obj), sort_keys=True, indent=2) + "\n"


def digest(records: list[dict]) -> str:
    blob = json.dumps(records, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


ECHOED = {
    "enumerate": ("bound",),
    "family": ("degree", "weights"),
    "link": ("family", "inputs", "seed", "variant"),
    "germ": ("action", "inputs", "realized", "lam", "a", "g_text"),
    "blowup": ("action", "r", "a", "classes", "atop", "etop"),
}


def _report(cfg: RunConfig, results, checks=None) -> dict:
    inputs = {k: getattr(cfg, k) for k in ECHOED[cfg.subcommand] if getattr(cfg, k) not in (None, [], ())}
    inputs["subcommand"] = cfg.subcommand
    return {"tool": "fanolinks", "version": __version__, "inputs": inputs, "results": results,
            "checks": checks or []}


# subcommands

def _enumerate(cfg: RunConfig) -> tuple[dict, int]:
    workers = int(os.environ.get("FANOLINKS_WORKERS", "0"))
    records = [r.to_json() for r in enumerate_families(cfg.bound, workers)]
    by_index: dict[str, int] = {}
    for r in records:
        key = "1" if r["index"] == 1 else ">=2"
        by_index[key] = by_index.get(key, 0) + 1
    results = {"schema_version": SCHEMA_VERSION, "bound": cfg.bound, "count": len(records),
               "count_by_index": by_index, "digest": digest(records), "records": records}
    return _report(cfg, results), EXIT_OK


def _family(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.degree is None or not cfg.weights:
        raise InputError("family needs --degree and --weights")
    return _report(cfg, family_record(cfg.degree, cfg.weights).to_json()), EXIT_OK


def _link(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.family not in FAMILIES:
        raise InputError(f"unknown family {cfg.family}; expected one of {FAMILIES}")
    if cfg.inputs:
        F = parse_poly(Path(cfg.inputs[0]).read_text(), SOURCE_NAMES)
    else:
        F = sample_member(cfg.family, cfg.seed, cfg.variant)
    report = build_hat_link(cfg.family, F)
    ledger = verify_link(report)
    checks = [e["field"] for e in ledger.to_json()["entries"] if e["ok"]]
    results = {"link": report.to_json(), "verification": ledger.to_json()}
    return _report(cfg, results, checks), EXIT_OK if ledger.passed else EXIT_MISMATCH


def _germ(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.action == "cd2":
        return _germ_cd2(cfg)
    if not cfg.inputs:
        raise InputError("germ needs --file")
    germ = parse_germ(Path(cfg.inputs[0]).read_text())
    label = classify(germ)
    results: dict = {"label": label, "f": str(germ.f), "g": str(germ.g), "h": str(germ.h),
                     "truncation": germ.truncation}
    if cfg.action == "disc1":
        cands = disc1_candidates(germ, cfg.realized)
        passing = sum(c.hypotheses for c in cands)
        results["disc1_count"] = passing
        results["candidates"] = [
            {"label": c.label, "weights": list(c.weights), "hypotheses": c.hypotheses,
             "non_terminal": c.non_terminal, "note": c.note,
             "irreducibility": (wd.irreducibility if (wd := c.discrepancy()) is not None else None)}
            for c in cands]
        if label != NOT_CE:
            hd = high_disc_necessary(germ, disc1_count=passing)
            results["high_discrepancy"] = [{"name": c.name, "holds": c.holds, "detail": c.detail}
                                           for c in hd.conditions]
    return _report(cfg, results), EXIT_OK


def _germ_cd2(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.g_text is None:
        raise InputError("germ cd2 needs --g")
    std = CD2Std(cfg.lam, cfg.a, parse_poly(cfg.g_text, ("x", "z")))
    inv = cd2_invariants(std)
    results = {"b": inv.b, "b_prime": inv.b_prime, "A": list(inv.A), "l": inv.l, "E3": inv.E3,
               "uniqueness": cd2_uniqueness_check(std)}
    return _report(cfg, results), EXIT_OK


def _blowup(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.action == "product":
        if cfg.atop is None or cfg.etop is None or not cfg.classes:
            raise InputError("blowup product needs --classes, --atop and --etop")
        model = BlowupModel(cfg.atop, cfg.etop, Fraction(1), len(cfg.classes))
        value = product_class([DivClass(c, e) for c, e in cfg.classes], model)
        sign = "negative" if value < 0 else ("zero" if value == 0 else "positive")
        return _report(cfg, {"value": value, "sign": sign}), EXIT_OK
    if cfg.r is None or cfg.a is None:
        raise InputError("blowup kawamata needs --r and --a")
    m = kawamata_model(cfg.r, cfg.a)
    divs = [{"k": d.k, "weights": list(d.weights), "discrepancy": d.discrepancy} for d in quotdiv_list(cfg.r, cfg.a)]
    results = {"Etop": m.Etop, "discrepancy": m.disc, "divisors": divs}
    return _report(cfg, results), EXIT_OK


DISPATCH = {"enumerate": _enumerate, "family": _family, "link": _link, "germ": _germ, "blowup": _blowup}


def run(cfg: RunConfig) -> int:
    """Execute one subcommand; writes JSON to ``cfg.out`` or stdout and returns the exit status."""
    try:
        report, status = DISPATCH[cfg.subcommand](cfg)
    except (InputError, NonTerminalError, TruncationError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
        log.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(text)
    return status


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _class_list(text: str) -> tuple[tuple[Fraction, Fraction], ...]:
    out = []
    for item in text.split(";"):
        parts = item.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected 'c,e' pairs separated by ';', got {item!r}")
        out.append((_rational(parts[0]), _rational(parts[1])))
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fanolinks", description=__doc__)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="subcommand", required=True)
    leaves = []

    e = sub.add_parser("enumerate", help="list all families with weights up to a bound")
    e.add_argument("--bound", type=int, default=168)
    leaves.append(e)

    f = sub.add_parser("family", help="record of one (degree, weights) family")
    f.add_argument("--degree", type=int, required=True)
    f.add_argument("--weights", type=_int_list, required=True)
    leaves.append(f)

    k = sub.add_parser("link", help="build and verify the link of one family")
    k.add_argument("--family", type=int, required=True)
    k.add_argument("--equation", help="file with a polynomial in x, y, z, t, w")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--variant", choices=["cE7", "cE8"])
    leaves.append(k)

    g = sub.add_parser("germ", help="cE and cD/2 germ analysis").add_subparsers(dest="action", required=True)
    for name, text in (("classify", "cE type of a germ file"), ("disc1", "discrepancy-1 candidates")):
        a = g.add_parser(name, help=text)
        a.add_argument("--file", required=True)
        if name == "disc1":
            a.add_argument("--realized", type=_int_list, help="weights of a known contraction")
        leaves.append(a)
    c = g.add_parser("cd2", help="invariants of u^2 + y^2 z + lambda y x^(2a+1) + g(x^2, z)")
    c.add_argument("--lambda", dest="lam", type=_rational, required=True)
    c.add_argument("--a", type=int)
    c.add_argument("--g", dest="g_text", required=True, help="polynomial in x, z")
    leaves.append(c)

    b = sub.add_parser("blowup", help="blow-up intersection numbers").add_subparsers(dest="action", required=True)
    kw = b.add_parser("kawamata", help="Kawamata blow-up of a 1/r(1,a,r-a) point")
    kw.add_argument("--r", type=int, required=True)
    kw.add_argument("--a", type=int, required=True)
    pr = b.add_parser("product", help="product of classes c A - e E")
    pr.add_argument("--classes", type=_class_list, required=True, help='"c1,e1;c2,e2;c3,e3"')
    pr.add_argument("--atop", type=_rational, required=True)
    pr.add_argument("--etop", type=_rational, required=True)
    leaves += [kw, pr]

    for s in leaves:
        s.add_argument("--out", help="output JSON path (default stdout)")
    return p


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    inputs = [ns[k] for k in ("equation", "file") if ns.get(k)]
    fields = {k: ns[k] for k in RunConfig.__dataclass_fields__ if k in ns and ns[k] is not None}
    fields.pop("inputs", None)
    return RunConfig(inputs=inputs, verbosity=ns["verbose"], **fields)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbosity, 2), format="%(message)s")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
