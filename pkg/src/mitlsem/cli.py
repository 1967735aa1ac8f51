"""Command-line front end.

Every command prints one JSON document on standard output.  Exit status is 0
on success, 1 when a check that must hold under the corrected semantics
fails, and 2 when the input cannot be used.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .formula import (
    Release,
    Until,
    classify,
    is_nnf,
    nnf,
    normal_form_type,
    subformula_dag_size,
    to_old,
)
from .intervals import Interval, format_time, is_finite, parse_time
from .oracle import Oracle, critical_grid
from .randomgen import random_instance
from .refuter import CanonicalFormula, RefutationError, refute
from .semantics import (
    Semantics,
    bridge_check,
    duality_check,
    truth_set,
    truth_sets,
)
from .signals import Signal, SignalError
from .syntax import ParseError, parse, to_text
from .witness import WitnessError, release_partition, step, until_partition

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _semantics(name):
    if name == "both":
        return [Semantics.OLD, Semantics.NEW]
    return [Semantics(name)]


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc


def _signal(path) -> Signal:
    return Signal.from_json(_load_json(path))


def _interval(text) -> Interval:
    try:
        return Interval.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad interval {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args):
    f, phi = _signal(args.signal), parse(args.formula)
    t = parse_time(args.time)
    return EXIT_OK, {
        "formula": to_text(phi),
        "time": format_time(t),
        "sat": {s.value: t in truth_set(f, phi, s) for s in _semantics(args.semantics)},
    }


def cmd_truthset(args):
    f, phi = _signal(args.signal), parse(args.formula)
    return EXIT_OK, {
        "formula": to_text(phi),
        "truth_set": {s.value: str(truth_set(f, phi, s)) for s in _semantics(args.semantics)},
    }


def cmd_duality(args):
    f, phi = _signal(args.signal), parse(args.formula)
    out, code = {"formula": to_text(phi), "nnf": to_text(nnf(phi))}, EXIT_OK
    for s in _semantics(args.semantics):
        rep = duality_check(f, phi, s)
        out[s.value] = {
            "equal": rep.equal,
            "truth_set": str(rep.set_phi),
            "truth_set_nnf": str(rep.set_nnf),
            "mismatch": str(rep.mismatch),
        }
        if s is Semantics.NEW and not rep.equal:
            code = EXIT_VIOLATION
    return code, out


def cmd_bridge(args):
    f, phi = _signal(args.signal), parse(args.formula)
    rep = bridge_check(f, phi)
    return (EXIT_OK if rep.equal else EXIT_VIOLATION), {
        "formula": to_text(phi),
        "translated": to_text(rep.translated),
        "equal": rep.equal,
        "truth_set_new": str(rep.set_new),
        "truth_set_old": str(rep.set_old),
        "mismatch": str(rep.mismatch),
    }


def cmd_classify(args):
    phi = parse(args.formula)
    rep = classify(phi)
    nf = normal_form_type(phi)
    return EXIT_OK, {
        "formula": to_text(phi),
        "fragment": rep.fragment,
        "is_mtl": rep.is_mtl,
        "is_mitl": rep.is_mitl,
        "is_mitl0inf": rep.is_mitl0inf,
        "is_mitlwi": rep.is_mitlwi,
        "size_bits": rep.size_bits,
        "worst_ratio": None if rep.worst_ratio is None else format_time(rep.worst_ratio),
        "normal_form": nf.in_normal_form,
        "temporal_types": [[to_text(n), tag] for n, tag in nf.tags],
    }


def cmd_nnf(args):
    phi = parse(args.formula)
    return EXIT_OK, {"formula": to_text(phi), "nnf": to_text(nnf(phi))}


def cmd_toold(args):
    phi = parse(args.formula)
    out = to_old(phi)
    return EXIT_OK, {
        "formula": to_text(phi),
        "translated": to_text(out),
        "subformulas": subformula_dag_size(phi),
        "subformulas_translated": subformula_dag_size(out),
    }


def _witness_json(w):
    if w is None:
        return None
    if hasattr(w, "r"):
        return {"r": format_time(w.r), "w": format_time(w.w), "kind": w.kind}
    return {"interval": str(w.interval), "kind": w.kind}


def cmd_witness(args):
    f, phi = _signal(args.signal), parse(args.formula)
    if isinstance(phi, Until):
        rep = until_partition(f, phi.left, phi.right, phi.interval)
    elif isinstance(phi, Release):
        rep = release_partition(f, phi.left, phi.right, phi.interval)
    else:
        raise UsageError("witness needs a formula whose top operator is U or R")
    return EXIT_OK, {
        "formula": to_text(phi),
        "step": format_time(rep.step),
        "truth_in_step": str(rep.truth),
        "intervals": [str(t) for t in rep.intervals],
        "witnesses": [_witness_json(w) for w in rep.witnesses],
    }


def cmd_refute(args):
    phi = CanonicalFormula.from_json(_load_json(args.phi))
    rep = refute(phi, _interval(args.interval))
    return EXIT_OK, rep.to_json()


# ---------------------------------------------------------------------------
# randcheck


def check_instance(f, phi, oracle=True) -> list:
    """Names of the corrected-semantics properties that fail on (f, phi)."""
    failed = []
    if not duality_check(f, phi, Semantics.NEW).equal:
        failed.append("duality")
    if not bridge_check(f, phi).equal:
        failed.append("bridge")
    if oracle:
        sets = truth_sets(f, phi, Semantics.NEW)
        orc = Oracle(f, Semantics.NEW)
        grid = critical_grid(orc, phi)
        if any((t in s) != orc.sat(sub, t) for sub, s in sets.items() for t in grid):
            failed.append("oracle")
    for node, s in truth_sets(f, phi, Semantics.NEW).items():
        if not isinstance(node, (Until, Release)):
            continue
        i = node.interval
        if i.is_empty or not is_finite(i.hi) or i.lo <= 0:
            continue
        split = until_partition if isinstance(node, Until) else release_partition
        try:
            rep = split(f, node.left, node.right, i)
        except WitnessError:
            failed.append("partition")
            break
        if rep.union != s.clip(Interval(0, step(i), True, False)):
            failed.append("partition")
            break
    return failed


def randcheck(seed, count, max_depth=4, max_segments=6, oracle=True) -> dict:
    if count < 1:
        raise UsageError("count must be at least 1")
    failures = []
    for k in range(count):
        f, phi = random_instance(seed, k, max_depth=max_depth, max_segments=max_segments)
        bad = check_instance(f, phi, oracle=oracle)
        if bad:
            failures.append(
                {"seed": seed, "index": k, "formula": to_text(phi), "signal": f.to_json(), "failed": bad}
            )
    return {"seed": seed, "count": count, "failures": failures}


def cmd_randcheck(args):
    summary = randcheck(args.seed, args.count, args.max_depth, args.max_segments, not args.no_oracle)
    return (EXIT_VIOLATION if summary["failures"] else EXIT_OK), summary


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mitlsem", description="Dense-time MITL semantics toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_, formula=True, signal=False, semantics=False):
        c = sub.add_parser(name, help=help_)
        if formula:
            c.add_argument("--formula", required=True)
        if signal:
            c.add_argument("--signal", required=True, help="signal JSON file")
        if semantics:
            c.add_argument("--semantics", choices=["old", "new", "both"], default="new")
        c.set_defaults(run=fn)
        return c

    c = command("eval", cmd_eval, "satisfaction at one instant", signal=True, semantics=True)
    c.add_argument("--time", default="0")
    command("truthset", cmd_truthset, "truth set over [0,inf)", signal=True, semantics=True)
    c = command("duality", cmd_duality, "formula vs its negation normal form", signal=True, semantics=True)
    command("bridge", cmd_bridge, "new semantics vs translation under old", signal=True)
    command("classify", cmd_classify, "fragment membership and size")
    command("nnf", cmd_nnf, "negation normal form")
    command("toold", cmd_toold, "translate new-semantics release into old")
    command("witness", cmd_witness, "truth-set partition with witnesses", signal=True)
    c = command("refute", cmd_refute, "refute a two-variable candidate", formula=False)
    c.add_argument("--phi", required=True, help="candidate JSON file")
    c.add_argument("--interval", required=True)
    c = command("randcheck", cmd_randcheck, "random property checks", formula=False)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--max-depth", type=int, default=4)
    c.add_argument("--max-segments", type=int, default=6)
    c.add_argument("--no-oracle", action="store_true", help="skip the pointwise oracle")
    return p


def _emit(stream, doc):
    stream.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        code, doc = args.run(args)
    except ParseError as exc:
        _emit(err, {"error": "parse", "message": str(exc), "position": exc.position})
        return EXIT_USAGE
    except (UsageError, SignalError, RefutationError, WitnessError, ValueError) as exc:
        _emit(err, {"error": type(exc).__name__, "message": str(exc)})
        return EXIT_USAGE
    _emit(out, doc)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
