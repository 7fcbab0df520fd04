"""Command-line front end.

Exit status: 0 on success, 2 when a bounded search comes back empty (or a
bounded check is refuted within its bound), 1 on malformed input or a
certificate that fails verification.  Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import dynamics, hj, towsner, transport
from .certificates import CertificateFile, coloring_to_json, dumps, load_coloring
from .coloring import Coloring, Rule
from .core import EMPTY, Alphabet, Window, make_word, parse_words
from .errors import CarlsonError, PreconditionFailed, SearchExhausted
from .spans import BlockSequence, FinSetSequence, WeakBlockSequence
from .verify import verify

EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_EXHAUSTED = 2


# ---------------------------------------------------------------------------
# Certificate export
# ---------------------------------------------------------------------------

def hj_certificate(f: Coloring, w: hj.HJWitness) -> CertificateFile:
    color = f(w.p.instantiate(f.alphabet.letters[0]))
    return CertificateFile("hj", f.content_hash(), {"word": w.p.render(), "color": color}, w.window)


def carlson_certificate(f: Coloring, c: towsner.CarlsonCertificate) -> CertificateFile:
    payload = {"blocks": [b.render() for b in c.X], "color": int(c.color), "arity": c.arity}
    return CertificateFile("carlson", f.content_hash(), payload, c.window)


def match_certificate(f: Coloring, m: towsner.MatchStructure, arity: int | None = None) -> CertificateFile:
    color = None if m.color is None else int(m.color)
    payload = {"kind": m.kind, "F": [p.render() for p in m.F], "Y": [y.render() for y in m.Y],
               "color": color, "arity": arity}
    window = m.window or Window(m.Y.max_pos + 1, arity)
    return CertificateFile("match", f.content_hash(), payload, window)


def fu_certificate(f: Coloring, Y: FinSetSequence, arity: int | None, letter: str | None = None) -> CertificateFile:
    letter = letter or f.alphabet.letters[0]
    first = make_word([(i, letter) for i in sorted(Y[0])])
    payload = {"blocks": [sorted(b) for b in Y], "arity": arity, "letter": letter, "color": f(first)}
    return CertificateFile("fu", f.content_hash(), payload, Window(max(Y[-1]) + 1, arity))


def schedule_certificate(f: Coloring, sched: dynamics.WitnessSchedule, relation: str,
                         twin: Coloring | None = None) -> CertificateFile:
    color = (twin if twin is not None else f)(EMPTY)
    payload = {"relation": relation, "entries": [[e, p.render()] for e, p in sched.entries], "color": color}
    top = max(p.max_pos for _, p in sched.entries) + 1
    extra = {"twin": twin.content_hash()} if twin is not None else {}
    return CertificateFile("schedule", f.content_hash(), payload, Window(top), extra_hashes=extra)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _blocks(text: str, A: Alphabet) -> BlockSequence:
    return BlockSequence(parse_words(text, A))


def _weak_blocks(text: str, A: Alphabet) -> WeakBlockSequence:
    return WeakBlockSequence(parse_words(text, A))


def _outcome_json(o: dynamics.Outcome) -> dict:
    def render(x):
        return x.render() if hasattr(x, "render") else x
    return {"ok": o.ok, "kind": o.kind, "ell": o.ell, "bound": o.bound,
            "witness": render(o.witness), "counterexample": render(o.counterexample)}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_coloring(args) -> int:
    A = Alphabet(args.alphabet)
    if args.rule:
        params = dict(kv.split("=", 1) for kv in args.param or [])
        params = {k: int(v) if v.lstrip("-").isdigit() else v for k, v in params.items()}
        f = Coloring.from_rule(A, Rule.make(args.rule, **params), args.window)
    else:
        rng = np.random.default_rng(args.seed)
        f = Coloring.random(A, args.colors, args.window, rng)
    _emit(dumps(coloring_to_json(f)), args.out)
    return EXIT_OK


def cmd_hj_search(args) -> int:
    f = load_coloring(args.coloring)
    w = hj.hj_witness(f, args.window)
    if w is None:
        print(f"no Hales-Jewett witness inside [0, {args.window or f.window})", file=sys.stderr)
        return EXIT_EXHAUSTED
    _emit(hj_certificate(f, w).dumps(), args.out)
    return EXIT_OK


def cmd_hj_number(args) -> int:
    limit = args.budget if args.budget is not None else 1 << 32
    n = hj.hj_number(args.k, args.c, args.max, threads=args.threads, limit=limit)
    print(n)
    return EXIT_OK


def cmd_carlson(args) -> int:
    f = load_coloring(args.coloring)
    start = args.window if args.window is not None else args.blocks
    cap = max(args.cap, start)
    if f.rule is None:
        cap = min(cap, f.window)
    cert = towsner.carlson_search_growing(f, args.blocks, args.arity, start=start, cap=cap,
                                          threads=args.threads)
    _emit(carlson_certificate(f, cert).dumps(), args.out)
    return EXIT_OK


def cmd_fut(args) -> int:
    f = load_coloring(args.coloring)
    n = args.window if args.window is not None else f.window
    letter = args.letter or f.alphabet.letters[0]

    def g(E: frozenset) -> int:
        return f(make_word([(i, letter) for i in sorted(E)]))

    Y = towsner.fu_homog_search(g, FinSetSequence([{i} for i in range(n)]), args.blocks, args.arity)
    _emit(fu_certificate(f, Y, args.arity, letter).dumps(), args.out)
    return EXIT_OK


def cmd_transport(args) -> int:
    f = load_coloring(args.coloring)
    X = _blocks(args.blocks, f.alphabet)
    _emit(dumps(coloring_to_json(transport.transport_coloring(f, X))), args.out)
    return EXIT_OK


def cmd_match(args) -> int:
    f = load_coloring(args.coloring)
    X = _blocks(args.blocks, f.alphabet)
    if args.kind == "full":
        m = towsner.find_full_match(f, X, rounds=args.rounds)
    else:
        if args.color is None:
            print("--color is required for a half match", file=sys.stderr)
            return EXIT_MALFORMED
        m = towsner.find_half_match(f, X, args.color)
    _emit(match_certificate(f, m).dumps(), args.out)
    return EXIT_OK


def cmd_recurrence(args) -> int:
    f = load_coloring(args.coloring)
    o = dynamics.check_recurrence(f, args.ell, args.bound, args.kind, args.modulus)
    _emit(dumps(_outcome_json(o)), args.out)
    return EXIT_OK if o else EXIT_EXHAUSTED


def cmd_proximality(args) -> int:
    f = load_coloring(args.coloring)
    g = load_coloring(args.twin)
    o = dynamics.check_proximality(f, g, args.ell, args.bound, args.kind)
    _emit(dumps(_outcome_json(o)), args.out)
    return EXIT_OK if o else EXIT_EXHAUSTED


def cmd_orbit_tree(args) -> int:
    f = load_coloring(args.coloring)
    tree = dynamics.orbit_tree(f, args.depth, args.bound)
    levels = [[{"table": list(h.table), "witness": p.render()}
               for h, p in sorted(lv.items(), key=lambda kv: kv[0].table)] for lv in tree.levels]
    out = {"depth": tree.depth, "bound": tree.bound, "note": tree.note, "levels": levels}
    if args.minimal:
        out["minimal"] = [sorted(list(h.table) for h in lv) for lv in dynamics.minimal_check(tree, args.budget)]
    _emit(dumps(out), args.out)
    return EXIT_OK


def cmd_flim(args) -> int:
    f = load_coloring(args.coloring)
    X = _weak_blocks(args.blocks, f.alphabet)
    res = dynamics.flim_search(f, X, args.ell, args.length)
    out = {"limit": coloring_to_json(res.g), "Y": [y.render() for y in res.Y], "offsets": res.offsets}
    _emit(dumps(out), args.out)
    return EXIT_OK


def cmd_extract(args) -> int:
    f = load_coloring(args.coloring)
    g = load_coloring(args.twin) if args.twin else None
    if g is None:
        sched = dynamics.recurrence_schedule(f, args.blocks, args.bound)
        cert = schedule_certificate(f, sched, "recurrence")
        dynamics.extract_from_recurrent(f, sched, args.blocks)
    else:
        sched = dynamics.proximality_schedule(f, g, args.blocks, args.bound)
        cert = schedule_certificate(f, sched, "proximality", twin=g)
        dynamics.extract_from_proximal(f, g, sched, args.blocks)
    _emit(cert.dumps(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = CertificateFile.load(args.certificate)
    f = load_coloring(args.coloring)
    twin = load_coloring(args.twin) if args.twin else None
    rep = verify(cert, f, twin)
    if args.report:
        for line in rep.obligations:
            print(line)
    print(rep.render())
    return EXIT_OK if rep else EXIT_MALFORMED


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, coloring: bool = True) -> None:
    if coloring:
        p.add_argument("--coloring", required=True, help="coloring file (JSON)")
    p.add_argument("--out", help="write the artifact here instead of standard output")
    p.add_argument("--threads", type=int, default=None, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carlson", description="Located-word Ramsey searches and checkers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coloring", help="write a coloring file (symbolic rule or random table)")
    _common(p, coloring=False)
    p.add_argument("--alphabet", default="ab")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--rule", help="named rule, e.g. size_mod")
    p.add_argument("--param", action="append", help="rule parameter key=value")
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_coloring)

    p = sub.add_parser("hj", help="Hales-Jewett witnesses and numbers")
    hsub = p.add_subparsers(dest="hj_command", required=True)
    q = hsub.add_parser("search")
    _common(q)
    q.add_argument("--window", type=int)
    q.set_defaults(func=cmd_hj_search)
    q = hsub.add_parser("number")
    _common(q, coloring=False)
    q.add_argument("-k", type=int, required=True, help="alphabet size")
    q.add_argument("-c", type=int, required=True, help="number of colors")
    q.add_argument("--max", type=int, required=True, help="largest window to try")
    q.add_argument("--budget", type=int, help="most colorings to enumerate per window")
    q.set_defaults(func=cmd_hj_number)

    p = sub.add_parser("carlson", help="block sequence with a monochromatic span")
    _common(p)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--arity", type=int)
    p.add_argument("--cap", type=int, default=8, help="largest window in the growth policy")
    p.set_defaults(func=cmd_carlson)

    p = sub.add_parser("fut", help="finite-union homogeneous block sequence")
    _common(p)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--window", type=int)
    p.add_argument("--arity", type=int)
    p.add_argument("--letter", help="letter encoding sets as located words")
    p.set_defaults(func=cmd_fut)

    p = sub.add_parser("transport", help="pull a coloring back along a block sequence")
    _common(p)
    p.add_argument("--blocks", required=True, help='e.g. "{0:*,1:*},{2:*}"')
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("match", help="half or full match structure")
    _common(p)
    p.add_argument("--blocks", required=True)
    p.add_argument("--kind", choices=["half", "full"], default="full")
    p.add_argument("--color", type=int)
    p.add_argument("--rounds", type=int, default=1)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("dynamics", help="recurrence, proximality, orbit trees, limits, extraction")
    dsub = p.add_subparsers(dest="dyn_command", required=True)
    q = dsub.add_parser("recurrence")
    _common(q)
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--kind", choices=[dynamics.WEAK, dynamics.PLAIN, dynamics.UNIFORM], default=dynamics.WEAK)
    q.add_argument("--modulus", type=int)
    q.set_defaults(func=cmd_recurrence)
    q = dsub.add_parser("proximality")
    _common(q)
    q.add_argument("--twin", required=True)
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--kind", choices=[dynamics.WEAK, dynamics.PLAIN, dynamics.STRONG], default=dynamics.WEAK)
    q.set_defaults(func=cmd_proximality)
    q = dsub.add_parser("orbit-tree")
    _common(q)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.add_argument("--minimal", action="store_true")
    q.add_argument("--budget", type=int, help="most exclusion steps in the minimality sweep")
    q.set_defaults(func=cmd_orbit_tree)
    q = dsub.add_parser("flim")
    _common(q)
    q.add_argument("--blocks", required=True, help="weak block sequence")
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--length", type=int)
    q.set_defaults(func=cmd_flim)
    q = dsub.add_parser("extract")
    _common(q)
    q.add_argument("--twin")
    q.add_argument("--blocks", type=int, required=True)
    q.add_argument("--bound", type=int, required=True)
    q.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="re-check a certificate by direct enumeration")
    p.add_argument("certificate")
    p.add_argument("--coloring", required=True)
    p.add_argument("--twin")
    p.add_argument("--report", action="store_true", help="list every checked obligation")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SearchExhausted, PreconditionFailed) as exc:
        print(f"exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (CarlsonError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
