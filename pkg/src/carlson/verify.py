"""Independent certificate verifier.

Re-evaluates the defining universal statement of each certificate kind by
direct enumeration.  It deliberately imports nothing from the search
modules or the kernels: spans are enumerated here with ``itertools``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .certificates import CertificateFile
from .coloring import Coloring
from .core import EMPTY, LocatedVariableWord, _Located, make_word, parse_word, union
from .errors import HashMismatch, MalformedCertificate, ParseError, WindowOverflow


@dataclass
class VerifyReport:
    ok: bool
    kind: str
    obligations: list[str] = field(default_factory=list)
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def render(self) -> str:
        head = f"{self.kind}: {'PASS' if self.ok else 'FAIL'} ({len(self.obligations)} obligations)"
        return head if self.ok else f"{head}; first failure: {self.failure}"


def _word(text, f: Coloring, variable: bool = False) -> _Located:
    try:
        w = parse_word(str(text), f.alphabet)
    except ParseError as exc:
        raise MalformedCertificate(str(exc)) from None
    if variable and not isinstance(w, LocatedVariableWord):
        raise MalformedCertificate(f"{w.render()} is not a variable word")
    if w.is_empty:
        raise MalformedCertificate("witness words must be nonempty")
    return w


def _blocks(items, f: Coloring) -> list[_Located]:
    if not isinstance(items, list) or not items:
        raise MalformedCertificate("block list must be a nonempty list")
    out = [_word(x, f, variable=True) for x in items]
    for a, b in zip(out, out[1:]):
        if not a.max_pos < b.min_pos:
            raise MalformedCertificate(f"{a.render()} does not precede {b.render()}")
    return out


def _span(blocks: Sequence[LocatedVariableWord], letters, arity: int | None) -> Iterator[_Located]:
    r = len(blocks) if arity is None else min(arity, len(blocks))
    for size in range(1, r + 1):
        for chosen in itertools.combinations(blocks, size):
            for assign in itertools.product(letters, repeat=size):
                w = EMPTY
                for b, a in zip(chosen, assign):
                    w = union(w, b.instantiate(a))
                yield w


def _color(f: Coloring, w: _Located) -> int:
    try:
        return f(w)
    except WindowOverflow as exc:
        raise MalformedCertificate(f"witness leaves the coloring window: {exc}") from None


def _int_or_none(x, name: str) -> int | None:
    if x is None:
        return None
    if not isinstance(x, int) or isinstance(x, bool) or x < 1:
        raise MalformedCertificate(f"{name} must be a positive integer or null")
    return x


def _expect_color(payload: dict) -> int:
    c = payload.get("color")
    if not isinstance(c, int) or isinstance(c, bool):
        raise MalformedCertificate("color must be an integer")
    return c


def _mono(rep: VerifyReport, f: Coloring, words, color: int, tag: str = "f") -> VerifyReport:
    for w in words:
        got = _color(f, w)
        rep.obligations.append(f"{tag}({w.render()}) = {color}")
        if got != color:
            rep.ok = False
            rep.failure = f"{tag}({w.render()}) = {got}, expected {color}"
            return rep
    return rep


def _verify_hj(cert: CertificateFile, f: Coloring) -> VerifyReport:
    p = _word(cert.payload.get("word"), f, variable=True)
    color = _expect_color(cert.payload)
    return _mono(VerifyReport(True, "hj"), f, (p.instantiate(a) for a in f.alphabet.letters), color)


def _verify_carlson(cert: CertificateFile, f: Coloring) -> VerifyReport:
    X = _blocks(cert.payload.get("blocks"), f)
    color = _expect_color(cert.payload)
    arity = _int_or_none(cert.payload.get("arity"), "arity")
    return _mono(VerifyReport(True, "carlson"), f, _span(X, f.alphabet.letters, arity), color)


def _verify_fu(cert: CertificateFile, f: Coloring) -> VerifyReport:
    raw = cert.payload.get("blocks")
    letter = cert.payload.get("letter", f.alphabet.letters[0])
    if letter not in f.alphabet.letters:
        raise MalformedCertificate(f"unknown letter {letter!r}")
    if not isinstance(raw, list) or not raw:
        raise MalformedCertificate("blocks must be a nonempty list of sets")
    try:
        sets = [sorted({int(i) for i in b}) for b in raw]
    except (TypeError, ValueError):
        raise MalformedCertificate("blocks must be lists of naturals") from None
    for a, b in zip(sets, sets[1:]):
        if not a or not b or not a[-1] < b[0]:
            raise MalformedCertificate("blocks must be nonempty and increasing")
    if not sets[0] or sets[0][0] < 0:
        raise MalformedCertificate("blocks must be nonempty sets of naturals")
    color = _expect_color(cert.payload)
    arity = _int_or_none(cert.payload.get("arity"), "arity")
    r = len(sets) if arity is None else min(arity, len(sets))
    words = (make_word([(i, letter) for s in chosen for i in s])
             for size in range(1, r + 1) for chosen in itertools.combinations(sets, size))
    return _mono(VerifyReport(True, "fu"), f, words, color)


def _verify_match(cert: CertificateFile, f: Coloring) -> VerifyReport:
    pl = cert.payload
    kind = pl.get("kind")
    if kind not in ("half", "half_all", "full"):
        raise MalformedCertificate(f"unknown match kind {kind!r}")
    F = [_word(x, f, variable=True) for x in pl.get("F", [])]
    Y = _blocks(pl.get("Y"), f)
    if F and max(p.max_pos for p in F) >= Y[0].min_pos:
        raise MalformedCertificate("F must precede Y")
    arity = _int_or_none(pl.get("arity"), "arity")
    color = pl.get("color")
    if kind == "half" and color is None:
        raise MalformedCertificate("a half match needs a color")
    letters = f.alphabet.letters
    rep = VerifyReport(True, "match")
    for q in _span(Y, letters, arity):
        fq = _color(f, q)
        if kind == "half" and fq != color:
            continue
        rep.obligations.append(f"absorb {q.render()}")
        found = False
        for p in F:
            insts = [p.instantiate(a) for a in letters]
            if kind == "full" and any(_color(f, w) != fq for w in insts):
                continue
            if all(_color(f, union(w, q)) == fq for w in insts):
                found = True
                break
        if not found:
            rep.ok = False
            rep.failure = f"no member of F absorbs {q.render()}"
            return rep
    return rep


def _schedule_blocks(pl: dict, f: Coloring) -> list[LocatedVariableWord]:
    entries = pl.get("entries")
    if not isinstance(entries, list) or not entries:
        raise MalformedCertificate("schedule needs a nonempty entry list")
    expected = 0
    out = []
    for item in entries:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], int):
            raise MalformedCertificate("schedule entries are [level, word] pairs")
        ell, text = item
        if ell != expected:
            raise MalformedCertificate(f"schedule gap: level {expected} expected, {ell} found")
        p = _word(text, f, variable=True)
        if p.min_pos < ell:
            raise MalformedCertificate(f"{p.render()} does not lie past level {ell}")
        out.append(p)
        expected = 1 + p.max_pos
    return out


def _verify_schedule(cert: CertificateFile, f: Coloring, twin: Coloring | None) -> VerifyReport:
    pl = cert.payload
    relation = pl.get("relation")
    X = _schedule_blocks(pl, f)
    color = _expect_color(pl)
    rep = VerifyReport(True, "schedule")
    if relation == "recurrence":
        if color != _color(f, EMPTY):
            rep.ok, rep.failure = False, f"color {color} differs from f(empty) = {_color(f, EMPTY)}"
            return rep
        return _mono(rep, f, _span(X, f.alphabet.letters, None), color)
    if relation == "proximality":
        if twin is None:
            raise MalformedCertificate("proximality schedules need the twin coloring")
        want = cert.extra_hashes.get("twin")
        if want != twin.content_hash():
            raise HashMismatch(f"twin coloring hash {twin.content_hash()} does not match {want}")
        if color != _color(twin, EMPTY):
            rep.ok, rep.failure = False, f"color {color} differs from g(empty) = {_color(twin, EMPTY)}"
            return rep
        _mono(rep, twin, _span(X, f.alphabet.letters, None), color, "g")
        if not rep.ok:
            return rep
        return _mono(rep, f, _span(X, f.alphabet.letters, None), color)
    raise MalformedCertificate(f"unknown schedule relation {relation!r}")


def verify(cert: CertificateFile, f: Coloring, twin: Coloring | None = None) -> VerifyReport:
    """Re-check ``cert`` against the coloring it names by its content hash."""
    if cert.instance_hash != f.content_hash():
        raise HashMismatch(f"certificate names {cert.instance_hash}, coloring hashes to {f.content_hash()}")
    if cert.kind == "hj":
        return _verify_hj(cert, f)
    if cert.kind == "carlson":
        return _verify_carlson(cert, f)
    if cert.kind == "fu":
        return _verify_fu(cert, f)
    if cert.kind == "match":
        return _verify_match(cert, f)
    if cert.kind == "schedule":
        return _verify_schedule(cert, f, twin)
    raise MalformedCertificate(f"unknown certificate kind {cert.kind!r}")


__all__ = ["VerifyReport", "verify"]
