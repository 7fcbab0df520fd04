"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS line when it completes; the terminal summary
(see conftest) lists the verdict of every criterion.  Expected values come
from the oracles module or from the verifier, never from the search code.
"""

import itertools
import random
import time

import numpy as np

from carlson.certificates import CertificateFile
from carlson.cli import carlson_certificate, hj_certificate, schedule_certificate
from carlson.coloring import Coloring, Rule
from carlson.core import EMPTY, Alphabet, canonical_index, make_word, word_from_index, words_in_window
from carlson.dynamics import (
    PLAIN,
    STRONG,
    WEAK,
    check_proximality,
    extract_from_proximal,
    extract_from_recurrent,
    flim_check,
    flim_search,
    proximality_holds,
    proximality_schedule,
    recurrence_holds,
    recurrence_schedule,
    strengthen_proximality,
    weak_proximality_from_flim,
    weaken_recurrence,
)
from carlson.errors import AmbiguousLimit, Exhausted
from carlson.hj import hj_number, hj_witness
from carlson.spans import BlockSequence, FinSetSequence, WeakBlockSequence, finite_unions, is_homogeneous
from carlson.towsner import FULL, HALF, HALF_ALL, MatchStructure, carlson_search, carlson_search_growing
from carlson.towsner import check_match, is_thin, is_weakly_thin
from carlson.transport import (
    canonical_words,
    collapse_to_words,
    finset_to_nat,
    iota_fs,
    iota_fu,
    iota_located,
    is_two_apart,
    lift_from_words,
    nat_to_finset,
    normalize_two_apart,
)
from carlson.verify import verify

import oracles as O
from conftest import AB, as_dict, from_dict


def done(n: int, t0: float, extra: str = "") -> None:
    print(f"criterion {n}: PASS ({time.perf_counter() - t0:.2f}s){' ' + extra if extra else ''}")


def random_blocks(rng: random.Random, n_blocks: int, start: int = 0, max_len: int = 2, letters="ab"):
    """A block sequence of variable words with small random gaps."""
    out, pos = [], start
    for _ in range(n_blocks):
        pos += rng.randrange(2)
        length = rng.randint(1, max_len)
        symbols = [rng.choice(letters + "**") for _ in range(length)]
        if "*" not in symbols:
            symbols[rng.randrange(length)] = "*"
        out.append(make_word([(pos + i, s) for i, s in enumerate(symbols)]))
        pos += length
    return out


# ---------------------------------------------------------------------------


def test_criterion_1_encodings():
    """criterion 1: encoding roundtrips (binary sets, canonical index)"""
    t0 = time.perf_counter()
    rng = random.Random(1)
    for _ in range(10_000):
        n = rng.randrange(1, 1 << 20)
        E = nat_to_finset(n)
        assert finset_to_nat(E) == n and E == O.bits(n)
    for k in range(1, 4):
        A = Alphabet("abc"[:k])
        for n in range(0, 7):
            ws = words_in_window(A, n)
            idx = [canonical_index(w, A) for w in ws]
            assert sorted(idx) == list(range((k + 1) ** n))
            assert all(word_from_index(i, A) == w for i, w in zip(idx, ws))
            assert all(i == O.index_of(as_dict(w), A.letters) for i, w in zip(idx, ws))
    done(1, t0)


def _stream(seed, seen=None):
    rng = np.random.default_rng(seed)
    x = 0
    while True:
        chunk = (x + np.cumsum(rng.integers(1, 10, 4096))).tolist()
        x = chunk[-1]
        if seen is not None:
            seen.extend(chunk)
        yield from chunk


def test_criterion_2_two_apart():
    """criterion 2: 2-apart normalization of increasing streams"""
    t0 = time.perf_counter()
    pick = random.Random(2)
    for seed in range(100):
        seen: list[int] = []
        Y = normalize_two_apart(_stream(seed, seen), budget=None)
        ys = Y.take(20)
        assert is_two_apart(ys) and O.two_apart(ys)
        inputs = np.asarray(seen)
        prev = 0
        for block, s in zip(Y.blocks, ys):
            # blocks are increasing runs of distinct inputs, so they are pairwise disjoint
            assert sum(block) == s and block[0] > prev and list(block) == sorted(set(block))
            assert np.isin(block, inputs).all()
            prev = block[-1]
        for _ in range(5):
            chosen = pick.sample(range(20), pick.randint(1, 3))
            # a sum of outputs is the sum of the union of their blocks
            parts = [x for i in chosen for x in Y.blocks[i]]
            assert sum(ys[i] for i in chosen) == sum(parts) and np.isin(parts, inputs).all()
    done(2, t0, "(100 streams, 500 sampled sums)")


def test_criterion_3_transport():
    """criterion 3: homogeneity commutes with every block substitution"""
    t0 = time.perf_counter()
    rng = random.Random(3)

    def commutes(col, iota, domain):
        for size in (1, 2, 3):
            for fam in itertools.combinations(domain, size):
                lhs = is_homogeneous(lambda x: col(iota(x)), fam)
                rhs = is_homogeneous(col, [iota(x) for x in fam])
                assert lhs == rhs
        return True

    for inst in range(200):
        which = inst % 4
        if which == 0:
            A, top = [], 0
            for _ in range(4):
                lo = top + rng.randrange(2)
                A.append(sum(1 << b for b in range(lo, lo + rng.randint(1, 2)) if b == lo or rng.random() < .5))
                top = max(O.bits(A[-1])) + 1
            assert O.two_apart(A)
            colors = {s: rng.randrange(2) for s in O.finite_sums(A)}
            domain = list(range(1, 16))
            assert {iota_fs(A, n) for n in domain} == O.finite_sums(A)
            commutes(colors.__getitem__, lambda n: iota_fs(A, n), domain)
        elif which == 1:
            blocks, pos = [], 0
            for _ in range(4):
                pos += rng.randrange(2)
                blocks.append({pos + i for i in range(rng.randint(1, 2))})
                pos = max(blocks[-1]) + 1
            X = FinSetSequence(blocks)
            colors = {E: rng.randrange(2) for E in finite_unions(X)}
            domain = [frozenset(nat_to_finset(n)) for n in range(1, 16)]
            assert {iota_fu(X, E) for E in domain} == set(finite_unions(X))
            commutes(colors.__getitem__, lambda E: iota_fu(X, E), domain)
        elif which == 2:
            X = random_blocks(rng, 3)
            f = Coloring.random(AB, 2, X[-1].max_pos + 1, np.random.default_rng(inst))
            domain = [w for w in words_in_window(AB, 3) if w.entries]
            image = {O.key(as_dict(iota_located(X, q))) for q in domain}
            assert image == {O.key(d) for d in O.span([as_dict(b) for b in X], "ab")}
            commutes(f, lambda q: iota_located(X, q), domain)
        else:
            ws = canonical_words(3)
            domain = [w for w in words_in_window(AB, 3) if w.entries]
            colors = {}
            for q in domain:
                u = collapse_to_words(q, ws)
                assert lift_from_words(u, AB) == q
                colors[u] = rng.randrange(2)
            commutes(colors.__getitem__, lambda q: collapse_to_words(q, ws), domain)
    done(3, t0, "(200 instances)")


V22 = O.hj_number(2, 2, 3)


def hj_suite(threads):
    assert hj_number(2, 2, 3, threads=threads) == V22
    rng = np.random.default_rng(4)
    out = []
    for _ in range(1000):
        f = Coloring.random(AB, 2, V22, rng)
        wit = hj_witness(f)
        assert wit is not None
        out.append((f, hj_certificate(f, wit)))
    return out


def test_criterion_4_hales_jewett():
    """criterion 4: Hales-Jewett number and 1000 verified witnesses"""
    t0 = time.perf_counter()
    assert V22 == 2
    for f, cert in hj_suite(None):
        rep = verify(CertificateFile.from_json(cert.to_json()), f)
        assert rep, rep.render()
    done(4, t0, f"(V22 = {V22})")


def test_criterion_5_towsner_oracle():
    """criterion 5: thinness and match checks agree with direct enumeration"""
    t0 = time.perf_counter()
    rng = random.Random(5)
    kinds = {HALF: "half", HALF_ALL: "half_all", FULL: "full"}
    for trial in range(1000):
        n_F = rng.randint(1, 2)
        F = random_blocks(rng, n_F, 0, 1)
        Y = random_blocks(rng, rng.randint(1, 3), F[-1].max_pos + 1, 2)
        f = Coloring.random(AB, 2, Y[-1].max_pos + 1, np.random.default_rng(trial))
        col = O.colour(f.table, "ab")
        dY = [as_dict(y) for y in Y]
        assert len(O.span(dY, "ab", star=True)) <= 200
        i = rng.randrange(2)
        assert bool(is_weakly_thin(f, BlockSequence(Y), i)) == O.weakly_thin(col, dY, i, "ab")
        assert bool(is_thin(f, BlockSequence(Y), i)) == O.thin(col, dY, i, "ab")
        kind = rng.choice(sorted(kinds))
        m = MatchStructure(tuple(F), BlockSequence(Y), kind, i if kind == HALF else None)
        want = O.match_holds(col, kinds[kind], [as_dict(p) for p in F], dY, i, "ab")
        assert bool(check_match(f, m)) == want
    done(5, t0, "(1000 pairs)")


PARITY = Coloring.from_rule(AB, Rule.make("size_mod"), 4)


def carlson_suite(threads):
    """Parity at N=4 plus 500 random colorings under the growth policy; returns (bytes, exhausted)."""
    out = [carlson_certificate(PARITY, carlson_search(PARITY, 2, window=4, threads=threads))]
    rng = np.random.default_rng(6)
    exhausted = 0
    colorings = [PARITY]
    for _ in range(500):
        f = Coloring.random(AB, 2, 8, rng)
        try:
            cert = carlson_search_growing(f, 2, cap=8, threads=threads)
        except Exhausted:
            exhausted += 1
            out.append(None)
            colorings.append(f)
            continue
        out.append(carlson_certificate(f, cert))
        colorings.append(f)
    return colorings, out, exhausted


def test_criterion_6_carlson():
    """criterion 6: Carlson certificates at desk scale"""
    t0 = time.perf_counter()
    colorings, certs, exhausted = carlson_suite(None)
    assert certs[0] is not None and len(certs[0].payload["blocks"]) == 2
    passed = 0
    for f, cert in zip(colorings, certs):
        if cert is None:
            continue
        rep = verify(CertificateFile.from_json(cert.to_json()), f)
        assert rep, rep.render()
        passed += 1
    assert passed == len(certs) - exhausted
    done(6, t0, f"({passed} certified, {exhausted} exhausted, pass rate 100%)")


SUITE = {
    "constant": Coloring.from_rule(AB, Rule.make("constant"), 4),
    "parity": PARITY,
    "letters": Coloring.from_rule(AB, Rule.make("letter_count_mod"), 4),
}
ORACLE_COLORS = {
    "constant": lambda d: 0,
    "parity": lambda d: len(d) % 2,
    "letters": lambda d: list(d.values()).count("a") % 2,
}


def test_criterion_7_dynamics_hierarchy():
    """criterion 7: recurrence/proximality hierarchy, strengthening and extraction"""
    t0 = time.perf_counter()
    for name, f in SUITE.items():
        col = ORACLE_COLORS[name]
        for ell in range(3):
            bound = ell + 4
            base = O.factor(col, "ab", ell, {})
            plain = [p for p in O.words_past("ab", ell, bound, star=True)
                     if all(O.factor(col, "ab", ell, O.inst(p, a)) == base for a in "ab")]
            assert plain, (name, ell)
            for d in plain:
                p = from_dict(d)
                assert recurrence_holds(f, ell, p, PLAIN)
                for q in weaken_recurrence(p, AB):
                    assert recurrence_holds(f, ell, q, WEAK)
                    assert O.factor(col, "ab", ell, as_dict(q)) == base
        sched = recurrence_schedule(f, 3, 8)
        cert = schedule_certificate(f, sched, "recurrence")
        assert extract_from_recurrent(f, sched, 3).color == f(EMPTY)
        assert verify(CertificateFile.from_json(cert.to_json()), f)
    # proximal pairs: each suite member with itself, and parity with a copy changed only at the empty word
    bumped = Coloring.from_function(AB, lambda p: 1 if p.is_empty else len(p.dom) % 2, 4)
    pairs = [(f, f, ORACLE_COLORS[n], ORACLE_COLORS[n]) for n, f in SUITE.items()]
    pairs.append((bumped, PARITY, lambda d: 1 if not d else len(d) % 2, ORACLE_COLORS["parity"]))
    for f, g, cf, cg in pairs:
        for ell in (0, 1):
            w = strengthen_proximality(f, g, ell, 3, 8)
            assert proximality_holds(f, g, ell, w, STRONG)
            g_base = O.factor(cg, "ab", ell, {})
            for a in "ab":
                wa = O.inst(as_dict(w), a)
                Sf, Sg = O.factor(cf, "ab", ell, wa), O.factor(cg, "ab", ell, wa)
                assert Sf == Sg and Sg == g_base and Sf == g_base
        sched = proximality_schedule(f, g, 3, 8)
        fc, gc = extract_from_proximal(f, g, sched, 3)
        assert fc.color == gc.color == g(EMPTY)
        cert = schedule_certificate(f, sched, "proximality", twin=g)
        assert cert.payload["color"] == g(EMPTY)
        assert verify(CertificateFile.from_json(cert.to_json()), f, g)
        if f(EMPTY) != g(EMPTY):
            data = cert.to_json()
            data["payload"]["color"] = f(EMPTY)
            assert not verify(CertificateFile.from_json(data), f, g)
    done(7, t0)


def test_criterion_8_flim():
    """criterion 8: finite limits of shifts and the weak-proximality construction"""
    t0 = time.perf_counter()
    X = WeakBlockSequence(make_word([(2 * i, "a"), (2 * i + 1, "b" if i % 3 else "a")]) for i in range(8))
    res = flim_search(PARITY, X, 8)
    for ell in range(5):
        ok, bad = flim_check(PARITY, res.g, res.Y, ell, res.offsets[ell])
        assert ok, (ell, bad)
        p = weak_proximality_from_flim(PARITY, res, ell)
        assert proximality_holds(PARITY, res.g, ell, p, WEAK)
        assert check_proximality(PARITY, res.g, ell, p.max_pos + 1, WEAK)
    rng = random.Random(8)
    fired = exhausted = 0
    for f in SUITE.values():
        for trial in range(8):
            blocks, pos = [], 0
            for _ in range(8):
                pos += rng.randrange(2)
                if trial < 4:
                    # even length and an even number of a's: every suite rule sees an even block
                    body = rng.choice(["aa", "bb", "abba", "baab", "aabb", "bbbb"])
                else:
                    body = "".join(rng.choice("ab") for _ in range(rng.randint(1, 2)))
                blocks.append(make_word([(pos + i, c) for i, c in enumerate(body)]))
                pos += len(body)
            try:
                flim_search(f, WeakBlockSequence(blocks), 3)
            except AmbiguousLimit:
                fired += 1
            except Exhausted:
                assert trial >= 4, "even blocks must always admit a limit"
                exhausted += 1
    assert fired == 0
    done(8, t0, f"(no ambiguous limits; {exhausted} generic sequences too short)")


def test_criterion_9_determinism():
    """criterion 9: certificates are byte-identical with 1, 2 and 8 workers"""
    t0 = time.perf_counter()
    hj_bytes, carlson_bytes = [], []
    for threads in (1, 2, 8):
        hj_bytes.append([c.dumps() for _, c in hj_suite(threads)])
        _, certs, exhausted = carlson_suite(threads)
        carlson_bytes.append(([c.dumps() if c else None for c in certs], exhausted))
    assert hj_bytes[0] == hj_bytes[1] == hj_bytes[2]
    assert carlson_bytes[0] == carlson_bytes[1] == carlson_bytes[2]
    done(9, t0)
