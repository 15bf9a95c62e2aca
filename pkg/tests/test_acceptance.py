"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``python tests/test_acceptance.py`` for the summary alone.
"""

import random
import time

import pytest

from builders import (
    degree3_period9,
    grigorchuk,
    quadratic_scheme,
    random_word,
    raw_f,
    raw_g,
    word_matrix,
)
from levycert.automata import check_dendroid_automaton, is_dendroid_sequence
from levycert.bimodule import (
    BimoduleElement,
    canonical_bit_patterns,
    elements_equal,
    extract_twist,
    left_act_generator,
    left_act_word,
    right_twist,
)
from levycert.corpus import generate_corpus
from levycert.errors import NotApplicable
from levycert.freegroup import (
    FreeWord,
    TwistWord,
    apply_generator,
    apply_twist_word,
    conjugate,
    format_twist,
    format_word,
    reduce,
)
from levycert.obstruction import (
    build_m0,
    construct_levy_length_l,
    construct_obstructed,
    gamma_generator,
    hyperedge_formula,
    precompose_power,
    verify_levy_certificate,
)
from levycert.wreath import (
    Permutation,
    WreathRecursion,
    act_on_tree_word,
    resolve,
    wreath_conjugate,
    wreath_invert,
    wreath_multiply,
)


def _report(number, title, ok, detail, seconds):
    status = "PASS" if ok else "FAIL"
    return f"criterion {number:>2}: {status}  {title} ({detail}; {seconds:.1f}s)"


# ------------------------------------------------------------------ checks

def c1_dendroid_examples():
    cyc = lambda cs: Permutation.from_cycles(cs, 4, base=1)
    got = [is_dendroid_sequence([cyc([(1, 2, 3, 4)]), cyc([(1, 2), (3, 4)])]),
           is_dendroid_sequence([cyc([(1, 2, 3)]), cyc([(1, 3, 4)])]),
           is_dendroid_sequence([cyc([(1, 2), (3, 4)]), cyc([(1, 4)])])]
    return got == [False, False, True], f"verdicts {got}"


def c2_grigorchuk_witness():
    report = check_dendroid_automaton(grigorchuk())
    hits = [v for v in report.violations if v.condition == 2 and v.state == "a"]
    ok = not report.ok and bool(hits) and len(hits[0].witnesses) == 2
    return ok, str(hits[0]) if hits else "no condition-2 witness"


def c3_twist_extraction():
    f = extract_twist(raw_f())
    g = extract_twist(raw_g())
    kf = [str(r) for r in f.kneading.recursions]
    ok = (format_word(f.conjugator) == "s2*s3" and kf[0] == "(01)(1, s3)"
          and format_twist(f.twist) == "a(2,1)*a(1,2)" and format_twist(g.twist) == "a(2,3)")
    return ok, f"f: {format_twist(f.twist)} via {format_word(f.conjugator)}; g: {format_twist(g.twist)}"


def c4_rules_vs_direct():
    total = bad = 0
    for k in range(1, 4):
        for n in range(2, 5):
            for bits in canonical_bit_patterns(k, n):
                m = BimoduleElement.quadratic(bits)
                for i in range(1, k + n + 1):
                    for j in range(1, k + n + 1):
                        if i == j:
                            continue
                        for e in (1, -1):
                            total += 1
                            r = left_act_generator((i, j, e), m, "rules")
                            d = left_act_generator((i, j, e), m, "direct")
                            bad += not elements_equal(r, d)
    return bad == 0 and total > 0, f"{total} cases, {bad} mismatches"


def c5_cycling():
    total = bad = 0
    for k in range(1, 4):
        for n in range(2, 5):
            g = [gamma_generator(k, n, i) for i in range(1, n + 1)]
            for bits in canonical_bit_patterns(k, n):
                if any(bits.per):
                    continue
                m = BimoduleElement.quadratic(bits)
                for i in range(1, n + 1):
                    total += 1
                    bad += not elements_equal(left_act_word(g[i - 1], m),
                                              right_twist(m, g[i - 2]))
    return bad == 0 and total > 0, f"{total} identities, {bad} failures"


_CORPUS = {}


def corpus():
    if not _CORPUS:
        _CORPUS["v"] = generate_corpus(seed=0)
    return _CORPUS["v"]


def c6_corpus():
    by_case, hyper = corpus()
    sizes = {c: len(v) for c, v in by_case.items()}
    failed = 0
    for schemes in by_case.values():
        for s in schemes:
            try:
                failed += not construct_obstructed(s).verified
            except Exception:
                failed += 1
    refused = 0
    for s in hyper:
        try:
            construct_obstructed(s)
        except NotApplicable:
            refused += 1
    ok = min(sizes.values()) >= 100 and failed == 0 and refused == len(hyper)
    return ok, f"per case {sizes}, {failed} failures, {refused}/{len(hyper)} hyperbolic refused"


def c7_length_l():
    c4 = construct_levy_length_l(quadratic_scheme(1, 4), {"p2", "p3", "p4", "p5"}, 2)
    c9 = construct_levy_length_l(degree3_period9(), {f"w{i}" for i in range(1, 10)}, 3)
    t4 = [format_twist(g) for g in c4.curves]
    t9 = format_twist(c9.curves[0])
    ok = (t4 == ["a(2,1)*a(1,2)", "a(4,3)*a(3,4)"]
          and t9 == "a(3,2)*a(3,1)*a(2,1)*a(2,3)*a(1,3)*a(1,2)"
          and verify_levy_certificate(c4)[0] and verify_levy_certificate(c9)[0]
          and len(c4.checks) == 2 and len(c9.checks) == 3)
    return ok, f"n=4: {t4}; n=9: gamma_0 = {t9}"


def c8_precompose():
    cert = construct_obstructed(quadratic_scheme(1, 3))
    got = {p: verify_levy_certificate(precompose_power(cert, p))[0] for p in (-2, -1, 0, 1, 2)}
    return all(got.values()), f"re-verified {got}"


def c9_tree_formula():
    by_case, _ = corpus()
    seen, bad = set(), 0
    for schemes in by_case.values():
        for s in schemes:
            if s in seen:
                continue
            seen.add(s)
            cert = construct_obstructed(s)
            aut, _ = build_m0(s, set(cert.plan.omega))
            total, want, connected = hyperedge_formula(aut)
            bad += not (total == want and connected and is_dendroid_sequence(aut.perms()))
    return bad == 0, f"{len(seen)} automata, {bad} failures"


def free_group_laws(cases, rng):
    fg_bad = 0
    for _ in range(cases):
        rank = rng.randint(1, 4)
        raw = [rng.choice((1, -1)) * rng.randint(1, rank) for _ in range(rng.randint(0, 12))]
        w = reduce(raw)
        u, v = random_word(rng, rank, 4), random_word(rng, rank, 4)
        ok = (reduce(w) == w and word_matrix(w) == word_matrix(raw)
              and (w * w.inverse()).is_identity()
              and conjugate(conjugate(w, u), v) == conjugate(w, u * v))
        if rank >= 2:
            i, j = rng.sample(range(1, rank + 1), 2)
            ok = ok and apply_generator(i, j, -1, apply_generator(i, j, 1, w)) == w
            fs = [tuple(rng.sample(range(1, rank + 1), 2)) + (rng.choice((1, -1)),)
                  for _ in range(rng.randint(0, 4))]
            gs = [tuple(rng.sample(range(1, rank + 1), 2)) + (rng.choice((1, -1)),)
                  for _ in range(rng.randint(0, 4))]
            phi, psi = TwistWord(tuple(fs), rank), TwistWord(tuple(gs), rank)
            ok = ok and apply_twist_word(phi * psi, w) == \
                apply_twist_word(psi, apply_twist_word(phi, w))
        fg_bad += not ok
    return fg_bad


def wreath_laws(cases, rng):
    wr_bad = 0
    for _ in range(cases):
        d = rng.randint(2, 3)
        env = {}
        for k in (1, 2, 3):
            p = list(range(d))
            rng.shuffle(p)
            env[k] = WreathRecursion(Permutation(p),
                                     tuple(random_word(rng, 3, 2) for _ in range(d)))
        a, b, c = (resolve(FreeWord((rng.choice((1, -1)) * rng.randint(1, 3),)), env)
                   for _ in range(3))
        x, y = random_word(rng, 3, 3), random_word(rng, 3, 3)
        t = tuple(rng.randrange(d) for _ in range(5))
        ab_c = wreath_multiply(wreath_multiply(a, b), c)
        a_bc = wreath_multiply(a, wreath_multiply(b, c))
        img = act_on_tree_word(x, env, t)
        ok = (ab_c == a_bc
              and act_on_tree_word(ab_c, env, t) == act_on_tree_word(a_bc, env, t)
              and wreath_multiply(a, wreath_invert(a)).is_identity()
              and len(img) == len(t)
              and act_on_tree_word(x, env, t[:3]) == img[:3]
              and wreath_conjugate(a, x * y, env) ==
              wreath_conjugate(wreath_conjugate(a, x, env), y, env))
        wr_bad += not ok
    return wr_bad


def c10_group_laws(cases=10_000):
    t0 = time.perf_counter()
    fg_bad = free_group_laws(cases, random.Random(2024))
    t1 = time.perf_counter()
    wr_bad = wreath_laws(cases, random.Random(2025))
    t2 = time.perf_counter()
    return fg_bad == wr_bad == 0, (
        f"free group {cases} cases/{fg_bad} bad in {t1 - t0:.1f}s, "
        f"wreath {cases} cases/{wr_bad} bad in {t2 - t1:.1f}s")


CRITERIA = [
    (1, "dendroid classification of three permutation pairs", c1_dendroid_examples),
    (2, "Grigorchuk automaton condition-2 witness", c2_grigorchuk_witness),
    (3, "twist extraction for f and g", c3_twist_extraction),
    (4, "rule-based action equals direct computation", c4_rules_vs_direct),
    (5, "cycling identities for the gamma words", c5_cycling),
    (6, "corpus certificates and hyperbolic refusals", c6_corpus),
    (7, "length-l Levy cycles for n=4,l=2 and n=9,l=3", c7_length_l),
    (8, "twist pre-composition powers re-verify", c8_precompose),
    (9, "hypergraph tree formula across the corpus", c9_tree_formula),
    (10, "randomized group-law suites", c10_group_laws),
]


def evaluate(number, title, check):
    t = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:  # report, then fail below
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, _report(number, title, ok, detail, time.perf_counter() - t)


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    ok, line = evaluate(number, title, check)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
