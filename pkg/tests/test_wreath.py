from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import grigorchuk
from levycert.freegroup import FreeWord, parse_word
from levycert.wreath import (
    Permutation,
    WreathRecursion,
    act_on_tree_word,
    resolve,
    wreath_conjugate,
    wreath_invert,
    wreath_multiply,
)
from strategies import perms, recursions, words

W = parse_word
ONE = FreeWord()


def rec(perm, *rs):
    return WreathRecursion(Permutation(perm), tuple(W(r) if isinstance(r, str) else r for r in rs))


# ---------------------------------------------------------------- examples

def test_multiply_grigorchuk_b_d():
    g = grigorchuk()
    b, d = g.recursions[1], g.recursions[3]
    # names a,b,c,d are s1..s4
    assert wreath_multiply(b, d) == rec((0, 1), "s1", "s3*s2")


def test_swap_squares_to_identity():
    a = rec((1, 0), "1", "1")
    assert wreath_multiply(a, a).is_identity()


def test_identity_is_neutral():
    x = rec((1, 0), "s1*s2", "s3")
    assert wreath_multiply(WreathRecursion.identity(2), x) == x
    assert wreath_multiply(x, WreathRecursion.identity(2)) == x


def test_multiply_rejects_mismatched_degree():
    with pytest.raises(ValueError):
        wreath_multiply(WreathRecursion.identity(2), WreathRecursion.identity(3))


def test_invert_examples():
    a = rec((1, 0), "1", "1")
    assert wreath_invert(a) == a
    x = rec((0, 1), "s1*s2", "1")
    assert wreath_invert(x) == rec((0, 1), "s2^-1*s1^-1", "1")
    assert wreath_multiply(x, wreath_invert(x)).is_identity()
    assert wreath_invert(WreathRecursion.identity(3)).is_identity()


def test_conjugate_f_first_state():
    env = {1: rec((1, 0), "s2^-1*s1^-1", "s1*s2*s3"), 2: rec((0, 1), "s1", "1"),
           3: rec((0, 1), "s2", "1")}
    assert resolve(W("s2*s3"), env) == rec((0, 1), "s1*s2", "1")
    assert wreath_conjugate(env[1], W("s2*s3"), env) == rec((1, 0), "1", "s3")
    assert wreath_conjugate(env[2], W("s2*s3"), env) == rec((0, 1), "s2^-1*s1*s2", "1")
    assert wreath_conjugate(env[1], ONE, env) == env[1]


def test_conjugate_unresolved_state():
    with pytest.raises(KeyError):
        wreath_conjugate(WreathRecursion.identity(2), W("s9"), {1: WreathRecursion.identity(2)})


def test_tree_action_grigorchuk():
    env = grigorchuk().env()
    assert act_on_tree_word(1, env, (0, 1, 1)) == (1, 1, 1)
    assert act_on_tree_word(2, env, (0, 0)) == (0, 1)
    assert act_on_tree_word(ONE, env, (1, 0, 1)) == (1, 0, 1)


def test_permutation_helpers():
    p = Permutation.from_cycles([(1, 2), (3, 4)], 4, base=1)
    assert p == (1, 0, 3, 2)
    assert str(Permutation((1, 2, 0))) == "(012)"
    assert p.compose(p).is_identity()
    with pytest.raises(ValueError):
        Permutation((0, 0))


# -------------------------------------------------------------- properties

ENV_D = 2


def _env(rs):
    return {k: r for k, r in enumerate(rs, start=1)}


def _tree_words(d, depth):
    for length in range(depth + 1):
        yield from product(range(d), repeat=length)


@given(st.lists(recursions(ENV_D, rank=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(1, 3).flatmap(lambda k: st.sampled_from((k, -k))),
                min_size=3, max_size=3))
def test_associativity_on_tree(rs, picks):
    env = _env(rs)
    a, b, c = (resolve(FreeWord((p,)), env) for p in picks)
    left = wreath_multiply(wreath_multiply(a, b), c)
    right = wreath_multiply(a, wreath_multiply(b, c))
    assert left == right
    for w in _tree_words(ENV_D, 5):
        assert act_on_tree_word(left, env, w) == act_on_tree_word(right, env, w)


@given(st.lists(recursions(3, rank=3, max_size=3), min_size=3, max_size=3), words(3, 4),
       st.lists(st.integers(0, 2), max_size=5), st.lists(st.integers(0, 2), max_size=5))
def test_tree_automorphism(rs, w, u, v):
    env = _env(rs)
    img_u = act_on_tree_word(w, env, u)
    img_uv = act_on_tree_word(w, env, tuple(u) + tuple(v))
    assert len(img_uv) == len(u) + len(v)
    assert img_uv[:len(u)] == img_u


@given(st.lists(recursions(ENV_D, rank=3, max_size=3), min_size=3, max_size=3),
       words(3, 4), words(3, 4))
def test_product_acts_as_composition(rs, u, v):
    env = _env(rs)
    for t in _tree_words(ENV_D, 4):
        assert act_on_tree_word(u * v, env, t) == \
            act_on_tree_word(u, env, act_on_tree_word(v, env, t))


@given(recursions(3))
def test_invert_is_two_sided(x):
    assert wreath_multiply(x, wreath_invert(x)).is_identity()
    assert wreath_multiply(wreath_invert(x), x).is_identity()


@given(st.lists(recursions(ENV_D, rank=3, max_size=3), min_size=3, max_size=3),
       words(3, 3), words(3, 3))
def test_conjugation_composes(rs, u, v):
    env = _env(rs)
    a = env[1]
    assert wreath_conjugate(a, u * v, env) == \
        wreath_conjugate(wreath_conjugate(a, u, env), v, env)


@given(perms(4), perms(4))
def test_permutation_group_law(p, q):
    assert p.compose(q).compose(q.inverse()) == p
    assert p.compose(p.inverse()).is_identity()
