import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import word_matrix
from levycert.errors import ParseError
from levycert.freegroup import (
    FreeWord,
    TwistWord,
    apply_generator,
    apply_twist_word,
    as_conjugate_of_generator,
    conjugate,
    cyclically_reduce,
    decompose_conjugating,
    format_twist,
    format_word,
    is_inner,
    outer_equal,
    parse_twist,
    parse_word,
    reduce,
    substitute,
)
from strategies import RANK, letters, twists, words

W = parse_word


# ---------------------------------------------------------------- examples

def test_cancellation_to_identity():
    assert reduce([1, -1]).is_identity()
    assert reduce([(1, 1), (1, -1)]) == FreeWord()


def test_partial_cancellation():
    assert W("s2^-1*s1^-1") * W("s1*s2*s3") == W("s3")


def test_reduce_rejects_out_of_range():
    with pytest.raises(ValueError):
        reduce([1, 5], rank=4)
    with pytest.raises(ValueError):
        reduce([(1, 2)])


def test_conjugate_convention():
    assert conjugate(W("s1"), W("s2")) == W("s2^-1*s1*s2")
    assert conjugate(W("s1*s3"), FreeWord()) == W("s1*s3")


def test_apply_generator_examples():
    assert apply_generator(1, 2, 1, W("s1")) == W("s2^-1*s1*s2")
    assert apply_generator(1, 2, 1, W("s3")) == W("s3")
    assert apply_generator(1, 2, -1, W("s1")) == W("s2*s1*s2^-1")
    with pytest.raises(ValueError):
        apply_generator(2, 2, 1, W("s2"))


def test_twist_word_leftmost_factor_acts_first():
    # a(1,2)*a(2,1): a(1,2) acts first on s1, then a(2,1) rewrites s2 inside it
    t = parse_twist("a(1,2)*a(2,1)", 3)
    assert apply_twist_word(t, W("s1")) == W("s1^-1*s2^-1*s1*s2*s1")
    t = parse_twist("a(2,1)*a(1,2)", 3)
    assert apply_twist_word(t, W("s1")) == W("s2^-1*s1*s2")
    assert apply_twist_word(t, W("s2")) == W("s2^-1*s1^-1*s2*s1*s2")


def test_identity_twist():
    assert apply_twist_word(TwistWord.identity(3), W("s1*s3^-1")) == W("s1*s3^-1")


def test_product_over_column_is_conjugation():
    for n in (2, 3, 4, 5):
        t = TwistWord(tuple((i, 1, 1) for i in range(2, n + 1)), n)
        for k in range(1, n + 1):
            assert apply_twist_word(t, FreeWord.gen(k)) == conjugate(FreeWord.gen(k), W("s1"))
        assert outer_equal(t, TwistWord.identity(n), n)


def test_outer_equal_examples():
    a12 = TwistWord.gen(1, 2, 3)
    assert outer_equal(a12, a12, 3)
    assert not outer_equal(a12, TwistWord.identity(3), 3)


def test_a12_not_inner_by_search():
    # no conjugator of length <= 3 realises a(1,2) on rank 3
    from itertools import product
    imgs = TwistWord.gen(1, 2, 3).images()
    alphabet = [1, -1, 2, -2, 3, -3]
    for length in range(4):
        for v in product(alphabet, repeat=length):
            v = FreeWord(v)
            assert not all(conjugate(FreeWord.gen(k), v) == imgs[k - 1] for k in (1, 2, 3))


def test_twist_word_free_cancellation():
    t = TwistWord(((1, 2, 1), (1, 2, -1), (2, 3, 1)), 3)
    assert t.factors == ((2, 3, 1),)
    with pytest.raises(ValueError):
        TwistWord(((1, 1, 1),), 3)
    with pytest.raises(ValueError):
        TwistWord(((1, 4, 1),), 3)


def test_text_round_trips():
    assert format_word(W("s1*s2^-1*s3")) == "s1*s2^-1*s3"
    assert format_word(FreeWord()) == "1"
    t = parse_twist("a(2,1)*a(1,2)^-1", 3)
    assert format_twist(t) == "a(2,1)*a(1,2)^-1"
    assert format_twist(TwistWord.identity(2)) == "1"
    with pytest.raises(ParseError):
        parse_word("s1**")


def test_conjugate_of_generator_detection():
    k, c = as_conjugate_of_generator(W("s2^-1*s1^-1*s3*s1*s2"))
    assert k == 3 and c == W("s1*s2")
    assert as_conjugate_of_generator(W("s1*s2")) is None
    assert cyclically_reduce(W("s2^-1*s1*s2")) == W("s1")


def test_decompose_conjugating_recovers_word():
    t = parse_twist("a(3,2)*a(3,1)*a(2,1)*a(2,3)*a(1,3)*a(1,2)", 3)
    imgs = t.images()
    conj = [as_conjugate_of_generator(w)[1] for w in imgs]
    got = decompose_conjugating(conj, 3)
    assert got.images() == imgs


# -------------------------------------------------------------- properties

@given(letters())
def test_reduce_matches_matrix_oracle(raw):
    assert word_matrix(reduce(raw)) == word_matrix(raw)


@given(letters())
def test_reduce_idempotent(raw):
    w = reduce(raw)
    assert reduce(w) == w
    assert all(a != -b for a, b in zip(w, w[1:]))


@given(words())
def test_word_times_inverse(w):
    assert len(w * w.inverse()) == 0


@given(words(), words(), words())
def test_conjugation_composes(w, u, v):
    assert conjugate(conjugate(w, u), v) == conjugate(w, u * v)


@given(words(), words(), words())
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(st.integers(1, RANK), st.integers(1, RANK), words())
def test_generator_inverse(i, j, w):
    if i == j:
        return
    assert apply_generator(i, j, -1, apply_generator(i, j, 1, w)) == w


@given(twists(), twists(), words())
def test_twist_action_is_homomorphism(phi, psi, w):
    assert apply_twist_word(phi * psi, w) == apply_twist_word(psi, apply_twist_word(phi, w))


@given(twists(), words())
def test_twist_matches_stepwise_generators(phi, w):
    # oracle: plug the images into one another one factor at a time
    out = w
    for i, j, e in phi.factors:
        out = apply_generator(i, j, e, out)
    images = [FreeWord.gen(k) for k in range(1, RANK + 1)]
    for i, j, e in phi.factors:
        images = [apply_generator(i, j, e, x) for x in images]
    assert apply_twist_word(phi, w) == out
    assert list(phi.images()) == images


@given(st.permutations(range(1, RANK + 1)), words())
def test_commuting_generators(p, w):
    i, k, j, l = p
    def both(x, y):
        return apply_twist_word(TwistWord((x, y), RANK), w)
    assert both((i, j, 1), (k, j, 1)) == both((k, j, 1), (i, j, 1))
    assert both((i, j, 1), (k, l, 1)) == both((k, l, 1), (i, j, 1))


@given(twists(max_size=4), twists(max_size=4), twists(max_size=4))
def test_outer_equal_equivalence(a, b, c):
    assert outer_equal(a, a)
    assert outer_equal(a, b) == outer_equal(b, a)
    if outer_equal(a, b) and outer_equal(b, c):
        assert outer_equal(a, c)


@given(words(max_size=8))
def test_inner_detection_recovers_conjugator(v):
    imgs = tuple(conjugate(FreeWord.gen(k), v) for k in range(1, RANK + 1))
    c = is_inner(imgs)
    assert c is not None
    assert all(conjugate(FreeWord.gen(k), c) == imgs[k - 1] for k in range(1, RANK + 1))


@given(twists(), words(max_size=5))
def test_outer_class_ignores_inner_factor(phi, v):
    # phi followed by conjugation by v is still outer-equal to phi
    imgs = tuple(conjugate(x, v) for x in phi.images())
    back = phi.inverse().images()
    theta = tuple(substitute(x, back) for x in imgs)
    assert is_inner(theta) is not None
