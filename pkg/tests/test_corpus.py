import pytest

from levycert.automata import is_dendroid_sequence
from levycert.corpus import generate_corpus
from levycert.errors import NotApplicable
from levycert.obstruction import build_m0, construct_obstructed, hyperedge_formula
from levycert.scheme import classify_scheme, validate_scheme


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(seed=0)


def test_corpus_shape(corpus):
    by_case, hyper = corpus
    assert all(len(v) >= 100 for v in by_case.values())
    assert len(hyper) >= 100
    for s in [s for v in by_case.values() for s in v] + hyper:
        assert validate_scheme(s) == []
        assert s.degree <= 6 and len(s.finite(s.postcritical)) <= 10


def test_every_covered_scheme_certifies(corpus):
    by_case, _ = corpus
    for case, schemes in by_case.items():
        for s in schemes:
            assert case in classify_scheme(s).cases
            cert = construct_obstructed(s)
            assert cert.verified
            total, want, connected = hyperedge_formula(cert.element.kneading)
            assert total == want and connected
            assert is_dendroid_sequence(cert.element.kneading.perms())


def test_hyperbolic_schemes_refused(corpus):
    _, hyper = corpus
    for s in hyper:
        with pytest.raises(NotApplicable):
            construct_obstructed(s)


def test_seed_is_deterministic():
    a, _ = generate_corpus(seed=5, per_case=5, hyperbolic=5)
    b, _ = generate_corpus(seed=5, per_case=5, hyperbolic=5)
    assert a == b
