"""Tests for the fundamental_group module."""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from bott_towers.bott_matrix import BottMatrix, enumerate_matrices, identity, parse_bott_matrix
from bott_towers.catalog import EXAMPLES
from bott_towers.exceptions import ConsistencyError, IndexRangeError
from bott_towers.fundamental_group import (
    APPENDIX_CASES,
    INLINE_CASE,
    GroupWord,
    H1Structure,
    abelianization_exponent_sums,
    abelianized_relation_matrix,
    appendix_conjugacy_suite,
    commutator_generator_indices,
    commutator_subgroup_generators,
    extended_conjugacy_suite,
    free_reduce,
    h1,
    h1_closed_form,
    h1_from_snf,
    parse_word,
    predicates,
    presentation,
    relator,
    smith_normal_form,
    twisted_relator_word,
)


@pytest.fixture
def klein():
    return parse_bott_matrix("2\n11\n01")


def test_presentation_of_torus():
    p = presentation(identity(2))
    assert p.generators == (3, 4)
    assert [r.render() for r in p.relators] == ["a3 a4 a3^-1 a4^-1"]
    assert p.render() == "gen: a3 a4 ; rel: a3 a4 a3^-1 a4^-1"


def test_presentation_of_klein_bottle(klein):
    assert presentation(klein).render() == "gen: a3 a4 ; rel: a3 a4^-1 a3^-1 a4^-1"


def test_presentation_order_and_twist():
    matrix = BottMatrix.from_entries(3, {(2, 3): 1})
    p = presentation(matrix)
    assert p.pairs == ((4, 5), (4, 6), (5, 6))
    assert [r.render() for r in p.relators] == [
        "a4 a5 a4^-1 a5^-1",
        "a4 a6 a4^-1 a6^-1",
        "a5 a6^-1 a5^-1 a6^-1",
    ]


def test_presentation_of_circle_has_no_relators():
    assert presentation(identity(1)).render() == "gen: a2 ; rel:"


def test_relator_range(klein):
    with pytest.raises(IndexRangeError):
        relator(klein, 2, 3)
    with pytest.raises(IndexRangeError):
        relator(klein, 4, 3)


def test_word_helpers():
    word = parse_word("a3 a4^-1")
    assert word.letters == ((3, 1), (4, -1))
    assert word.inverse().render() == "a4 a3^-1"
    assert parse_word("a3^2").letters == ((3, 1), (3, 1))
    assert parse_word("1") == GroupWord()
    assert GroupWord().render() == "1"
    assert word.power(-1) == word.inverse()
    assert word.exponent_sum(4) == -1
    with pytest.raises(ValueError):
        parse_word("b3")
    with pytest.raises(ValueError):
        GroupWord(((3, 2),))


def test_free_reduce_examples():
    assert free_reduce(parse_word("a3 a3^-1")) == GroupWord()
    assert free_reduce(parse_word("a3 a4 a4^-1 a3")).letters == ((3, 1), (3, 1))
    reduced = parse_word("a3 a4 a3^-1")
    assert free_reduce(reduced) == reduced


def test_free_reduce_properties_on_random_words():
    rng = np.random.default_rng(20170321)
    for _ in range(2000):
        length = int(rng.integers(0, 16))
        letters = tuple((int(g), int(e)) for g, e in zip(rng.integers(1, 4, size=length), rng.choice([-1, 1], size=length)))
        word = GroupWord(letters)
        reduced = free_reduce(word)
        assert free_reduce(reduced) == reduced
        assert len(reduced) <= len(word)
        assert free_reduce(word * word.inverse()) == GroupWord()


def test_twisted_words_match_displayed_cases():
    for case in APPENDIX_CASES + (INLINE_CASE,):
        derived = twisted_relator_word(3, 4, case.eps[0], case.eps[1], case.c)
        assert case.left_side(3, 4) == derived


def test_case_one_is_the_relator_verbatim():
    case = APPENDIX_CASES[0]
    assert case.right_side(3, 4) == parse_word("a3 a4 a3^-1 a4^-1")


def test_appendix_suite_passes_for_small_towers():
    for n in range(2, 5):
        for matrix in enumerate_matrices(n):
            verdicts = appendix_conjugacy_suite(matrix)
            assert len(verdicts) == 7 * n * (n - 1) // 2
            assert all(v.passed for v in verdicts)


def test_appendix_case_applicability(klein):
    verdicts = appendix_conjugacy_suite(klein)
    assert [v.case for v in verdicts if v.applies] == [5, 6, 7]


def test_extended_suite_reports_inline_case_separately(klein):
    suite = extended_conjugacy_suite(klein)
    assert len(suite['appendix']) == 7
    assert [v.case for v in suite['inline']] == [8]
    assert suite['inline'][0].passed


def test_broken_conjugator_is_detected():
    case = APPENDIX_CASES[1]
    wrong = type(case)(case.number, case.c, case.eps, case.displayed, case.conjugator, -case.exponent)
    assert free_reduce(wrong.left_side(3, 4)) != free_reduce(wrong.right_side(3, 4))


def test_abelianized_relation_matrix(klein):
    assert not abelianized_relation_matrix(identity(3)).any()
    assert abelianized_relation_matrix(klein).tolist() == [[0, 2]]
    matrix = BottMatrix.from_entries(3, {(1, 2): 1, (1, 3): 1})
    assert abelianized_relation_matrix(matrix).tolist() == [[0, 2, 0], [0, 0, 2], [0, 0, 0]]
    assert abelianized_relation_matrix(identity(1)).shape == (0, 1)


def test_exponent_sums_range():
    assert abelianization_exponent_sums(parse_word("a3 a4^-1 a3^-1 a4^-1"), 2) == (0, -2)
    with pytest.raises(IndexRangeError):
        abelianization_exponent_sums(parse_word("a1"), 2)


def _check_snf(M):
    snf = smith_normal_form(M)
    M = np.asarray(M, dtype=object)
    D = snf.left.dot(M).dot(snf.right)
    assert (D == snf.normal).all()
    for i in range(D.shape[0]):
        for j in range(D.shape[1]):
            if i != j:
                assert D[i, j] == 0
    nonzero = [d for d in snf.diagonal if d != 0]
    assert snf.rank == len(nonzero)
    assert all(d > 0 for d in snf.diagonal if d != 0)
    assert all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))
    assert snf.diagonal[len(nonzero):] == (0,) * (len(snf.diagonal) - len(nonzero))
    for T in (snf.left, snf.right):
        if T.shape[0]:
            assert round(abs(np.linalg.det(T.astype(float)))) == 1
    return snf


def test_smith_normal_form_small_cases():
    assert _check_snf(np.zeros((2, 3), dtype=int)).diagonal == (0, 0)
    assert _check_snf([[0, 2]]).diagonal == (2,)
    assert _check_snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal == (2, 6, 12)


def test_smith_normal_form_is_invariant_under_unimodular_shuffles():
    rng = np.random.default_rng(7)
    base = np.diag([2, 2])
    for _ in range(50):
        U = np.eye(2, dtype=int)
        for _ in range(4):
            i, j = rng.permutation(2)
            U[i] += int(rng.integers(-2, 3)) * U[j]
        assert _check_snf(U.dot(base)).diagonal == (2, 2)


def test_smith_normal_form_random_matrices():
    rng = np.random.default_rng(11)
    for _ in range(100):
        rows, cols = rng.integers(1, 5, size=2)
        _check_snf(rng.integers(-6, 7, size=(rows, cols)))


def test_h1_examples(klein):
    assert h1(identity(4)) == H1Structure(4, 0)
    assert h1(klein).render() == "Z^1 + (Z/2)^1"
    assert h1(BottMatrix.from_entries(3, {(1, 2): 1, (1, 3): 1})) == H1Structure(1, 2)
    assert h1(EXAMPLES['spin-6'].matrix).render() == "Z^4 + (Z/2)^2"


def test_h1_closed_form_agrees_with_smith_form():
    for n in range(1, 6):
        for matrix in enumerate_matrices(n):
            assert h1_closed_form(matrix) == h1_from_snf(matrix)


def test_h1_disagreement_is_a_consistency_error(klein, monkeypatch):
    monkeypatch.setattr('bott_towers.fundamental_group.h1_closed_form', lambda matrix: H1Structure(2, 0))
    with pytest.raises(ConsistencyError):
        h1(klein)


def test_predicates(klein):
    torus = predicates(identity(3))
    assert torus.abelian and torus.nilpotent
    assert torus.commutator_generator_indices == ()
    twisted = predicates(klein)
    assert not twisted.abelian
    assert not twisted.nilpotent
    assert twisted.solvable and twisted.torsion_free and twisted.aspherical
    assert predicates(EXAMPLES['spin-6'].matrix).commutator_generator_indices == (5, 6)


def test_commutator_subgroup_generators(klein):
    assert [w.render() for w in commutator_subgroup_generators(klein)] == ["a4 a4"]
    assert commutator_generator_indices(identity(2)) == ()


def test_abelian_iff_no_torsion():
    for n in range(1, 5):
        for matrix in enumerate_matrices(n):
            structure = h1(matrix)
            assert predicates(matrix).abelian == (structure.torsion2_rank == 0)
            assert structure.n == n
