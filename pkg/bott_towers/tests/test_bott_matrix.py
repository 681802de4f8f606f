"""Tests for the bott_matrix module."""
import sys
from pathlib import Path

import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent.parent
sys.path.insert(0, str(project_root))

from bott_towers.bott_matrix import (
    BottMatrix,
    characteristic_data,
    check_enumeration_cap,
    column_has_upper_one,
    enumerate_matrices,
    enumeration_count,
    fan_vectors,
    identity,
    is_product_of_circles,
    leading_submatrix,
    matrix_from_index,
    matrix_from_rows,
    matrix_index,
    parse_bott_matrix,
    row_sum,
    serialize_bott_matrix,
    submatrix_pair,
    suffix_submatrix,
)
from bott_towers.exceptions import BottMatrixError, EnumerationCapError, IndexRangeError

SPIN_6 = "6\n100000\n010011\n001011\n000111\n000010\n000001"


@pytest.fixture
def klein():
    return parse_bott_matrix("2\n11\n01")


@pytest.fixture
def spin_6():
    return parse_bott_matrix(SPIN_6)


def test_parse_klein_bottle(klein):
    assert klein.n == 2
    assert klein.c(1, 2) == 1
    assert klein.rows() == [(1, 1), (0, 1)]


def test_parse_accepts_one_trailing_newline():
    assert parse_bott_matrix("2\n11\n01\n") == parse_bott_matrix("2\n11\n01")


def test_parse_rejects_two_trailing_newlines():
    with pytest.raises(BottMatrixError):
        parse_bott_matrix("2\n11\n01\n\n")


@pytest.mark.parametrize("text, row, column", [
    ("2\n11\n11", 2, 1),
    ("2\n01\n01", 1, 1),
    ("2\n12\n01", 1, 2),
    ("3\n100\n01\n001", 2, None),
])
def test_parse_errors_name_the_position(text, row, column):
    with pytest.raises(BottMatrixError) as excinfo:
        parse_bott_matrix(text)
    assert excinfo.value.row == row
    assert excinfo.value.column == column
    assert f"row {row}" in str(excinfo.value)


@pytest.mark.parametrize("text", ["", "0\n", "x\n1", "02\n11\n01", "3\n100\n010"])
def test_parse_rejects_malformed_header_or_row_count(text):
    with pytest.raises(BottMatrixError):
        parse_bott_matrix(text)


def test_serialize_is_canonical_text(spin_6):
    assert serialize_bott_matrix(spin_6) == SPIN_6
    assert str(spin_6) == SPIN_6


def test_parse_serialize_inverse_over_small_sizes():
    for n in range(1, 5):
        for matrix in enumerate_matrices(n):
            assert parse_bott_matrix(serialize_bott_matrix(matrix)) == matrix


def test_bits_must_be_binary():
    with pytest.raises(BottMatrixError):
        BottMatrix(2, (2,))
    with pytest.raises(BottMatrixError):
        BottMatrix(3, (0, 1))
    with pytest.raises(BottMatrixError):
        BottMatrix(0, ())


def test_entry_reads_the_full_matrix(klein):
    assert klein.entry(1, 1) == 1
    assert klein.entry(2, 1) == 0
    assert klein.entry(1, 2) == 1
    with pytest.raises(IndexRangeError):
        klein.entry(3, 1)
    with pytest.raises(IndexRangeError):
        klein.c(2, 1)


def test_from_entries_matches_rows():
    matrix = BottMatrix.from_entries(3, {(1, 2): 1, (1, 3): 1})
    assert matrix == matrix_from_rows([[1, 1, 1], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(IndexRangeError):
        BottMatrix.from_entries(3, {(2, 2): 1})


def test_from_upper_bits_reads_row_major():
    # c12, c13, c23
    assert BottMatrix.from_upper_bits(3, [0, 1, 1]) == BottMatrix.from_entries(3, {(1, 3): 1, (2, 3): 1})
    assert BottMatrix.from_upper_bits(1, []) == identity(1)
    with pytest.raises(BottMatrixError):
        BottMatrix.from_upper_bits(3, [0, 1])


def test_characteristic_data_reduces_fan_vectors(spin_6):
    data = characteristic_data(spin_6)
    fans = fan_vectors(spin_6)
    assert data.n == 6
    assert len(data.vectors) == 12
    for facet in range(1, 13):
        assert data.vector(facet) == tuple(x % 2 for x in fans[facet - 1])
    assert data.vector(8) == (0, 1, 0, 0, 1, 1)
    with pytest.raises(IndexRangeError):
        data.vector(13)


def test_fan_vectors_klein(klein):
    assert fan_vectors(klein) == ((1, 0), (0, 1), (-1, 1), (0, -1))


def test_row_sum_and_column_scan(spin_6):
    assert [row_sum(spin_6, i) for i in range(1, 6)] == [0, 0, 0, 0, 0]
    assert [q for q in range(1, 7) if column_has_upper_one(spin_6, q)] == [5, 6]
    with pytest.raises(IndexRangeError):
        row_sum(spin_6, 6)


def test_is_product_of_circles(klein):
    assert is_product_of_circles(identity(4))
    assert not is_product_of_circles(klein)


def test_submatrix_pair_keeps_two_rows(spin_6):
    pair = submatrix_pair(spin_6, 2, 3)
    assert serialize_bott_matrix(pair) == "6\n100000\n010011\n001011\n000100\n000010\n000001"
    with pytest.raises(IndexRangeError):
        submatrix_pair(spin_6, 3, 3)


def test_suffix_submatrix(spin_6):
    assert suffix_submatrix(spin_6, 0) is spin_6
    assert serialize_bott_matrix(suffix_submatrix(spin_6, 1)) == "5\n10011\n01011\n00111\n00010\n00001"
    assert suffix_submatrix(spin_6, 5).n == 1
    with pytest.raises(IndexRangeError):
        suffix_submatrix(spin_6, 6)


def test_suffix_submatrix_composes():
    for n in range(1, 6):
        for matrix in enumerate_matrices(n):
            for a in range(n):
                for b in range(n - a):
                    assert suffix_submatrix(suffix_submatrix(matrix, a), b) == suffix_submatrix(matrix, a + b)


def test_submatrix_pair_fixes_matrices_with_two_nonunit_rows():
    for n in range(2, 6):
        for matrix in enumerate_matrices(n):
            for j in range(1, n):
                for k in range(j + 1, n + 1):
                    pair = submatrix_pair(matrix, j, k)
                    others_are_unit = all(
                        not any(matrix.row(i)[i:]) for i in range(1, n + 1) if i not in (j, k)
                    )
                    assert (pair == matrix) == others_are_unit
                    assert submatrix_pair(pair, j, k) == pair


def test_leading_submatrix(spin_6):
    assert serialize_bott_matrix(leading_submatrix(spin_6, 2)) == "2\n10\n01"
    assert leading_submatrix(spin_6, 6) is spin_6
    with pytest.raises(IndexRangeError):
        leading_submatrix(spin_6, 0)


def test_enumeration_counts_and_order():
    assert [enumeration_count(n) for n in range(1, 6)] == [1, 2, 8, 64, 1024]
    matrices = list(enumerate_matrices(3))
    assert len(set(matrices)) == 8
    assert matrices[0] == identity(3)
    # c12 is the most significant bit
    assert matrices[4] == BottMatrix.from_entries(3, {(1, 2): 1})


def test_matrix_index_is_inverse_of_matrix_from_index():
    for index in range(enumeration_count(4)):
        assert matrix_index(matrix_from_index(4, index)) == index
    with pytest.raises(IndexRangeError):
        matrix_from_index(3, 8)


def test_enumeration_chunks_cover_the_range():
    whole = list(enumerate_matrices(4))
    chunks = list(enumerate_matrices(4, start=0, stop=10)) + list(enumerate_matrices(4, start=10))
    assert chunks == whole


def test_enumeration_cap():
    with pytest.raises(EnumerationCapError):
        list(enumerate_matrices(5, max_n=4))
    with pytest.raises(BottMatrixError):
        check_enumeration_cap(0)
    check_enumeration_cap(4, max_n=4)
