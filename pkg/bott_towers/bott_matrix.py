"""Bott matrices: the binary upper-triangular datum of a real Bott tower.

A Bott matrix of size n has unit diagonal, zeros below the diagonal and
arbitrary bits c(i, j) above it. Only the n(n-1)/2 strictly-upper bits are
stored, so an invalid diagonal cannot be represented. All indices in the
public API are 1-based.

Text format (canonical, no trailing newline)::

    2
    11
    01
"""
import logging
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from bott_towers.config import DEFAULT_MAX_N
from bott_towers.exceptions import BottMatrixError, EnumerationCapError, IndexRangeError

logger = logging.getLogger(__name__)

_DIMENSION_RE = re.compile(r'[1-9][0-9]*')


def _offset(n: int, i: int, j: int) -> int:
    """Position of c(i, j), 1 <= i < j <= n, in the row-major upper bit string."""
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


@dataclass(frozen=True)
class BottMatrix:
    """Immutable n x n Bott matrix.

    Attributes:
        n: Number of stages of the tower.
        upper: Strictly-upper bits in row-major order (c12, c13, ..., c1n, c23, ...).
    """
    n: int
    upper: Tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise BottMatrixError(f"matrix size must be a positive integer, got {self.n!r}")
        expected = self.n * (self.n - 1) // 2
        if len(self.upper) != expected:
            raise BottMatrixError(
                f"a {self.n}x{self.n} Bott matrix needs {expected} upper bits, got {len(self.upper)}"
            )
        for bit in self.upper:
            if bit not in (0, 1):
                raise BottMatrixError(f"upper entries must be 0 or 1, got {bit!r}")
        object.__setattr__(self, 'upper', tuple(int(b) for b in self.upper))

    @classmethod
    def from_upper_bits(cls, n: int, bits: Sequence[int]) -> 'BottMatrix':
        return cls(n, tuple(bits))

    @classmethod
    def from_entries(cls, n: int, entries: dict) -> 'BottMatrix':
        """Build a matrix from a mapping {(i, j): 1} of strictly-upper ones."""
        bits = [0] * (n * (n - 1) // 2)
        for (i, j), value in entries.items():
            if not 1 <= i < j <= n:
                raise IndexRangeError(f"({i}, {j}) is not a strictly-upper position of a {n}x{n} matrix")
            bits[_offset(n, i, j)] = int(value) & 1
        return cls(n, tuple(bits))

    def c(self, i: int, j: int) -> int:
        """Strictly-upper entry c(i, j) for 1 <= i < j <= n."""
        if not 1 <= i < j <= self.n:
            raise IndexRangeError(f"c({i}, {j}) is not a strictly-upper entry of a {self.n}x{self.n} matrix")
        return self.upper[_offset(self.n, i, j)]

    def entry(self, i: int, j: int) -> int:
        """Any entry of the full matrix, diagonal and sub-diagonal included."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexRangeError(f"({i}, {j}) is outside a {self.n}x{self.n} matrix")
        if i == j:
            return 1
        if i > j:
            return 0
        return self.upper[_offset(self.n, i, j)]

    def row(self, i: int) -> Tuple[int, ...]:
        """Full i-th row, diagonal included."""
        return tuple(self.entry(i, j) for j in range(1, self.n + 1))

    def rows(self) -> List[Tuple[int, ...]]:
        return [self.row(i) for i in range(1, self.n + 1)]

    @property
    def fingerprint(self) -> str:
        """Short identifier used to tag ring elements."""
        return f"{self.n}:{''.join(str(b) for b in self.upper)}"

    def to_text(self) -> str:
        return serialize_bott_matrix(self)

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class CharacteristicData:
    """Images of the 2n cube facets under the characteristic map, as Z2 vectors."""
    vectors: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.vectors) // 2

    def vector(self, facet: int) -> Tuple[int, ...]:
        """lambda(F_facet) for 1 <= facet <= 2n."""
        if not 1 <= facet <= len(self.vectors):
            raise IndexRangeError(f"facet index {facet} outside 1..{len(self.vectors)}")
        return self.vectors[facet - 1]


def identity(n: int) -> BottMatrix:
    """The Bott matrix of the n-fold product of circles."""
    return BottMatrix(n, (0,) * (n * (n - 1) // 2))


def matrix_from_rows(rows: Sequence[Sequence[int]]) -> BottMatrix:
    """Build a matrix from its full rows, enforcing the Bott shape.

    Raises:
        BottMatrixError: on a wrong row length, non-bit entry, non-unit diagonal
            or non-zero sub-diagonal entry.
    """
    n = len(rows)
    if n < 1:
        raise BottMatrixError("a Bott matrix needs at least one row")
    bits = []
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise BottMatrixError(f"row length must be {n}, got {len(row)}", row=i)
        for j, value in enumerate(row, start=1):
            if value not in (0, 1):
                raise BottMatrixError(f"entries must be 0 or 1, got {value!r}", row=i, column=j)
            if i == j and value != 1:
                raise BottMatrixError("diagonal entry must be 1", row=i, column=j)
            if i > j and value != 0:
                raise BottMatrixError("below-diagonal entry must be 0", row=i, column=j)
            if i < j:
                bits.append(int(value))
    return BottMatrix(n, tuple(bits))


def parse_bott_matrix(text: str) -> BottMatrix:
    """Parse the canonical matrix text.

    The first line is the decimal size n, followed by n lines of n characters
    from {0, 1}. A single trailing newline is tolerated.

    Args:
        text: Matrix text.

    Returns:
        BottMatrix: The parsed matrix.

    Raises:
        BottMatrixError: naming the offending row/column when the text is malformed.
    """
    if text.endswith('\n'):
        text = text[:-1]
    lines = text.split('\n')
    header = lines[0]
    if not _DIMENSION_RE.fullmatch(header):
        raise BottMatrixError(f"malformed dimension line {header!r}: expected a positive decimal integer")
    n = int(header)
    body = lines[1:]
    if len(body) != n:
        raise BottMatrixError(f"expected {n} matrix rows, got {len(body)}")

    rows = []
    for i, line in enumerate(body, start=1):
        if len(line) != n:
            raise BottMatrixError(f"row length must be {n}, got {len(line)}", row=i)
        row = []
        for j, char in enumerate(line, start=1):
            if char not in '01':
                raise BottMatrixError(f"invalid character {char!r}, expected 0 or 1", row=i, column=j)
            row.append(int(char))
        rows.append(row)
    return matrix_from_rows(rows)


def serialize_bott_matrix(matrix: BottMatrix) -> str:
    """Canonical text of a matrix; inverse of parse_bott_matrix."""
    lines = [str(matrix.n)]
    for row in matrix.rows():
        lines.append(''.join(str(b) for b in row))
    return '\n'.join(lines)


def characteristic_data(matrix: BottMatrix) -> CharacteristicData:
    """Characteristic map of the small cover over the n-cube.

    Facets F_1..F_n map to the standard basis and F_{n+j} maps to the j-th
    row of the matrix read as a Z2 vector.
    """
    n = matrix.n
    vectors = []
    for j in range(1, n + 1):
        vectors.append(tuple(1 if k == j else 0 for k in range(1, n + 1)))
    for j in range(1, n + 1):
        vectors.append(matrix.row(j))
    return CharacteristicData(tuple(vectors))


def fan_vectors(matrix: BottMatrix) -> Tuple[Tuple[int, ...], ...]:
    """Integral ray generators v_1..v_2n of the fan; reduce mod 2 to characteristic_data."""
    n = matrix.n
    vectors = []
    for j in range(1, n + 1):
        vectors.append(tuple(1 if k == j else 0 for k in range(1, n + 1)))
    for j in range(1, n + 1):
        vectors.append(tuple(-1 if k == j else (matrix.c(j, k) if k > j else 0) for k in range(1, n + 1)))
    return tuple(vectors)


def row_sum(matrix: BottMatrix, i: int) -> int:
    """Parity of the strictly-upper entries of row i, 1 <= i <= n-1."""
    if not 1 <= i <= matrix.n - 1:
        raise IndexRangeError(f"row index {i} outside 1..{matrix.n - 1}", row=i)
    return sum(matrix.c(i, j) for j in range(i + 1, matrix.n + 1)) % 2


def column_has_upper_one(matrix: BottMatrix, q: int) -> bool:
    """True when some c(p, q) with p < q equals 1."""
    return any(matrix.c(p, q) for p in range(1, q))


def is_product_of_circles(matrix: BottMatrix) -> bool:
    return not any(matrix.upper)


def submatrix_pair(matrix: BottMatrix, j: int, k: int) -> BottMatrix:
    """Keep rows j and k of the matrix, replace every other row by a unit row."""
    if not 1 <= j < k <= matrix.n:
        raise IndexRangeError(f"pair ({j}, {k}) must satisfy 1 <= j < k <= {matrix.n}")
    entries = {}
    for row in (j, k):
        for col in range(row + 1, matrix.n + 1):
            if matrix.c(row, col):
                entries[(row, col)] = 1
    return BottMatrix.from_entries(matrix.n, entries)


def suffix_submatrix(matrix: BottMatrix, k: int) -> BottMatrix:
    """Delete the first k rows and columns (the fibre of the k-fold circle fibration)."""
    if not 0 <= k <= matrix.n - 1:
        raise IndexRangeError(f"suffix length {k} outside 0..{matrix.n - 1}")
    if k == 0:
        return matrix
    return matrix_from_rows([row[k:] for row in matrix.rows()[k:]])


def leading_submatrix(matrix: BottMatrix, m: int) -> BottMatrix:
    """Leading principal m x m matrix, the Bott matrix of the stage Y_m."""
    if not 1 <= m <= matrix.n:
        raise IndexRangeError(f"leading size {m} outside 1..{matrix.n}")
    if m == matrix.n:
        return matrix
    return matrix_from_rows([row[:m] for row in matrix.rows()[:m]])


def enumeration_count(n: int) -> int:
    return 2 ** (n * (n - 1) // 2)


def matrix_from_index(n: int, index: int) -> BottMatrix:
    """The index-th matrix of enumerate_matrices(n); c(1,2) is the most significant bit."""
    m = n * (n - 1) // 2
    if not 0 <= index < 2 ** m:
        raise IndexRangeError(f"enumeration index {index} outside 0..{2 ** m - 1}")
    bits = tuple((index >> (m - 1 - pos)) & 1 for pos in range(m))
    return BottMatrix(n, bits)


def matrix_index(matrix: BottMatrix) -> int:
    index = 0
    for bit in matrix.upper:
        index = (index << 1) | bit
    return index


def check_enumeration_cap(n: int, max_n: Optional[int] = None) -> None:
    """Raise EnumerationCapError when n exceeds the cap."""
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if n < 1:
        raise BottMatrixError(f"matrix size must be positive, got {n}")
    if n > cap:
        raise EnumerationCapError(
            f"refusing to enumerate {enumeration_count(n)} matrices of size {n}: cap is n <= {cap}"
        )


def enumerate_matrices(n: int, max_n: Optional[int] = None,
                       start: int = 0, stop: Optional[int] = None) -> Iterator[BottMatrix]:
    """Yield every n x n Bott matrix once, in lexicographic order of the upper bit string.

    Args:
        n: Matrix size.
        max_n: Enumeration cap; defaults to config.DEFAULT_MAX_N.
        start: First enumeration index (for chunked censuses).
        stop: One past the last index; defaults to the total count.

    Raises:
        EnumerationCapError: when n is above the cap.
    """
    check_enumeration_cap(n, max_n)
    total = enumeration_count(n)
    stop = total if stop is None else min(stop, total)
    logger.debug(f"Enumerating {n}x{n} Bott matrices, indices {start}..{stop - 1}")
    for index in range(start, stop):
        yield matrix_from_index(n, index)
