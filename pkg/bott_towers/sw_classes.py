"""Stiefel-Whitney classes, numbers and the verdicts derived from them.

Every closed form here has a ring computation it can be checked against;
the ring computation wins when they disagree.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from bott_towers.bott_matrix import (
    BottMatrix,
    leading_submatrix,
    row_sum,
    submatrix_pair,
    suffix_submatrix,
)
from bott_towers.cohomology_ring import (
    RingElement,
    eliminate_lower_generator,
    graded_component,
    monomial_from_support,
    render,
    ring_for,
)
from bott_towers.exceptions import IndexRangeError

logger = logging.getLogger(__name__)

# Largest n for which parallelizability of an orientable tower is reported
PARALLELIZABLE_DECIDED_MAX_N = 4


@dataclass(frozen=True, order=True)
class Partition:
    """Multiplicities r_1..r_n with sum(i * r_i) = n, indexing the monomial w_1^r_1 ... w_n^r_n."""
    multiplicities: Tuple[int, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.multiplicities):
            raise ValueError(f"partition multiplicities must be non-negative: {self.multiplicities}")
        if self.weight != len(self.multiplicities):
            raise ValueError(
                f"partition {self.multiplicities} has weight {self.weight}, expected {len(self.multiplicities)}"
            )

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def weight(self) -> int:
        return sum(i * r for i, r in enumerate(self.multiplicities, start=1))

    def render(self) -> str:
        """E.g. 'w1^2*w2' for (2, 1, 0, 0)."""
        parts = []
        for i, r in enumerate(self.multiplicities, start=1):
            if r == 1:
                parts.append(f"w{i}")
            elif r > 1:
                parts.append(f"w{i}^{r}")
        return '*'.join(parts)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class CobordismVerdict:
    null_cobordant: bool
    oriented_null_cobordant: Optional[bool]


@dataclass(frozen=True)
class SWReport:
    """Stiefel-Whitney data of one tower.

    Optional flags are None where the question does not apply (spin for a
    non-orientable tower, w_{n-1} for n = 1) or is not decided.
    """
    n: int
    fingerprint: str
    total: RingElement
    graded: Tuple[RingElement, ...]
    orientable: bool
    spin: Optional[bool]
    spin_witness: Optional[Tuple[int, int]]
    w2_closed_form_conditional: bool
    w_top_minus_one_zero: Optional[bool]
    sw_numbers: Dict[Partition, int]
    null_cobordant: bool
    oriented_null_cobordant: Optional[bool]
    euler_class_vanishes: Optional[bool]
    total_class_trivial: bool
    parallelizable: Optional[bool]
    nowhere_vanishing_vector_field: bool = True
    tangent_bundle_splits: bool = True
    pontryagin_numbers_assumed_zero: bool = True

    def to_dict(self) -> Dict[str, object]:
        """Key-value form used by both report renderings."""
        return {
            'n': self.n,
            'total': render(self.total),
            'graded': [render(w) for w in self.graded],
            'orientable': self.orientable,
            'spin': self.spin,
            'spin_witness': list(self.spin_witness) if self.spin_witness else None,
            'w2_closed_form_conditional': self.w2_closed_form_conditional,
            'w_top_minus_one_zero': self.w_top_minus_one_zero,
            'sw_numbers': {p.render(): bit for p, bit in self.sw_numbers.items()},
            'null_cobordant': self.null_cobordant,
            'oriented_null_cobordant': self.oriented_null_cobordant,
            'euler_class_vanishes': self.euler_class_vanishes,
            'total_class_trivial': self.total_class_trivial,
            'parallelizable': self.parallelizable,
            'nowhere_vanishing_vector_field': self.nowhere_vanishing_vector_field,
            'tangent_bundle_splits': self.tangent_bundle_splits,
            'pontryagin_numbers_assumed_zero': self.pontryagin_numbers_assumed_zero,
        }


def _column_form(matrix: BottMatrix, j: int) -> RingElement:
    """L_j = sum_{i<j} c(i, j) y_i."""
    return ring_for(matrix).linear_form({i: matrix.c(i, j) for i in range(1, j)})


@lru_cache(maxsize=2048)
def total_sw_class(matrix: BottMatrix) -> RingElement:
    """Normal form of prod_{j=2}^n (1 + L_j); equal to 1 for n = 1."""
    ring = ring_for(matrix)
    total = ring.one()
    for j in range(2, matrix.n + 1):
        total = ring.multiply(total, ring.one() + _column_form(matrix, j))
    return total


def total_sw_class_from_all_facets(matrix: BottMatrix) -> RingElement:
    """prod_{i=1}^{2n} (1 + x_i) with each x_i written in the y-variables.

    Independent of total_sw_class: the factors for facets F_1..F_n are
    eliminated one by one rather than cancelled against their partners.
    """
    ring = ring_for(matrix)
    factors = [ring.one() + eliminate_lower_generator(matrix, i) for i in range(1, matrix.n + 1)]
    factors += [ring.one() + ring.generator(i) for i in range(1, matrix.n + 1)]
    return ring.product(factors)


@lru_cache(maxsize=2048)
def sw_classes(matrix: BottMatrix) -> Tuple[RingElement, ...]:
    """w_0..w_n by the stage recursion w_k(Y_n) = w_k(Y_{n-1}) + w_{k-1}(Y_{n-1}) L_n."""
    ring = ring_for(matrix)
    n = matrix.n
    if n == 1:
        return (ring.one(), ring.zero())
    previous = [ring.lift(w) for w in sw_classes(leading_submatrix(matrix, n - 1))]
    previous.append(ring.zero())
    last = _column_form(matrix, n)
    classes = [previous[0]]
    for k in range(1, n + 1):
        classes.append(previous[k] + ring.multiply(previous[k - 1], last))
    return tuple(classes)


def sw_class(matrix: BottMatrix, k: int) -> RingElement:
    if not 0 <= k <= matrix.n:
        raise IndexRangeError(f"degree {k} outside 0..{matrix.n}")
    return sw_classes(matrix)[k]


def w1_closed_form(matrix: BottMatrix) -> RingElement:
    """sum_i row_sum(i) y_i."""
    return ring_for(matrix).linear_form({i: row_sum(matrix, i) for i in range(1, matrix.n)})


def is_orientable(matrix: BottMatrix) -> bool:
    return all(row_sum(matrix, i) == 0 for i in range(1, matrix.n))


def spin_obstruction(matrix: BottMatrix, j: int, k: int) -> int:
    """Coefficient of y_j y_k in w_2, for 1 <= j < k <= n-1.

    Args:
        matrix: Bott matrix.
        j: Smaller index.
        k: Larger index.

    Returns:
        int: sum_{r>j} sum_{s>k, s!=r} c(j,r) c(k,s) + c(j,k) sum_{k<r<s} c(k,r) c(k,s), mod 2.
    """
    n = matrix.n
    if not 1 <= j < k <= n - 1:
        raise IndexRangeError(f"pair ({j}, {k}) must satisfy 1 <= j < k <= {n - 1}")
    cross = 0
    for r in range(j + 1, n + 1):
        if not matrix.c(j, r):
            continue
        for s in range(k + 1, n + 1):
            if s != r and matrix.c(k, s):
                cross += 1
    square = 0
    if matrix.c(j, k):
        ones = sum(matrix.c(k, r) for r in range(k + 1, n + 1))
        square = ones * (ones - 1) // 2
    return (cross + square) % 2


def spin_obstructions(matrix: BottMatrix) -> Dict[Tuple[int, int], int]:
    """Obstruction bits for every pair 1 <= j < k <= n-2."""
    n = matrix.n
    return {
        (j, k): spin_obstruction(matrix, j, k)
        for j in range(1, n - 1)
        for k in range(j + 1, n - 1)
    }


def _obstruction_form(matrix: BottMatrix, max_k: int) -> RingElement:
    ring = ring_for(matrix)
    masks = [
        monomial_from_support((j, k))
        for k in range(2, max_k + 1)
        for j in range(1, k)
        if spin_obstruction(matrix, j, k)
    ]
    return ring.element(masks)


def w2_general_closed_form(matrix: BottMatrix) -> RingElement:
    """w_2 from the unreduced expansion over 1 <= j < k <= n-1, valid for every C."""
    return _obstruction_form(matrix, matrix.n - 1)


def w2_closed_form(matrix: BottMatrix) -> RingElement:
    """w_2 supported on y_j y_k with k <= n-2; non-orientable input uses the general form."""
    if not is_orientable(matrix):
        logger.debug(f"{matrix.fingerprint}: non-orientable, w2 from the general expansion")
        return w2_general_closed_form(matrix)
    return _obstruction_form(matrix, matrix.n - 2)


def is_spin(matrix: BottMatrix) -> Optional[bool]:
    """None when non-orientable, else whether every obstruction vanishes."""
    if not is_orientable(matrix):
        return None
    return not any(spin_obstructions(matrix).values())


def spin_witness(matrix: BottMatrix) -> Optional[Tuple[int, int]]:
    """Least pair (j, k) with a non-zero obstruction; None for spin or non-orientable towers."""
    if not is_orientable(matrix):
        return None
    for pair, bit in sorted(spin_obstructions(matrix).items()):
        if bit:
            return pair
    return None


def is_spin_via_submatrices(matrix: BottMatrix) -> Optional[bool]:
    """Spin test through the pair submatrices C_jk, 1 <= j < k <= n-2."""
    if not is_orientable(matrix):
        return None
    n = matrix.n
    for j in range(1, n - 1):
        for k in range(j + 1, n - 1):
            if is_spin(submatrix_pair(matrix, j, k)) is False:
                logger.debug(f"{matrix.fingerprint}: C_{j}{k} is not spin")
                return False
    return True


def w_top_minus_one_closed_form(matrix: BottMatrix) -> Optional[RingElement]:
    """(prod_i c(i, i+1)) y_1...y_{n-1}; None for n = 1."""
    n = matrix.n
    if n < 2:
        return None
    ring = ring_for(matrix)
    if all(matrix.c(i, i + 1) for i in range(1, n)):
        return ring.monomial(range(1, n))
    return ring.zero()


def partitions(n: int) -> List[Partition]:
    """All partitions of n, ordered by (r_n, ..., r_1) descending."""
    if n < 1:
        raise IndexRangeError(f"n must be positive, got {n}")
    found = []

    def fill(part: int, remaining: int, multiplicities: List[int]) -> None:
        if part == 0:
            if remaining == 0:
                found.append(Partition(tuple(multiplicities)))
            return
        for r in range(remaining // part, -1, -1):
            multiplicities[part - 1] = r
            fill(part - 1, remaining - part * r, multiplicities)
        multiplicities[part - 1] = 0

    fill(n, n, [0] * n)
    return sorted(found, key=lambda p: p.multiplicities[::-1], reverse=True)


def sw_numbers(matrix: BottMatrix) -> Dict[Partition, int]:
    """Pairing of every w_1^r_1...w_n^r_n with the mod 2 fundamental class."""
    n = matrix.n
    ring = ring_for(matrix)
    classes = sw_classes(matrix)
    # powers[i][r] = w_i^r, only up to the degree bound r * i <= n
    powers = {i: [ring.one()] for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for _ in range(n // i):
            powers[i].append(ring.multiply(powers[i][-1], classes[i]))
    numbers = {}
    for partition in partitions(n):
        value = ring.one()
        for i, r in enumerate(partition.multiplicities, start=1):
            if r:
                value = ring.multiply(value, powers[i][r])
        numbers[partition] = ring.top_coefficient(graded_component(value, n))
    return numbers


def cobordism_verdict(matrix: BottMatrix,
                      numbers: Optional[Dict[Partition, int]] = None) -> CobordismVerdict:
    """Null-cobordance from the SW numbers; Pontryagin numbers are taken as zero."""
    if numbers is None:
        numbers = sw_numbers(matrix)
    null = not any(numbers.values())
    oriented = null if is_orientable(matrix) else None
    return CobordismVerdict(null_cobordant=null, oriented_null_cobordant=oriented)


def recursion_check(matrix: BottMatrix) -> bool:
    """w(Y_n) = w(Y_{n-1}) (1 + L_n) in the ring of C."""
    if matrix.n < 2:
        logger.debug(f"{matrix.fingerprint}: recursion check vacuous for n = 1")
        return True
    ring = ring_for(matrix)
    previous = ring.lift(total_sw_class(leading_submatrix(matrix, matrix.n - 1)))
    return total_sw_class(matrix) == ring.multiply(previous, ring.one() + _column_form(matrix, matrix.n))


def heredity_check(matrix: BottMatrix) -> bool:
    """Orientability and spin pass from C to every suffix submatrix."""
    orientable = is_orientable(matrix)
    spin = is_spin(matrix)
    for k in range(1, matrix.n):
        fibre = suffix_submatrix(matrix, k)
        if orientable and not is_orientable(fibre):
            logger.error(f"{matrix.fingerprint}: fibre C^{k} is not orientable")
            return False
        if spin and not is_spin(fibre):
            logger.error(f"{matrix.fingerprint}: fibre C^{k} is not spin")
            return False
    return True


def _parallelizable(matrix: BottMatrix, orientable: bool) -> Optional[bool]:
    if not orientable:
        return False
    if matrix.n <= PARALLELIZABLE_DECIDED_MAX_N:
        return True
    return None


def sw_report(matrix: BottMatrix) -> SWReport:
    """Collect every Stiefel-Whitney fact about one tower."""
    total = total_sw_class(matrix)
    graded = sw_classes(matrix)
    orientable = is_orientable(matrix)
    numbers = sw_numbers(matrix)
    verdict = cobordism_verdict(matrix, numbers)
    top = w_top_minus_one_closed_form(matrix)
    report = SWReport(
        n=matrix.n,
        fingerprint=matrix.fingerprint,
        total=total,
        graded=graded,
        orientable=orientable,
        spin=is_spin(matrix),
        spin_witness=spin_witness(matrix),
        w2_closed_form_conditional=not orientable,
        w_top_minus_one_zero=None if top is None else top.is_zero(),
        sw_numbers=numbers,
        null_cobordant=verdict.null_cobordant,
        oriented_null_cobordant=verdict.oriented_null_cobordant,
        euler_class_vanishes=True if orientable else None,
        total_class_trivial=total.is_one(),
        parallelizable=_parallelizable(matrix, orientable),
    )
    logger.debug(f"{matrix.fingerprint}: orientable={report.orientable} spin={report.spin}")
    return report
