"""Exact arithmetic in the mod 2 cohomology ring of a real Bott tower.

The ring is Z2[y_1..y_n] modulo the square relations

    y_i^2 = sum_{j<i} c(j, i) y_j y_i

so every class has a unique representative as a sum of square-free
monomials. A square-free monomial is stored as a bit mask: bit i-1 set
means y_i divides it. y_i is the class of the characteristic
submanifold M_{n+i}; the classes x_1..x_n of the other facets are
eliminated with x_i = y_i + sum_{j<i} c(j, i) y_j.
"""
import heapq
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from bott_towers.bott_matrix import BottMatrix, leading_submatrix
from bott_towers.exceptions import ConsistencyError, IndexRangeError, RingMismatchError

logger = logging.getLogger(__name__)

STRATEGIES = ('highest', 'lowest')

ExponentVector = Tuple[int, ...]
RawPolynomial = Union[Iterable[Sequence[int]], Mapping[Sequence[int], int]]


def monomial_degree(mask: int) -> int:
    return bin(mask).count('1')


def monomial_support(mask: int) -> Tuple[int, ...]:
    """1-based indices of the variables dividing a square-free monomial."""
    support = []
    index = 1
    while mask:
        if mask & 1:
            support.append(index)
        mask >>= 1
        index += 1
    return tuple(support)


def monomial_from_support(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def render_monomial(mask: int) -> str:
    if mask == 0:
        return '1'
    return '*'.join(f"y{i}" for i in monomial_support(mask))


def _toggle(bucket: set, item) -> None:
    if item in bucket:
        bucket.remove(item)
    else:
        bucket.add(item)


def _heap_key(exps: ExponentVector) -> Tuple[int, ...]:
    """heapq pops the smallest key; this pops the vector largest on the highest variable first."""
    return tuple(-e for e in reversed(exps))


@dataclass(frozen=True)
class RingElement:
    """A class in H*(Y_n; Z2) as a set of square-free monomial masks.

    Attributes:
        terms: Monomials with coefficient 1.
        n: Number of generators.
        fingerprint: Fingerprint of the Bott matrix the element belongs to.
    """
    terms: FrozenSet[int]
    n: int
    fingerprint: str

    def _check(self, other: 'RingElement') -> None:
        if not isinstance(other, RingElement):
            raise TypeError(f"cannot combine RingElement with {type(other).__name__}")
        if self.fingerprint != other.fingerprint:
            raise RingMismatchError(
                f"elements belong to different rings ({self.fingerprint} vs {other.fingerprint})"
            )

    def __add__(self, other: 'RingElement') -> 'RingElement':
        self._check(other)
        return RingElement(self.terms ^ other.terms, self.n, self.fingerprint)

    __sub__ = __add__

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == frozenset({0})

    def sorted_terms(self) -> List[int]:
        """Terms ordered by degree, then by mask value (y_1 is the lowest bit)."""
        return sorted(self.terms, key=lambda m: (monomial_degree(m), m))

    def coefficient(self, support: Iterable[int]) -> int:
        return 1 if monomial_from_support(support) in self.terms else 0

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class ReductionStep:
    """One application of a square relation.

    Attributes:
        source: Exponent vector containing a square.
        index: 1-based index of the variable whose square was rewritten.
        rewritten: Exponent vectors replacing the source (empty when y_index^2 = 0).
    """
    source: ExponentVector
    index: int
    rewritten: Tuple[ExponentVector, ...]


@dataclass(frozen=True)
class ReductionTrace:
    steps: Tuple[ReductionStep, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)


class CohomologyRing:
    """The ring H*(Y(C); Z2) for one Bott matrix C.

    Monomial products are memoised per ring; all returned values are immutable.
    """

    def __init__(self, matrix: BottMatrix):
        self.matrix = matrix
        self.n = matrix.n
        self.fingerprint = matrix.fingerprint
        # 0-based: _square_support[i] lists j < i with c(j+1, i+1) = 1
        self._square_support: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(j for j in range(i) if matrix.c(j + 1, i + 1)) for i in range(self.n)
        )
        self._products: Dict[Tuple[int, int], FrozenSet[int]] = {}

    def __repr__(self) -> str:
        return f"CohomologyRing({self.fingerprint})"

    # Construction

    def element(self, terms: Iterable[int]) -> RingElement:
        bucket: set = set()
        full = (1 << self.n) - 1
        for mask in terms:
            if mask & ~full:
                raise IndexRangeError(f"monomial mask {mask:#b} uses variables beyond y{self.n}")
            _toggle(bucket, mask)
        return RingElement(frozenset(bucket), self.n, self.fingerprint)

    def zero(self) -> RingElement:
        return RingElement(frozenset(), self.n, self.fingerprint)

    def one(self) -> RingElement:
        return RingElement(frozenset({0}), self.n, self.fingerprint)

    def generator(self, i: int) -> RingElement:
        if not 1 <= i <= self.n:
            raise IndexRangeError(f"generator y{i} outside y1..y{self.n}")
        return RingElement(frozenset({1 << (i - 1)}), self.n, self.fingerprint)

    def monomial(self, support: Iterable[int]) -> RingElement:
        """Product of distinct generators (already square-free)."""
        support = tuple(support)
        for i in support:
            if not 1 <= i <= self.n:
                raise IndexRangeError(f"generator y{i} outside y1..y{self.n}")
        if len(set(support)) != len(support):
            raise ValueError(f"monomial support {support} repeats a variable; use reduce()")
        return RingElement(frozenset({monomial_from_support(support)}), self.n, self.fingerprint)

    def linear_form(self, coefficients: Mapping[int, int]) -> RingElement:
        """sum_i a_i y_i for a mapping {i: a_i}; coefficients are read mod 2."""
        return self.element(1 << (i - 1) for i, a in coefficients.items() if a % 2)

    def basis(self, k: int) -> List[RingElement]:
        """Square-free monomials of degree k, in rendering order."""
        return [self.monomial(support) for support in combinations(range(1, self.n + 1), k)]

    def lift(self, element: RingElement) -> RingElement:
        """Pull a class back from the ring of a leading principal submatrix.

        Raises:
            RingMismatchError: if the element does not come from a leading submatrix of this ring.
        """
        if element.n > self.n or element.n < 1:
            raise RingMismatchError(f"cannot lift an element with {element.n} generators into {self.n}")
        expected = leading_submatrix(self.matrix, element.n).fingerprint
        if element.fingerprint != expected:
            raise RingMismatchError(
                f"element of {element.fingerprint} is not from the stage {element.n} ring {expected}"
            )
        return RingElement(element.terms, self.n, self.fingerprint)

    # Reduction

    def _normalise_raw(self, raw: RawPolynomial) -> set:
        pending: set = set()
        items = raw.items() if isinstance(raw, Mapping) else ((exps, 1) for exps in raw)
        for exps, coefficient in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n:
                raise ValueError(f"exponent vector {exps} must have length {self.n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"exponent vector {exps} has a negative exponent")
            if coefficient % 2:
                _toggle(pending, exps)
        return pending

    def _reduce(self, pending: set, strategy: str, steps: Optional[list]) -> FrozenSet[int]:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown rewriting strategy {strategy!r}; expected one of {STRATEGIES}")
        result: set = set()
        # Max-heap on the reversed exponent vector; entries toggled off stay in the heap and are skipped.
        # A rewrite only lowers that key, so a processed vector never comes back.
        heap = [(_heap_key(exps), exps) for exps in pending]
        heapq.heapify(heap)
        while heap:
            _, exps = heapq.heappop(heap)
            if exps not in pending:
                continue
            pending.remove(exps)
            squared = [i for i, e in enumerate(exps) if e >= 2]
            if not squared:
                _toggle(result, sum(1 << i for i, e in enumerate(exps) if e))
                continue
            i = squared[-1] if strategy == 'highest' else squared[0]
            rewritten = []
            for j in self._square_support[i]:
                new = list(exps)
                new[i] -= 1
                new[j] += 1
                rewritten.append(tuple(new))
            if steps is not None:
                steps.append(ReductionStep(exps, i + 1, tuple(rewritten)))
            for new in rewritten:
                _toggle(pending, new)
                if new in pending:
                    heapq.heappush(heap, (_heap_key(new), new))
        return frozenset(result)

    def reduce(self, raw: RawPolynomial, strategy: str = 'highest') -> RingElement:
        """Square-free normal form of a polynomial given by exponent vectors."""
        terms = self._reduce(self._normalise_raw(raw), strategy, None)
        return RingElement(terms, self.n, self.fingerprint)

    def reduce_with_trace(self, raw: RawPolynomial,
                          strategy: str = 'highest') -> Tuple[RingElement, ReductionTrace]:
        steps: list = []
        terms = self._reduce(self._normalise_raw(raw), strategy, steps)
        return RingElement(terms, self.n, self.fingerprint), ReductionTrace(tuple(steps))

    # Arithmetic

    def _monomial_product(self, a: int, b: int) -> FrozenSet[int]:
        key = (a, b) if a <= b else (b, a)
        cached = self._products.get(key)
        if cached is not None:
            return cached
        if a & b == 0:
            value = frozenset({a | b})
        else:
            exps = tuple(((a >> i) & 1) + ((b >> i) & 1) for i in range(self.n))
            value = self._reduce({exps}, 'highest', None)
        self._products[key] = value
        return value

    def _own(self, element: RingElement) -> None:
        if element.fingerprint != self.fingerprint:
            raise RingMismatchError(
                f"element of {element.fingerprint} used in ring {self.fingerprint}"
            )

    def multiply(self, a: RingElement, b: RingElement) -> RingElement:
        self._own(a)
        self._own(b)
        bucket: set = set()
        for ta in a.terms:
            for tb in b.terms:
                for term in self._monomial_product(ta, tb):
                    _toggle(bucket, term)
        return RingElement(frozenset(bucket), self.n, self.fingerprint)

    def product(self, factors: Iterable[RingElement]) -> RingElement:
        result = self.one()
        for factor in factors:
            result = self.multiply(result, factor)
        return result

    def power(self, element: RingElement, exponent: int) -> RingElement:
        if exponent < 0:
            raise ValueError("cohomology classes have no negative powers")
        self._own(element)
        result = self.one()
        for _ in range(exponent):
            result = self.multiply(result, element)
        return result

    def top_coefficient(self, element: RingElement) -> int:
        """Pairing with the mod 2 fundamental class: coefficient of y_1...y_n."""
        self._own(element)
        return 1 if (1 << self.n) - 1 in element.terms else 0

    def is_normal_monomial(self, mask: int) -> bool:
        exps = tuple((mask >> i) & 1 for i in range(self.n))
        return self._reduce({exps}, 'highest', None) == frozenset({mask})


@lru_cache(maxsize=2048)
def ring_for(matrix: BottMatrix) -> CohomologyRing:
    """Shared ring instance per matrix."""
    return CohomologyRing(matrix)


def reduce(matrix: BottMatrix, raw: RawPolynomial) -> RingElement:
    """Normal form of a polynomial in y_1..y_n, rewriting the highest square first."""
    return ring_for(matrix).reduce(raw)


def reduce_with_trace(matrix: BottMatrix, raw: RawPolynomial,
                      strategy: str = 'highest') -> Tuple[RingElement, ReductionTrace]:
    return ring_for(matrix).reduce_with_trace(raw, strategy)


def is_confluent(matrix: BottMatrix, raw: RawPolynomial) -> bool:
    """True when highest-first and lowest-first rewriting reach the same normal form."""
    ring = ring_for(matrix)
    if isinstance(raw, Mapping):
        raw = dict(raw)
    else:
        raw = [tuple(e) for e in raw]
    return ring.reduce(raw, 'highest') == ring.reduce(raw, 'lowest')


def multiply(matrix: BottMatrix, a: RingElement, b: RingElement) -> RingElement:
    return ring_for(matrix).multiply(a, b)


def graded_component(element: RingElement, k: int) -> RingElement:
    """Sub-sum of the terms of degree k."""
    if k < 0:
        raise IndexRangeError(f"degree must be non-negative, got {k}")
    terms = frozenset(m for m in element.terms if monomial_degree(m) == k)
    return RingElement(terms, element.n, element.fingerprint)


def basis_dimension(matrix: BottMatrix, k: int) -> int:
    """dim H^k(Y; Z2), checked against the irreducibility of every degree-k square-free monomial.

    Raises:
        IndexRangeError: if k is outside 0..n.
        ConsistencyError: if a square-free monomial is not in normal form.
    """
    n = matrix.n
    if not 0 <= k <= n:
        raise IndexRangeError(f"degree {k} outside 0..{n}")
    ring = ring_for(matrix)
    count = 0
    for support in combinations(range(1, n + 1), k):
        mask = monomial_from_support(support)
        if not ring.is_normal_monomial(mask):
            raise ConsistencyError(f"square-free monomial {render_monomial(mask)} is reducible in {matrix.fingerprint}")
        count += 1
    expected = comb(n, k)
    if count != expected:
        raise ConsistencyError(f"found {count} degree-{k} basis monomials, expected {expected}")
    return expected


def euler_characteristic(matrix: BottMatrix) -> int:
    return sum((-1) ** k * basis_dimension(matrix, k) for k in range(matrix.n + 1))


def exponent_grid(n: int, max_exponent: int) -> Iterable[ExponentVector]:
    """Every exponent vector of length n with entries in 0..max_exponent."""
    return product(range(max_exponent + 1), repeat=n)


def eliminate_lower_generator(matrix: BottMatrix, i: int) -> RingElement:
    """Class of x_i (facet F_i, 1 <= i <= n) in the y-variables: y_i + sum_{j<i} c(j, i) y_j."""
    if not 1 <= i <= matrix.n:
        raise IndexRangeError(f"facet index {i} outside 1..{matrix.n}")
    coefficients = {i: 1}
    for j in range(1, i):
        coefficients[j] = matrix.c(j, i)
    return ring_for(matrix).linear_form(coefficients)


def relation_generators(matrix: BottMatrix) -> Dict[str, List[str]]:
    """Generators of the defining ideal, in the 2n facet variables and in the reduced y-variables."""
    n = matrix.n
    full = []
    reduced = []
    for i in range(1, n + 1):
        full.append(f"x{i}*x{n + i}")
        linear = [f"x{i}", f"x{n + i}"] + [f"x{n + j}" for j in range(1, i) if matrix.c(j, i)]
        full.append(' + '.join(linear))
        square = [f"y{i}^2"] + [f"y{j}*y{i}" for j in range(1, i) if matrix.c(j, i)]
        reduced.append(' + '.join(square))
    return {'facet_variables': full, 'reduced': reduced}


def render(element: RingElement) -> str:
    """Text form: terms by degree then mask, e.g. '1 + y1 + y1*y3'; '0' when empty."""
    if element.is_zero():
        return '0'
    return ' + '.join(render_monomial(m) for m in element.sorted_terms())


def parse_element(matrix: BottMatrix, text: str) -> RingElement:
    """Inverse of render; non-square-free input is reduced."""
    ring = ring_for(matrix)
    text = text.strip()
    if text == '0':
        return ring.zero()
    raw = []
    for token in text.split('+'):
        token = token.strip()
        exps = [0] * matrix.n
        if token != '1':
            for factor in token.split('*'):
                factor = factor.strip()
                power = 1
                if '^' in factor:
                    factor, _, power_text = factor.partition('^')
                    power = int(power_text)
                if not factor.startswith('y') or not factor[1:].isdigit():
                    raise ValueError(f"cannot parse monomial factor {factor!r}")
                index = int(factor[1:])
                if not 1 <= index <= matrix.n:
                    raise IndexRangeError(f"generator y{index} outside y1..y{matrix.n}")
                exps[index - 1] += power
        raw.append(tuple(exps))
    return ring.reduce(raw)
