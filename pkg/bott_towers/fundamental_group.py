"""Fundamental group of a real Bott tower: presentation, conjugacy identities and H1.

pi_1(Y_n) is generated by a_{n+1}..a_{2n} with one relator per pair p < q:
the commutator a_p a_q a_p^-1 a_q^-1 when c(p-n, q-n) = 0 and the twisted
word a_p a_q^-1 a_p^-1 a_q^-1 when c(p-n, q-n) = 1.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from bott_towers.bott_matrix import BottMatrix, column_has_upper_one, is_product_of_circles
from bott_towers.exceptions import ConsistencyError, IndexRangeError

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]


@dataclass(frozen=True)
class GroupWord:
    """A word in the generators a_g, stored as (g, +1/-1) letters."""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for generator, exponent in self.letters:
            if exponent not in (1, -1):
                raise ValueError(f"letter a{generator} has exponent {exponent}; expected +1 or -1")

    @classmethod
    def generator(cls, g: int, exponent: int = 1) -> 'GroupWord':
        sign = 1 if exponent > 0 else -1
        return cls(((g, sign),) * abs(exponent))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: 'GroupWord') -> 'GroupWord':
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> 'GroupWord':
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def power(self, exponent: int) -> 'GroupWord':
        base = self if exponent >= 0 else self.inverse()
        return GroupWord(base.letters * abs(exponent))

    def conjugate(self, by: 'GroupWord') -> 'GroupWord':
        """by^-1 * self * by."""
        return by.inverse() * self * by

    def exponent_sum(self, g: int) -> int:
        return sum(e for generator, e in self.letters if generator == g)

    def render(self) -> str:
        if not self.letters:
            return '1'
        return ' '.join(f"a{g}" if e == 1 else f"a{g}^-1" for g, e in self.letters)

    def __str__(self) -> str:
        return self.render()


def parse_word(text: str) -> GroupWord:
    """Parse 'a3 a4^-1 a3^2'; '1' is the empty word."""
    letters: List[Letter] = []
    text = text.strip()
    if text in ('', '1'):
        return GroupWord()
    for token in text.split():
        name, _, power_text = token.partition('^')
        if not name.startswith('a') or not name[1:].isdigit():
            raise ValueError(f"invalid generator {token!r}")
        try:
            power = int(power_text) if power_text else 1
        except ValueError:
            raise ValueError(f"invalid power in {token!r}")
        letters.extend(GroupWord.generator(int(name[1:]), power).letters)
    return GroupWord(tuple(letters))


def free_reduce(word: GroupWord) -> GroupWord:
    """Cancel adjacent inverse letters until none remain."""
    stack: List[Letter] = []
    for letter in word.letters:
        if stack and stack[-1][0] == letter[0] and stack[-1][1] == -letter[1]:
            stack.pop()
        else:
            stack.append(letter)
    return GroupWord(tuple(stack))


def _check_pair(matrix: BottMatrix, p: int, q: int) -> None:
    n = matrix.n
    if not n + 1 <= p < q <= 2 * n:
        raise IndexRangeError(f"generator pair ({p}, {q}) must satisfy {n + 1} <= p < q <= {2 * n}")


def relator_word(p: int, q: int, c: int) -> GroupWord:
    a_p, a_q = GroupWord.generator(p), GroupWord.generator(q)
    if c:
        return a_p * a_q.inverse() * a_p.inverse() * a_q.inverse()
    return a_p * a_q * a_p.inverse() * a_q.inverse()


def relator(matrix: BottMatrix, p: int, q: int) -> GroupWord:
    """x_{p,q} for generators n+1 <= p < q <= 2n."""
    _check_pair(matrix, p, q)
    n = matrix.n
    return relator_word(p, q, matrix.c(p - n, q - n))


def twisted_relator_word(p: int, q: int, eps_p: int, eps_q: int, c: int) -> GroupWord:
    """x_{p,q} after conjugating every letter by t_eps: a_p flips when eps_p = 1, a_q when eps_q = 1."""
    flips = {p: -1 if eps_p else 1, q: -1 if eps_q else 1}
    return GroupWord(tuple((g, e * flips[g]) for g, e in relator_word(p, q, c).letters))


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    pairs: Tuple[Tuple[int, int], ...]
    relators: Tuple[GroupWord, ...]

    @property
    def generators(self) -> Tuple[int, ...]:
        n = self.generator_count
        return tuple(range(n + 1, 2 * n + 1))

    def render(self) -> str:
        """'gen: a3 a4 ; rel: a3 a4 a3^-1 a4^-1 ; ...'."""
        head = 'gen: ' + ' '.join(f"a{g}" for g in self.generators)
        rel = ' ; '.join(r.render() for r in self.relators)
        return f"{head} ; rel: {rel}" if rel else f"{head} ; rel:"

    def __str__(self) -> str:
        return self.render()


def presentation(matrix: BottMatrix) -> Presentation:
    n = matrix.n
    pairs = tuple((p, q) for p in range(n + 1, 2 * n + 1) for q in range(p + 1, 2 * n + 1))
    return Presentation(
        generator_count=n,
        pairs=pairs,
        relators=tuple(relator(matrix, p, q) for p, q in pairs),
    )


# Conjugacy identities x^eps = w^-1 x^{+-1} w for the letters a_p, a_q.
# Words are written with roles: ('p', 1) is a_p, ('q', -1) is a_q^-1.

@dataclass(frozen=True)
class AppendixCase:
    number: int
    c: int
    eps: Tuple[int, int]
    displayed: Tuple[Tuple[str, int], ...]
    conjugator: Tuple[Tuple[str, int], ...]
    exponent: int

    def instantiate(self, roles: Tuple[Tuple[str, int], ...], p: int, q: int) -> GroupWord:
        index = {'p': p, 'q': q}
        return GroupWord(tuple((index[role], e) for role, e in roles))

    def left_side(self, p: int, q: int) -> GroupWord:
        return self.instantiate(self.displayed, p, q)

    def right_side(self, p: int, q: int) -> GroupWord:
        x = relator_word(p, q, self.c).power(self.exponent)
        return x.conjugate(self.instantiate(self.conjugator, p, q))


APPENDIX_CASES: Tuple[AppendixCase, ...] = (
    AppendixCase(1, 0, (0, 0), (('p', 1), ('q', 1), ('p', -1), ('q', -1)), (), 1),
    AppendixCase(2, 0, (0, 1), (('p', 1), ('q', -1), ('p', -1), ('q', 1)), (('q', 1),), -1),
    AppendixCase(3, 0, (1, 0), (('p', -1), ('q', 1), ('p', 1), ('q', -1)), (('p', 1),), -1),
    AppendixCase(4, 0, (1, 1), (('p', -1), ('q', -1), ('p', 1), ('q', 1)), (('p', 1), ('q', 1)), 1),
    AppendixCase(5, 1, (0, 0), (('p', 1), ('q', -1), ('p', -1), ('q', -1)), (), 1),
    AppendixCase(6, 1, (1, 0), (('p', -1), ('q', -1), ('p', 1), ('q', -1)), (('p', 1), ('q', -1)), 1),
    AppendixCase(7, 1, (1, 1), (('p', -1), ('q', 1), ('p', 1), ('q', 1)), (('p', 1),), -1),
)

# c = 1, eps = (0, 1): worked inside the proof of the presentation, not among the seven
INLINE_CASE = AppendixCase(8, 1, (0, 1), (('p', 1), ('q', 1), ('p', -1), ('q', 1)), (('q', 1),), -1)


@dataclass(frozen=True)
class ConjugacyVerdict:
    case: int
    p: int
    q: int
    applies: bool
    displayed_matches_derived: bool
    holds: bool

    @property
    def passed(self) -> bool:
        return self.displayed_matches_derived and self.holds


def _check_case(case: AppendixCase, matrix: BottMatrix, p: int, q: int) -> ConjugacyVerdict:
    n = matrix.n
    left = case.left_side(p, q)
    derived = twisted_relator_word(p, q, case.eps[0], case.eps[1], case.c)
    verdict = ConjugacyVerdict(
        case=case.number,
        p=p,
        q=q,
        applies=matrix.c(p - n, q - n) == case.c,
        displayed_matches_derived=free_reduce(left) == free_reduce(derived),
        holds=free_reduce(left) == free_reduce(case.right_side(p, q)),
    )
    if not verdict.passed:
        logger.error(f"{matrix.fingerprint}: conjugacy case {case.number} fails for a{p}, a{q}")
    return verdict


def _run_cases(matrix: BottMatrix, cases: Iterable[AppendixCase]) -> List[ConjugacyVerdict]:
    cases = tuple(cases)
    verdicts = []
    for p, q in presentation(matrix).pairs:
        for case in cases:
            verdicts.append(_check_case(case, matrix, p, q))
    return verdicts


def appendix_conjugacy_suite(matrix: BottMatrix) -> List[ConjugacyVerdict]:
    """The seven printed conjugacy cases for every generator pair."""
    return _run_cases(matrix, APPENDIX_CASES)


def inline_conjugacy_case(matrix: BottMatrix) -> List[ConjugacyVerdict]:
    return _run_cases(matrix, (INLINE_CASE,))


def extended_conjugacy_suite(matrix: BottMatrix) -> Dict[str, List[ConjugacyVerdict]]:
    """The seven printed cases plus the c = 1, eps = (0, 1) identity, kept apart."""
    return {
        'appendix': appendix_conjugacy_suite(matrix),
        'inline': inline_conjugacy_case(matrix),
    }


def abelianization_exponent_sums(word: GroupWord, n: int) -> Tuple[int, ...]:
    """Exponent sums of a_{n+1}..a_{2n}."""
    for g, _ in word.letters:
        if not n + 1 <= g <= 2 * n:
            raise IndexRangeError(f"generator a{g} outside a{n + 1}..a{2 * n}")
    return tuple(word.exponent_sum(g) for g in range(n + 1, 2 * n + 1))


def abelianized_relation_matrix(matrix: BottMatrix) -> np.ndarray:
    """One row of exponent sums per relator, in presentation order.

    A relator and its inverse impose the same relation, so each row is signed
    to make its first non-zero entry positive.
    """
    n = matrix.n
    rows = []
    for r in presentation(matrix).relators:
        row = abelianization_exponent_sums(r, n)
        leading = next((x for x in row if x != 0), 0)
        rows.append(tuple(-x for x in row) if leading < 0 else row)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def _identity(size: int) -> np.ndarray:
    return np.array([[1 if i == j else 0 for j in range(size)] for i in range(size)], dtype=object).reshape(size, size)


@dataclass(frozen=True)
class SmithNormalForm:
    """left @ original @ right == normal, with normal diagonal and d_i | d_{i+1}."""
    diagonal: Tuple[int, ...]
    normal: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _nonzero_min_abs(A: np.ndarray, s: int) -> Tuple[Optional[int], Optional[int]]:
    index = (None, None)
    smallest = None
    for i in range(s, A.shape[0]):
        for j in range(s, A.shape[1]):
            if A[i, j] == 0:
                continue
            if smallest is None or abs(A[i, j]) < smallest:
                index = (i, j)
                smallest = abs(A[i, j])
    return index


def smith_normal_form(M) -> SmithNormalForm:
    """Smith normal form over exact Python integers.

    Pivots on the smallest non-zero absolute value; entries not divisible by
    the pivot are pulled into the pivot row until the divisibility chain holds.

    Args:
        M: Integer matrix (array-like, m x k).

    Returns:
        SmithNormalForm: diagonal entries and unimodular transforms.
    """
    A = np.asarray(M).astype(object)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-dimensional matrix, got shape {A.shape}")
    rows, cols = A.shape
    A = A.copy()
    left = _identity(rows)
    right = _identity(cols)
    s = 0
    while s < min(rows, cols):
        i, j = _nonzero_min_abs(A, s)
        if i is None:
            break
        A[[s, i]] = A[[i, s]]
        left[[s, i]] = left[[i, s]]
        A[:, [s, j]] = A[:, [j, s]]
        right[:, [s, j]] = right[:, [j, s]]

        pivot = A[s, s]
        for r in range(s + 1, rows):
            if A[r, s] != 0:
                k = A[r, s] // pivot
                A[r] = A[r] - k * A[s]
                left[r] = left[r] - k * left[s]
        for c in range(s + 1, cols):
            if A[s, c] != 0:
                k = A[s, c] // pivot
                A[:, c] = A[:, c] - k * A[:, s]
                right[:, c] = right[:, c] - k * right[:, s]

        if any(A[r, s] != 0 for r in range(s + 1, rows)) or any(A[s, c] != 0 for c in range(s + 1, cols)):
            continue
        blocker = next(
            (r for r in range(s + 1, rows) for c in range(s + 1, cols) if A[r, c] % pivot != 0),
            None,
        )
        if blocker is not None:
            A[s] = A[s] + A[blocker]
            left[s] = left[s] + left[blocker]
            continue
        if pivot < 0:
            A[s] = -A[s]
            left[s] = -left[s]
        s += 1

    diagonal = tuple(int(A[d, d]) for d in range(min(rows, cols)))
    return SmithNormalForm(diagonal=diagonal, normal=A, left=left, right=right)


@dataclass(frozen=True)
class H1Structure:
    free_rank: int
    torsion2_rank: int

    @property
    def n(self) -> int:
        return self.free_rank + self.torsion2_rank

    def render(self) -> str:
        return f"Z^{self.free_rank} + (Z/2)^{self.torsion2_rank}"

    def __str__(self) -> str:
        return self.render()


def h1_closed_form(matrix: BottMatrix) -> H1Structure:
    r = sum(1 for q in range(1, matrix.n + 1) if column_has_upper_one(matrix, q))
    return H1Structure(free_rank=matrix.n - r, torsion2_rank=r)


def h1_from_snf(matrix: BottMatrix) -> H1Structure:
    """H1 as Z^n modulo the abelianized relators.

    Raises:
        ConsistencyError: if a torsion divisor other than 2 appears.
    """
    snf = smith_normal_form(abelianized_relation_matrix(matrix))
    odd = [d for d in snf.diagonal if d not in (0, 2)]
    if odd:
        raise ConsistencyError(f"{matrix.fingerprint}: H1 torsion divisors {odd} differ from 2")
    return H1Structure(free_rank=matrix.n - snf.rank, torsion2_rank=snf.rank)


def h1(matrix: BottMatrix) -> H1Structure:
    """First integral homology, computed by column scan and by Smith normal form.

    Raises:
        ConsistencyError: if the two computations disagree.
    """
    closed = h1_closed_form(matrix)
    computed = h1_from_snf(matrix)
    if closed != computed:
        raise ConsistencyError(
            f"{matrix.fingerprint}: H1 closed form {closed.render()} disagrees with Smith form {computed.render()}"
        )
    return closed


@dataclass(frozen=True)
class GroupPredicates:
    abelian: bool
    nilpotent: bool
    solvable: bool
    torsion_free: bool
    aspherical: bool
    commutator_generator_indices: Tuple[int, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            'abelian': self.abelian,
            'nilpotent': self.nilpotent,
            'solvable': self.solvable,
            'torsion_free': self.torsion_free,
            'aspherical': self.aspherical,
            'commutator_generator_indices': list(self.commutator_generator_indices),
        }


def commutator_generator_indices(matrix: BottMatrix) -> Tuple[int, ...]:
    """Columns q with a strictly-upper 1; a_{n+q}^2 generate the commutator subgroup."""
    return tuple(q for q in range(1, matrix.n + 1) if column_has_upper_one(matrix, q))


def commutator_subgroup_generators(matrix: BottMatrix) -> List[GroupWord]:
    n = matrix.n
    return [GroupWord.generator(n + q, 2) for q in commutator_generator_indices(matrix)]


def predicates(matrix: BottMatrix) -> GroupPredicates:
    # solvable, torsion-free and aspherical hold for every real Bott tower
    abelian = is_product_of_circles(matrix)
    return GroupPredicates(
        abelian=abelian,
        nilpotent=abelian,
        solvable=True,
        torsion_free=True,
        aspherical=True,
        commutator_generator_indices=commutator_generator_indices(matrix),
    )
