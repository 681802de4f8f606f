"""Property suites that check every closed form against an independent computation.

Per-matrix suites run over the whole enumeration of each size in a range;
the random H1 and free-reduction suites run once per invocation with a
seeded numpy generator.
"""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from bott_towers import config
from bott_towers.bott_matrix import (
    BottMatrix,
    check_enumeration_cap,
    enumerate_matrices,
    enumeration_count,
    is_product_of_circles,
    serialize_bott_matrix,
)
from bott_towers.catalog import SPIN_CENSUS_4
from bott_towers.cohomology_ring import (
    RingElement,
    basis_dimension,
    euler_characteristic,
    exponent_grid,
    graded_component,
    is_confluent,
    render,
    ring_for,
)
from bott_towers.exceptions import ConsistencyError
from bott_towers.fundamental_group import (
    GroupWord,
    abelianized_relation_matrix,
    appendix_conjugacy_suite,
    free_reduce,
    h1,
    h1_closed_form,
    h1_from_snf,
    inline_conjugacy_case,
)
from bott_towers.sw_classes import (
    cobordism_verdict,
    heredity_check,
    is_orientable,
    is_spin,
    is_spin_via_submatrices,
    recursion_check,
    sw_class,
    sw_classes,
    sw_numbers,
    total_sw_class,
    total_sw_class_from_all_facets,
    w1_closed_form,
    w2_closed_form,
    w2_general_closed_form,
    w_top_minus_one_closed_form,
)

logger = logging.getLogger(__name__)

MAX_EXAMPLES = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: int = 0
    examples: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, subject: str) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < MAX_EXAMPLES:
                self.examples.append(subject)

    def merge(self, other: 'SuiteResult') -> None:
        self.checked += other.checked
        self.failures += other.failures
        room = MAX_EXAMPLES - len(self.examples)
        self.examples.extend(other.examples[:max(room, 0)])

    def to_dict(self) -> Dict[str, object]:
        return {
            'checked': self.checked,
            'failures': self.failures,
            'passed': self.passed,
            'examples': list(self.examples),
        }


# Per-matrix checks; each returns True when the property holds.

def check_oracle_agreement(matrix: BottMatrix) -> bool:
    n = matrix.n
    total = total_sw_class(matrix)
    classes = sw_classes(matrix)
    if any(classes[k] != graded_component(total, k) for k in range(n + 1)):
        return False
    if total != total_sw_class_from_all_facets(matrix):
        return False
    if w1_closed_form(matrix) != classes[1]:
        return False
    if n >= 2:
        if w2_general_closed_form(matrix) != classes[2]:
            return False
        if is_orientable(matrix) and w2_closed_form(matrix) != classes[2]:
            return False
        if w_top_minus_one_closed_form(matrix) != classes[n - 1]:
            return False
    return True


def check_orientability(matrix: BottMatrix) -> bool:
    orientable = is_orientable(matrix)
    if orientable != sw_class(matrix, 1).is_zero():
        return False
    if orientable and matrix.n >= 2:
        if not sw_class(matrix, matrix.n - 1).is_zero():
            return False
        if is_spin(matrix) != sw_class(matrix, 2).is_zero():
            return False
    return True


def check_spin_submatrices(matrix: BottMatrix) -> bool:
    return is_spin(matrix) == is_spin_via_submatrices(matrix)


def check_sw_numbers(matrix: BottMatrix) -> bool:
    verdict = cobordism_verdict(matrix)
    return not any(sw_numbers(matrix).values()) and verdict.null_cobordant


def check_recursion(matrix: BottMatrix) -> bool:
    return recursion_check(matrix)


def check_ring_structure(matrix: BottMatrix) -> bool:
    """Confluence on small exponents, dimensions, Euler characteristic and the degree bound."""
    n = matrix.n
    ring = ring_for(matrix)
    if n <= config.CONFLUENCE_MAX_N:
        for exps in exponent_grid(n, config.CONFLUENCE_MAX_EXPONENT):
            if not is_confluent(matrix, [exps]):
                return False
    try:
        if euler_characteristic(matrix) != 0:
            return False
        for k in range(n + 1):
            basis_dimension(matrix, k)
    except ConsistencyError:
        return False
    top = ring.monomial(range(1, n + 1))
    if ring.top_coefficient(top) != 1:
        return False
    # y_1...y_{m-1} y_m^2 lives in degree m + 1 of the subring on y_1..y_m
    for m in range(1, n + 1):
        exps = tuple(1 if i < m - 1 else (2 if i == m - 1 else 0) for i in range(n))
        if not ring.reduce([exps]).is_zero():
            return False
    return True


def check_appendix(matrix: BottMatrix) -> bool:
    return all(v.passed for v in appendix_conjugacy_suite(matrix))


def check_inline_case(matrix: BottMatrix) -> bool:
    return all(v.passed for v in inline_conjugacy_case(matrix))


def check_h1(matrix: BottMatrix) -> bool:
    try:
        structure = h1(matrix)
    except ConsistencyError:
        return False
    zero_rows = not abelianized_relation_matrix(matrix).any()
    abelian = is_product_of_circles(matrix)
    return abelian == (structure.torsion2_rank == 0) == zero_rows


def check_heredity(matrix: BottMatrix) -> bool:
    return heredity_check(matrix)


MATRIX_SUITES: Dict[str, Callable[[BottMatrix], bool]] = {
    'oracle_agreement': check_oracle_agreement,
    'orientability': check_orientability,
    'spin_submatrices': check_spin_submatrices,
    'heredity': check_heredity,
    'sw_numbers': check_sw_numbers,
    'recursion': check_recursion,
    'ring_structure': check_ring_structure,
    'appendix_conjugacy': check_appendix,
    'inline_conjugacy': check_inline_case,
    'h1_smith_form': check_h1,
}

# Suites that only run up to a size bound
SUITE_MAX_N = {
    'appendix_conjugacy': config.APPENDIX_MAX_N,
    'inline_conjugacy': config.APPENDIX_MAX_N,
}


def suites_for(n: int) -> List[str]:
    return [name for name in MATRIX_SUITES if n <= SUITE_MAX_N.get(name, n)]


def verify_chunk(n: int, start: int, stop: int, suite_names: List[str],
                 max_n: Optional[int] = None) -> Dict[str, SuiteResult]:
    """Run the named per-matrix suites over enumeration indices start..stop-1."""
    results = {name: SuiteResult(name) for name in suite_names}
    for matrix in enumerate_matrices(n, max_n=max_n, start=start, stop=stop):
        for name in suite_names:
            try:
                ok = MATRIX_SUITES[name](matrix)
            except Exception as e:
                logger.error(f"{name} raised on {matrix.fingerprint}: {str(e)}")
                ok = False
            results[name].record(ok, matrix.fingerprint)
    return results


def census_check(n: int, max_n: Optional[int] = None) -> SuiteResult:
    """At n = 4 the orientable and spin sets coincide with the eight known towers."""
    result = SuiteResult('census')
    matrices = list(enumerate_matrices(n, max_n=max_n))
    texts = [serialize_bott_matrix(m) for m in matrices]
    orientable = sorted(t for t, m in zip(texts, matrices) if is_orientable(m))
    spin = sorted(t for t, m in zip(texts, matrices) if is_spin(m))
    result.record(len(texts) == enumeration_count(n), f"n={n}: total count")
    result.record(set(spin) <= set(orientable), f"n={n}: spin set not inside orientable set")
    if n == 4:
        expected = sorted(SPIN_CENSUS_4)
        result.record(orientable == expected, 'n=4: orientable set differs from the known eight')
        result.record(spin == expected, 'n=4: spin set differs from the known eight')
    return result


def random_matrix(rng: np.random.Generator, n: int) -> BottMatrix:
    bits = rng.integers(0, 2, size=n * (n - 1) // 2)
    return BottMatrix.from_upper_bits(n, [int(b) for b in bits])


def random_h1_check(samples: int, n: int = None, seed: int = None) -> SuiteResult:
    """Closed-form H1 against the Smith normal form on random matrices."""
    n = n or config.RANDOM_H1_SIZE
    rng = np.random.default_rng(config.RANDOM_SEED if seed is None else seed)
    result = SuiteResult('h1_random')
    for _ in range(samples):
        matrix = random_matrix(rng, n)
        try:
            ok = h1_closed_form(matrix) == h1_from_snf(matrix)
        except ConsistencyError:
            ok = False
        result.record(ok, matrix.fingerprint)
    return result


def random_element(rng: np.random.Generator, matrix: BottMatrix) -> RingElement:
    """Uniform random class: each square-free monomial is present with probability 1/2."""
    ring = ring_for(matrix)
    picks = rng.integers(0, 2, size=1 << matrix.n)
    return ring.element(mask for mask, bit in enumerate(picks) if bit)


def ring_law_check(samples: int = None, max_n: int = None, seed: int = None) -> SuiteResult:
    """multiply is commutative, associative, unital and distributive on random triples."""
    samples = config.PROPERTY_SAMPLES if samples is None else samples
    max_n = config.RING_LAW_MAX_N if max_n is None else max_n
    rng = np.random.default_rng(config.RANDOM_SEED if seed is None else seed)
    result = SuiteResult('ring_laws')
    for _ in range(samples):
        matrix = random_matrix(rng, int(rng.integers(1, max_n + 1)))
        ring = ring_for(matrix)
        a, b, c = (random_element(rng, matrix) for _ in range(3))
        ab = ring.multiply(a, b)
        ok = (
            ab == ring.multiply(b, a)
            and ring.multiply(ab, c) == ring.multiply(a, ring.multiply(b, c))
            and ring.multiply(ring.one(), a) == a
            and ring.multiply(a, b + c) == ab + ring.multiply(a, c)
        )
        result.record(ok, f"{matrix.fingerprint}: {render(a)} | {render(b)} | {render(c)}")
    return result


def random_word(rng: np.random.Generator, generators: int = 4, max_length: int = 12) -> GroupWord:
    length = int(rng.integers(0, max_length + 1))
    gens = rng.integers(1, generators + 1, size=length)
    signs = rng.choice([-1, 1], size=length)
    return GroupWord(tuple((int(g), int(e)) for g, e in zip(gens, signs)))


def free_reduce_check(samples: int = None, seed: int = None) -> SuiteResult:
    """free_reduce is idempotent, never lengthens, and cancels w w^-1."""
    samples = config.PROPERTY_SAMPLES if samples is None else samples
    rng = np.random.default_rng(config.RANDOM_SEED if seed is None else seed)
    result = SuiteResult('free_reduce')
    for _ in range(samples):
        word = random_word(rng)
        reduced = free_reduce(word)
        ok = (
            free_reduce(reduced) == reduced
            and len(reduced) <= len(word)
            and len(free_reduce(word * word.inverse())) == 0
        )
        result.record(ok, word.render())
    return result


@dataclass
class VerificationReport:
    start: int
    stop: int
    results: Dict[str, SuiteResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def add(self, result: SuiteResult) -> None:
        if result.name in self.results:
            self.results[result.name].merge(result)
        else:
            self.results[result.name] = result

    def to_dict(self) -> Dict[str, object]:
        return {
            'schema_version': config.SCHEMA_VERSION,
            'kind': 'verification',
            'from': self.start,
            'to': self.stop,
            'passed': self.passed,
            'suites': {name: r.to_dict() for name, r in sorted(self.results.items())},
        }

    def render_text(self) -> str:
        lines = [f"Verification n={self.start}..{self.stop}"]
        if not self.results:
            lines.append('  no suites ran (empty range)')
        for name, r in sorted(self.results.items()):
            status = 'PASS' if r.passed else 'FAIL'
            lines.append(f"  {status} {name}: {r.checked} checked, {r.failures} failures")
            for example in r.examples:
                lines.append(f"       {example}")
        lines.append('all suites passed' if self.passed else 'verification FAILED')
        return '\n'.join(lines) + '\n'


def run_verification(start: int, stop: int, jobs: int = None, max_n: int = None,
                     random_samples: int = None, progress: bool = True,
                     property_samples: int = None) -> VerificationReport:
    """Run every suite for sizes start..stop inclusive.

    Args:
        start: Smallest matrix size.
        stop: Largest matrix size; an empty range passes vacuously with a warning.
        jobs: Worker processes for the per-matrix suites.
        max_n: Enumeration cap.
        random_samples: Number of random n = 10 matrices for the H1 check.
        progress: Show tqdm progress bars.
        property_samples: Random cases for the free-reduction and ring-law suites.

    Returns:
        VerificationReport: per-suite tallies.
    """
    jobs = jobs or config.DEFAULT_JOBS
    max_n = config.DEFAULT_MAX_N if max_n is None else max_n
    random_samples = config.RANDOM_H1_SAMPLES if random_samples is None else random_samples
    property_samples = config.PROPERTY_SAMPLES if property_samples is None else property_samples
    report = VerificationReport(start, stop)
    sizes = list(range(max(start, 1), stop + 1))
    if not sizes:
        logger.warning(f"Empty verification range {start}..{stop}; nothing to check")
        return report
    for n in sizes:
        check_enumeration_cap(n, max_n)

    for n in sizes:
        names = suites_for(n)
        logger.info(f"Verifying n={n}: {len(names)} suites over {enumeration_count(n)} matrices")
        total = enumeration_count(n)
        bounds = [(s, min(s + config.CHUNK_SIZE, total)) for s in range(0, total, config.CHUNK_SIZE)]
        desc = f"Verify n={n}"
        if jobs <= 1 or len(bounds) == 1:
            for s, e in tqdm(bounds, desc=desc, disable=not progress, leave=False):
                for result in verify_chunk(n, s, e, names, max_n).values():
                    report.add(result)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                futures = [executor.submit(verify_chunk, n, s, e, names, max_n) for s, e in bounds]
                for future in tqdm(as_completed(futures), total=len(futures), desc=desc,
                                   disable=not progress, leave=False):
                    for result in future.result().values():
                        report.add(result)
        report.add(census_check(n, max_n))

    if random_samples > 0:
        report.add(random_h1_check(random_samples))
    if property_samples > 0:
        report.add(free_reduce_check(property_samples))
        report.add(ring_law_check(property_samples))

    for name, result in sorted(report.results.items()):
        if result.passed:
            logger.info(f"Suite {name}: {result.checked} checks passed")
        else:
            logger.error(f"Suite {name}: {result.failures} of {result.checked} checks failed")
    return report
