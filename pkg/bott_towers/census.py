"""Exhaustive classification of all n x n Bott matrices.

Enumeration indices are split into chunks; each chunk is classified
independently (inline or in a process pool) and the partial results are
merged by adding counts and sorting lists, so chunk order never matters.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from bott_towers import config
from bott_towers.bott_matrix import (
    check_enumeration_cap,
    enumerate_matrices,
    enumeration_count,
    is_product_of_circles,
    serialize_bott_matrix,
)
from bott_towers.exceptions import ConsistencyError
from bott_towers.fundamental_group import h1
from bott_towers.reports import CensusDocument
from bott_towers.sw_classes import is_orientable, is_spin, sw_class

logger = logging.getLogger(__name__)

FILTERS = ('orientable', 'spin', 'abelian')
CROSS_CHECKS = ('orientable', 'spin', 'abelian')


@dataclass
class ChunkResult:
    total: int = 0
    orientable: int = 0
    spin: int = 0
    abelian: int = 0
    matrices: Dict[str, List[str]] = field(default_factory=lambda: {name: [] for name in FILTERS + ('all',)})
    mismatches: Dict[str, int] = field(default_factory=lambda: {name: 0 for name in CROSS_CHECKS})
    diagnostics: List[str] = field(default_factory=list)
    rows: List[Dict[str, object]] = field(default_factory=list)

    def merge(self, other: 'ChunkResult') -> None:
        self.total += other.total
        self.orientable += other.orientable
        self.spin += other.spin
        self.abelian += other.abelian
        for name, texts in other.matrices.items():
            self.matrices[name].extend(texts)
        for name, count in other.mismatches.items():
            self.mismatches[name] += count
        self.diagnostics.extend(other.diagnostics)
        self.rows.extend(other.rows)


def classify_chunk(n: int, start: int, stop: int, keep_lists: bool = False,
                   keep_rows: bool = False, max_n: Optional[int] = None) -> ChunkResult:
    """Classify enumeration indices start..stop-1; top-level so a process pool can pickle it.

    Every verdict is computed twice, by closed form and through the ring or
    Smith normal form, and disagreements are tallied.
    """
    result = ChunkResult()
    for index, matrix in enumerate(enumerate_matrices(n, max_n=max_n, start=start, stop=stop), start=start):
        orientable = is_orientable(matrix)
        spin = is_spin(matrix)
        abelian = is_product_of_circles(matrix)

        ring_orientable = sw_class(matrix, 1).is_zero()
        ring_spin = None if not ring_orientable else (n < 2 or sw_class(matrix, 2).is_zero())
        torsion_free_h1 = h1(matrix).torsion2_rank == 0

        for name, closed, oracle in (
            ('orientable', orientable, ring_orientable),
            ('spin', spin, ring_spin),
            ('abelian', abelian, torsion_free_h1),
        ):
            if closed != oracle:
                result.mismatches[name] += 1
                result.diagnostics.append(
                    f"{matrix.fingerprint}: {name} closed form {closed} but oracle {oracle}"
                )

        result.total += 1
        result.orientable += orientable
        result.spin += bool(spin)
        result.abelian += abelian
        if keep_lists:
            text = serialize_bott_matrix(matrix)
            result.matrices['all'].append(text)
            if orientable:
                result.matrices['orientable'].append(text)
            if spin:
                result.matrices['spin'].append(text)
            if abelian:
                result.matrices['abelian'].append(text)
        if keep_rows:
            result.rows.append({
                'index': index,
                'matrix': '/'.join(serialize_bott_matrix(matrix).split('\n')[1:]),
                'orientable': orientable,
                'spin': '' if spin is None else spin,
                'abelian': abelian,
                'h1': h1(matrix).render(),
            })
    return result


def chunk_bounds(total: int, chunk_size: int) -> List[Tuple[int, int]]:
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


class CensusRunner:
    def __init__(self, n: int, jobs: int = None, max_n: int = None, progress: bool = True,
                 chunk_size: int = None):
        """Set up a census of the n x n Bott matrices.

        Args:
            n: Matrix size.
            jobs: Worker processes; 1 classifies inline.
            max_n: Enumeration cap, defaults to config.DEFAULT_MAX_N.
            progress: Show a tqdm progress bar on stderr.
            chunk_size: Enumeration indices per work unit.

        Raises:
            EnumerationCapError: when n is above the cap.
        """
        self.max_n = config.DEFAULT_MAX_N if max_n is None else max_n
        check_enumeration_cap(n, self.max_n)
        self.n = n
        self.jobs = jobs or config.DEFAULT_JOBS
        self.progress = progress
        self.chunk_size = chunk_size or config.CHUNK_SIZE
        self.result: Optional[ChunkResult] = None

    def _collect(self, keep_lists: bool, keep_rows: bool) -> ChunkResult:
        bounds = chunk_bounds(enumeration_count(self.n), self.chunk_size)
        merged = ChunkResult()
        desc = f"Census n={self.n}"
        # Un solo proceso: sin pool
        if self.jobs <= 1 or len(bounds) == 1:
            for start, stop in tqdm(bounds, desc=desc, disable=not self.progress, leave=False):
                merged.merge(classify_chunk(self.n, start, stop, keep_lists, keep_rows, self.max_n))
            return merged

        # Los trozos llegan en cualquier orden; merge es conmutativo
        with ProcessPoolExecutor(max_workers=self.jobs) as executor:
            futures = [
                executor.submit(classify_chunk, self.n, start, stop, keep_lists, keep_rows, self.max_n)
                for start, stop in bounds
            ]
            for future in tqdm(as_completed(futures), total=len(futures), desc=desc,
                               disable=not self.progress, leave=False):
                merged.merge(future.result())
        return merged

    def run(self, filter_name: Optional[str] = None, list_matrices: bool = False,
            keep_rows: bool = False) -> CensusDocument:
        """Classify every matrix and build the census document.

        Raises:
            ConsistencyError: if any closed form disagrees with its oracle.
        """
        if filter_name is not None and filter_name not in FILTERS:
            raise ValueError(f"unknown filter {filter_name!r}; expected one of {FILTERS}")
        logger.info(f"Starting census of {enumeration_count(self.n)} matrices with n={self.n}, jobs={self.jobs}")
        self.result = self._collect(list_matrices, keep_rows)
        for name in self.result.matrices:
            self.result.matrices[name].sort()
        self.result.rows.sort(key=lambda row: row['index'])

        if any(self.result.mismatches.values()):
            for line in self.result.diagnostics[:20]:
                logger.error(line)
            raise ConsistencyError(
                f"census n={self.n}: closed forms disagree with the ring oracle {self.result.mismatches}"
            )

        matrices = None
        if list_matrices:
            matrices = self.result.matrices[filter_name or 'all']
        logger.info(
            f"Census n={self.n} done: {self.result.total} total, {self.result.orientable} orientable, "
            f"{self.result.spin} spin"
        )
        return CensusDocument(
            n=self.n,
            total=self.result.total,
            orientable=self.result.orientable,
            spin=self.result.spin,
            abelian=self.result.abelian,
            filter=filter_name,
            matrices=matrices,
            cross_checks=dict(self.result.mismatches),
        )

    def save_table(self, file_path: str) -> None:
        """Write the per-matrix table of the last run as CSV."""
        if self.result is None or not self.result.rows:
            logger.warning("No census rows to save; run with keep_rows=True first")
            return
        # Crear DataFrame y guardar en CSV
        df = pd.DataFrame(self.result.rows)
        os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
        df.to_csv(file_path, index=False, encoding='utf-8')
        logger.info(f"Census table saved to {file_path}")
