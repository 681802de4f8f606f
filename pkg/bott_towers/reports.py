"""Analysis and census documents with their text and machine (JSON) renderings.

Both renderings are deterministic: identical input gives identical bytes.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from bott_towers import config
from bott_towers.bott_matrix import (
    BottMatrix,
    characteristic_data,
    fan_vectors,
    serialize_bott_matrix,
    suffix_submatrix,
)
from bott_towers.cohomology_ring import basis_dimension, euler_characteristic, relation_generators, render
from bott_towers.fundamental_group import GroupPredicates, H1Structure, h1, predicates, presentation
from bott_towers.sw_classes import SWReport, is_orientable, is_spin, sw_report

logger = logging.getLogger(__name__)

FORMATS = ('text', 'machine')


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return 'n/a'
    return 'true' if value else 'false'


def render_machine(payload: Dict[str, object]) -> str:
    """Sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


@dataclass(frozen=True)
class SuffixStage:
    k: int
    matrix: str
    orientable: bool
    spin: Optional[bool]


@dataclass(frozen=True)
class AnalysisDocument:
    matrix: str
    sw: SWReport
    presentation: str
    h1: H1Structure
    predicates: GroupPredicates
    characteristic_data: Tuple[Tuple[int, ...], ...]
    fan_vectors: Tuple[Tuple[int, ...], ...]
    betti_mod2: Tuple[int, ...]
    euler_characteristic: int
    relations: Dict[str, List[str]]
    suffix_chain: Tuple[SuffixStage, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            'schema_version': config.SCHEMA_VERSION,
            'kind': 'analysis',
            'matrix': self.matrix,
            'sw': self.sw.to_dict(),
            'presentation': self.presentation,
            'h1': {
                'free_rank': self.h1.free_rank,
                'torsion2_rank': self.h1.torsion2_rank,
                'rendered': self.h1.render(),
            },
            'predicates': self.predicates.to_dict(),
            'characteristic_data': [list(v) for v in self.characteristic_data],
            'fan_vectors': [list(v) for v in self.fan_vectors],
            'betti_mod2': list(self.betti_mod2),
            'euler_characteristic': self.euler_characteristic,
            'relations': self.relations,
            'suffix_chain': [
                {'k': s.k, 'matrix': s.matrix, 'orientable': s.orientable, 'spin': s.spin}
                for s in self.suffix_chain
            ],
        }


def build_analysis(matrix: BottMatrix) -> AnalysisDocument:
    """Compute every invariant shown by `analyze`."""
    logger.debug(f"Analysing {matrix.fingerprint}")
    chain = []
    for k in range(1, matrix.n):
        fibre = suffix_submatrix(matrix, k)
        chain.append(SuffixStage(k, serialize_bott_matrix(fibre), is_orientable(fibre), is_spin(fibre)))
    return AnalysisDocument(
        matrix=serialize_bott_matrix(matrix),
        sw=sw_report(matrix),
        presentation=presentation(matrix).render(),
        h1=h1(matrix),
        predicates=predicates(matrix),
        characteristic_data=characteristic_data(matrix).vectors,
        fan_vectors=fan_vectors(matrix),
        betti_mod2=tuple(basis_dimension(matrix, k) for k in range(matrix.n + 1)),
        euler_characteristic=euler_characteristic(matrix),
        relations=relation_generators(matrix),
        suffix_chain=tuple(chain),
    )


def render_analysis_text(document: AnalysisDocument) -> str:
    sw = document.sw
    lines = ['Bott matrix:']
    lines += [f"  {row}" for row in document.matrix.split('\n')]
    lines.append('')
    lines.append('Stiefel-Whitney classes:')
    lines.append(f"  total: {render(sw.total)}")
    for k, w in enumerate(sw.graded):
        lines.append(f"  w{k}: {render(w)}")
    lines.append(f"  orientable: {_flag(sw.orientable)}")
    spin = _flag(sw.spin)
    if sw.spin_witness:
        spin += f" (witness pair {sw.spin_witness[0]},{sw.spin_witness[1]})"
    lines.append(f"  spin: {spin}")
    lines.append(f"  w(n-1) zero: {_flag(sw.w_top_minus_one_zero)}")
    numbers = ', '.join(f"{p.render()}={bit}" for p, bit in sw.sw_numbers.items())
    lines.append(f"  SW numbers: {numbers}")
    lines.append(f"  null-cobordant: {_flag(sw.null_cobordant)}")
    lines.append(f"  oriented null-cobordant: {_flag(sw.oriented_null_cobordant)}")
    lines.append(f"  total class trivial: {_flag(sw.total_class_trivial)}")
    lines.append(f"  parallelizable: {_flag(sw.parallelizable)}")
    lines.append(f"  euler class vanishes: {_flag(sw.euler_class_vanishes)}")
    lines.append('')
    lines.append('Cohomology (Z/2):')
    lines.append(f"  dimensions: {' '.join(str(d) for d in document.betti_mod2)}")
    lines.append(f"  euler characteristic: {document.euler_characteristic}")
    lines.append(f"  relations: {' ; '.join(document.relations['reduced'])}")
    lines.append('')
    lines.append('Fundamental group:')
    lines.append(f"  {document.presentation}")
    lines.append(f"  H1: {document.h1.render()}")
    for key, value in document.predicates.to_dict().items():
        if isinstance(value, list):
            value = ' '.join(str(v) for v in value) or '-'
        else:
            value = _flag(value)
        lines.append(f"  {key.replace('_', ' ')}: {value}")
    lines.append('')
    lines.append('Characteristic data:')
    for facet, vector in enumerate(document.characteristic_data, start=1):
        lines.append(f"  F{facet}: {''.join(str(b) for b in vector)}")
    lines.append('Fan vectors:')
    for facet, vector in enumerate(document.fan_vectors, start=1):
        lines.append(f"  v{facet}: ({', '.join(str(x) for x in vector)})")
    if document.suffix_chain:
        lines.append('Fibre chain:')
        for stage in document.suffix_chain:
            flat = '/'.join(stage.matrix.split('\n')[1:])
            lines.append(f"  C^{stage.k}: {flat} orientable={_flag(stage.orientable)} spin={_flag(stage.spin)}")
    return '\n'.join(lines) + '\n'


@dataclass
class CensusDocument:
    n: int
    total: int
    orientable: int
    spin: int
    abelian: int
    filter: Optional[str] = None
    matrices: Optional[List[str]] = None
    cross_checks: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.spin <= self.orientable <= self.total:
            raise ValueError(
                f"census counts out of order: spin={self.spin} orientable={self.orientable} total={self.total}"
            )

    @property
    def matched(self) -> int:
        if self.filter is None:
            return self.total
        return getattr(self, self.filter)

    def to_dict(self) -> Dict[str, object]:
        payload = {
            'schema_version': config.SCHEMA_VERSION,
            'kind': 'census',
            'n': self.n,
            'filter': self.filter,
            'total': self.total,
            'orientable': self.orientable,
            'spin': self.spin,
            'abelian': self.abelian,
            'matched': self.matched,
            'cross_checks': dict(self.cross_checks),
        }
        if self.matrices is not None:
            payload['matrices'] = list(self.matrices)
        return payload


def render_census_text(document: CensusDocument) -> str:
    lines = [
        f"n = {document.n}",
        f"total: {document.total}",
        f"orientable: {document.orientable}",
        f"spin: {document.spin}",
        f"abelian: {document.abelian}",
    ]
    if document.filter:
        lines.append(f"matched ({document.filter}): {document.matched}")
    mismatches = sum(document.cross_checks.values())
    lines.append(f"closed form vs ring mismatches: {mismatches}")
    if document.matrices is not None:
        lines.append('')
        for text in document.matrices:
            lines.append(text)
            lines.append('')
    return '\n'.join(lines).rstrip('\n') + '\n'


def render_document(document, fmt: str) -> str:
    """Render an analysis or census document in the chosen format."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if fmt == 'machine':
        return render_machine(document.to_dict())
    if isinstance(document, AnalysisDocument):
        return render_analysis_text(document)
    return render_census_text(document)


def lookup(payload: Dict[str, object], path: str):
    """Follow a dotted path ('sw.graded.1') through nested dicts and lists."""
    value = payload
    for part in path.split('.'):
        if isinstance(value, list):
            value = value[int(part)]
        else:
            value = value[part]
    return value
