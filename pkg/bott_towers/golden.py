"""Golden-file checks for the named examples and the 4-step census.

Each golden is a JSON file holding the input and a map from dotted paths of
the machine document to expected values; only the listed keys are compared.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from bott_towers import config
from bott_towers.bott_matrix import parse_bott_matrix
from bott_towers.catalog import EXAMPLES
from bott_towers.census import CensusRunner
from bott_towers.reports import build_analysis, lookup

logger = logging.getLogger(__name__)


def golden_paths(directory: Optional[Path] = None) -> List[Path]:
    directory = Path(directory or config.GOLDEN_DIR)
    return sorted(directory.glob('*.json'))


def load_golden(path: Path) -> Dict[str, object]:
    with open(path, 'r', encoding='utf-8') as f:
        golden = json.load(f)
    for key in ('name', 'kind', 'expected'):
        if key not in golden:
            raise ValueError(f"golden {path} has no '{key}' entry")
    return golden


def compute_payload(golden: Dict[str, object]) -> Dict[str, object]:
    """Machine document the golden's expectations are read against."""
    if golden['kind'] == 'census':
        runner = CensusRunner(golden['n'], jobs=1, progress=False)
        return runner.run(golden.get('filter'), list_matrices=True).to_dict()
    return build_analysis(parse_bott_matrix(golden['matrix'])).to_dict()


def compare(golden: Dict[str, object], payload: Dict[str, object]) -> List[str]:
    """One line per expected key that is missing or different."""
    diffs = []
    name = golden['name']
    if golden['kind'] == 'analysis' and name in EXAMPLES and EXAMPLES[name].text != golden['matrix']:
        diffs.append(f"{name}: golden matrix differs from the catalog entry")
    for path, expected in golden['expected'].items():
        try:
            actual = lookup(payload, path)
        except (KeyError, IndexError):
            diffs.append(f"{name}: {path} missing")
            continue
        if actual != expected:
            diffs.append(f"{name}: {path} expected={expected!r}, actual={actual!r}")
    return diffs


@dataclass
class GoldenOutcome:
    name: str
    description: str
    summary: str
    diffs: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.diffs


def summarize(golden: Dict[str, object], payload: Dict[str, object]) -> str:
    """Short human verdict, e.g. 'not spin; witness pair (1,3)'."""
    if golden['kind'] == 'census':
        return (f"n={payload['n']}: {payload['total']} total, {payload['orientable']} orientable, "
                f"{payload['spin']} spin")
    sw = payload['sw']
    if not sw['orientable']:
        verdict = 'not orientable'
    elif sw['spin']:
        verdict = 'spin'
    else:
        j, k = sw['spin_witness']
        verdict = f"not spin; witness pair ({j},{k})"
    return f"{verdict}; total SW class = {sw['total']}; H1 = {payload['h1']['rendered']}"


def run_examples(directory: Optional[Path] = None) -> List[GoldenOutcome]:
    """Recompute every golden and diff it."""
    outcomes = []
    for path in golden_paths(directory):
        golden = load_golden(path)
        payload = compute_payload(golden)
        outcome = GoldenOutcome(
            name=golden['name'],
            description=golden.get('description', ''),
            summary=summarize(golden, payload),
            diffs=compare(golden, payload),
        )
        if outcome.passed:
            logger.info(f"Golden {outcome.name} matches")
        else:
            for line in outcome.diffs:
                logger.error(line)
        outcomes.append(outcome)
    if not outcomes:
        logger.warning(f"No golden files found in {directory or config.GOLDEN_DIR}")
    return outcomes
