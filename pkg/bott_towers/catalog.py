"""Named Bott matrices with known invariants, used by `examples` and the golden checks."""
from dataclasses import dataclass
from typing import Dict, List

from bott_towers.bott_matrix import BottMatrix, parse_bott_matrix
from bott_towers.exceptions import IndexRangeError


@dataclass(frozen=True)
class NamedExample:
    name: str
    description: str
    text: str

    @property
    def matrix(self) -> BottMatrix:
        return parse_bott_matrix(self.text)


def family_matrix(n: int) -> BottMatrix:
    """c(1,2) = c(1,n-2) = c(n-2,n-1) = c(n-2,n) = 1, all other strictly-upper entries 0.

    Orientable and never spin: the obstruction at (1, n-2) is 1.
    """
    if n < 5:
        raise IndexRangeError(f"the family starts at n = 5, got {n}")
    entries = {(1, 2): 1, (1, n - 2): 1, (n - 2, n - 1): 1, (n - 2, n): 1}
    return BottMatrix.from_entries(n, entries)


EXAMPLES: Dict[str, NamedExample] = {
    example.name: example
    for example in (
        NamedExample('klein-bottle', 'Klein bottle, the non-orientable 2-step tower', '2\n11\n01'),
        NamedExample('parallelizable-non-product',
                     'total Stiefel-Whitney class 1 without being a product of circles',
                     '3\n111\n010\n001'),
        NamedExample('spin-6', 'spin 6-step tower; C23, C24 and C34 are spin',
                     '6\n100000\n010011\n001011\n000111\n000010\n000001'),
        NamedExample('orientable-5', 'orientable 5-step tower; every pair obstruction vanishes',
                     '5\n10110\n01110\n00111\n00010\n00001'),
        NamedExample('not-spin-7', 'orientable 7-step tower failing spin at (2, 3)',
                     '7\n1000000\n0111110\n0011111\n0001011\n0000100\n0000010\n0000001'),
        NamedExample('family-5', 'n = 5 member of the orientable non-spin family', '5\n11100\n01000\n00111\n00010\n00001'),
        NamedExample('torus-4', 'product of four circles', '4\n1000\n0100\n0010\n0001'),
    )
}

# The orientable 4-step towers; each is spin
SPIN_CENSUS_4: List[str] = [
    '4\n1000\n0100\n0010\n0001',
    '4\n1000\n0111\n0010\n0001',
    '4\n1011\n0100\n0010\n0001',
    '4\n1011\n0111\n0010\n0001',
    '4\n1110\n0100\n0010\n0001',
    '4\n1110\n0111\n0010\n0001',
    '4\n1101\n0100\n0010\n0001',
    '4\n1101\n0111\n0010\n0001',
]


def get_example(name: str) -> NamedExample:
    try:
        return EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(sorted(EXAMPLES))}")


def spin_census_4() -> List[BottMatrix]:
    return [parse_bott_matrix(text) for text in SPIN_CENSUS_4]
