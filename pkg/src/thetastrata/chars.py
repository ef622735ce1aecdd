"""Theta characteristics over F2.

A characteristic for genus g is a pair of bit vectors [eps|delta] of
length g each, i.e. an element of (Z/2Z)^{2g}.  Its parity is
e(m) = eps . delta mod 2; characteristics with e(m) = 0 are *even* and
are the only ones with nonvanishing theta constants.  This module holds
the exact combinatorics: enumeration, parity, componentwise sums, block
concatenation/restriction, and the distinguished tuples I_k of even
characteristics that split as odd x odd across the first k columns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

__all__ = [
    "Characteristic",
    "CharTuple",
    "all_characteristics",
    "parity",
    "add",
    "concat",
    "split",
    "product_split_tuple",
    "n_k",
    "even_count",
    "odd_count",
    "PARITY_COUNTS",
]

_BITS = (0, 1)


@dataclass(frozen=True)
class Characteristic:
    """One theta characteristic [eps|delta] of a fixed genus."""

    genus: int
    eps: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError(f"genus must be >= 1, got {self.genus}")
        object.__setattr__(self, "eps", tuple(int(b) for b in self.eps))
        object.__setattr__(self, "delta", tuple(int(b) for b in self.delta))
        if len(self.eps) != self.genus or len(self.delta) != self.genus:
            raise ValueError("eps and delta must each have length genus")
        if any(b not in _BITS for b in self.eps + self.delta):
            raise ValueError("characteristic entries must be 0 or 1")

    @classmethod
    def from_string(cls, text: str) -> "Characteristic":
        """Parse the "eps_1...eps_g|delta_1...delta_g" form, e.g. "0110|1001"."""
        eps_part, sep, delta_part = text.partition("|")
        if not sep or len(eps_part) != len(delta_part) or not eps_part:
            raise ValueError(f"malformed characteristic string: {text!r}")
        if set(eps_part + delta_part) - {"0", "1"}:
            raise ValueError(f"malformed characteristic string: {text!r}")
        g = len(eps_part)
        return cls(g, tuple(int(c) for c in eps_part), tuple(int(c) for c in delta_part))

    def __str__(self) -> str:
        return "".join(map(str, self.eps)) + "|" + "".join(map(str, self.delta))

    def __add__(self, other: "Characteristic") -> "Characteristic":
        return add(self, other)


def parity(m: Characteristic) -> int:
    """e(m) = eps . delta mod 2; 0 means even, 1 means odd."""
    return sum(e * d for e, d in zip(m.eps, m.delta)) % 2


def add(m1: Characteristic, m2: Characteristic) -> Characteristic:
    """Componentwise sum over F2 (XOR of eps parts and of delta parts)."""
    if m1.genus != m2.genus:
        raise ValueError(f"genus mismatch: {m1.genus} != {m2.genus}")
    return Characteristic(
        m1.genus,
        tuple(a ^ b for a, b in zip(m1.eps, m2.eps)),
        tuple(a ^ b for a, b in zip(m1.delta, m2.delta)),
    )


def concat(m1: Characteristic, m2: Characteristic) -> Characteristic:
    """Block concatenation: genus g1+g2 characteristic [eps1 eps2 | delta1 delta2]."""
    return Characteristic(m1.genus + m2.genus, m1.eps + m2.eps, m1.delta + m2.delta)


def split(m: Characteristic, k: int) -> tuple[Characteristic, Characteristic]:
    """Cut after column k into a genus-k and a genus-(g-k) characteristic."""
    if not 1 <= k < m.genus:
        raise ValueError(f"split position must satisfy 1 <= k < genus, got k={k}")
    return (
        Characteristic(k, m.eps[:k], m.delta[:k]),
        Characteristic(m.genus - k, m.eps[k:], m.delta[k:]),
    )


def all_characteristics(g: int, parity_filter: str = "all") -> list[Characteristic]:
    """Every genus-g characteristic in lexicographic order (eps then delta,
    most-significant bit first), optionally restricted to one parity.

    parity_filter is one of "all", "even", "odd".
    """
    if g < 1:
        raise ValueError(f"genus must be >= 1, got {g}")
    if parity_filter not in ("all", "even", "odd"):
        raise ValueError(f"parity_filter must be all/even/odd, got {parity_filter!r}")
    want = {"all": (0, 1), "even": (0,), "odd": (1,)}[parity_filter]
    out = []
    for bits in itertools.product(_BITS, repeat=2 * g):
        m = Characteristic(g, bits[:g], bits[g:])
        if parity(m) in want:
            out.append(m)
    return out


def even_count(g: int) -> int:
    """2^{g-1} (2^g + 1), the number of even characteristics."""
    return 2 ** (g - 1) * (2**g + 1)


def odd_count(g: int) -> int:
    """2^{g-1} (2^g - 1), the number of odd characteristics."""
    return 2 ** (g - 1) * (2**g - 1)


# (even, odd) counts for small genus; convenience only, tests recompute
# these by exhaustive enumeration.
PARITY_COUNTS: dict[int, tuple[int, int]] = {1: (3, 1), 2: (10, 6), 3: (36, 28), 4: (136, 120)}


@dataclass(frozen=True)
class CharTuple:
    """An ordered tuple of even characteristics of one genus.

    The orbit machinery (relations, triple parities, BFS) is stated for
    even tuples only, so evenness is enforced here.
    """

    genus: int
    entries: tuple[Characteristic, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for m in self.entries:
            if m.genus != self.genus:
                raise ValueError(f"entry {m} has genus {m.genus}, tuple has genus {self.genus}")
            if parity(m) != 0:
                raise ValueError(f"entry {m} is odd; tuples must consist of even characteristics")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def to_strings(self) -> list[str]:
        return [str(m) for m in self.entries]

    @classmethod
    def from_strings(cls, texts) -> "CharTuple":
        entries = tuple(Characteristic.from_string(t) for t in texts)
        if not entries:
            raise ValueError("empty tuple")
        return cls(entries[0].genus, entries)


def product_split_tuple(g: int, k: int) -> CharTuple:
    """The tuple I_k: all even genus-g characteristics whose first k columns
    form an odd genus-k characteristic and whose last g-k columns form an
    odd genus-(g-k) characteristic, in lexicographic order.

    Simultaneous vanishing of the theta constants on an Sp-orbit image of
    I_k detects period matrices splitting as a k + (g-k) product.
    """
    if not 1 <= k < g:
        raise ValueError(f"k must satisfy 1 <= k < g, got k={k}, g={g}")
    picked = []
    for m in all_characteristics(g, "even"):
        head, tail = split(m, k)
        if parity(head) == 1 and parity(tail) == 1:
            picked.append(m)
    return CharTuple(g, tuple(picked))


def n_k(g: int, k: int) -> int:
    """len(product_split_tuple(g, k)) = (# odd at genus k) * (# odd at genus g-k)."""
    return len(product_split_tuple(g, k))
