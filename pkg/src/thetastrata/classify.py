"""Stratum assignment for genus-4 period matrices.

The decision chain follows the affine stratification: X0 where the
Schottky form survives, X1 where it dies but no theta constant does, X2
where exactly one dies (there F_1 is a single nonzero exclusion product),
and the deeper strata X3-X6 via product detection on the vanishing set.

A product splitting as k + (g-k) is certified by a sub-tuple of the
vanishing set lying in the Sp(2g, F2) orbit of the reference tuple I_k,
found by backtracking over assignments guided by the two orbit
invariants.  Block-diagonal inputs are recognized directly and their
factors analyzed recursively through factor-level vanishing counts; for
non-block inputs the orbit witnesses plus conjugation-invariant vanishing
counts drive the label.

Sizes used as evidence (all derived by enumeration, not hardcoded):
28 = |I_1| for a 1+3 product, 31 when the genus-3 factor is in addition
hyperelliptic (one extra even constant times the 3 even genus-1 choices),
36 = |I_2| for 2+2, 46 for 1+1+2, 55 for 1+1+1+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

import numpy as np

from .chars import (
    Characteristic,
    CharTuple,
    all_characteristics,
    parity,
    product_split_tuple,
    split,
)
from .errors import CapExceededError
from .forms import evaluate_forms
from .theta import SiegelPoint, even_theta_constants, validate_siegel

__all__ = [
    "VanishingSet",
    "SplitWitness",
    "StratumReport",
    "vanishing_set",
    "detect_split",
    "classify",
    "classify_from_pattern",
    "STRATUM_LABELS",
]

STRATUM_LABELS = ("X0", "X1", "X2", "X3", "X4", "X5", "X6", "UNRESOLVED")
MARGIN_FLOOR = 10.0
DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class VanishingSet:
    """Even characteristics with |theta_m| below rel_threshold * scale.

    margin = (smallest surviving relative magnitude) / (largest vanishing
    one); a margin under 10 flags an ill-separated spectrum.
    """

    members: tuple[Characteristic, ...]
    scale: float
    margin: float
    warning: bool

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def vanishing_set(
    point: SiegelPoint,
    rel_threshold: float = 1e-6,
    target: float = 1e-12,
    constants=None,
) -> VanishingSet:
    """Classify each even theta constant as vanishing or surviving at the
    relative threshold; `constants` may carry a precomputed
    even_theta_constants(point, target) result."""
    if constants is None:
        constants = even_theta_constants(point, target)
    mags = {m: abs(tv.value) for m, tv in constants.items()}
    scale = max(mags.values())
    if scale == 0:
        raise ValueError("all even theta constants evaluated to zero; invalid point")
    vanishing, surviving = [], []
    for m, val in mags.items():
        (vanishing if val / scale < rel_threshold else surviving).append((m, val / scale))
    if vanishing:
        margin = min(v for _, v in surviving) / max(max(v for _, v in vanishing), 5e-324)
    else:
        margin = float("inf")
    return VanishingSet(
        tuple(m for m, _ in vanishing),
        scale,
        margin,
        bool(vanishing) and margin < MARGIN_FLOOR,
    )


@dataclass(frozen=True)
class SplitWitness:
    """Outcome of a k + (g-k) product search: the witness, when found, is
    an ordered sub-tuple of the input orbit-equivalent to I_k."""

    found: bool
    k: int
    witness: CharTuple | None
    nodes: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "found": self.found,
            "witness": self.witness.to_strings() if self.witness else None,
            "nodes": self.nodes,
        }


def _code(m: Characteristic) -> tuple[int, int]:
    e = d = 0
    for be, bd in zip(m.eps, m.delta):
        e = (e << 1) | be
        d = (d << 1) | bd
    return e, d


def _pairing(a: tuple[int, int], b: tuple[int, int]) -> int:
    # symplectic pairing <a, b> = eps_a . delta_b + eps_b . delta_a mod 2
    return ((a[0] & b[1]).bit_count() + (b[0] & a[1]).bit_count()) & 1


def _augmented(code: tuple[int, int], g: int) -> int:
    # (eps bits | delta bits | 1); the trailing 1 restricts relations to
    # even cardinality
    return (((code[0] << g) | code[1]) << 1) | 1


def _in_span(aug_value: int, pivots: dict[int, int]) -> bool:
    row = aug_value
    while row:
        t = row.bit_length() - 1
        if t not in pivots:
            return False
        row ^= pivots[t]
    return True


class _RefTuple:
    """Precomputed incremental structure of the reference tuple I_k, with
    positions reordered so linear dependencies appear as early as
    possible: a dependent position admits at most one candidate, so the
    reorder collapses the search's branching."""

    def __init__(self, ref: CharTuple):
        g = ref.genus
        orig_codes = [_code(m) for m in ref]
        aug = [_augmented(c, g) for c in orig_codes]
        n = self.n = len(orig_codes)

        def count_forced(pivots, remaining):
            return sum(1 for r in remaining if _in_span(aug[r], pivots))

        order: list[int] = []
        pivots: dict[int, int] = {}
        remaining = list(range(n))
        while remaining:
            forced = [r for r in remaining if _in_span(aug[r], pivots)]
            if forced:
                pick = forced[0]
            else:
                # choose the independent element that unlocks the most
                # dependencies among the rest
                best = None
                for r in remaining:
                    trial = dict(pivots)
                    row = aug[r]
                    while row:
                        t = row.bit_length() - 1
                        if t not in trial:
                            trial[t] = row
                            break
                        row ^= trial[t]
                    score = count_forced(trial, [x for x in remaining if x != r])
                    if best is None or score > best[0]:
                        best = (score, r, trial)
                _, pick, pivots = best
            order.append(pick)
            remaining.remove(pick)

        self.order = order  # search position -> original reference index
        self.codes = [orig_codes[i] for i in order]
        searched_aug = [aug[i] for i in order]
        # dependency, in search order: None if independent of the search
        # prefix, else indices (search positions) summing to it
        pivots2: dict[int, tuple[int, int]] = {}
        self.dependency: list[tuple[int, ...] | None] = []
        for i, row in enumerate(searched_aug):
            mask = 1 << i
            while row:
                t = row.bit_length() - 1
                if t not in pivots2:
                    pivots2[t] = (row, mask)
                    self.dependency.append(None)
                    break
                prow, pmask = pivots2[t]
                row ^= prow
                mask ^= pmask
            if len(self.dependency) == i:
                self.dependency.append(tuple(j for j in range(i) if (mask >> j) & 1))
        self.pairings = [
            [_pairing(self.codes[i], self.codes[j]) for j in range(n)] for i in range(n)
        ]


@cache
def _ref_structure(g: int, k: int) -> _RefTuple:
    return _RefTuple(product_split_tuple(g, k))


def detect_split(
    chars,
    k: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> SplitWitness:
    """Search the even characteristics `chars` for an ordered sub-tuple in
    the Sp orbit of product_split_tuple(g, k).

    Backtracking assigns reference positions one at a time; a candidate
    must reproduce the reference prefix's linear-relation pattern exactly
    and satisfy every triple parity against the already placed entries
    (reduced, via e(a+b+c) = <a,b>+<a,c>+<b,c> on even characteristics, to
    a two-coloring consistency check).  Raises CapExceededError when the
    node budget is exhausted; that outcome is distinct from "no witness".
    """
    members = list(dict.fromkeys(chars))
    if not members:
        return SplitWitness(False, k, None, 0)
    g = members[0].genus
    if not 1 <= k < g:
        raise ValueError(f"k must satisfy 1 <= k < genus, got k={k}")
    for m in members:
        if m.genus != g:
            raise ValueError("mixed genera in vanishing set")
        if parity(m) != 0:
            raise ValueError(f"odd characteristic {m} in vanishing set")
    ref = _ref_structure(g, k)
    n = ref.n
    if len(members) < n:
        return SplitWitness(False, k, None, 0)

    codes = [_code(m) for m in members]
    aug = [_augmented(c, g) for c in codes]
    by_aug = {a: i for i, a in enumerate(aug)}
    n_cand = len(codes)

    chosen: list[int] = []  # candidate indices by search position
    colors: list[int] = []  # two-coloring labels v_i of placed positions
    used = [False] * n_cand
    pivots: dict[int, int] = {}
    pivot_stack: list[int | None] = []
    nodes = 0

    def reduce_aug(row: int) -> int:
        while row:
            t = row.bit_length() - 1
            if t not in pivots:
                return row
            row ^= pivots[t]
        return 0

    def triples_ok(ci: int, pos: int) -> bool:
        # e(s_i + s_j + c) = e(m_i + m_j + m_pos) for all placed i < j,
        # folded into a single two-coloring consistency scan
        want = None
        for i in range(len(chosen)):
            x = _pairing(codes[chosen[i]], codes[ci]) ^ ref.pairings[i][pos] ^ colors[i]
            if want is None:
                want = x
            elif x != want:
                return False
        return True

    def push(ci: int, pos: int, independent: bool):
        chosen.append(ci)
        used[ci] = True
        colors.append(
            0 if pos == 0 else _pairing(codes[chosen[0]], codes[ci]) ^ ref.pairings[0][pos]
        )
        if independent:
            row = reduce_aug(aug[ci])
            pivots[row.bit_length() - 1] = row
            pivot_stack.append(row.bit_length() - 1)
        else:
            pivot_stack.append(None)

    def pop():
        top = pivot_stack.pop()
        if top is not None:
            del pivots[top]
        colors.pop()
        used[chosen.pop()] = False

    def place(pos: int) -> bool:
        nonlocal nodes
        dep = ref.dependency[pos]
        if dep is not None:
            # forced: the candidate must equal the prefix sum exactly
            target = 0
            for j in dep:
                target ^= aug[chosen[j]]
            ci = by_aug.get(target)
            nodes += 1
            if nodes > node_budget:
                raise CapExceededError(f"detect_split node budget {node_budget} exceeded")
            if ci is None or used[ci] or not triples_ok(ci, pos):
                return False
            push(ci, pos, independent=False)
            if pos + 1 == n or place(pos + 1):
                return True
            pop()
            return False
        for ci in range(n_cand):
            if used[ci]:
                continue
            nodes += 1
            if nodes > node_budget:
                raise CapExceededError(f"detect_split node budget {node_budget} exceeded")
            if reduce_aug(aug[ci]) == 0 or not triples_ok(ci, pos):
                continue
            push(ci, pos, independent=True)
            if pos + 1 == n or place(pos + 1):
                return True
            pop()
        return False

    if place(0):
        by_ref_index = [0] * n
        for search_pos, ref_idx in enumerate(ref.order):
            by_ref_index[ref_idx] = chosen[search_pos]
        witness = CharTuple(g, tuple(members[ci] for ci in by_ref_index))
        return SplitWitness(True, k, witness, nodes)
    return SplitWitness(False, k, None, nodes)


@cache
def _contiguous_split_vanishing_count(parts: tuple[int, ...]) -> int:
    """Evens of genus sum(parts) whose restriction to at least one block of
    the contiguous partition is odd (such theta constants vanish on the
    corresponding product)."""
    g = sum(parts)
    bounds = np.cumsum((0,) + parts)
    count = 0
    for m in all_characteristics(g, "even"):
        for i in range(len(parts)):
            lo, hi = bounds[i], bounds[i + 1]
            if sum(a * b for a, b in zip(m.eps[lo:hi], m.delta[lo:hi])) % 2 == 1:
                count += 1
                break
    return count


@cache
def _one_three_hyperelliptic_count() -> int:
    """Vanishing-set size for elliptic x (hyperelliptic genus-3): the 1+3
    odd-odd tuple plus one extra even genus-3 constant."""
    base = all_characteristics(4, "even")
    extra = all_characteristics(3, "even")[0]  # count independent of the choice
    count = 0
    for m in base:
        head, tail = split(m, 1)
        if (parity(head) == 1 and parity(tail) == 1) or (parity(head) == 0 and tail == extra):
            count += 1
    return count


@dataclass(frozen=True)
class StratumReport:
    """A stratum label with the numerical evidence that produced it."""

    label: str
    form_magnitudes: dict[str, float]
    vanishing: tuple[Characteristic, ...]
    splits: tuple[SplitWitness, ...]
    threshold: float
    margin: float
    warnings: tuple[str, ...]
    notes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "form_magnitudes": self.form_magnitudes,
            "vanishing": [str(m) for m in self.vanishing],
            "splits": [w.to_json() for w in self.splits],
            "threshold": self.threshold,
            "margin": self.margin,
            "warnings": list(self.warnings),
            "notes": list(self.notes),
        }


def _block_partition(tau: np.ndarray, tol: float = 1e-9) -> list[list[int]]:
    """Connected components of the coupling graph |tau_ij| > tol."""
    g = tau.shape[0]
    seen, parts = set(), []
    for start in range(g):
        if start in seen:
            continue
        stack, comp = [start], []
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            comp.append(i)
            for j in range(g):
                if j != i and abs(tau[i, j]) > tol:
                    stack.append(j)
        parts.append(sorted(comp))
    return parts


def _factor_atoms(dim: int, van_count: int) -> list[str] | None:
    """Decompose a factor into atomic types from its vanishing count:
    '1' elliptic, '2i' indecomposable surface, '3h'/'3n' (non)hyperelliptic
    indecomposable threefold."""
    if dim == 1:
        return ["1"]
    if dim == 2:
        return {0: ["2i"], 1: ["1", "1"]}.get(van_count)
    if dim == 3:
        return {
            0: ["3n"],
            1: ["3h"],
            _contiguous_split_vanishing_count((1, 2)): ["1", "2i"],
            _contiguous_split_vanishing_count((1, 1, 1)): ["1", "1", "1"],
        }.get(van_count)
    return None


_ATOM_LABELS = {
    ("1", "3n"): "X3",
    ("1", "3h"): "X4",
    ("2i", "2i"): "X4",
    ("1", "1", "2i"): "X5",
    ("1", "1", "1", "1"): "X6",
}


def _label_from_witnesses(n_vanishing: int, w1: SplitWitness, w2: SplitWitness, notes: list[str]):
    """Stratum from orbit witnesses plus the conjugation-invariant size of
    the vanishing set."""
    if not w1.found and not w2.found:
        # all three forms vanish with no product structure: the
        # hyperelliptic component of X3
        notes.append("no product split detected; hyperelliptic branch")
        return "X3"
    if w1.found and w2.found:
        if n_vanishing == _contiguous_split_vanishing_count((1, 1, 1, 1)):
            return "X6"
        if n_vanishing == _contiguous_split_vanishing_count((1, 1, 2)):
            return "X5"
        notes.append(f"both splits found but vanishing count {n_vanishing} matches neither 1+1+2 nor 1+1+1+1")
        return "UNRESOLVED"
    if w1.found:
        if n_vanishing == _contiguous_split_vanishing_count((1, 3)):
            return "X3"
        if n_vanishing == _one_three_hyperelliptic_count():
            return "X4"
        notes.append(f"1+3 split with unexpected vanishing count {n_vanishing}")
        return "UNRESOLVED"
    if n_vanishing == _contiguous_split_vanishing_count((2, 2)):
        return "X4"
    notes.append(f"2+2 split with unexpected vanishing count {n_vanishing}")
    return "UNRESOLVED"


def classify(
    point: SiegelPoint,
    rel_threshold: float = 1e-6,
    target: float = 1e-12,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> StratumReport:
    """Assign a genus-4 point to one of the strata X0-X6.

    Decision chain: the Schottky form surviving puts the point in X0.
    Below threshold, the theta-null product vanishes exactly when some
    even constant does, and F_1 (a sum of exclusion products) vanishes
    exactly when at least two do, so those two steps are decided on the
    vanishing set, which is numerically exact where forms would demand
    resolving products of 136 near-zero factors.  Deeper strata are
    resolved by block recursion (for visibly block-diagonal tau) or by
    orbit witnesses plus vanishing counts.
    """
    if point.genus != 4:
        raise ValueError(f"classify requires genus 4, got {point.genus}")
    constants = even_theta_constants(point, target)
    forms = evaluate_forms(point, target, constants=constants)
    mags = {fid: fv.relative_magnitude for fid, fv in forms.items()}
    vrep = vanishing_set(point, rel_threshold, target, constants=constants)
    warnings = []
    if vrep.warning:
        warnings.append(f"ill-separated vanishing spectrum: margin {vrep.margin:.3g} < {MARGIN_FLOOR}")
    notes: list[str] = []

    def report(label, splits=()):
        return StratumReport(
            label, mags, vrep.members, tuple(splits), rel_threshold, vrep.margin,
            tuple(warnings), tuple(notes),
        )

    if mags["FT"] >= rel_threshold:
        if vrep.members:
            notes.append("Schottky form survives with vanishing constants present")
        return report("X0")
    if not vrep.members:
        notes.append("Schottky form vanishes, no vanishing theta constants: theta-null survives")
        return report("X1")
    if len(vrep.members) == 1:
        notes.append("exactly one vanishing constant: F_1 reduces to one nonzero exclusion product")
        return report("X2")

    w1 = detect_split(vrep.members, 1, node_budget=node_budget)
    w2 = detect_split(vrep.members, 2, node_budget=node_budget)

    parts = _block_partition(point.tau)
    if len(parts) > 1:
        atoms: list[str] = []
        for idx in parts:
            sub = validate_siegel(point.tau[np.ix_(idx, idx)], sym_tol=1e-9)
            van = 0 if sub.genus == 1 else len(vanishing_set(sub, rel_threshold, target))
            decomposed = _factor_atoms(sub.genus, van)
            if decomposed is None:
                notes.append(f"block factor of genus {sub.genus} has unrecognized vanishing count {van}")
                return report("UNRESOLVED", [w1, w2])
            atoms.extend(decomposed)
        label = _ATOM_LABELS.get(tuple(sorted(atoms)))
        if label is None:
            notes.append(f"block factor types {sorted(atoms)} match no stratum")
            return report("UNRESOLVED", [w1, w2])
        notes.append(f"block-diagonal structure {[len(p) for p in parts]} with factor atoms {sorted(atoms)}")
        return report(label, [w1, w2])

    label = _label_from_witnesses(len(vrep.members), w1, w2, notes)
    return report(label, [w1, w2])


def classify_from_pattern(
    ft_vanishes: bool,
    theta_null_vanishes: bool,
    f1_vanishes: bool,
    vanishing=(),
    factor_flags: dict | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> StratumReport:
    """The classify decision chain driven by synthetic flags instead of
    numerics, covering the branches (X1, X2, hyperelliptic X3) that no
    constructible period matrix reaches here.

    factor_flags may carry "genus3_hyperelliptic": bool to settle the
    elliptic x threefold branch directly.  Inconsistent combinations
    (theta-null vanishing with an empty vanishing set, F_1 claims
    contradicting the vanishing count) raise ValueError.
    """
    members = tuple(vanishing)
    for m in members:
        if parity(m) != 0:
            raise ValueError(f"odd characteristic {m} in vanishing set")
    if theta_null_vanishes != bool(members):
        raise ValueError("inconsistent flags: theta-null vanishes iff some even constant does")
    if f1_vanishes and len(members) == 1:
        raise ValueError("inconsistent flags: with one vanishing constant F_1 is a nonzero product")
    if not f1_vanishes and len(members) >= 2:
        raise ValueError("inconsistent flags: two vanishing constants force F_1 to vanish")
    flags = factor_flags or {}
    notes = [f"synthetic pattern: FT={'0' if ft_vanishes else 'nonzero'}, "
             f"THETANULL={'0' if theta_null_vanishes else 'nonzero'}, "
             f"F1={'0' if f1_vanishes else 'nonzero'}"]

    def report(label, splits=(), margin=float("inf")):
        return StratumReport(label, {}, members, tuple(splits), 0.0, margin, (), tuple(notes))

    if not ft_vanishes:
        return report("X0")
    if not theta_null_vanishes:
        return report("X1")
    if not f1_vanishes:
        return report("X2")

    genus = members[0].genus
    w1 = detect_split(members, 1, node_budget=node_budget)
    w2 = detect_split(members, min(2, genus - 1), node_budget=node_budget) if genus > 2 else SplitWitness(False, 2, None, 0)
    if w1.found and not w2.found and "genus3_hyperelliptic" in flags:
        label = "X4" if flags["genus3_hyperelliptic"] else "X3"
        notes.append(f"1+3 split with genus-3 factor flagged {'' if flags['genus3_hyperelliptic'] else 'non-'}hyperelliptic")
        return report(label, [w1, w2])
    label = _label_from_witnesses(len(members), w1, w2, notes)
    return report(label, [w1, w2])
