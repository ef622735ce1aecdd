"""Reusable verification suites behind the CLI and the acceptance tests.

Each check returns a JSON-ready dict with an "ok" flag; thresholds are
the pinned ones, not parameters, so a passing run means the documented
contract holds.
"""

from __future__ import annotations

import itertools

import numpy as np

from .chars import CharTuple, all_characteristics
from .forms import schottky_form, transformation_residual
from .symplectic import orbit_bfs, orbit_profile, random_symplectic, standard_generators
from .theta import (
    block_diag,
    generic_siegel_point,
    random_siegel_point,
    validate_siegel,
)

__all__ = [
    "orbit_oracle_check",
    "transformation_check",
    "transformation_generator_sweep",
    "schottky_degeneration_check",
]

TRANSFORMATION_TOL = 1e-8
SCHOTTKY_VANISH_TOL = 1e-10
SCHOTTKY_BLOCK_TOL = 1e-8
SCHOTTKY_GENERIC_FLOOR = 1e-4


def _partition_by_orbit(tuples: list[CharTuple]) -> list[int]:
    """Orbit index per tuple under the BFS oracle."""
    index = {tuple(t.entries): i for i, t in enumerate(tuples)}
    orbit_of = [-1] * len(tuples)
    next_orbit = 0
    for i, t in enumerate(tuples):
        if orbit_of[i] >= 0:
            continue
        for member in orbit_bfs(t):
            j = index.get(tuple(member.entries))
            if j is not None:
                orbit_of[j] = next_orbit
        next_orbit += 1
    return orbit_of


def orbit_oracle_check(g: int) -> dict:
    """Exhaustively compare the invariant-based tuple equivalence with BFS
    orbit membership over all ordered pairs and triples of even
    characteristics.

    Two partitions of the same set agree on every ordered pair of elements
    iff they are equal, so full pairwise agreement is checked as partition
    equality between profile classes and BFS orbits.
    """
    if g > 2:
        raise ValueError("exhaustive oracle comparison is supported for genus 1 and 2")
    evens = all_characteristics(g, "even")
    report = {"genus": g, "ok": True}
    for label, size in (("pairs", 2), ("triples", 3)):
        tuples = [CharTuple(g, combo) for combo in itertools.product(evens, repeat=size)]
        profiles = [orbit_profile(t) for t in tuples]
        profile_class: dict = {}
        by_profile = [profile_class.setdefault(p, len(profile_class)) for p in profiles]
        by_orbit = _partition_by_orbit(tuples)
        refine = {}
        agree = True
        for a, b in zip(by_profile, by_orbit):
            if refine.setdefault(a, b) != b:
                agree = False
                break
        agree = agree and len(set(by_profile)) == len(set(by_orbit))
        report[label] = {
            "tuples": len(tuples),
            "ordered_comparisons": len(tuples) ** 2,
            "orbits": len(set(by_orbit)),
            "agree": agree,
        }
        report["ok"] = report["ok"] and agree
    return report


def transformation_check(
    g: int, seed: int, count: int, target: float = 1e-10, max_word: int = 6
) -> dict:
    """Seeded random words and points: every eighth-power transformation
    residual must stay below 1e-8."""
    rng = np.random.default_rng(seed)
    evens = all_characteristics(g, "even")
    checks = []
    worst = 0.0
    for _ in range(count):
        word_length = int(rng.integers(1, max_word + 1))
        gamma = random_symplectic(g, word_length, int(rng.integers(0, 2**31)))
        m = evens[int(rng.integers(0, len(evens)))]
        point = random_siegel_point(g, rng)
        residual = transformation_residual(gamma, m, point, target)
        worst = max(worst, residual)
        checks.append({"word_length": word_length, "char": str(m), "residual": residual})
    return {
        "genus": g,
        "seed": seed,
        "count": count,
        "max_residual": worst,
        "tolerance": TRANSFORMATION_TOL,
        "checks": checks,
        "ok": worst < TRANSFORMATION_TOL,
    }


def transformation_generator_sweep(g: int, seed: int, extra_points: int = 5, target: float = 1e-10) -> dict:
    """Every standard generator against every even characteristic, at
    tau = i*1_g and seeded random points."""
    rng = np.random.default_rng(seed)
    points = [validate_siegel(1j * np.eye(g))]
    points += [random_siegel_point(g, rng) for _ in range(extra_points)]
    worst = 0.0
    n_checks = 0
    for gamma in standard_generators(g):
        for m in all_characteristics(g, "even"):
            for point in points:
                worst = max(worst, transformation_residual(gamma, m, point, target))
                n_checks += 1
    return {
        "genus": g,
        "seed": seed,
        "checks": n_checks,
        "max_residual": worst,
        "tolerance": TRANSFORMATION_TOL,
        "ok": worst < TRANSFORMATION_TOL,
    }


def schottky_degeneration_check(g: int, seed: int, count: int = 20) -> dict:
    """The 2^g-normalized Schottky combination vanishes identically through
    genus 3 and survives at generic genus-4 points while dying on
    four-elliptic blocks."""
    rng = np.random.default_rng(seed)
    report = {"genus": g, "seed": seed, "ok": True}
    if g <= 3:
        rels = [
            schottky_form(random_siegel_point(g, rng)).relative_magnitude for _ in range(count)
        ]
        report["max_relative_magnitude"] = float(max(rels))
        report["threshold"] = SCHOTTKY_VANISH_TOL
        report["ok"] = bool(max(rels) < SCHOTTKY_VANISH_TOL)
        return report
    if g != 4:
        raise ValueError("schottky degeneration check is defined for genus <= 4")
    generic = [
        schottky_form(generic_siegel_point(4, int(rng.integers(0, 2**31)))).relative_magnitude
        for _ in range(count)
    ]
    vanishing = [schottky_form(validate_siegel(1j * np.eye(4))).relative_magnitude]
    for _ in range(5):
        blocks = [random_siegel_point(1, rng) for _ in range(4)]
        point = blocks[0]
        for q in blocks[1:]:
            point = block_diag(point, q)
        vanishing.append(schottky_form(point).relative_magnitude)
    report["min_generic"] = float(min(generic))
    report["generic_floor"] = SCHOTTKY_GENERIC_FLOOR
    report["max_block"] = float(max(vanishing))
    report["block_threshold"] = SCHOTTKY_BLOCK_TOL
    report["ok"] = bool(min(generic) > SCHOTTKY_GENERIC_FLOOR and max(vanishing) < SCHOTTKY_BLOCK_TOL)
    return report
