"""The three stratifying modular forms and the transformation-law residual.

With E the even characteristics of genus g and theta_m = theta_m(0, tau):

    F_T        = 2^g sum_E theta_m^16 - (sum_E theta_m^8)^2   (16 = 2^4 at g = 4)
    Theta_null = prod_E theta_m
    F_1        = sum_E prod_{n != m} theta_n^8

F_1 is evaluated as the sum of exclusion products, never by dividing
Theta_null^8 by theta_m^8, so it stays well defined on the vanishing loci
the stratification cares about.

All three are computed from theta constants rescaled by their root mean
square s = sqrt(mean |theta_m|^2) > 0, which keeps the arithmetic in
range; `value` and `normalizer` are reported on the raw scale and may
under- or overflow double precision for the high-degree forms (F_1 has
degree 8(|E|-1) = 1080 at genus 4), so log-scale companions carry the
exact magnitudes.  `relative_magnitude` is the stable vanishing
diagnostic:

    F_T:        |F_T| / (sum |theta|^16 + (sum |theta|^8)^2)
    Theta_null: |Theta_null| / s^|E|
    F_1:        |F_1| / (|E| s^{8(|E|-1)})
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chars import Characteristic, even_count
from .symplectic import SymplecticInteger, affine_action
from .theta import SiegelPoint, even_theta_constants, siegel_action, theta_constant

__all__ = [
    "FormValue",
    "FORM_IDS",
    "schottky_form",
    "theta_null_product",
    "f1_form",
    "evaluate_forms",
    "form_weight",
    "transformation_residual",
]

FORM_IDS = ("FT", "THETANULL", "F1")
FORM_GENUS_CAP = 6
_RESIDUAL_FLOOR = 1e-12


@dataclass(frozen=True)
class FormValue:
    """A form evaluation with its vanishing diagnostics.

    log_abs and log_normalizer are natural logs of |value| and normalizer;
    they remain finite (or -inf for an exact zero) even where the raw
    floats under- or overflow.
    """

    form_id: str
    value: complex
    normalizer: float
    relative_magnitude: float
    log_abs: float
    log_normalizer: float


def _safe_exp_complex(log_mag: float, phase: complex) -> complex:
    if log_mag == -math.inf:
        return 0j
    if log_mag > 709:
        return complex(math.inf, 0)
    return math.exp(log_mag) * phase


def _rescaled_constants(point: SiegelPoint, target: float, constants=None):
    if constants is None:
        constants = even_theta_constants(point, target)
    values = np.array([tv.value for tv in constants.values()])
    s = math.sqrt(float((np.abs(values) ** 2).mean()))
    return values / s, s


def _check_genus(point: SiegelPoint):
    if point.genus > FORM_GENUS_CAP:
        raise ValueError(f"forms are capped at genus {FORM_GENUS_CAP}, got {point.genus}")


def evaluate_forms(point: SiegelPoint, target: float = 1e-10, constants=None) -> dict[str, FormValue]:
    """All three stratifying forms from one shared theta-constant pass;
    `constants` may carry a precomputed even_theta_constants result."""
    _check_genus(point)
    g = point.genus
    n = even_count(g)
    t, s = _rescaled_constants(point, target, constants)
    log_s = math.log(s)
    out = {}

    t8 = t**8
    t16 = t8**2
    f_hat = (2**g) * t16.sum() - t8.sum() ** 2
    n_hat = float(np.abs(t16).sum() + np.abs(t8).sum() ** 2)
    log_abs = (math.log(float(abs(f_hat))) if f_hat != 0 else -math.inf) + 16 * log_s
    out["FT"] = FormValue(
        "FT",
        complex(f_hat * s**16),
        n_hat * s**16,
        float(abs(f_hat)) / n_hat,
        log_abs,
        math.log(n_hat) + 16 * log_s,
    )

    with np.errstate(divide="ignore"):
        log_t = np.log(np.abs(t))
    log_prod = float(log_t.sum())
    rel = math.exp(log_prod) if log_prod > -708 else 0.0
    prod_hat = np.prod(t)
    phase = prod_hat / abs(prod_hat) if prod_hat != 0 else 1.0
    out["THETANULL"] = FormValue(
        "THETANULL",
        _safe_exp_complex(log_prod + n * log_s, phase),
        math.exp(min(n * log_s, 709.0)),
        rel,
        log_prod + n * log_s,
        n * log_s,
    )

    # Exclusion products prod_{n != m} t8_n without division.  Each one is
    # bounded by e^4 in modulus (AM-GM on the unit-RMS t), but partial
    # products are not, so exact zeros are split off and the rest runs in
    # log space.
    zero = t8 == 0
    n_zero = int(zero.sum())
    if n_zero >= 2:
        f1_hat = 0j
    elif n_zero == 1:
        f1_hat = complex(np.prod(t8[~zero]))
    else:
        logs = np.log(t8.astype(complex))
        f1_hat = complex(np.exp(logs.sum() - logs).sum())
    log_scale = 8 * (n - 1) * log_s
    log_abs = (math.log(abs(f1_hat)) if f1_hat != 0 else -math.inf) + log_scale
    phase = f1_hat / abs(f1_hat) if f1_hat != 0 else 1.0
    out["F1"] = FormValue(
        "F1",
        _safe_exp_complex(log_abs, phase),
        math.exp(min(math.log(n) + log_scale, 709.0)),
        abs(f1_hat) / n,
        log_abs,
        math.log(n) + log_scale,
    )
    return out


def schottky_form(point: SiegelPoint, target: float = 1e-10) -> FormValue:
    """2^g sum theta^16 - (sum theta^8)^2; its vanishing locus at genus 4
    is the closure of the Jacobian locus, and the form is identically zero
    for genus <= 3."""
    return evaluate_forms(point, target)["FT"]


def theta_null_product(point: SiegelPoint, target: float = 1e-10) -> FormValue:
    """Product of all even theta constants."""
    return evaluate_forms(point, target)["THETANULL"]


def f1_form(point: SiegelPoint, target: float = 1e-10) -> FormValue:
    """sum_m prod_{n != m} theta_n^8, the division-free form of
    sum_m Theta_null^8 / theta_m^8."""
    return evaluate_forms(point, target)["F1"]


def form_weight(form_id: str, g: int) -> int:
    """Modular weight, derived as (theta factors per term) / 2 after
    checking every term carries the same factor count."""
    n = even_count(g)
    factor_counts = {
        "FT": (16, 16),  # theta^16 terms and the squared theta^8 sum
        "THETANULL": (n,),
        "F1": (8 * (n - 1),),
    }[form_id]
    count = factor_counts[0]
    if any(c != count for c in factor_counts):
        raise AssertionError(f"inconsistent factor counts for {form_id}: {factor_counts}")
    if count % 2:
        raise AssertionError(f"odd factor count {count} has no integer weight")
    return count // 2


def transformation_residual(
    gamma: SymplecticInteger,
    m: Characteristic,
    point: SiegelPoint,
    target: float = 1e-10,
) -> float:
    """Relative defect of the eighth-power transformation law

        theta_{gamma.m}(0, gamma o tau)^8 = det(C tau + D)^4 theta_m(0, tau)^8,

    where gamma.m is the calibrated affine action (the label rides with
    the transformed point; on the standard generators, each congruent to
    its own inverse mod 2, this coincides with placing the moved label on
    the untransformed side, but for general words only this orientation
    holds).  Returns |lhs - rhs| / (|lhs| + |rhs| + 1e-12).
    """
    if gamma.genus != point.genus or m.genus != point.genus:
        raise ValueError("genus mismatch among gamma, m, tau")
    moved_point = siegel_action(gamma, point)
    moved_char = affine_action(gamma.mod_two(), m)
    lhs = theta_constant(moved_char, moved_point, target).value ** 8
    c = np.array(gamma.c, dtype=complex)
    d = np.array(gamma.d, dtype=complex)
    det = complex(np.linalg.det(c @ point.tau + d))
    rhs = det**4 * theta_constant(m, point, target).value ** 8
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + _RESIDUAL_FLOOR)
