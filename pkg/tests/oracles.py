"""Independent reference implementations used as test oracles.

Everything here is deliberately primitive (plain Python loops, cmath) and
shares no code with the package's evaluation paths.
"""

import cmath
import itertools
import math


def brute_force_parity_census(g):
    """(even, odd) counts by enumerating all 2^(2g) characteristics."""
    even = odd = 0
    for bits in itertools.product((0, 1), repeat=2 * g):
        eps, delta = bits[:g], bits[g:]
        if sum(e * d for e, d in zip(eps, delta)) % 2 == 0:
            even += 1
        else:
            odd += 1
    return even, odd


def direct_theta_sum(eps, delta, z, tau_rows, radius):
    """Box-truncated theta sum via scalar cmath arithmetic."""
    g = len(eps)
    total = 0j
    for n in itertools.product(range(-radius, radius + 1), repeat=g):
        p = [ni + ei / 2 for ni, ei in zip(n, eps)]
        quad = sum(p[i] * tau_rows[i][j] * p[j] for i in range(g) for j in range(g))
        lin = sum(pi * (zi + di / 2) for pi, zi, di in zip(p, z, delta))
        total += cmath.exp(1j * math.pi * (quad + 2 * lin))
    return total


def direct_theta_constant(m, point, radius):
    """Oracle for theta_m(0, tau) at an explicit truncation radius."""
    rows = [[complex(x) for x in row] for row in point.tau]
    return direct_theta_sum(m.eps, m.delta, [0.0] * m.genus, rows, radius)


def shell_tail_bound(g, lam, radius, z_im_norm=0.0):
    """Reference shell-sum bound, summed until terms are negligible."""
    total, s = 0.0, radius
    while True:
        shell = (2 * s + 1) ** g - (2 * s - 1) ** g
        t = s - 0.5
        term = shell * math.exp(-math.pi * lam * t * t + 2 * math.pi * t * z_im_norm)
        total += term
        if term == 0.0 or term < total * 1e-18:
            return total
        s += 1


def min_eig_2x2(a, b, c):
    """Closed-form smallest eigenvalue of [[a, b], [b, c]]."""
    return (a + c) / 2 - math.sqrt(((a - c) / 2) ** 2 + b * b)
