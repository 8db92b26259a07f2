import numpy as np
import pytest

from hypermetric.holomap import Const, HoloMap, Var, add, div, mul, pow_


def poly_expr(coeffs):
    """Expression for sum_k coeffs[k] * z1^k."""
    terms = None
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            term = Const(complex(c))
        else:
            term = mul(Const(complex(c)), pow_(Var(0), k))
        terms = term if terms is None else add(terms, term)
    return terms if terms is not None else Const(0j)


def random_disk_selfmaps(count, seed, max_degree=4):
    """Seeded rational maps that provably send the unit disk into itself.

    Denominators 1 + q(z) with sum |q_j| <= 0.5 have no zeros near the
    closed disk; the numerator is scaled by 1.05 times the maximum modulus
    on a dense boundary grid, which dominates the true supremum by the
    Bernstein derivative bound.
    """
    rng = np.random.default_rng(seed)
    circle = np.exp(2j * np.pi * np.arange(4096) / 4096)
    maps = []
    while len(maps) < count:
        deg = int(rng.integers(1, max_degree + 1))
        p = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        if rng.random() < 0.5:
            dq = int(rng.integers(1, 3))
            q = rng.normal(size=dq) + 1j * rng.normal(size=dq)
            s = np.abs(q).sum()
            if s > 0.5:
                q *= 0.5 / s
            qc = np.concatenate([[1.0 + 0j], q])
        else:
            qc = np.array([1.0 + 0j])
        vals = np.polyval(p[::-1], circle) / np.polyval(qc[::-1], circle)
        sup = float(np.abs(vals).max())
        if sup == 0:
            continue
        p = p / (1.05 * sup)
        num = poly_expr(p)
        expr = num if len(qc) == 1 else div(num, poly_expr(qc))
        maps.append(HoloMap(1, (expr,)))
    return maps


def central_diff_jvp(f, z, v, h=1e-5):
    """Finite-difference oracle for the directional derivative."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return (f.eval_array(z + h * v) - f.eval_array(z - h * v)) / (2 * h)


@pytest.fixture
def rng():
    return np.random.default_rng(20240824)
