import numpy as np
import pytest

from trivortex import VortexConfig, validate_strengths
from trivortex.shape_algebra import s_gamma_basis


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_strengths(rng, positive=True, lo=1e-2, hi=1e2):
    """Log-uniform strengths; positive triples are always compact/admissible."""
    g = np.exp(rng.uniform(np.log(lo), np.log(hi), 3))
    if not positive:
        g = g * rng.choice([-1.0, 1.0], 3)
    return validate_strengths(*g)


def random_config(rng, min_side=0.05, scale=1.0):
    """A collision-free configuration with all squared sides above min_side."""
    while True:
        z = scale * (rng.normal(size=3) + 1j * rng.normal(size=3))
        sides = [abs(z[0] - z[1]) ** 2, abs(z[1] - z[2]) ** 2, abs(z[2] - z[0]) ** 2]
        if min(sides) > min_side:
            return VortexConfig(z)


def random_family_parameter(rng, s):
    """A random nonzero element of the admissible parameter plane."""
    v1, v2 = s_gamma_basis(s)
    while True:
        c = rng.normal(size=2)
        x = c[0] * v1 + c[1] * v2
        if np.linalg.norm(x) > 1e-6:
            return x


def centered(cfg, s):
    """Shift a configuration so its center of vorticity is at the origin."""
    z0 = (s.gamma_array @ cfg.z) / s.gamma_tot
    return VortexConfig(cfg.z - z0)


EQUILATERAL = VortexConfig(np.exp(2j * np.pi * np.arange(3) / 3))
FIG_STRENGTHS = (0.08904, 0.28196, 0.629)
