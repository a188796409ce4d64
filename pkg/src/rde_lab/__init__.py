"""Monte Carlo toolkit for Brownian motion in a drifted Brownian potential.

Exact squared-Bessel and Jacobi samplers, Brownian local-time identities,
random-environment hitting-time constructions, and a batch verifier that
checks closed-form laws, moments, and polynomial tail exponents.
"""

__version__ = "0.1.0"

from .rng import RngStream  # noqa: F401
