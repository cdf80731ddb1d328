"""Laws of the per-chain timing-noise difference between the two traders.

On each chain the race compares boosted arrival scores ``s_1 + e_1`` and
``s_2 + e_2``, so every analytic quantity depends on the noise only through
the difference of the two per-trader terms. This module parameterizes that
difference directly: four symmetric uni-modal families with density, CDF,
quantile, and reproducible sampling. Symmetry pins the fair-race baseline:
the CDF at zero is exactly one half for every family, so equal signals win
with probability 1/2 per chain.

The Monte Carlo engine draws per-trader terms instead, because the
separate-sequencer game needs an independent race on every chain.
``trader_noise`` maps uniforms to a per-trader law whose difference
reproduces the configured difference law exactly:

* ``normal``   per-trader Normal with scale sigma/sqrt(2)
* ``logistic`` per-trader Gumbel(scale); the difference of two independent
  Gumbels is logistic
* ``laplace``  per-trader Exponential(scale); the difference of two
  independent exponentials is Laplace
* ``uniform``  no per-trader law yields a uniform difference, so the engine
  draws the difference directly and splits it antisymmetrically, which is
  distributionally equivalent in a two-trader race

Sampling is counter-based (see :mod:`seqlab.rng`): draw ``i`` is a pure
function of ``(seed, i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit, ndtr, ndtri

from .errors import ConfigError, ParameterError
from .rng import uniform_stream

_SQRT_2PI = math.sqrt(2.0 * math.pi)

FAMILIES = ("normal", "logistic", "laplace", "uniform")


def _scalar_or_array(x, out: np.ndarray):
    return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class NoiseModel:
    """Symmetric uni-modal law of the score-noise difference on one chain.

    ``param`` is the single positive shape parameter of the family: the
    standard deviation for ``normal``, the scale for ``logistic`` and
    ``laplace``, and the half-width of the support for ``uniform``.
    """

    family: str
    param: float

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown noise family {self.family!r}; expected one of {FAMILIES}")
        if not (isinstance(self.param, (int, float)) and math.isfinite(self.param) and self.param > 0):
            raise ParameterError(f"{self.family} noise needs a positive finite parameter, got {self.param!r}")
        object.__setattr__(self, "param", float(self.param))

    @property
    def spec(self) -> str:
        """Config-string form, e.g. ``normal:1.0``."""
        return f"{self.family}:{self.param:.12g}"

    def density_at_zero(self) -> float:
        b = self.param
        if self.family == "normal":
            return 1.0 / (_SQRT_2PI * b)
        if self.family == "logistic":
            return 0.25 / b
        # laplace and uniform share the same peak height for a given scale
        return 0.5 / b

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        b = self.param
        if self.family == "normal":
            out = np.exp(-0.5 * (x / b) ** 2) / (_SQRT_2PI * b)
        elif self.family == "logistic":
            p = expit(x / b)
            out = p * (1.0 - p) / b
        elif self.family == "laplace":
            out = np.exp(-np.abs(x) / b) / (2.0 * b)
        else:
            out = np.where(np.abs(x) <= b, 0.5 / b, 0.0)
        return _scalar_or_array(x, out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        b = self.param
        if self.family == "normal":
            out = ndtr(x / b)
        elif self.family == "logistic":
            out = expit(x / b)
        elif self.family == "laplace":
            out = np.where(
                x < 0,
                0.5 * np.exp(np.minimum(x, 0.0) / b),
                1.0 - 0.5 * np.exp(-np.maximum(x, 0.0) / b),
            )
        else:
            out = np.clip((x + b) / (2.0 * b), 0.0, 1.0)
        return _scalar_or_array(x, out)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        b = self.param
        with np.errstate(divide="ignore"):
            if self.family == "normal":
                out = b * ndtri(p)
            elif self.family == "logistic":
                out = b * logit(p)
            elif self.family == "laplace":
                out = np.where(p < 0.5, b * np.log(2.0 * p), -b * np.log(2.0 * (1.0 - p)))
            else:
                out = b * (2.0 * p - 1.0)
        return _scalar_or_array(p, out)

    def sample_delta(self, seed: int, count: int, start: int = 0) -> np.ndarray:
        """Draws of the difference law at stream indices ``[start, start+count)``."""
        return np.asarray(self.quantile(uniform_stream(seed, start, count)))

    @property
    def has_trader_law(self) -> bool:
        return self.family != "uniform"

    def trader_noise(self, u):
        """Per-trader noise terms from uniforms; differences have this law."""
        if self.family == "normal":
            return ndtri(u) * (self.param / math.sqrt(2.0))
        if self.family == "logistic":
            return -self.param * np.log(-np.log(u))
        if self.family == "laplace":
            return -self.param * np.log(u)
        raise ParameterError("uniform noise has no per-trader decomposition; sample the difference directly")


def parse_noise(text: str) -> NoiseModel:
    """Parse a noise spec of the form ``family:param``, e.g. ``normal:0.5``."""
    name, sep, arg = text.partition(":")
    name = name.strip().lower()
    if not sep or not arg.strip():
        raise ConfigError(f"noise spec {text!r} must look like 'family:param', e.g. 'normal:1.0'")
    try:
        param = float(arg)
    except ValueError:
        raise ConfigError(f"bad noise parameter {arg!r} in {text!r}") from None
    return NoiseModel(name, param)
