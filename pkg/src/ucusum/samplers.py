"""Distribution families used by the theory layer and the simulation harness.

Draws come from numpy's ``Generator``: PCG64 bit streams and ziggurat
normals. Keeping to those two pieces keeps simulated tables reproducible
across runs and machines.

A :class:`Distribution` is an immutable description; a :class:`Sampler`
pairs one with its own generator state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
    "Distribution",
    "Sampler",
    "bivariate_normal_sampler",
    "parse_distribution",
    "resolve_param",
    "substream",
]

# family -> (parameter names, defaults for trailing parameters, bivariate)
_FAMILIES = {
    "normal": (("mu", "sigma"), (0.0, 1.0), False),
    "uniform": (("a", "b"), (0.0, 1.0), False),
    "exponential": (("scale",), (1.0,), False),
    "t": (("df", "loc", "scale"), (3.0, 0.0, 1.0), False),
    "bvnormal": (("rho", "mu1", "mu2", "sd1", "sd2"), (0.0, 0.0, 0.0, 1.0, 1.0), True),
    "tabulated": ((), (), False),
}
_ALIASES = {"student_t": "t", "gaussian": "normal", "bivariate_normal": "bvnormal"}


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator keyed by ``(seed, index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


@dataclass(frozen=True)
class Distribution:
    """A named distribution with an optional affine transform.

    Observations are ``loc + scale * Z`` where ``Z`` is drawn from the base
    family. For bivariate families ``negate_second`` flips the sign of the
    second coordinate (used for the Kendall symmetry check).
    """

    family: str
    params: Tuple[float, ...] = ()
    loc: float = 0.0
    scale: float = 1.0
    negate_second: bool = False
    values: Optional[Tuple] = field(default=None, repr=False)

    def __post_init__(self):
        fam = _ALIASES.get(self.family, self.family)
        if fam not in _FAMILIES:
            raise ConfigurationError(f"unknown distribution family {self.family!r}")
        object.__setattr__(self, "family", fam)
        names, defaults, _ = _FAMILIES[fam]
        params = tuple(float(p) for p in self.params)
        if len(params) > len(names):
            raise ConfigurationError(f"{fam} takes at most {len(names)} parameters")
        params = params + tuple(defaults[len(params):])
        object.__setattr__(self, "params", params)
        p = dict(zip(names, params))
        if fam == "normal" and p["sigma"] <= 0:
            raise ConfigurationError("normal sigma must be positive")
        if fam == "uniform" and not p["b"] > p["a"]:
            raise ConfigurationError("uniform needs a < b")
        if fam == "exponential" and p["scale"] <= 0:
            raise ConfigurationError("exponential scale must be positive")
        if fam == "t" and (p["df"] <= 0 or p["scale"] <= 0):
            raise ConfigurationError("t needs positive df and scale")
        if fam == "bvnormal":
            if not abs(p["rho"]) < 1:
                raise DomainError(f"correlation must satisfy |rho| < 1, got {p['rho']}")
            if p["sd1"] <= 0 or p["sd2"] <= 0:
                raise ConfigurationError("bvnormal standard deviations must be positive")
        if fam == "tabulated":
            if not self.values:
                raise ConfigurationError("tabulated distribution needs values")
            vals = np.asarray(self.values, dtype=float)
            if not np.all(np.isfinite(vals)):
                raise ConfigurationError("tabulated values must be finite")
            object.__setattr__(
                self, "values", tuple(map(tuple, vals)) if vals.ndim == 2 else tuple(vals)
            )
        if self.scale <= 0:
            raise ConfigurationError("scale transform must be positive")

    @property
    def bivariate(self) -> bool:
        if self.family == "tabulated":
            return np.asarray(self.values).ndim == 2
        return _FAMILIES[self.family][2]

    def shifted(self, by: float) -> "Distribution":
        return Distribution(
            self.family, self.params, self.loc + by, self.scale, self.negate_second, self.values
        )

    def scaled(self, c: float) -> "Distribution":
        return Distribution(
            self.family, self.params, self.loc * c, self.scale * c, self.negate_second, self.values
        )

    def flipped(self) -> "Distribution":
        return Distribution(
            self.family, self.params, self.loc, self.scale, not self.negate_second, self.values
        )

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        fam, p = self.family, self.params
        if fam == "normal":
            z = p[0] + p[1] * rng.standard_normal(size)
        elif fam == "uniform":
            z = p[0] + (p[1] - p[0]) * rng.random(size)
        elif fam == "exponential":
            z = p[0] * rng.standard_exponential(size)
        elif fam == "t":
            z = p[1] + p[2] * rng.standard_t(p[0], size)
        elif fam == "bvnormal":
            rho, mu1, mu2, sd1, sd2 = p
            w = rng.standard_normal((size, 2))
            z = np.empty((size, 2))
            z[:, 0] = mu1 + sd1 * w[:, 0]
            z[:, 1] = mu2 + sd2 * (rho * w[:, 0] + math.sqrt(1.0 - rho * rho) * w[:, 1])
        else:
            vals = np.asarray(self.values, dtype=float)
            z = vals[rng.integers(0, len(vals), size)]
        z = self.loc + self.scale * z
        if self.negate_second:
            z[:, 1] = -z[:, 1]
        return z

    def to_dict(self) -> dict:
        d = {"family": self.family, "params": list(self.params)}
        if self.loc != 0.0:
            d["loc"] = self.loc
        if self.scale != 1.0:
            d["scale"] = self.scale
        if self.negate_second:
            d["negate_second"] = True
        if self.values is not None:
            d["values"] = [list(v) if isinstance(v, tuple) else v for v in self.values]
        return d


class Sampler:
    """A distribution bound to its own seeded generator."""

    def __init__(self, dist: Distribution, seed: int):
        self.dist = dist
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def draw(self, size: int) -> np.ndarray:
        return self.dist.sample(self.rng, size)

    def __repr__(self):
        return f"Sampler({self.dist!r}, seed={self.seed})"


def bivariate_normal_sampler(rho_corr: float, seed: int) -> Sampler:
    """Standard bivariate normal with correlation ``rho_corr``.

    ``Y1 = Z1``, ``Y2 = rho Z1 + sqrt(1 - rho^2) Z2`` with ziggurat normals.
    """
    return Sampler(Distribution("bvnormal", (rho_corr,)), seed)


def resolve_param(value, n: Optional[int] = None) -> float:
    """Turn a number or a tagged height rule into a number.

    Rules: ``{"rule": "fixed", "value": v}``, ``{"rule": "sigma_local", "c": c}``
    giving ``1 + c / sqrt(n)``, and ``{"rule": "rho_local", "c": c}`` giving
    ``c / sqrt(n)``.
    """
    if isinstance(value, dict):
        rule = value.get("rule")
        if rule == "fixed":
            return float(value["value"])
        if rule in ("sigma_local", "rho_local"):
            if n is None:
                raise ConfigurationError(f"rule {rule!r} needs a sample size")
            if "c" not in value:
                raise ConfigurationError(f"rule {rule!r} is missing key 'c'")
            c = float(value["c"]) / math.sqrt(n)
            return 1.0 + c if rule == "sigma_local" else c
        raise ConfigurationError(f"unknown height rule {rule!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"cannot interpret parameter {value!r}") from None


def parse_distribution(spec, n: Optional[int] = None) -> Distribution:
    """Build a :class:`Distribution` from ``"family:p1,p2"`` or a JSON-style dict.

    Dict form: ``{"family": "normal", "params": [0, {"rule": "sigma_local", "c": 3}]}``
    plus optional ``loc``, ``scale``, ``negate_second`` and ``values``.
    """
    if isinstance(spec, Distribution):
        return spec
    if isinstance(spec, str):
        fam, _, rest = spec.partition(":")
        params: Sequence = [p for p in rest.split(",") if p.strip()] if rest else []
        try:
            return Distribution(fam.strip(), tuple(float(p) for p in params))
        except ValueError as exc:
            if isinstance(exc, (ConfigurationError, DomainError)):
                raise
            raise ConfigurationError(f"bad distribution string {spec!r}") from None
    if not isinstance(spec, dict) or "family" not in spec:
        raise ConfigurationError(f"distribution spec needs a 'family' key: {spec!r}")
    params = tuple(resolve_param(p, n) for p in spec.get("params", ()))
    return Distribution(
        spec["family"],
        params,
        loc=resolve_param(spec.get("loc", 0.0), n),
        scale=resolve_param(spec.get("scale", 1.0), n),
        negate_second=bool(spec.get("negate_second", False)),
        values=tuple(map(tuple, spec["values"])) if spec.get("values") and isinstance(spec["values"][0], list)
        else (tuple(spec["values"]) if spec.get("values") else None),
    )
