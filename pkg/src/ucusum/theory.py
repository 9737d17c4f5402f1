"""Parameters of a one-change alternative and the limits they imply.

For a change from ``F`` to ``G`` the kernel defines three numbers

    theta_F  = E h(X, X'),   theta_G = E h(Y, Y'),   theta_FG = E h(X, Y')

and the eccentricity ``rho = theta_FG - (theta_F + theta_G) / 2``. Under a
fixed alternative at fraction ``tau*`` the ``1/n``-scaled difference
processes converge uniformly to the deterministic curves :func:`psi1` and
:func:`psi2`; their difference is ``rho`` times a positive factor, so the
sign of ``rho`` relative to ``theta_G - theta_F`` decides which test is
more powerful.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigurationError, DomainError
from .kernels import Kernel
from .samplers import Distribution, Sampler

__all__ = [
    "ThetaTriple",
    "DriftSpec",
    "ArgmaxConsistency",
    "TheoryReport",
    "theta_mc",
    "gmd_normal_triple",
    "variance_rho",
    "covariance_rho",
    "kendall_normal_theta",
    "psi1",
    "psi2",
    "psi_diff",
    "phi_local",
    "power_ranking",
    "argmax_consistency",
    "limit_variances",
    "psi_grid",
    "theory_report",
]

FIRST_VS_FULL = "first_vs_full"
FIRST_VS_LAST = "first_vs_last"
EQUAL = "equal"
NO_THETA_CHANGE = "no_theta_change"


@dataclass(frozen=True)
class ThetaTriple:
    """``(theta_F, theta_G, theta_FG)`` with the eccentricity derived exactly.

    The standard errors are set only for Monte Carlo estimates. ``se_rho``
    and ``se_diff`` refer to ``rho`` and ``theta_G - theta_F``.
    """

    theta_f: float
    theta_g: float
    theta_fg: float
    rho: float = field(init=False)
    se_f: Optional[float] = None
    se_g: Optional[float] = None
    se_fg: Optional[float] = None
    se_rho: Optional[float] = None
    se_diff: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(
            self, "rho", self.theta_fg - (self.theta_f + self.theta_g) / 2.0
        )

    @property
    def estimated(self) -> bool:
        return self.se_rho is not None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DriftSpec:
    tau_star: float
    theta_f: float
    theta_g: float
    rho: float
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.tau_star < 1.0:
            raise DomainError(f"tau_star must lie in (0, 1), got {self.tau_star}")

    @classmethod
    def from_triple(cls, triple: ThetaTriple, tau_star: float, delta: float = 0.0):
        return cls(tau_star, triple.theta_f, triple.theta_g, triple.rho, delta)


class ArgmaxConsistency(NamedTuple):
    fvf_ok: bool
    fvl_ok: bool
    note: str = ""


# -- theta triples -----------------------------------------------------------


def _as_dist(s) -> Distribution:
    return s.dist if isinstance(s, Sampler) else s


def theta_mc(kernel: Kernel, dist_f, dist_g, m: int = 1_000_000, seed: int = 0) -> ThetaTriple:
    """Monte Carlo estimate of the theta triple from ``m`` independent pairs.

    Standard errors are ``sd / sqrt(m)`` of the per-pair terms; ``se_rho``
    uses the per-pair eccentricity ``h(X,Y') - (h(X,X') + h(Y,Y')) / 2``.
    """
    if m < 1000:
        raise ConfigurationError(f"theta_mc needs m >= 1000, got {m}")
    f, g = _as_dist(dist_f), _as_dist(dist_g)
    rng = np.random.default_rng(seed)
    x, x2 = f.sample(rng, m), f.sample(rng, m)
    y, y2 = g.sample(rng, m), g.sample(rng, m)
    hff = kernel.pairwise(x, x2)
    hgg = kernel.pairwise(y, y2)
    hfg = kernel.pairwise(x, y2)
    root = math.sqrt(m)

    def se(v):
        return float(np.std(v, ddof=1) / root)

    return ThetaTriple(
        float(hff.mean()),
        float(hgg.mean()),
        float(hfg.mean()),
        se_f=se(hff),
        se_g=se(hgg),
        se_fg=se(hfg),
        se_rho=se(hfg - 0.5 * (hff + hgg)),
        se_diff=se(hgg - hff),
    )


def gmd_normal_triple(sigma1: float, sigma2: float) -> ThetaTriple:
    """Exact triple for ``|x - y|`` with ``F = N(0, sigma1^2)``, ``G = N(0, sigma2^2)``.

    Uses ``E|N(0, s^2)| = s sqrt(2/pi)``; the difference of independent normals
    has variance ``sigma1^2 + sigma2^2``.
    """
    if sigma1 <= 0 or sigma2 <= 0:
        raise DomainError("standard deviations must be positive")
    c = 2.0 / math.sqrt(math.pi)
    return ThetaTriple(
        c * sigma1, c * sigma2, c * math.sqrt(0.5 * (sigma1**2 + sigma2**2))
    )


def variance_rho(mu_f: float, mu_g: float) -> float:
    """Eccentricity of the sample-variance kernel: half the squared mean shift."""
    return 0.5 * (mu_f - mu_g) ** 2


def covariance_rho(mean_f, mean_g) -> float:
    (xf, yf), (xg, yg) = mean_f, mean_g
    return 0.5 * (xf - xg) * (yf - yg)


def kendall_normal_theta(rho_corr: float) -> float:
    """Kendall's tau of a bivariate normal: ``(2/pi) arcsin(rho)``."""
    if not abs(rho_corr) < 1.0:
        raise DomainError(f"correlation must satisfy |rho| < 1, got {rho_corr}")
    return 2.0 / math.pi * math.asin(rho_corr)


# -- drift functions ---------------------------------------------------------


def _grid(t):
    t = np.asarray(t, dtype=float)
    if np.any((t < 0.0) | (t > 1.0)):
        raise DomainError("t must lie in [0, 1]")
    return t


def _out(t, v):
    return float(v) if np.ndim(t) == 0 else v


def psi1(t, spec: DriftSpec):
    """Uniform limit of ``D^F_n([nt]) / n`` under a fixed alternative."""
    ta = _grid(t)
    tau, d, rho = spec.tau_star, spec.theta_f - spec.theta_g, spec.rho
    with np.errstate(divide="ignore", invalid="ignore"):
        left = ta * (1 - tau) * d - 2 * ta * tau * (1 - tau) * rho
        right = (
            (1 - ta) * tau * d
            + 2 * (ta - tau) / ta * tau * rho
            - 2 * ta * tau * (1 - tau) * rho
        )
    v = np.where(ta < tau, left, right)
    v = np.where((ta == 0.0) | (ta == 1.0), 0.0, v)
    return _out(t, v)


def psi2(t, spec: DriftSpec):
    """Uniform limit of ``D^L_n([nt]) / n`` under a fixed alternative."""
    ta = _grid(t)
    tau, d, rho = spec.tau_star, spec.theta_f - spec.theta_g, spec.rho
    with np.errstate(divide="ignore", invalid="ignore"):
        left = ta * (1 - tau) * d - 2 * ta * (tau - ta) / (1 - ta) * (1 - tau) * rho
        right = (
            (1 - ta) * tau * d
            + 2 * (ta - tau) / ta * tau * rho
            - 2 * (ta - tau) * tau * rho
        )
    v = np.where(ta < tau, left, right)
    v = np.where((ta == 0.0) | (ta == 1.0), 0.0, v)
    return _out(t, v)


def psi_diff(t, spec: DriftSpec):
    """Closed form of ``psi2 - psi1``."""
    ta = _grid(t)
    tau, rho = spec.tau_star, spec.rho
    with np.errstate(divide="ignore", invalid="ignore"):
        left = 2 * ta**2 * (1 - tau) ** 2 / (1 - ta) * rho
    right = 2 * (1 - ta) * tau**2 * rho
    v = np.where(ta < tau, left, right)
    v = np.where((ta == 0.0) | (ta == 1.0), 0.0, v)
    return _out(t, v)


def phi_local(t, tau_star: float, delta: float):
    """Tent-shaped drift of the ``1/sqrt(n)``-scaled processes under local alternatives."""
    ta = _grid(t)
    if not 0.0 < tau_star < 1.0:
        raise DomainError(f"tau_star must lie in (0, 1), got {tau_star}")
    v = np.where(ta < tau_star, ta * (1 - tau_star) * delta, (1 - ta) * tau_star * delta)
    return _out(t, v)


# -- criteria ------------------------------------------------------------------


def power_ranking(triple: ThetaTriple, tol: Optional[float] = None) -> str:
    """Which test the fixed-alternative limits favour.

    ``tol`` is the threshold below which ``|rho|`` counts as zero; it defaults
    to three standard errors for Monte Carlo triples and to 0 for exact ones.
    The same multiple of ``se_diff`` decides whether ``theta_F == theta_G``.
    """
    if tol is None:
        tol = 3.0 * triple.se_rho if triple.estimated else 0.0
    diff_tol = 3.0 * triple.se_diff if triple.se_diff is not None else 0.0
    dtheta = triple.theta_g - triple.theta_f
    if abs(triple.rho) <= tol:
        return EQUAL
    if abs(dtheta) <= diff_tol:
        return NO_THETA_CHANGE
    return FIRST_VS_FULL if (triple.rho > 0) == (dtheta > 0) else FIRST_VS_LAST


def argmax_consistency(triple: ThetaTriple, tau_star: float) -> ArgmaxConsistency:
    """Check the sufficient conditions for a unique maximum of ``|psi|`` at ``tau*``.

    First-vs-full uses strict bounds, first-vs-last a non-strict one.
    """
    if not 0.0 < tau_star < 1.0:
        raise DomainError(f"tau_star must lie in (0, 1), got {tau_star}")
    tf, tg, rho = triple.theta_f, triple.theta_g, triple.rho
    if tf == tg:
        return ArgmaxConsistency(False, False, "theta_F == theta_G: conditions do not apply")
    tau = tau_star
    denom = 2.0 * (tau - 1.0 + 1.0 / tau)
    if tf > tg:
        fvf = (tg - tf) / 2.0 < rho < (tf - tg) / denom
    else:
        fvf = (tf - tg) / denom < rho < (tg - tf) / 2.0
    bound = 0.5 * min(tau / (1 - tau), (1 - tau) / tau) * abs(tf - tg)
    fvl = abs(rho) <= bound
    return ArgmaxConsistency(bool(fvf), bool(fvl))


# -- limit variances -----------------------------------------------------------


def _mean_against(kernel: Kernel, x: np.ndarray, pool: np.ndarray) -> np.ndarray:
    """``mean_j h(x_i, pool_j)`` for every ``x_i``."""
    q = len(pool)
    if kernel.name == "gmd":
        ps = np.sort(pool)
        csum = np.concatenate(([0.0], np.cumsum(ps)))
        c = np.searchsorted(ps, x)
        return (x * (2 * c - q) - 2 * csum[c] + csum[-1]) / q
    if kernel.name == "variance":
        d = x - pool.mean()
        return 0.5 * (d * d + pool.var())
    out = np.empty(len(x))
    chunk = max(1, 2_000_000 // q)
    for s in range(0, len(x), chunk):
        xs = x[s : s + chunk]
        a = xs[:, None, :] if kernel.bivariate else xs[:, None]
        b = pool[None, :, :] if kernel.bivariate else pool[None, :]
        out[s : s + chunk] = np.asarray(kernel.func(a, b), dtype=float).mean(axis=1)
    return out


def limit_variances(kernel: Kernel, dist_f, dist_g, tau_star: float, m: int = 100_000, seed: int = 0):
    """Variances of the normal limits of both statistics under a fixed alternative.

    ``h_F`` and ``h_G`` are approximated by averages over one shared inner pool
    of ``ceil(sqrt(m))`` draws from ``F`` and ``G``; the outer variances use
    ``m`` draws. The inner averaging inflates the variances by roughly
    ``Var h / sqrt(m)``.
    """
    if not 0.0 < tau_star < 1.0:
        raise DomainError(f"tau_star must lie in (0, 1), got {tau_star}")
    f, g = _as_dist(dist_f), _as_dist(dist_g)
    rng = np.random.default_rng(seed)
    q = int(math.ceil(math.sqrt(m)))
    pool_f, pool_g = f.sample(rng, q), g.sample(rng, q)
    x, y = f.sample(rng, m), g.sample(rng, m)
    hf_x = _mean_against(kernel, x, pool_f)
    hg_x = _mean_against(kernel, x, pool_g)
    hg_y = _mean_against(kernel, y, pool_g)
    tau = tau_star
    var_hg_y = np.var(hg_y, ddof=1)
    var_z1 = 4 * tau * np.var(hf_x - tau * hg_x, ddof=1) + 4 * tau**2 * (1 - tau) * var_hg_y
    var_z2 = 4 * tau * (1 - tau) ** 2 * np.var(hf_x, ddof=1) + 4 * tau**2 * (1 - tau) * var_hg_y
    return float(var_z1), float(var_z2)


# -- reports -------------------------------------------------------------------


def psi_grid(spec: DriftSpec, points: int = 101) -> np.ndarray:
    """Array of rows ``(t, psi1(t), psi2(t))`` on an even grid of [0, 1]."""
    t = np.linspace(0.0, 1.0, points)
    return np.column_stack([t, psi1(t, spec), psi2(t, spec)])


@dataclass
class TheoryReport:
    kernel: str
    tau_star: float
    triple: ThetaTriple
    ranking: str
    fvf_location_consistent: bool
    fvl_location_consistent: bool
    consistency_note: str = ""
    psi: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        d = {
            "kernel": self.kernel,
            "tau_star": self.tau_star,
            **self.triple.to_dict(),
            "ranking": self.ranking,
            "fvf_location_consistent": self.fvf_location_consistent,
            "fvl_location_consistent": self.fvl_location_consistent,
            "consistency_note": self.consistency_note,
            "tests_consistent": bool(
                self.triple.rho != 0.0 or self.triple.theta_f != self.triple.theta_g
            ),
        }
        if self.psi is not None:
            d["psi"] = {
                "t": self.psi[:, 0].tolist(),
                "psi1": self.psi[:, 1].tolist(),
                "psi2": self.psi[:, 2].tolist(),
            }
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def psi_csv(self, which: str = "psi1") -> str:
        """Two-column CSV ``t,value`` of one drift curve."""
        if self.psi is None:
            raise ConfigurationError("report was built without a psi grid")
        col = {"psi1": 1, "psi2": 2}[which]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", which])
        for row in self.psi:
            w.writerow([repr(float(row[0])), repr(float(row[col]))])
        return buf.getvalue()


def theory_report(
    kernel: Kernel,
    triple: ThetaTriple,
    tau_star: float = 0.5,
    grid_points: Optional[int] = None,
) -> TheoryReport:
    cons = argmax_consistency(triple, tau_star)
    psi = psi_grid(DriftSpec.from_triple(triple, tau_star), grid_points) if grid_points else None
    return TheoryReport(
        kernel.name, tau_star, triple, power_ranking(triple), cons.fvf_ok, cons.fvl_ok, cons.note, psi
    )
