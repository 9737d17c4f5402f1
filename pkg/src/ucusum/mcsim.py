"""Seeded Monte Carlo harness for rejection frequencies and trajectories.

Replication ``r`` of a scenario draws its data from a generator keyed by
``(seed, r)``, so results do not depend on how replications are split
across worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .cptest import FIRST_VS_FULL, FIRST_VS_LAST, run_both
from .errors import ConfigurationError, DegenerateVarianceError
from .kernels import builtin_kernel
from .lrv import CUBE_ROOT, LrvConfig
from .samplers import parse_distribution, substream
from .theory import DriftSpec, psi1, psi2, theta_mc
from .uproc import diff_processes

__all__ = [
    "Scenario",
    "PowerRow",
    "PowerTable",
    "change_index",
    "draw_series",
    "replicate",
    "run_scenario",
    "run_scenarios",
    "trajectory_bundle",
    "table_scenarios",
    "load_scenarios",
]

_SCENARIO_KEYS = {
    "label", "kernel", "n", "tau_star", "pre", "post", "runs", "seed", "alpha", "lrv",
}


def change_index(n: int, tau_star: Optional[float]) -> int:
    """Number of pre-change observations, ``floor(n * tau_star)``."""
    if tau_star is None:
        return n
    return int(math.floor(n * tau_star + 1e-9))


@dataclass(frozen=True)
class Scenario:
    """One simulation design.

    ``pre`` and ``post`` are distribution specs (strings like ``"normal:0,1"``
    or dicts whose parameters may be height rules, see
    :func:`ucusum.samplers.resolve_param`). ``tau_star=None`` is the null
    hypothesis: all observations come from ``pre``.
    """

    kernel: str
    n: int
    pre: object
    post: object = None
    tau_star: Optional[float] = None
    runs: int = 2000
    seed: int = 0
    alpha: float = 0.05
    lrv: LrvConfig = field(default_factory=LrvConfig)
    label: str = ""

    def __post_init__(self):
        builtin_kernel(self.kernel)
        if int(self.n) != self.n or self.n < 8:
            raise ConfigurationError(f"n: need an integer >= 8, got {self.n!r}")
        if int(self.runs) != self.runs or self.runs < 1:
            raise ConfigurationError(f"runs: need a positive integer, got {self.runs!r}")
        if self.tau_star is not None:
            if not 0.0 < self.tau_star < 1.0:
                raise ConfigurationError(f"tau_star: must lie in (0, 1), got {self.tau_star!r}")
            if self.post is None:
                raise ConfigurationError("post: required when tau_star is set")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha: must lie in (0, 1), got {self.alpha!r}")
        # fail early on bad distribution specs
        self.pre_dist()
        self.post_dist()

    def pre_dist(self):
        return parse_distribution(self.pre, self.n)

    def post_dist(self):
        return parse_distribution(self.post, self.n) if self.post is not None else None

    @property
    def cut(self) -> int:
        return change_index(self.n, self.tau_star)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "kernel": self.kernel,
            "n": self.n,
            "tau_star": self.tau_star,
            "pre": self.pre,
            "post": self.post,
            "runs": self.runs,
            "seed": self.seed,
            "alpha": self.alpha,
            "lrv": {
                "bandwidth": self.lrv.bandwidth,
                "window": self.lrv.window,
                "variant": self.lrv.variant,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        if not isinstance(d, dict):
            raise ConfigurationError("scenario must be a JSON object")
        unknown = set(d) - _SCENARIO_KEYS
        if unknown:
            raise ConfigurationError(f"unknown scenario key(s): {sorted(unknown)}")
        for key in ("kernel", "n", "pre"):
            if key not in d:
                raise ConfigurationError(f"missing scenario key {key!r}")
        kw = {k: d[k] for k in _SCENARIO_KEYS if k in d and k != "lrv"}
        lrv = d.get("lrv", {})
        if not isinstance(lrv, dict):
            raise ConfigurationError("lrv: must be an object")
        bad = set(lrv) - {"bandwidth", "window", "variant"}
        if bad:
            raise ConfigurationError(f"unknown lrv key(s): {sorted(bad)}")
        kw["lrv"] = LrvConfig(**lrv)
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from None


def load_scenarios(text: str) -> List[Scenario]:
    """Parse a scenario file: one object, a list, or ``{"scenarios": [...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "scenarios" in doc:
        doc = doc["scenarios"]
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list):
        raise ConfigurationError("scenario file must hold an object or a list")
    return [Scenario.from_dict(d) for d in doc]


def draw_series(s: Scenario, replication: int) -> np.ndarray:
    """Data of one replication: ``cut`` draws from ``pre`` then the rest from ``post``."""
    rng = substream(s.seed, replication)
    pre = s.pre_dist()
    if s.tau_star is None:
        return pre.sample(rng, s.n)
    cut = s.cut
    a = pre.sample(rng, cut)
    b = s.post_dist().sample(rng, s.n - cut)
    return np.concatenate([a, b])


def replicate(s: Scenario, indices: Optional[Sequence[int]] = None) -> Iterator:
    """Yield ``(r, fvf_report, fvl_report)``; reports are ``None`` when the
    variance estimate degenerates."""
    kernel = builtin_kernel(s.kernel)
    for r in range(s.runs) if indices is None else indices:
        x = draw_series(s, r)
        try:
            fvf, fvl = run_both(x, kernel, s.lrv)
        except DegenerateVarianceError:
            yield r, None, None
            continue
        yield r, fvf, fvl


def _count(args):
    s, lo, hi = args
    rej_f = rej_l = degenerate = 0
    for _, fvf, fvl in replicate(s, range(lo, hi)):
        if fvf is None:
            degenerate += 1
            continue
        rej_f += fvf.p_value <= s.alpha
        rej_l += fvl.p_value <= s.alpha
    return rej_f, rej_l, degenerate


@dataclass(frozen=True)
class PowerRow:
    label: str
    kernel: str
    n: int
    tau_star: Optional[float]
    method: str
    rejections: int
    runs: int
    degenerate: int

    @property
    def frequency(self) -> float:
        return self.rejections / self.runs

    @property
    def se(self) -> float:
        p = self.frequency
        return math.sqrt(p * (1.0 - p) / self.runs)


@dataclass
class PowerTable:
    rows: List[PowerRow] = field(default_factory=list)

    def extend(self, other: "PowerTable") -> None:
        self.rows.extend(other.rows)

    def lookup(self, label: str, n: int, tau_star, method: str) -> PowerRow:
        for r in self.rows:
            if r.label == label and r.n == n and r.tau_star == tau_star and r.method == method:
                return r
        raise KeyError((label, n, tau_star, method))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(
            ["label", "kernel", "n", "tau_star", "method", "frequency", "se",
             "rejections", "runs", "degenerate"]
        )
        for r in self.rows:
            w.writerow([
                r.label, r.kernel, r.n, "" if r.tau_star is None else r.tau_star, r.method,
                repr(r.frequency), repr(r.se), r.rejections, r.runs, r.degenerate,
            ])
        return buf.getvalue()

    def to_text(self) -> str:
        """Rejection frequencies in percent: one line per (scenario, location,
        method), one column per sample size."""
        ns = sorted({r.n for r in self.rows})
        keys = []
        for r in self.rows:
            key = (r.label, r.tau_star, r.method)
            if key not in keys:
                keys.append(key)
        cells = {(r.label, r.tau_star, r.method, r.n): r for r in self.rows}
        short = {FIRST_VS_FULL: "FvsF", FIRST_VS_LAST: "FvsL"}
        lw = max([len("Scenario")] + [len(k[0]) for k in keys])
        head = f"{'Scenario':<{lw}}  {'tau*':>5}  {'test':>5} |" + "".join(f"{n:>8}" for n in ns)
        lines = [head, "-" * len(head)]
        prev = None
        for label, tau, method in keys:
            shown = label if label != prev else ""
            prev = label
            tau_s = "" if tau is None else f"{tau:g}"
            vals = "".join(
                f"{100 * cells[(label, tau, method, n)].frequency:8.1f}"
                if (label, tau, method, n) in cells else f"{'':>8}"
                for n in ns
            )
            lines.append(f"{shown:<{lw}}  {tau_s:>5}  {short.get(method, method):>5} |{vals}")
        return "\n".join(lines) + "\n"


def run_scenario(s: Scenario, workers: int = 1, chunk: int = 250) -> PowerTable:
    """Rejection frequencies of both methods.

    Degenerate-variance replications count as non-rejections and are reported
    in ``PowerRow.degenerate``.
    """
    bounds = [(s, lo, min(lo + chunk, s.runs)) for lo in range(0, s.runs, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_count, bounds))
    else:
        parts = [_count(b) for b in bounds]
    rej_f = sum(p[0] for p in parts)
    rej_l = sum(p[1] for p in parts)
    deg = sum(p[2] for p in parts)
    return PowerTable([
        PowerRow(s.label, s.kernel, s.n, s.tau_star, FIRST_VS_FULL, rej_f, s.runs, deg),
        PowerRow(s.label, s.kernel, s.n, s.tau_star, FIRST_VS_LAST, rej_l, s.runs, deg),
    ])


def run_scenarios(scenarios: Sequence[Scenario], workers: int = 1) -> PowerTable:
    table = PowerTable()
    for s in scenarios:
        table.extend(run_scenario(s, workers=workers))
    return table


# -- trajectories --------------------------------------------------------------


@dataclass
class TrajectoryBundle:
    t: np.ndarray
    dF: np.ndarray
    dL: np.ndarray
    psi1: Optional[np.ndarray] = None
    psi2: Optional[np.ndarray] = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        with_psi = self.psi1 is not None
        w.writerow(["t", "dF", "dL"] + (["psi1", "psi2"] if with_psi else []))
        for i in range(len(self.t)):
            row = [repr(float(self.t[i])), repr(float(self.dF[i])), repr(float(self.dL[i]))]
            if with_psi:
                row += [repr(float(self.psi1[i])), repr(float(self.psi2[i]))]
            w.writerow(row)
        return buf.getvalue()


def trajectory_bundle(
    s: Scenario,
    drift: Optional[DriftSpec] = None,
    replication: int = 0,
    mc: int = 1_000_000,
) -> TrajectoryBundle:
    """One realisation of ``D^F_n(k)/n`` and ``D^L_n(k)/n`` with the fixed-alternative limits.

    Without ``drift`` the theta triple of the scenario's two distributions is
    estimated by Monte Carlo (``mc`` pairs). Null scenarios get no overlay.
    """
    kernel = builtin_kernel(s.kernel)
    x = draw_series(s, replication)
    diff = diff_processes(kernel, x)
    t = diff.k / diff.n
    dF, dL = diff.scaled("n")
    if s.tau_star is None and drift is None:
        return TrajectoryBundle(t, dF, dL)
    if drift is None:
        triple = theta_mc(kernel, s.pre_dist(), s.post_dist(), mc, s.seed)
        drift = DriftSpec.from_triple(triple, s.tau_star)
    return TrajectoryBundle(t, dF, dL, psi1(t, drift), psi2(t, drift))


# -- published simulation designs -----------------------------------------------------


def table_scenarios(
    kernel: str,
    ns: Sequence[int] = (63, 250, 1000, 4000),
    runs: int = 2000,
    seed: int = 20260215,
    lrv: LrvConfig = LrvConfig(CUBE_ROOT),
    kendall_large_runs: Optional[int] = 500,
) -> List[Scenario]:
    """Scenarios of the published rejection-frequency tables.

    ``gmd``/``variance``: N(0,1) null; scale 1 -> 1 + 3/sqrt(n) (Alternative 1)
    and back (Alternative 2) at tau* in {0.25, 0.5, 0.75}.
    ``kendall``: bivariate normal correlations c/sqrt(n) changing at tau* = 0.5.
    Kendall designs with n >= 4000 are capped at ``kendall_large_runs`` runs
    (``None`` lifts the cap) because the kernel has no fast path.
    """
    out = []
    for n in ns:
        if kernel == "kendall" and n >= 4000 and kendall_large_runs is not None:
            n_runs = min(runs, kendall_large_runs)
        else:
            n_runs = runs
        if kernel in ("gmd", "variance"):
            base = {"family": "normal", "params": [0, 1]}
            local = {"family": "normal", "params": [0, {"rule": "sigma_local", "c": 3.0}]}
            out.append(Scenario(kernel, n, base, None, None, n_runs, seed, lrv=lrv, label="Null hypothesis"))
            for tau in (0.25, 0.5, 0.75):
                out.append(Scenario(kernel, n, base, local, tau, n_runs, seed, lrv=lrv, label="Alternative 1"))
            for tau in (0.25, 0.5, 0.75):
                out.append(Scenario(kernel, n, local, base, tau, n_runs, seed, lrv=lrv, label="Alternative 2"))
        elif kernel == "kendall":
            def bv(c):
                return {"family": "bvnormal", "params": [{"rule": "rho_local", "c": c}]}
            out.append(Scenario(kernel, n, bv(-3.0), None, None, n_runs, seed, lrv=lrv, label="NH"))
            for label, c1, c2 in (
                ("Alternative 1", -3.0, 3.0),
                ("Alternative 2", 0.0, 6.0),
                ("Alternative 3", -6.0, 0.0),
            ):
                out.append(Scenario(kernel, n, bv(c1), bv(c2), 0.5, n_runs, seed, lrv=lrv, label=label))
        else:
            raise ConfigurationError(f"no published design for kernel {kernel!r}")
    return out


def with_runs(scenarios: Sequence[Scenario], runs: int) -> List[Scenario]:
    return [replace(s, runs=runs) for s in scenarios]
