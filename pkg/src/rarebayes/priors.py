"""Prior densities on the probability simplex.

A prior here is an (unnormalized) density on the K-simplex.  The central
family is :class:`PowerBoundaryPrior`: densities of the form

    density(p) = tilde_pi(p) * prod_k p_k**(alpha_k - 1)

where ``tilde_pi`` is continuous and positive on the closed simplex, i.e.
the density behaves like a power function at the boundary.  Every Dirichlet
distribution is of this form with constant ``tilde_pi``, and finite
Dirichlet mixtures admit closed-form posterior bounds.  The contrasting
:class:`ExpBoundaryPrior` (density proportional to ``exp(-1/p_1)`` on the
2-simplex) decays faster than any power at the boundary and is the standard
counterexample family.

Densities are handled unnormalized throughout; every posterior-mean formula
downstream is a ratio, so normalization constants cancel.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import gammaln, roots_jacobi

__all__ = [
    "SimplexPoint",
    "PowerBoundaryPrior",
    "DirichletPrior",
    "DirichletMixturePrior",
    "ExpBoundaryPrior",
    "ClassifyReport",
    "PriorConfigError",
    "eval_density",
    "classify_power_boundary",
    "induce_two_sided",
    "prior_from_config",
    "load_tilde_pi_grid",
]

# Constructors renormalize inputs whose sum deviates from 1 by at most this.
_SUM_SLACK = 1e-9
_SUM_TOL = 1e-12


class PriorConfigError(ValueError):
    """A prior configuration violates its contract."""


class SimplexPoint:
    """A point of the K-simplex: K coordinates in [0, 1] summing to 1.

    All K coordinates are stored explicitly.  Inputs whose sum deviates
    from 1 by at most 1e-9 are renormalized; larger deviations are
    rejected.
    """

    __slots__ = ("coords",)

    def __init__(self, coords):
        arr = np.asarray(coords, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("a simplex point needs K >= 2 coordinates")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError(f"coordinates must lie in [0, 1]: {arr}")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_SLACK:
            raise ValueError(f"coordinates sum to {total!r}, too far from 1")
        arr = arr / total
        arr.setflags(write=False)
        self.coords = arr

    @property
    def k(self) -> int:
        return self.coords.size

    def __getitem__(self, i: int) -> float:
        return float(self.coords[i])

    def __iter__(self):
        return iter(self.coords.tolist())

    def __repr__(self):
        return f"SimplexPoint({self.coords.tolist()})"

    def __eq__(self, other):
        return isinstance(other, SimplexPoint) and np.array_equal(
            self.coords, other.coords
        )


def _as_alpha(alpha) -> np.ndarray:
    arr = np.asarray(alpha, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError("alpha must be a vector of length K >= 2")
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"all alpha entries must be positive finite: {arr}")
    arr.setflags(write=False)
    return arr


class PowerBoundaryPrior:
    """Prior with power-function boundary behavior.

    ``density(p) = tilde_pi(p) * prod_k p_k**(alpha_k - 1)`` where
    ``tilde_pi`` maps an array of shape (..., K) to positive values of
    shape (...).  It must be evaluable on the closed simplex, boundary
    included.

    Parameters
    ----------
    alpha : sequence of K positive floats
        Boundary exponents.
    tilde_pi : callable
        Vectorized smooth factor; see above.
    tilde_pi_min : float, optional
        Known minimum of ``tilde_pi`` over the simplex.  When omitted it
        is estimated on a grid at first use and flagged as an estimate.
    tilde_pi_min_exact : bool
        Whether ``tilde_pi_min`` is analytic (a certificate) rather than
        a grid estimate.

    Instances are immutable after construction and safe to share across
    workers.
    """

    def __init__(self, alpha, tilde_pi, *, tilde_pi_min=None,
                 tilde_pi_min_exact=False, description="power_boundary"):
        self.alpha = _as_alpha(alpha)
        self.tilde_pi = tilde_pi
        self._tilde_pi_min = None if tilde_pi_min is None else float(tilde_pi_min)
        self.tilde_pi_min_exact = bool(tilde_pi_min_exact) and tilde_pi_min is not None
        self.description = description
        if self._tilde_pi_min is not None and self._tilde_pi_min <= 0.0:
            raise ValueError("tilde_pi_min must be positive")

    @property
    def k(self) -> int:
        return self.alpha.size

    @property
    def alpha_sum(self) -> float:
        return float(self.alpha.sum())

    def tilde_pi_values(self, points: np.ndarray) -> np.ndarray:
        """Evaluate tilde_pi on an (..., K) array of simplex points."""
        vals = np.asarray(self.tilde_pi(np.asarray(points, dtype=float)), dtype=float)
        return vals

    def tilde_pi_min(self, grid_resolution: int = 1024) -> tuple[float, bool]:
        """Return (min estimate, is_exact)."""
        if self._tilde_pi_min is not None:
            return self._tilde_pi_min, self.tilde_pi_min_exact
        grid = simplex_grid(self.k, grid_resolution)
        est = float(np.min(self.tilde_pi_values(grid)))
        if est <= 0.0:
            raise ValueError(
                "tilde_pi is not positive on the simplex grid; the prior does "
                "not have power-function boundary behavior"
            )
        return est, False

    def __repr__(self):
        return f"PowerBoundaryPrior(alpha={self.alpha.tolist()}, {self.description})"


def _const_one(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return np.ones(points.shape[:-1], dtype=float)


class DirichletPrior(PowerBoundaryPrior):
    """Dirichlet prior: constant smooth factor, exponents alpha."""

    def __init__(self, alpha):
        super().__init__(alpha, _const_one, tilde_pi_min=1.0,
                         tilde_pi_min_exact=True, description="dirichlet")

    def __repr__(self):
        return f"DirichletPrior(alpha={self.alpha.tolist()})"


class DirichletMixturePrior:
    """Finite mixture of **normalized** Dirichlet densities.

    Parameters
    ----------
    weights : positive floats summing to 1 (within 1e-12 after renormalizing
        deviations of at most 1e-9).
    params : list of K-vectors of positive floats, one per component.
    support_box : optional (a, A) with 0 <= a <= A bounding every parameter
        entry.  When omitted it is derived as the component-wise (min, max).
    """

    def __init__(self, weights, params, *, support_box=None):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or np.any(w <= 0.0):
            raise ValueError("weights must be positive")
        total = float(w.sum())
        if abs(total - 1.0) > _SUM_SLACK:
            raise ValueError(f"weights sum to {total!r}, too far from 1")
        w = w / total
        p = np.asarray(params, dtype=float)
        if p.ndim != 2 or p.shape[0] != w.size or p.shape[1] < 2:
            raise ValueError("params must be a (components, K) array, K >= 2")
        if np.any(p <= 0.0):
            raise ValueError("all Dirichlet parameters must be positive")
        if support_box is not None:
            a, big_a = (float(support_box[0]), float(support_box[1]))
            if not (0.0 <= a <= big_a < math.inf):
                raise ValueError(f"invalid support box {support_box}")
            if np.any(p < a - 1e-12) or np.any(p > big_a + 1e-12):
                raise ValueError("a parameter entry lies outside the support box")
        else:
            a, big_a = float(p.min()), float(p.max())
        w.setflags(write=False)
        p.setflags(write=False)
        self.weights = w
        self.params = p
        self.support_box = (a, big_a)

    @property
    def k(self) -> int:
        return self.params.shape[1]

    @property
    def alpha(self) -> np.ndarray:
        """Component-wise minimum exponents: the boundary powers."""
        return np.min(self.params, axis=0)

    def __repr__(self):
        return (f"DirichletMixturePrior(weights={self.weights.tolist()}, "
                f"params={self.params.tolist()})")


class ExpBoundaryPrior:
    """Density proportional to exp(-1/p_1) on the 2-simplex.

    Converges to 0 exponentially fast as p_1 -> 0, i.e. faster than any
    power: this family defeats uniform sample-size thresholds.
    """

    k = 2
    kind = "exp_boundary"

    def log_kernel(self, t):
        """log of the unnormalized density at p_1 = t, vectorized."""
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            out = np.where(t > 0.0, -1.0 / np.maximum(t, 1e-300), -np.inf)
        return out

    def __repr__(self):
        return "ExpBoundaryPrior()"


# ---------------------------------------------------------------------------
# Density evaluation
# ---------------------------------------------------------------------------

def eval_density(prior, p: SimplexPoint) -> float:
    """Evaluate the prior density at a simplex point.

    For :class:`PowerBoundaryPrior` (including Dirichlet) and
    :class:`ExpBoundaryPrior` the value is the *unnormalized* kernel; for
    :class:`DirichletMixturePrior` it is the normalized density.  Boundary
    points are rejected when some exponent alpha_k < 1 would make the
    kernel unbounded there.
    """
    if isinstance(p, SimplexPoint):
        coords = p.coords
    else:
        coords = SimplexPoint(p).coords
    if isinstance(prior, ExpBoundaryPrior):
        if coords.size != 2:
            raise ValueError("exp_boundary prior lives on the 2-simplex")
        return float(np.exp(prior.log_kernel(coords[0])))
    if isinstance(prior, DirichletMixturePrior):
        if coords.size != prior.k:
            raise ValueError("dimension mismatch")
        return _mixture_density(prior, coords)
    if isinstance(prior, PowerBoundaryPrior):
        if coords.size != prior.k:
            raise ValueError("dimension mismatch")
        zero = coords == 0.0
        if np.any(zero & (prior.alpha < 1.0)):
            raise ValueError(
                "density is unbounded at this boundary point (alpha_k < 1)"
            )
        tp = float(self_check_positive(prior.tilde_pi_values(coords)))
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pow = (prior.alpha - 1.0) * np.log(coords)
        log_pow = np.where((prior.alpha == 1.0), 0.0, log_pow)
        if np.any(np.isneginf(log_pow)):
            return 0.0
        return tp * float(np.exp(log_pow.sum()))
    raise TypeError(f"unsupported prior type {type(prior)!r}")


def self_check_positive(value):
    v = np.asarray(value, dtype=float)
    if np.any(v <= 0.0) or not np.all(np.isfinite(v)):
        raise ValueError("tilde_pi must evaluate to a positive finite value")
    return value


def _mixture_density(prior: DirichletMixturePrior, coords: np.ndarray) -> float:
    zero = coords == 0.0
    if np.any(zero & (prior.alpha < 1.0)):
        raise ValueError("density is unbounded at this boundary point (alpha_k < 1)")
    total = 0.0
    for w, a in zip(prior.weights, prior.params):
        log_norm = gammaln(a.sum()) - gammaln(a).sum()
        with np.errstate(divide="ignore", invalid="ignore"):
            log_pow = (a - 1.0) * np.log(coords)
        log_pow = np.where(a == 1.0, 0.0, log_pow)
        if np.any(np.isneginf(log_pow)):
            continue
        total += w * math.exp(log_norm + float(log_pow.sum()))
    return total


# ---------------------------------------------------------------------------
# Grids on the simplex
# ---------------------------------------------------------------------------

def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """Lattice {nu / resolution : |nu| = resolution} as an (N, k) array.

    Coordinates are computed from the integer lattice so the trailing
    coordinate is exactly nonnegative.
    """
    if k == 2:
        i = np.arange(resolution + 1)
        return np.stack([i / resolution, (resolution - i) / resolution],
                        axis=-1)
    if k == 3:
        i, j = np.meshgrid(np.arange(resolution + 1), np.arange(resolution + 1),
                           indexing="ij")
        keep = (i + j) <= resolution
        i, j = i[keep], j[keep]
        return np.stack([i / resolution, j / resolution,
                         (resolution - i - j) / resolution], axis=-1)
    # Recursive enumeration; only sensible for small resolution when k > 3.
    points = []

    def rec(prefix, remaining, parts):
        if parts == 1:
            points.append(prefix + [remaining])
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, parts - 1)

    rec([], resolution, k)
    return np.asarray(points, dtype=float) / resolution


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassifyReport:
    """Outcome of checking a prior for power-function boundary behavior.

    ``satisfies`` is "yes" for families where the exponents can be read
    off analytically, "no" for known counterexamples, and "numeric-only"
    when positivity/continuity were only checked on a grid.  Grid-based
    minima are estimates, never certificates.
    """

    satisfies: str                       # "yes" | "no" | "numeric-only"
    alpha: tuple | None
    tilde_pi_min_estimate: float | None
    tilde_pi_min_is_exact: bool = False
    modulus_of_continuity: float | None = None
    modulus_scale: float | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "satisfies": self.satisfies,
            "alpha": None if self.alpha is None else list(self.alpha),
            "tilde_pi_min_estimate": self.tilde_pi_min_estimate,
            "tilde_pi_min_is_exact": self.tilde_pi_min_is_exact,
            "modulus_of_continuity": self.modulus_of_continuity,
            "modulus_scale": self.modulus_scale,
            "notes": self.notes,
        }


def classify_power_boundary(prior, grid_resolution: int = 1024) -> ClassifyReport:
    """Classify a prior's boundary behavior.

    Dirichlet and Dirichlet-mixture priors are certified analytically.
    The exp-boundary family is rejected (exponential boundary decay).
    Generic priors get a grid-based report: minimum estimate plus a
    modulus-of-continuity estimate at the grid scale; finite sampling
    cannot certify an infimum, so the verdict is "numeric-only".
    """
    if isinstance(prior, ExpBoundaryPrior):
        return ClassifyReport(
            satisfies="no", alpha=None, tilde_pi_min_estimate=None,
            notes="exponential boundary decay: density vanishes faster than "
                  "any power as p_1 -> 0",
        )
    if isinstance(prior, DirichletPrior):
        return ClassifyReport(
            satisfies="yes", alpha=tuple(prior.alpha.tolist()),
            tilde_pi_min_estimate=1.0, tilde_pi_min_is_exact=True,
            notes="dirichlet: constant smooth factor",
        )
    if isinstance(prior, DirichletMixturePrior):
        a, big_a = prior.support_box
        return ClassifyReport(
            satisfies="yes", alpha=tuple(prior.alpha.tolist()),
            tilde_pi_min_estimate=None,
            notes=f"dirichlet mixture with parameter box [{a}, {big_a}]: "
                  "closed-form posterior bounds apply",
        )
    if isinstance(prior, PowerBoundaryPrior):
        grid = simplex_grid(prior.k, grid_resolution)
        vals = prior.tilde_pi_values(grid)
        est = float(np.min(vals))
        exact_min, is_exact = (prior._tilde_pi_min, prior.tilde_pi_min_exact) \
            if prior._tilde_pi_min is not None else (est, False)
        if prior.k == 2:
            modulus = float(np.max(np.abs(np.diff(vals))))
        else:
            modulus = float(np.max(np.abs(np.diff(
                prior.tilde_pi_values(simplex_grid(2, grid_resolution) @
                                      _edge_embedding(prior.k))))))
        scale = 1.0 / grid_resolution
        notes = "grid diagnostics only; positivity/continuity not certified"
        if est <= 0.0:
            return ClassifyReport(
                satisfies="numeric-only", alpha=tuple(prior.alpha.tolist()),
                tilde_pi_min_estimate=est, modulus_of_continuity=modulus,
                modulus_scale=scale,
                notes="smooth factor is not bounded away from zero on the "
                      "grid; bracketing certificates unavailable",
            )
        return ClassifyReport(
            satisfies="numeric-only", alpha=tuple(prior.alpha.tolist()),
            tilde_pi_min_estimate=exact_min, tilde_pi_min_is_exact=is_exact,
            modulus_of_continuity=modulus, modulus_scale=scale, notes=notes,
        )
    raise TypeError(f"unsupported prior type {type(prior)!r}")


def _edge_embedding(k: int) -> np.ndarray:
    """Map the 2-simplex onto the (p_1, p_K) edge of the K-simplex."""
    out = np.zeros((2, k))
    out[0, 0] = 1.0
    out[1, -1] = 1.0
    return out


# ---------------------------------------------------------------------------
# Induced two-sided prior
# ---------------------------------------------------------------------------

def induce_two_sided(prior: PowerBoundaryPrior, kbar: int,
                     *, nodes: int = 96, grid_resolution: int = 1024,
                     rel_tol: float = 1e-8) -> PowerBoundaryPrior:
    """Reduce a K-sided prior to the induced prior of (p_kbar, rest).

    The image of the density under p -> (p_kbar, sum of the others) again
    has power-function boundary behavior, with exponents
    (alpha_kbar, sum of the remaining alpha_k).  Its smooth factor is an
    integral over the unit stick of the original smooth factor weighted by
    the remaining exponents; it is evaluated here by tensor Gauss-Jacobi
    quadrature on a stick-breaking parametrization and tabulated on a grid.

    ``kbar`` is a 0-based side index.  Raises if the quadrature fails to
    converge to ``rel_tol`` (estimated by doubling the node count).

    Note: for non-Dirichlet priors the reduced estimator may differ from
    the full-dimensional posterior mean of p_kbar; results computed through
    an induced prior carry that caveat in their metadata.
    """
    if not isinstance(prior, PowerBoundaryPrior):
        raise TypeError("induce_two_sided needs a PowerBoundaryPrior")
    k = prior.k
    if k <= 2:
        raise ValueError("induce_two_sided requires K > 2")
    if k > 6:
        raise ValueError("stick-breaking quadrature supported for K <= 6")
    if not 0 <= kbar < k:
        raise ValueError(f"kbar out of range for K={k}")

    rest = [i for i in range(k) if i != kbar]
    alpha_rest = prior.alpha[rest]
    alpha_out = np.array([float(prior.alpha[kbar]), float(alpha_rest.sum())])

    q1 = np.linspace(0.0, 1.0, grid_resolution + 1)
    coarse = _induced_tilde_pi(prior, kbar, rest, alpha_rest, q1, nodes)
    fine = _induced_tilde_pi(prior, kbar, rest, alpha_rest, q1, 2 * nodes)
    scale = float(np.max(np.abs(fine)))
    err = float(np.max(np.abs(fine - coarse))) / max(scale, 1e-300)
    if err > rel_tol:
        raise ArithmeticError(
            f"stick quadrature did not converge: estimated relative error "
            f"{err:.3e} > {rel_tol:.1e} at {2 * nodes} nodes per dimension"
        )
    if np.any(fine <= 0.0):
        raise ValueError("induced smooth factor is not positive on the grid")

    table = fine.copy()

    def interp(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return np.interp(points[..., 0], q1, table)

    out = PowerBoundaryPrior(
        alpha_out, interp,
        tilde_pi_min=float(np.min(table)) * 1.0, tilde_pi_min_exact=False,
        description=f"induced(side={kbar}) from {prior.description}",
    )
    out.induced_from = prior
    out.induced_side = kbar
    out.quadrature_error_estimate = err
    return out


def _induced_tilde_pi(prior, kbar, rest, alpha_rest, q1, nodes) -> np.ndarray:
    """Tabulate the induced smooth factor at the given q1 values."""
    k = prior.k
    n_sticks = k - 2
    per_dim = max(8, nodes if n_sticks == 1 else min(nodes, 32))

    # Stick-breaking: the weighted integral over {t >= 0, sum t <= 1} with
    # weight prod t_j**(a_j - 1) * (1 - sum t)**(a_last - 1) factorizes into
    # independent 1-D Jacobi-weighted integrals.
    stick_nodes, stick_wts = [], []
    for j in range(n_sticks):
        a_j = float(alpha_rest[j])
        b_j = float(alpha_rest[j + 1:].sum())
        x, w = roots_jacobi(per_dim, b_j - 1.0, a_j - 1.0)
        v = 0.5 * (x + 1.0)                      # node in (0, 1)
        # Jacobi weight on [-1,1] is (1-x)^(b-1) (1+x)^(a-1); rescaling to
        # t in (0,1) multiplies the integral by 2**(1-a-b), a constant that
        # is common to numerator layers; keep it for an exact weight.
        w = w * 0.5 ** (a_j + b_j - 1.0)
        stick_nodes.append(v)
        stick_wts.append(w)

    grids = np.meshgrid(*stick_nodes, indexing="ij")
    wgrids = np.meshgrid(*stick_wts, indexing="ij")
    weight = np.ones_like(wgrids[0])
    for w in wgrids:
        weight = weight * w
    weight = weight.reshape(-1)

    # Fractions of the aggregated mass assigned to each non-kbar side.
    fracs = np.empty((weight.size, k - 1))
    remaining = np.ones(weight.size)
    flat = [g.reshape(-1) for g in grids]
    for j in range(n_sticks):
        fracs[:, j] = remaining * flat[j]
        remaining = remaining * (1.0 - flat[j])
    fracs[:, -1] = remaining

    out = np.empty(q1.size)
    for i, q in enumerate(q1):
        pts = np.zeros((weight.size, k))
        pts[:, kbar] = q
        for j, side in enumerate(rest):
            pts[:, side] = (1.0 - q) * fracs[:, j]
        vals = prior.tilde_pi_values(pts)
        out[i] = float(np.dot(weight, vals))
    return out


# ---------------------------------------------------------------------------
# Registered smooth-factor families and JSON configs
# ---------------------------------------------------------------------------

def _sin_family(offset: float, amplitude: float, frequency: int):
    """tilde_pi(p) = offset + amplitude * sin(frequency * pi * p_1)."""
    if frequency < 1 or frequency != int(frequency):
        raise PriorConfigError("sin family needs an integer frequency >= 1")

    def f(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return offset + amplitude * np.sin(frequency * math.pi * points[..., 0])

    if frequency >= 2:
        lo = offset - abs(amplitude)
    elif amplitude >= 0:
        lo = offset        # sin(pi x) >= 0 on [0, 1]
    else:
        lo = offset + amplitude
    return f, lo


def make_tilde_pi(spec: dict):
    """Build a registered smooth factor; returns (callable, exact_min or None)."""
    family = spec.get("family")
    if family == "constant":
        value = float(spec.get("value", 1.0))
        if value <= 0:
            raise PriorConfigError("constant family needs a positive value")
        return (lambda pts: np.full(np.asarray(pts).shape[:-1], value)), value
    if family == "sin":
        return _sin_family(float(spec.get("offset", 2.0)),
                           float(spec.get("amplitude", 1.0)),
                           int(spec.get("frequency", 1)))
    raise PriorConfigError(f"unknown tilde_pi family {family!r}")


def load_tilde_pi_grid(path, k: int = 2):
    """Load a smooth-factor table from CSV (header p_1..p_{K-1},value).

    Returns a vectorized callable interpolating the table (linear in p_1
    for K=2).  The grid must cover [0, 1] for K=2.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows) < 3:
        raise PriorConfigError(f"grid file {path} is empty or too small")
    header = [c.strip() for c in rows[0]]
    expected = [f"p_{i}" for i in range(1, k)] + ["value"]
    if header != expected:
        raise PriorConfigError(
            f"grid file {path} header {header} != expected {expected}"
        )
    data = np.asarray([[float(c) for c in r] for r in rows[1:]], dtype=float)
    if k != 2:
        raise PriorConfigError("grid-table priors are supported for K=2")
    order = np.argsort(data[:, 0])
    xs, vs = data[order, 0], data[order, 1]
    if xs[0] > 0.0 or xs[-1] < 1.0:
        raise PriorConfigError("grid must cover p_1 in [0, 1]")
    if np.any(vs <= 0.0):
        raise PriorConfigError("grid values must be positive")

    def f(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return np.interp(points[..., 0], xs, vs)

    return f, float(vs.min())


def prior_from_config(config):
    """Build a prior from a JSON config (dict, JSON string, or file path).

    Supported types::

        {"type": "dirichlet", "alpha": [...]}
        {"type": "dirichlet_mixture", "weights": [...], "params": [[...]],
         "support_box": [a, A]?}
        {"type": "exp_boundary"}
        {"type": "grid", "alpha": [...], "tilde_pi_grid_file": "path.csv"}
        {"type": "power_boundary", "alpha": [...],
         "tilde_pi": {"family": "sin"|"constant", ...}}
    """
    if isinstance(config, (str, Path)):
        text = Path(config).read_text() if Path(str(config)).exists() else str(config)
        config = json.loads(text)
    if not isinstance(config, dict):
        raise PriorConfigError("prior config must be a JSON object")
    kind = config.get("type")
    try:
        if kind == "dirichlet":
            return DirichletPrior(config["alpha"])
        if kind == "dirichlet_mixture":
            return DirichletMixturePrior(
                config["weights"], config["params"],
                support_box=config.get("support_box"),
            )
        if kind == "exp_boundary":
            return ExpBoundaryPrior()
        if kind == "grid":
            f, lo = load_tilde_pi_grid(config["tilde_pi_grid_file"],
                                       k=len(config["alpha"]))
            return PowerBoundaryPrior(config["alpha"], f, tilde_pi_min=lo,
                                      tilde_pi_min_exact=False,
                                      description="grid")
        if kind == "power_boundary":
            f, lo = make_tilde_pi(config["tilde_pi"])
            return PowerBoundaryPrior(
                config["alpha"], f, tilde_pi_min=lo,
                tilde_pi_min_exact=lo is not None,
                description=f"power_boundary/{config['tilde_pi'].get('family')}",
            )
    except KeyError as exc:
        raise PriorConfigError(f"prior config missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise PriorConfigError(str(exc)) from exc
    raise PriorConfigError(f"unknown prior type {kind!r}")
