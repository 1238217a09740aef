"""Operating-point searches: best entanglement at fixed loss and success rate,
best purity at fixed entanglement, and the vanishing-success-rate floor per
stage count.

The scalar searches use a 200-point logarithmic grid over the source
squeezing followed by golden-section refinement; the grid guards against the
(empirically valid) assumption that the objective is unimodal on the feasible
interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.optimize import brentq

from . import fock, metrics, moments, nla
from .analytic import (ChannelParams, InfeasibleParameterError, NlaParams,
                       eps_opt_formula, purity_formula, success_prob_1stage)
from .fock import TailMassError
from .nla import DistillationResult

__all__ = [
    "DistillationResult",
    "SweepSpec",
    "UnachievableTargetError",
    "TailMassError",
    "eta_from_pi",
    "eta_candidates",
    "optimize_entanglement",
    "purity_for_target_entanglement",
    "best_entanglement_vs_stages",
]

R_GRID_LO = 1e-4
R_GRID_HI = 3.0
R_GRID_POINTS = 200
GOLDEN_TOL = 1e-8
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# in-loop circuit evaluations aim below the verification tail budget
_TAIL_TARGET = 1e-11
_TAIL_LIMIT = 1e-10
_CIRCUIT_CUTOFF_CAP = 128
_STATE_CUTOFF_CAP = 512

Method = Literal["closed_form", "simulate"]


class UnachievableTargetError(InfeasibleParameterError):
    """Requested entanglement is below the optimum for these constraints."""


@dataclass(frozen=True)
class SweepSpec:
    """One swept axis plus the frozen remaining parameters."""

    axis: Literal["lambda_db", "pi", "n_stages", "eps_target"]
    values: tuple
    fixed: dict

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) == 0:
            raise ValueError("sweep needs at least one value")
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ValueError("sweep values must be strictly monotone")


def eta_from_pi(r: float, lam: float, pi: float) -> float:
    """Invert the one-stage success probability for the transmissivity.

    The relation is linear in eta; raises when the required eta falls outside
    (0, 1), i.e. the success rate is unreachable at this squeezing.
    """
    if pi <= 0.0:
        raise ValueError(f"success probability must be > 0, got {pi}")
    t2 = math.tanh(r) ** 2
    d = (1.0 - lam * t2) ** 2 * math.cosh(r) ** 2
    eta = (1.0 - lam * t2 - pi * d) / (1.0 - t2)
    if not 0.0 < eta < 1.0:
        raise InfeasibleParameterError(
            f"success probability {pi} unreachable at (r={r}, lam={lam}): "
            f"eta would be {eta}")
    return eta


def eta_candidates(r: float, lam: float, pi: float, n_stages: int) -> list[float]:
    """All transmissivities in (0, 1) with the N-stage success probability pi.

    The joint success probability (2^N symmetric patterns, recombination
    ports heralded on vacuum) is a degree-N polynomial in eta; for N = 1 this
    reduces to `eta_from_pi`.  Returns [] when unreachable.
    """
    if n_stages == 1:
        try:
            return [eta_from_pi(r, lam, pi)]
        except InfeasibleParameterError:
            return []
    t2 = math.tanh(r) ** 2
    q = (1.0 - lam) * t2
    ch2rho = 1.0 / (1.0 - lam * t2)  # cosh^2(rho)
    n = n_stages
    # Pi_N(eta) = (cosh^2 rho / cosh^2 r) * sum_j u_j eta^j (1-eta)^(N-j)
    u = [(math.comb(n, j) * math.factorial(j) / n**j) ** 2 * (q * ch2rho) ** j
         for j in range(n + 1)]
    target = pi * math.cosh(r) ** 2 / ch2rho
    coeffs = np.zeros(n + 1)
    for j, uj in enumerate(u):
        # expand eta^j (1-eta)^(N-j)
        for k in range(n - j + 1):
            coeffs[j + k] += uj * math.comb(n - j, k) * (-1.0) ** k
    coeffs[0] -= target
    roots = np.roots(coeffs[::-1])
    out = sorted(float(z.real) for z in roots
                 if abs(z.imag) < 1e-9 and 1e-12 < z.real < 1.0 - 1e-12)
    return out


def _auto_cutoff(r: float, cap: int) -> int:
    chi = math.tanh(r)
    if chi < 0.05:
        need = 12
    else:
        need = max(12, math.ceil(math.log(_TAIL_TARGET) / (2.0 * math.log(chi))) - 1)
    need = min(need, cap)
    return int(math.ceil(need / 8.0) * 8)  # quantized for operator-cache reuse


def _golden_min(f: Callable[[float], float], lo: float, hi: float,
                tol: float) -> float:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _eps_closed_state(r: float, lam: float, eta: float, n_stages: int,
                      cap: int = _CIRCUIT_CUTOFF_CAP) -> float:
    hs = nla.closed_form_state(n_stages, ChannelParams(r, lam), eta,
                               _auto_cutoff(r, cap))
    return metrics.epr_criterion(hs.state, "A", "B").eps_b_given_a


def _eps_circuit(r: float, lam: float, eta: float) -> float:
    hs = nla.single_stage_circuit(ChannelParams(r, lam), eta,
                                  _auto_cutoff(r, _CIRCUIT_CUTOFF_CAP))
    return metrics.epr_criterion(hs.state, "A", "B").eps_b_given_a


def _make_objective(lam: float, pi: float, n_stages: int,
                    method: Method) -> Callable[[float], tuple[float, float]]:
    """Objective r -> (eps_B|A, eta) minimized over the eta level set."""

    def objective(r: float) -> tuple[float, float]:
        etas = eta_candidates(r, lam, pi, n_stages)
        if not etas:
            return math.inf, math.nan
        best = (math.inf, math.nan)
        for eta in etas:
            if n_stages == 1:
                if method == "simulate":
                    e = _eps_circuit(r, lam, eta)
                else:
                    e = eps_opt_formula(r, lam, pi)
            elif method == "closed_form":
                # exact, truncation-free route: ladder algebra on the
                # N-stage closed-form state (cross-checked against the Fock
                # route in the verification suite)
                p = NlaParams(n_stages, eta, ChannelParams(r, lam))
                e = moments.eps_via_moments(n_stages, p.kappa, p.rho)
            else:
                # the closed-form state stands in for the two-stage circuit
                # inside the loop; the full circuit validates the optimum
                e = _eps_closed_state(r, lam, eta, n_stages)
            if e < best[0]:
                best = (e, eta)
        return best

    return objective


def _feasible_grid(objective, lam: float, pi: float, n_stages: int
                   ) -> tuple[np.ndarray, list[tuple[float, float]], np.ndarray]:
    """Feasible grid points, objective values, and run labels.

    The feasible set is usually a single interval in r, but a second pocket
    can open at large squeezing (the gain inversion re-enters (0, 1) on its
    way down), so bracketing is only ever done inside one contiguous run.
    """
    grid = np.geomspace(R_GRID_LO, R_GRID_HI, R_GRID_POINTS)
    feasible = np.array([bool(eta_candidates(r, lam, pi, n_stages)) for r in grid])
    if not feasible.any():
        raise InfeasibleParameterError(
            f"no squeezing in [{R_GRID_LO}, {R_GRID_HI}] reaches success "
            f"probability {pi} at lam={lam} with {n_stages} stage(s)")
    idx = np.flatnonzero(feasible)
    runs = np.concatenate([[0], np.cumsum(np.diff(idx) != 1)])
    sub = grid[idx]
    vals = [objective(r) for r in sub]
    return sub, vals, runs


def _minimize_on_grid(objective, sub, vals, runs) -> tuple[float, float, float]:
    k = int(np.argmin([v[0] for v in vals]))
    in_run = np.flatnonzero(runs == runs[k])
    lo = sub[max(k - 1, in_run[0])]
    hi = sub[min(k + 1, in_run[-1])]
    r_opt = _golden_min(lambda r: objective(r)[0], lo, hi, GOLDEN_TOL) \
        if hi > lo else sub[k]
    eps_opt, eta_opt = objective(r_opt)
    if not math.isfinite(eps_opt):  # boundary roundoff: fall back to grid point
        r_opt = sub[k]
        eps_opt, eta_opt = vals[k]
    return r_opt, eps_opt, eta_opt


def optimize_entanglement(lam: float, pi: float, n_stages: int = 1,
                          method: Method = "closed_form") -> DistillationResult:
    """Best (smallest) eps_B|A over the source squeezing at fixed (lam, pi).

    The success probability is the joint N-stage heralding probability; the
    scissor transmissivity is recovered from it at every probed squeezing.
    """
    _validate_domain(lam, pi, n_stages, method)
    objective = _make_objective(lam, pi, n_stages, method)
    sub, vals, runs = _feasible_grid(objective, lam, pi, n_stages)
    r_opt, eps_opt, eta_opt = _minimize_on_grid(objective, sub, vals, runs)
    return _finalize(r_opt, eta_opt, eps_opt, lam, pi, n_stages, method)


def _validate_domain(lam, pi, n_stages, method):
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"loss reflectivity must be in [0, 1), got {lam}")
    if not 0.0 < pi <= 1.0:
        raise ValueError(f"success probability must be in (0, 1], got {pi}")
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    if method not in ("closed_form", "simulate"):
        raise ValueError(f"unknown method {method!r}")
    if method == "simulate" and n_stages > 2:
        raise ValueError("simulate method exists only for 1 or 2 stages")


def _finalize(r_opt: float, eta_opt: float, eps_opt: float, lam: float,
              pi: float, n_stages: int, method: Method) -> DistillationResult:
    ch = ChannelParams(r_opt, lam)
    cutoff = _auto_cutoff(r_opt, _STATE_CUTOFF_CAP)
    hs = nla.closed_form_state(n_stages, ch, eta_opt, cutoff)
    if hs.state.tail_mass > _TAIL_LIMIT:
        raise TailMassError(
            f"optimum at r={r_opt} leaks tail mass {hs.state.tail_mass:.3e}")
    res = nla.distill_and_measure(hs)
    if n_stages == 1:
        pur = purity_formula(r_opt, lam, pi)
    else:
        pur = res.purity
    if method == "simulate" and n_stages == 2:
        circ = nla.dual_stage_circuit(ch, eta_opt, 8)
        ref = nla.closed_form_state(2, ch, eta_opt, 8)
        if fock.fidelity(circ.state, ref.state) < 1.0 - 1e-6:
            raise AssertionError(
                "two-stage circuit disagrees with the closed form at the optimum")
    return DistillationResult(
        eps_b_given_a=eps_opt,
        eps_a_given_b=res.eps_a_given_b,
        purity=pur,
        success_prob=pi,
        r_opt=r_opt,
        eta_opt=eta_opt,
        n_stages=n_stages,
    )


def purity_for_target_entanglement(eps_target: float, lam: float, pi: float,
                                   n_stages: int = 1, method: Method = "closed_form",
                                   full_output: bool = False):
    """Purest operating point delivering exactly ``eps_target``.

    Finds every squeezing with eps(r, lam, pi) = eps_target on the feasible
    interval (generically one root below and one above the entanglement
    optimum) and returns the root with maximal purity; ``full_output=True``
    additionally returns all roots' results.
    """
    _validate_domain(lam, pi, n_stages, method)
    if eps_target <= 0.0:
        raise ValueError("target entanglement must be positive")
    objective = _make_objective(lam, pi, n_stages, method)
    sub, vals, runs = _feasible_grid(objective, lam, pi, n_stages)
    _, eps_min, _ = _minimize_on_grid(objective, sub, vals, runs)
    # the r = 0 edge is always feasible and reaches eps = 1 exactly (vacuum
    # input); the log grid cannot contain it
    sub = np.concatenate([[0.0], sub])
    vals = [objective(0.0)] + vals
    runs = np.concatenate([[runs[0]], runs])
    eps_vals = np.array([v[0] for v in vals])
    if eps_target < eps_min:
        raise UnachievableTargetError(
            f"target {eps_target} below the optimum {eps_min:.6f} reachable "
            f"at lam={lam}, pi={pi}, {n_stages} stage(s)")

    roots: list[float] = []
    f = lambda r: objective(r)[0] - eps_target
    diffs = eps_vals - eps_target
    for i in range(len(sub) - 1):
        if runs[i] != runs[i + 1]:
            continue  # never bridge disjoint feasible pockets
        lo_v, hi_v = diffs[i], diffs[i + 1]
        if abs(lo_v) < 1e-14:
            roots.append(float(sub[i]))
        elif lo_v * hi_v < 0.0:
            roots.append(float(brentq(f, sub[i], sub[i + 1], xtol=1e-12)))
    if abs(diffs[-1]) < 1e-14:
        roots.append(float(sub[-1]))
    if not roots:
        raise InfeasibleParameterError(
            f"no squeezing reaches eps={eps_target} at lam={lam}, pi={pi}")
    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-9:
            deduped.append(r)
    roots = deduped

    results = []
    for r in roots:
        _, eta = objective(r)
        res = _finalize(r, eta, eps_target, lam, pi, n_stages, method)
        results.append(res)
    best = max(results, key=lambda dr: dr.purity)
    return (best, results) if full_output else best


def best_entanglement_vs_stages(n_max: int) -> list[tuple[int, float, float]]:
    """Vanishing-success-rate entanglement floor per stage count.

    For each N minimizes eps_B|A of the normalized pure state
    (1 + (kappa/N) a'b')^N |0> over the pair amplitude kappa; an N-photon
    cutoff represents these states exactly.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = []
    for n in range(1, n_max + 1):
        def eps_of(kappa: float, n=n) -> float:
            st = nla.truncated_pair_state(n, kappa)
            return metrics.epr_criterion(st, "A", "B").eps_b_given_a

        hi = 4.0
        while True:
            grid = np.geomspace(1e-3, hi, R_GRID_POINTS)
            vals = [eps_of(k) for k in grid]
            k = int(np.argmin(vals))
            if k < len(grid) - 2 or hi >= 64.0:
                break
            hi *= 2.0
        kappa_best = _golden_min(eps_of, grid[max(k - 1, 0)],
                                 grid[min(k + 1, len(grid) - 1)], GOLDEN_TOL)
        out.append((n, eps_of(kappa_best), kappa_best))
    return out
