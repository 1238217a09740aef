"""Heralded amplifier output states.

Two constructions of the same physics:

* brute-force circuit simulations of the one- and two-stage scissor networks
  (entangled source, loss beamsplitter, ancilla photon injection, heralding
  detection patterns, recombination), and
* the closed-form heralded states (1 + (kappa/N) a'b')^N sigma_AL^rho |0>
  for any stage count, expanded with exact binomial coefficients.

Each heralds on one concrete detection pattern; the success probability folds
in the 2^N symmetric patterns, whose branches coincide after the documented
phase compensation on the amplified mode.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from . import fock, metrics
from .analytic import ChannelParams, NlaParams
from .fock import TailMassError

__all__ = [
    "HeraldedState",
    "DistillationResult",
    "single_stage_circuit",
    "dual_stage_circuit",
    "closed_form_state",
    "truncated_pair_state",
    "distill_and_measure",
]

_PATTERNS = ((1, 0), (0, 1))


@dataclass(frozen=True)
class HeraldedState:
    """Unnormalized heralded branch plus its bookkeeping.

    ``success_prob`` equals ``pattern_count * norm_sq(state)``: the stored
    branch is the one for a single concrete detection pattern, and the other
    symmetric patterns contribute equal probability.
    """

    state: fock.PureState
    success_prob: float
    pattern_count: int


@dataclass(frozen=True)
class DistillationResult:
    """Observables of one operating point of the distiller."""

    eps_b_given_a: float
    eps_a_given_b: float
    purity: float
    success_prob: float
    r_opt: float = math.nan
    eta_opt: float = math.nan
    n_stages: int = 0


def _flip_odd(state: fock.PureState, mode: str) -> fock.PureState:
    """Negate amplitudes with odd photon number in one mode (pi phase)."""
    ax = state.axis(mode)
    amps = state.amps.copy()
    sl = [slice(None)] * amps.ndim
    sl[ax] = slice(1, None, 2)
    amps[tuple(sl)] *= -1.0
    return fock.PureState(state.modes, state.cutoffs, amps, tail_mass=state.tail_mass)


def _check_pattern(pattern) -> tuple[int, int]:
    pattern = tuple(pattern)
    if pattern not in _PATTERNS:
        raise ValueError(f"detection pattern must be (1,0) or (0,1), got {pattern}")
    return pattern


def _scissor(state: fock.PureState, signal: str, photon: str, vac: str,
             eta: float, pattern: tuple[int, int]) -> fock.PureState:
    """One quantum scissor: eta-splitter on the ancilla pair, 50:50 mix of the
    signal with the reflected arm, herald on the detection pattern.

    The ancilla photon ends in mode ``photon``, which becomes the scissor
    output; a pi phase shows up on its one-photon component for the (0,1)
    pattern and is compensated here.
    """
    state = fock.apply_beamsplitter(state, (vac, photon), eta)
    state = fock.herald_beamsplitter(state, (signal, vac), 0.5, pattern)
    if pattern == (0, 1):
        state = _flip_odd(state, photon)
    return state


def _check_tail(state: fock.PureState, tail_budget) -> None:
    if tail_budget is not None and state.tail_mass > tail_budget:
        raise TailMassError(
            f"truncation tail {state.tail_mass:.3e} exceeds budget {tail_budget:.0e}; "
            f"raise the cutoff")


def single_stage_circuit(channel: ChannelParams, eta: float, cutoff: int,
                         pattern=(1, 0), tail_budget: float | None = None
                         ) -> HeraldedState:
    """Full circuit: EPR source, loss on one arm, one scissor on the lossy arm.

    Mode budget is exact: the ancilla modes hold at most one photon and the
    heralding projection reads only the one-photon sector, so nothing beyond
    the source truncation is ever clipped.  A ``tail_budget`` turns excess
    truncation loss into a TailMassError.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1), got {eta}")
    pattern = _check_pattern(pattern)
    st = fock.epr_state(channel.chi, ("A", "Ap"), cutoff)
    st = fock.tensor(st, fock.vacuum(["VL"], [cutoff]))
    # vacuum-first ordering keeps the loss-arm amplitudes positive
    st = fock.apply_beamsplitter(st, ("VL", "Ap"), 1.0 - channel.lam)
    st = fock.tensor(st, fock.fock_state(["P", "V"], [1, 1], [1, 0]))
    st = _scissor(st, "Ap", "P", "V", eta, pattern)
    st = fock.rename_modes(st, {"VL": "L", "P": "B"})
    st = fock.reorder_modes(st, ("A", "B", "L"))
    _check_tail(st, tail_budget)
    return HeraldedState(st, success_prob=2.0 * fock.norm_sq(st), pattern_count=2)


def dual_stage_circuit(channel: ChannelParams, eta: float, cutoff: int,
                       patterns=((1, 0), (1, 0)),
                       tail_budget: float | None = None) -> HeraldedState:
    """Two parallel scissors on the 50:50-split lossy arm, coherently recombined.

    The recombination beamsplitter's unused port is projected on vacuum and
    folded into the success probability; both scissors are heralded on the
    given patterns (four symmetric combinations in total).
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must be in (0, 1), got {eta}")
    if cutoff > 12:
        warnings.warn(
            "dual_stage_circuit above cutoff 12 is memory-heavy "
            "(eight-mode simulation)", RuntimeWarning, stacklevel=2)
    p1, p2 = (_check_pattern(p) for p in patterns)
    st = fock.epr_state(channel.chi, ("A", "Ap"), cutoff)
    st = fock.tensor(st, fock.vacuum(["VL"], [cutoff]))
    st = fock.apply_beamsplitter(st, ("VL", "Ap"), 1.0 - channel.lam)
    # split the lossy arm evenly onto the two scissor inputs
    st = fock.tensor(st, fock.vacuum(["W"], [cutoff]))
    st = fock.apply_beamsplitter(st, ("W", "Ap"), 0.5)
    # scissor outputs need room for two photons at the recombiner
    st = fock.tensor(st, fock.fock_state(["P1", "V1"], [2, 1], [1, 0]))
    st = _scissor(st, "Ap", "P1", "V1", eta, p1)
    st = fock.tensor(st, fock.fock_state(["P2", "V2"], [2, 1], [1, 0]))
    st = _scissor(st, "W", "P2", "V2", eta, p2)
    st = fock.apply_beamsplitter(st, ("P1", "P2"), 0.5)
    st = fock.project_fock(st, "P2", 0)
    st = fock.rename_modes(st, {"VL": "L", "P1": "B"})
    st = fock.reorder_modes(st, ("A", "B", "L"))
    _check_tail(st, tail_budget)
    return HeraldedState(st, success_prob=4.0 * fock.norm_sq(st), pattern_count=4)


def closed_form_state(n_stages: int, channel: ChannelParams, eta: float,
                      cutoff: int) -> HeraldedState:
    """Heralded branch (1 + (kappa/N) a'b')^N sigma_AL^rho |0> at exact scale.

    The binomial is expanded with exact integer coefficients; the overall
    amplitude generalizes the one- and two-stage prefactors as
    cosh(rho)/cosh(r) * ((1-eta)/2)^(N/2), each scissor contributing one
    factor sqrt((1-eta)/2).
    """
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    params = NlaParams(n_stages, eta, channel)
    kappa, rho = params.kappa, params.rho
    n = n_stages
    scale = (math.cosh(rho) / math.cosh(channel.r)) * ((1.0 - eta) / 2.0) ** (n / 2.0)
    tl = math.tanh(rho)
    sech = 1.0 / math.cosh(rho)
    coef = [comb(n, j) * (kappa / n) ** j * math.sqrt(math.factorial(j))
            for j in range(n + 1)]

    amps = np.zeros((cutoff + 1, n + 1, cutoff + 1), dtype=np.complex128)
    for nl in range(cutoff + 1):
        base = scale * sech * tl**nl
        for j in range(n + 1):
            if nl + j > cutoff:
                break
            amps[nl + j, j, nl] = base * coef[j] * math.sqrt(_ff(nl + j, nl))
    # exact norm of the untruncated branch: the geometric sums over the loss
    # ladder collapse to powers of cosh(rho)
    norm_inf = scale**2 * sum(
        (comb(n, j) * (kappa / n) ** j * math.factorial(j)) ** 2
        * math.cosh(rho) ** (2 * j) for j in range(n + 1))
    kept = float(np.vdot(amps, amps).real)
    tail = max(norm_inf - kept, 0.0)
    state = fock.PureState(("A", "B", "L"), (cutoff, n, cutoff), amps,
                           tail_mass=tail)
    return HeraldedState(state, success_prob=2.0**n * kept,
                         pattern_count=2**n)


def _ff(top: int, bot: int) -> float:
    """Falling-factorial ratio top! / bot!."""
    out = 1.0
    for k in range(bot + 1, top + 1):
        out *= k
    return out


def truncated_pair_state(n_stages: int, kappa: float) -> fock.PureState:
    """Normalized (1 + (kappa/N) a'b')^N |0_AB>; cutoff N is exact."""
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    n = n_stages
    diag = np.array([comb(n, j) * (kappa / n) ** j * math.factorial(j)
                     for j in range(n + 1)])
    diag /= math.sqrt(float(diag @ diag))
    amps = np.zeros((n + 1, n + 1), dtype=np.complex128)
    amps[np.arange(n + 1), np.arange(n + 1)] = diag
    return fock.PureState(("A", "B"), (n, n), amps)


def distill_and_measure(heralded: HeraldedState) -> DistillationResult:
    """Trace out the loss mode and evaluate the entanglement/purity figures."""
    st = heralded.state
    res = metrics.epr_criterion(st, "A", "B")
    rho_ab = fock.partial_trace(st, ["A", "B"])
    return DistillationResult(
        eps_b_given_a=res.eps_b_given_a,
        eps_a_given_b=res.eps_a_given_b,
        purity=fock.purity(rho_ab),
        success_prob=heralded.success_prob,
        n_stages=heralded.pattern_count.bit_length() - 1,
    )
