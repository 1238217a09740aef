"""Exact linear algebra of multimode bosonic states in a truncated Fock basis.

States are plain complex numpy tensors with one axis per mode (row-major over
the mode list order).  All operations are pure functions: they never mutate
their inputs and identical inputs give bit-identical outputs.  Subnormalized
states are allowed (they arise from heralding); the squared norm of a
projected branch is the probability of the outcome.

Every constructor and unitary reports truncation losses through the
``tail_mass`` field of the returned state, so downstream consumers can refuse
results that leaked more population than their tolerance allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
import scipy.linalg

__all__ = [
    "PureState",
    "DensityMatrix",
    "TailMassError",
    "vacuum",
    "fock_state",
    "epr_state",
    "tensor",
    "rename_modes",
    "reorder_modes",
    "apply_single_mode_squeeze",
    "apply_beamsplitter",
    "herald_beamsplitter",
    "project_fock",
    "partial_trace",
    "quadrature_moment",
    "norm_sq",
    "purity",
    "fidelity",
    "debug_serialize",
    "squeeze_cutoff_envelope",
]

# Numerical slack on the "norm <= 1" invariant; heralded branches may sit
# exactly at the boundary up to roundoff.
_NORM_SLACK = 1e-12
_HERMITIAN_TOL = 1e-10
_TRACE_SLACK = 1e-10

ModeLabel = str
StateLike = Union["PureState", "DensityMatrix"]


class TailMassError(RuntimeError):
    """A result leaked more truncated population than the tolerance allows."""


@dataclass(frozen=True)
class PureState:
    """Pure (possibly subnormalized) state over an ordered set of modes.

    ``amps`` has shape ``tuple(c + 1 for c in cutoffs)``; entry
    ``amps[n1, ..., nk]`` is the amplitude of ``|n1, ..., nk>``.
    ``tail_mass`` accumulates the population lost to truncation by the
    operations that produced this state.
    """

    modes: tuple[ModeLabel, ...]
    cutoffs: tuple[int, ...]
    amps: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        if len(self.modes) == 0:
            raise ValueError("a state needs at least one mode")
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"duplicate mode labels in {self.modes}")
        if len(self.cutoffs) != len(self.modes):
            raise ValueError("one cutoff per mode required")
        if any(c < 1 for c in self.cutoffs):
            raise ValueError("cutoffs must be >= 1")
        expected = tuple(c + 1 for c in self.cutoffs)
        if self.amps.shape != expected:
            raise ValueError(f"amplitude shape {self.amps.shape} != {expected}")
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if amps is not self.amps:
            object.__setattr__(self, "amps", amps)
        if not np.all(np.isfinite(self.amps)):
            raise ValueError("non-finite amplitude")
        n2 = float(np.vdot(self.amps, self.amps).real)
        if n2 > 1.0 + _NORM_SLACK:
            raise ValueError(f"squared norm {n2} exceeds 1")
        self.amps.flags.writeable = False

    def axis(self, mode: ModeLabel) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise ValueError(f"mode {mode!r} not in {self.modes}") from None

    def cutoff_of(self, mode: ModeLabel) -> int:
        return self.cutoffs[self.axis(mode)]


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian operator over the joint truncated Fock basis.

    ``matrix`` is indexed by the row-major flattening of the multi-index.
    Positivity holds by construction for everything this package produces
    (all density matrices come from partial traces of pure states).
    """

    modes: tuple[ModeLabel, ...]
    cutoffs: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dim = int(np.prod([c + 1 for c in self.cutoffs]))
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape} != {(dim, dim)}")
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if mat is not self.matrix:
            object.__setattr__(self, "matrix", mat)
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("non-finite matrix entry")
        herm_err = float(np.abs(self.matrix - self.matrix.conj().T).max())
        if herm_err > _HERMITIAN_TOL:
            raise ValueError(f"matrix not Hermitian (max deviation {herm_err})")
        tr = float(np.trace(self.matrix).real)
        if not 0.0 < tr <= 1.0 + _TRACE_SLACK:
            raise ValueError(f"trace {tr} outside (0, 1]")
        self.matrix.flags.writeable = False

    def axis(self, mode: ModeLabel) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise ValueError(f"mode {mode!r} not in {self.modes}") from None

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


# ---------------------------------------------------------------------------
# constructors


def _as_cutoffs(cutoff, n: int) -> tuple[int, ...]:
    if isinstance(cutoff, (int, np.integer)):
        return (int(cutoff),) * n
    cut = tuple(int(c) for c in cutoff)
    if len(cut) != n:
        raise ValueError("need one cutoff per mode")
    return cut


def vacuum(modes: Sequence[ModeLabel], cutoff) -> PureState:
    """All modes in |0>."""
    modes = tuple(modes)
    cutoffs = _as_cutoffs(cutoff, len(modes))
    amps = np.zeros([c + 1 for c in cutoffs], dtype=np.complex128)
    amps[(0,) * len(modes)] = 1.0
    return PureState(modes, cutoffs, amps)


def fock_state(modes: Sequence[ModeLabel], cutoff, occupation: Sequence[int]) -> PureState:
    """Product Fock state |n1, ..., nk>."""
    modes = tuple(modes)
    cutoffs = _as_cutoffs(cutoff, len(modes))
    occ = tuple(int(n) for n in occupation)
    if len(occ) != len(modes):
        raise ValueError("one occupation number per mode required")
    if any(n < 0 or n > c for n, c in zip(occ, cutoffs)):
        raise ValueError(f"occupation {occ} outside cutoffs {cutoffs}")
    amps = np.zeros([c + 1 for c in cutoffs], dtype=np.complex128)
    amps[occ] = 1.0
    return PureState(modes, cutoffs, amps)


def epr_state(chi: float, modes: Sequence[ModeLabel], cutoff) -> PureState:
    """Two-mode squeezed vacuum sum_n sqrt(1-chi^2) chi^n |n, n>.

    The truncated tail mass chi^(2 (min_cutoff + 1)) is recorded on the
    returned state.
    """
    if not 0.0 <= chi < 1.0:
        raise ValueError(f"chi must be in [0, 1), got {chi}")
    modes = tuple(modes)
    if len(modes) != 2:
        raise ValueError("epr_state takes exactly two modes")
    cutoffs = _as_cutoffs(cutoff, 2)
    nmax = min(cutoffs)
    n = np.arange(nmax + 1)
    diag = math.sqrt(1.0 - chi * chi) * chi**n if chi > 0 else np.where(n == 0, 1.0, 0.0)
    amps = np.zeros((cutoffs[0] + 1, cutoffs[1] + 1), dtype=np.complex128)
    amps[n, n] = diag
    tail = chi ** (2 * (nmax + 1))
    return PureState(modes, cutoffs, amps, tail_mass=float(tail))


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; mode order is a's modes followed by b's."""
    if set(a.modes) & set(b.modes):
        raise ValueError("tensor factors share mode labels")
    amps = np.tensordot(a.amps, b.amps, axes=0)
    return PureState(a.modes + b.modes, a.cutoffs + b.cutoffs, amps,
                     tail_mass=a.tail_mass + b.tail_mass)


def rename_modes(state: PureState, mapping: dict) -> PureState:
    new = tuple(mapping.get(m, m) for m in state.modes)
    return replace(state, modes=new)


def reorder_modes(state: PureState, order: Sequence[ModeLabel]) -> PureState:
    order = tuple(order)
    if set(order) != set(state.modes) or len(order) != len(state.modes):
        raise ValueError("order must be a permutation of the state's modes")
    perm = [state.axis(m) for m in order]
    return PureState(order, tuple(state.cutoffs[i] for i in perm),
                     np.ascontiguousarray(np.transpose(state.amps, perm)),
                     tail_mass=state.tail_mass)


# ---------------------------------------------------------------------------
# single-mode operators


@lru_cache(maxsize=256)
def _annihilation(dim: int) -> np.ndarray:
    m = np.zeros((dim, dim))
    n = np.arange(1, dim)
    m[n - 1, n] = np.sqrt(n)
    m.flags.writeable = False
    return m


@lru_cache(maxsize=256)
def _quadrature(dim: int, sign: str) -> np.ndarray:
    m = _annihilation(dim)
    if sign == "+":
        x = (m + m.T).astype(np.complex128)
    elif sign == "-":
        x = (-1j) * (m - m.T)
    else:
        raise ValueError(f"quadrature sign must be '+' or '-', got {sign!r}")
    x.flags.writeable = False
    return x


def _apply_single_mode(amps: np.ndarray, op: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(op, amps, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def squeeze_cutoff_envelope(r: float) -> int:
    """Smallest cutoff for which apply_single_mode_squeeze is accurate."""
    return 10 + math.ceil(8.0 * math.exp(2.0 * abs(r)))


@lru_cache(maxsize=64)
def _squeeze_matrix(dim: int, r: float) -> np.ndarray:
    m = _annihilation(dim)
    gen = 0.5 * r * (m @ m - m.T @ m.T)
    u = scipy.linalg.expm(gen)
    u.flags.writeable = False
    return u


def apply_single_mode_squeeze(state: PureState, mode: ModeLabel, r: float) -> PureState:
    """Apply S(r) = exp[r (m^2 - m'^2)/2] to one mode.

    Realized as the matrix exponential of the truncated generator, which is
    exactly orthogonal; accuracy requires the cutoff envelope below.
    """
    if abs(r) > 3.0:
        raise ValueError(f"|r| = {abs(r)} outside the documented envelope |r| <= 3")
    ax = state.axis(mode)
    cut = state.cutoffs[ax]
    need = squeeze_cutoff_envelope(r)
    if cut < need:
        raise ValueError(
            f"cutoff {cut} too small for squeezing r={r}; need >= {need}")
    u = _squeeze_matrix(cut + 1, float(r))
    amps = _apply_single_mode(state.amps, u, ax)
    return replace(state, amps=amps)


# ---------------------------------------------------------------------------
# beamsplitters

# Convention (Heisenberg picture, modes (M, N), transmissivity t):
#   m -> sqrt(t) m + sqrt(1-t) n,   n -> sqrt(t) n - sqrt(1-t) m
# so on states |1,0> -> sqrt(t)|1,0> - sqrt(1-t)|0,1>.


@lru_cache(maxsize=128)
def _bs_sectors(s_max: int, theta: float) -> tuple[np.ndarray, ...]:
    """Fock matrices of exp[theta (m'n - mn')] per total-photon sector.

    Sector s holds basis |j, s-j> for j = 0..s; built by the one-photon
    recurrence, which is exact and keeps every sector orthogonal.
    """
    c, s_ = math.cos(theta), math.sin(theta)
    mats = [np.ones((1, 1))]
    for s in range(1, s_max + 1):
        prev = mats[-1]
        cur = np.zeros((s + 1, s + 1))
        jp = np.arange(s + 1)
        sq_jp = np.sqrt(jp)
        sq_rest = np.sqrt(s - jp)
        shifted = np.zeros((s + 1, s))
        shifted[1:, :] = prev
        tail = np.zeros((s + 1, s))
        tail[:s, :] = prev
        inv_sqrt_j = 1.0 / np.sqrt(np.arange(1, s + 1))
        cur[:, 1:] = (c * sq_jp[:, None] * shifted
                      - s_ * sq_rest[:, None] * tail) * inv_sqrt_j[None, :]
        col0 = np.zeros(s + 1)
        col0[:s] = prev[:, 0]
        col0_sh = np.zeros(s + 1)
        col0_sh[1:] = prev[:, 0]
        cur[:, 0] = (c * sq_rest * col0 + s_ * sq_jp * col0_sh) / math.sqrt(s)
        cur.flags.writeable = False
        mats.append(cur)
    mats[0].flags.writeable = False
    return tuple(mats)


def _bs_theta(transmissivity: float) -> float:
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError(f"transmissivity {transmissivity} outside [0, 1]")
    return math.acos(min(1.0, math.sqrt(transmissivity)))


def _pair_front(state: PureState, modes) -> tuple[np.ndarray, int, int, list]:
    m1, m2 = modes
    if m1 == m2:
        raise ValueError("beamsplitter needs two distinct modes")
    ax1, ax2 = state.axis(m1), state.axis(m2)
    perm = [ax1, ax2] + [i for i in range(len(state.modes)) if i not in (ax1, ax2)]
    amps = np.transpose(state.amps, perm)
    d1, d2 = amps.shape[0], amps.shape[1]
    return amps.reshape(d1, d2, -1), d1, d2, perm


def _pair_back(arr: np.ndarray, shape_perm, perm) -> np.ndarray:
    arr = arr.reshape(shape_perm)
    inv = np.argsort(perm)
    return np.ascontiguousarray(np.transpose(arr, inv))


def apply_beamsplitter(state: PureState, modes, transmissivity: float) -> PureState:
    """Two-mode beamsplitter in the convention above.

    Exact per total-photon-number sector; population driven past a mode's
    cutoff is clipped and the lost mass added to ``tail_mass``.
    """
    theta = _bs_theta(transmissivity)
    flat, d1, d2, perm = _pair_front(state, modes)
    shape_perm = tuple(np.array(state.amps.shape)[perm])
    mats = _bs_sectors(d1 - 1 + d2 - 1, theta)
    out = np.zeros_like(flat)
    for s in range(len(mats)):
        j_lo, j_hi = max(0, s - (d2 - 1)), min(s, d1 - 1)
        if j_lo > j_hi:
            continue
        js = np.arange(j_lo, j_hi + 1)
        ks = s - js
        seg = flat[js, ks, :]
        if not seg.any():
            continue
        block = mats[s][np.ix_(js, js)]
        out[js, ks, :] = block @ seg
    n_in = float(np.vdot(flat, flat).real)
    n_out = float(np.vdot(out, out).real)
    clipped = max(n_in - n_out, 0.0)
    return replace(state, amps=_pair_back(out, shape_perm, perm),
                   tail_mass=state.tail_mass + clipped)


def herald_beamsplitter(state: PureState, modes, transmissivity: float,
                        outcome: tuple[int, int]) -> PureState:
    """Beamsplit two modes and project both outputs onto Fock outcomes.

    Equivalent to ``apply_beamsplitter`` followed by ``project_fock`` on each
    output port, but computed from the single total-photon sector the outcome
    lives in, so it never materializes the full two-mode unitary.
    """
    theta = _bs_theta(transmissivity)
    n1, n2 = outcome
    flat, d1, d2, perm = _pair_front(state, modes)
    if not (0 <= n1 <= d1 - 1 and 0 <= n2 <= d2 - 1):
        raise ValueError(f"outcome {outcome} outside cutoffs")
    s = n1 + n2
    mats = _bs_sectors(s, theta)
    j_lo, j_hi = max(0, s - (d2 - 1)), min(s, d1 - 1)
    js = np.arange(j_lo, j_hi + 1)
    branch = np.tensordot(mats[s][n1, js], flat[js, s - js, :], axes=([0], [0]))

    # flat's trailing axis runs over the non-pair modes in their original order
    keep = tuple(state.modes[i] for i in perm[2:])
    if not keep:
        raise ValueError("heralding away every mode is not supported")
    cutoffs = tuple(state.cutoffs[i] for i in perm[2:])
    amps = np.ascontiguousarray(branch.reshape(tuple(c + 1 for c in cutoffs)))
    return PureState(keep, cutoffs, amps, tail_mass=state.tail_mass)


# ---------------------------------------------------------------------------
# projection, tracing, moments


def project_fock(state: PureState, mode: ModeLabel, n: int) -> PureState:
    """Project one mode onto |n> and drop it; the branch stays unnormalized."""
    ax = state.axis(mode)
    if not 0 <= n <= state.cutoffs[ax]:
        raise ValueError(f"outcome {n} exceeds cutoff {state.cutoffs[ax]}")
    if len(state.modes) == 1:
        raise ValueError("projecting away the last mode is not supported")
    amps = np.ascontiguousarray(np.take(state.amps, n, axis=ax))
    modes = state.modes[:ax] + state.modes[ax + 1:]
    cutoffs = state.cutoffs[:ax] + state.cutoffs[ax + 1:]
    return PureState(modes, cutoffs, amps, tail_mass=state.tail_mass)


def partial_trace(obj: StateLike, keep: Sequence[ModeLabel]) -> DensityMatrix:
    """Reduce to the modes in ``keep`` (in the object's own mode order)."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    missing = [m for m in keep if m not in obj.modes]
    if missing:
        raise ValueError(f"keep contains unknown modes {missing}")
    kept = tuple(m for m in obj.modes if m in keep)
    cutoffs = tuple(obj.cutoffs[obj.axis(m)] for m in kept)
    dim_keep = int(np.prod([c + 1 for c in cutoffs]))

    if isinstance(obj, PureState):
        perm = [obj.axis(m) for m in kept] + \
               [i for i, m in enumerate(obj.modes) if m not in keep]
        mat = np.transpose(obj.amps, perm).reshape(dim_keep, -1)
        rho = mat @ mat.conj().T
    else:
        k = len(obj.modes)
        dims = [c + 1 for c in obj.cutoffs]
        tens = obj.matrix.reshape(dims + dims)
        trace_ax = [i for i in range(k) if obj.modes[i] not in keep]
        for ax in sorted(trace_ax, reverse=True):
            tens = np.trace(tens, axis1=ax, axis2=ax + tens.ndim // 2)
        rho = tens.reshape(dim_keep, dim_keep)
    rho = 0.5 * (rho + rho.conj().T)  # scrub roundoff asymmetry
    return DensityMatrix(kept, cutoffs, rho)


def _validate_factors(obj: StateLike, factors) -> list[tuple[int, str, int]]:
    factors = list(factors)
    if not 1 <= len(factors) <= 2:
        raise ValueError("spec must contain one or two quadrature factors")
    out = []
    for item in factors:
        try:
            mode, sign = item
        except Exception:
            raise ValueError(f"malformed quadrature factor {item!r}") from None
        ax = obj.axis(mode)
        if sign not in ("+", "-"):
            raise ValueError(f"quadrature sign must be '+' or '-', got {sign!r}")
        out.append((ax, sign, obj.cutoffs[ax] + 1))
    return out


def _padded(arr: np.ndarray, pad: dict) -> np.ndarray:
    width = [(0, pad.get(ax, 0)) for ax in range(arr.ndim)]
    return np.pad(arr, width) if any(p for _, p in width) else arr


def quadrature_moment(obj: StateLike, factors) -> float:
    """Expectation of a product of quadratures X^+/X^- on named modes.

    ``factors`` is a sequence of (mode, sign) pairs, at most two, e.g.
    ``[("A", "+"), ("B", "+")]`` for <X+_A X+_B>.  Ladder matrix elements are
    exact: each involved mode is temporarily given one slot of headroom per
    factor, so moments are correct even when population touches the cutoff.
    The value is *not* normalized: for a subnormalized branch it returns
    <psi|O|psi> (or Tr[rho O]); divide by the squared norm or trace as needed.
    """
    parsed = _validate_factors(obj, factors)
    pad = {}
    for ax, _, _ in parsed:
        pad[ax] = pad.get(ax, 0) + 1
    if isinstance(obj, PureState):
        psi = _padded(obj.amps, pad)
        phi = psi
        for ax, sign, dim in reversed(parsed):
            phi = _apply_single_mode(phi, _quadrature(dim + pad[ax], sign), ax)
        return float(np.vdot(psi, phi).real)
    k = len(obj.modes)
    dims = [c + 1 for c in obj.cutoffs]
    pad_both = dict(pad)
    pad_both.update({ax + k: p for ax, p in pad.items()})
    tens = _padded(obj.matrix.reshape(dims + dims), pad_both)
    for ax, sign, dim in reversed(parsed):
        tens = _apply_single_mode(tens, _quadrature(dim + pad[ax], sign), ax)
    d = int(np.prod([d + pad.get(ax, 0) for ax, d in enumerate(dims)]))
    return float(np.trace(tens.reshape(d, d)).real)


def norm_sq(state: PureState) -> float:
    return float(np.vdot(state.amps, state.amps).real)


def purity(dm: DensityMatrix) -> float:
    """Tr(rho^2) of the trace-normalized operator."""
    tr = dm.trace
    return float(np.vdot(dm.matrix, dm.matrix).real) / (tr * tr)


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 between normalized versions of two pure states."""
    if a.modes != b.modes or a.cutoffs != b.cutoffs:
        raise ValueError("states live on different mode layouts")
    ov = np.vdot(a.amps, b.amps)
    return float(abs(ov) ** 2 / (norm_sq(a) * norm_sq(b)))


def debug_serialize(state: PureState, threshold: float = 1e-14) -> str:
    """Text dump 'n1,...,nk: re,im' per basis state, sorted multi-index order.

    Amplitudes below ``threshold`` in magnitude are omitted.  This is the
    golden-test serialization; the format is stable.
    """
    lines = []
    for idx in np.ndindex(*state.amps.shape):
        amp = state.amps[idx]
        if abs(amp) < threshold:
            continue
        key = ",".join(str(i) for i in idx)
        lines.append(f"{key}: {amp.real:.17g},{amp.imag:.17g}")
    return "\n".join(lines)
