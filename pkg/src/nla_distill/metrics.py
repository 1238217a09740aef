"""Entanglement and purity measures: conditional variances and the EPR product.

The criterion is directional: eps_B|A multiplies the two conditional variances
of B's quadratures given the optimal linear estimate from A's.  Values below 1
certify entanglement; smaller is stronger.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fock
from .fock import ModeLabel, PureState, StateLike

__all__ = ["ConditionalVariancePair", "EprResult", "conditional_variances",
           "epr_criterion"]

_DEGENERATE_VAR = 1e-12


@dataclass(frozen=True)
class ConditionalVariancePair:
    """Optimal conditional variances V+/V- and their estimation gains."""

    v_plus: float
    v_minus: float
    gamma_plus: float
    gamma_minus: float


@dataclass(frozen=True)
class EprResult:
    eps_b_given_a: float
    eps_a_given_b: float


def _weight(obj: StateLike) -> float:
    w = fock.norm_sq(obj) if isinstance(obj, PureState) else obj.trace
    if w <= _DEGENERATE_VAR:
        raise ValueError("state has (near-)zero norm; nothing to normalize")
    return w


def conditional_variances(obj: StateLike, target: ModeLabel,
                          conditioner: ModeLabel) -> ConditionalVariancePair:
    """min_gamma Var(X_target - gamma X_conditioner) for both quadratures.

    The optimum is V = Var_t - Cov^2 / Var_c at gamma = Cov / Var_c; first
    moments are subtracted so subnormalized and displaced states are handled
    alike (the input is normalized internally).
    """
    if target == conditioner:
        raise ValueError("target and conditioner must differ")
    w = _weight(obj)
    vs, gs = [], []
    for sign in ("+", "-"):
        mt = fock.quadrature_moment(obj, [(target, sign)]) / w
        mc = fock.quadrature_moment(obj, [(conditioner, sign)]) / w
        var_t = fock.quadrature_moment(obj, [(target, sign)] * 2) / w - mt * mt
        var_c = fock.quadrature_moment(obj, [(conditioner, sign)] * 2) / w - mc * mc
        cov = fock.quadrature_moment(obj, [(target, sign), (conditioner, sign)]) / w \
            - mt * mc
        if var_c < _DEGENERATE_VAR:
            raise ValueError(
                f"conditioner quadrature X{sign} has (near-)zero variance")
        vs.append(var_t - cov * cov / var_c)
        gs.append(cov / var_c)
    return ConditionalVariancePair(v_plus=vs[0], v_minus=vs[1],
                                   gamma_plus=gs[0], gamma_minus=gs[1])


def epr_criterion(obj: StateLike, a: ModeLabel, b: ModeLabel) -> EprResult:
    """EPR products in both directions; eps_B|A conditions B's variance on A."""
    ba = conditional_variances(obj, target=b, conditioner=a)
    ab = conditional_variances(obj, target=a, conditioner=b)
    return EprResult(eps_b_given_a=ba.v_plus * ba.v_minus,
                     eps_a_given_b=ab.v_plus * ab.v_minus)
