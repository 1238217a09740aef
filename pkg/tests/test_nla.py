"""Heralded amplifier circuits against their closed forms."""

import math

import numpy as np
import pytest

from nla_distill import fock, metrics, nla
from nla_distill.analytic import ChannelParams, NlaParams, success_prob_1stage

GRID = [(r, lam, eta) for r in (0.2, 0.3) for lam in (0.2, 0.5)
        for eta in (0.5, 0.8)]


def test_single_stage_trivial_point():
    # no squeezing: the ancilla photon must reflect straight into the detector
    hs = nla.single_stage_circuit(ChannelParams(0.0, 0.0), 0.3, 6)
    assert hs.success_prob == pytest.approx(0.7, abs=1e-12)
    assert hs.pattern_count == 2
    vac = fock.vacuum(["A", "B", "L"], [6, 1, 6])
    assert fock.fidelity(hs.state, vac) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("r,lam,eta", GRID)
def test_single_stage_matches_closed_form(r, lam, eta):
    ch = ChannelParams(r, lam)
    circ = nla.single_stage_circuit(ch, eta, 20)
    cf = nla.closed_form_state(1, ch, eta, 20)
    assert fock.fidelity(circ.state, cf.state) >= 1 - 1e-10


@pytest.mark.parametrize("r,lam,eta", GRID)
def test_single_stage_success_prob_matches_formula(r, lam, eta):
    ch = ChannelParams(r, lam)
    circ = nla.single_stage_circuit(ch, eta, 20)
    ana = success_prob_1stage(ch, eta)
    assert abs(2.0 * fock.norm_sq(circ.state) - ana) < 1e-10
    assert abs(circ.success_prob - ana) < 1e-10


def test_heralding_probability_at_reference_point():
    # single-pattern heralding probability equals the closed form halved
    ch = ChannelParams(0.5, 0.3)
    circ = nla.single_stage_circuit(ch, 0.8, 20)
    assert fock.norm_sq(circ.state) == pytest.approx(
        success_prob_1stage(ch, 0.8) / 2.0, abs=1e-10)


def test_single_stage_pattern_symmetry():
    ch = ChannelParams(0.3, 0.3)
    a = nla.single_stage_circuit(ch, 0.7, 15)
    b = nla.single_stage_circuit(ch, 0.7, 15, pattern=(0, 1))
    assert abs(fock.norm_sq(a.state) - fock.norm_sq(b.state)) < 1e-12
    assert fock.fidelity(a.state, b.state) >= 1 - 1e-12


def test_single_stage_rejects_bad_pattern():
    with pytest.raises(ValueError):
        nla.single_stage_circuit(ChannelParams(0.3, 0.3), 0.7, 10, pattern=(1, 1))


def test_closed_form_n1_lossless_structure():
    ch = ChannelParams(0.4, 0.0)
    eta = 0.6
    hs = nla.closed_form_state(1, ch, eta, 8)
    kappa = NlaParams(1, eta, ch).kappa
    amps = hs.state.amps
    nz = {idx: amps[idx] for idx in np.ndindex(amps.shape) if abs(amps[idx]) > 1e-15}
    assert set(nz) == {(0, 0, 0), (1, 1, 0)}
    assert nz[(1, 1, 0)] / nz[(0, 0, 0)] == pytest.approx(kappa, abs=1e-12)


def test_closed_form_n2_coefficients():
    # two-photon term: operator coefficient kappa^2/4, state amplitude kappa^2/2
    ch = ChannelParams(0.3, 0.0)
    eta = 0.7
    kappa = NlaParams(2, eta, ch).kappa
    hs = nla.closed_form_state(2, ch, eta, 8)
    a = hs.state.amps
    amp11 = a[1, 1, 0] / a[0, 0, 0]
    amp22 = a[2, 2, 0] / a[0, 0, 0]
    assert amp11 == pytest.approx(kappa, abs=1e-12)
    assert amp22 / amp11 == pytest.approx(kappa / 2.0, abs=1e-12)
    # dividing out the n! amplitude factors recovers the operator ratio kappa/4
    coef_ratio = (amp22 / math.factorial(2)) / (amp11 / math.factorial(1))
    assert coef_ratio == pytest.approx(kappa / 4.0, abs=1e-12)


def test_closed_form_large_n_approaches_epr():
    # 64 stages at unit gain: the heralded state converges on the ideal pair
    # source of strength kappa
    kappa = 0.3
    ch = ChannelParams(math.atanh(kappa), 0.0)
    hs = nla.closed_form_state(64, ch, 0.5, 30)
    st = fock.project_fock(hs.state, "L", 0)
    target_amps = np.zeros((31, 65), dtype=complex)
    for n in range(31):
        target_amps[n, n] = kappa ** n
    target_amps /= np.linalg.norm(target_amps)
    target = fock.PureState(("A", "B"), (30, 64), target_amps)
    assert fock.fidelity(st, target) >= 0.999


def test_closed_form_rejects_zero_stages():
    with pytest.raises(ValueError):
        nla.closed_form_state(0, ChannelParams(0.3, 0.1), 0.5, 10)


def test_dual_stage_trivial_point():
    hs = nla.dual_stage_circuit(ChannelParams(0.0, 0.0), 0.3, 4)
    assert hs.pattern_count == 4
    assert hs.success_prob == pytest.approx(0.7 ** 2, abs=1e-12)
    vac = fock.vacuum(["A", "B", "L"], [4, 2, 4])
    assert fock.fidelity(hs.state, vac) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("r,lam,eta", GRID)
def test_dual_stage_matches_closed_form(r, lam, eta):
    ch = ChannelParams(r, lam)
    circ = nla.dual_stage_circuit(ch, eta, 8)
    cf = nla.closed_form_state(2, ch, eta, 8)
    assert fock.fidelity(circ.state, cf.state) >= 1 - 1e-8
    assert abs(circ.success_prob - cf.success_prob) < 1e-12


def test_dual_stage_reference_point():
    ch = ChannelParams(0.3, 0.3)
    circ = nla.dual_stage_circuit(ch, 0.7, 8)
    cf = nla.closed_form_state(2, ch, 0.7, 8)
    assert fock.fidelity(circ.state, cf.state) >= 1 - 1e-8


def test_dual_stage_pattern_symmetry():
    ch = ChannelParams(0.3, 0.3)
    base = nla.dual_stage_circuit(ch, 0.7, 8)
    for pats in (((1, 0), (0, 1)), ((0, 1), (1, 0)), ((0, 1), (0, 1))):
        alt = nla.dual_stage_circuit(ch, 0.7, 8, patterns=pats)
        assert abs(fock.norm_sq(alt.state) - fock.norm_sq(base.state)) < 1e-12
        assert fock.fidelity(alt.state, base.state) >= 1 - 1e-12


def test_heralded_state_invariant():
    ch = ChannelParams(0.4, 0.2)
    for hs in (nla.single_stage_circuit(ch, 0.6, 15),
               nla.dual_stage_circuit(ch, 0.6, 8),
               nla.closed_form_state(3, ch, 0.6, 15)):
        assert hs.success_prob == pytest.approx(
            hs.pattern_count * fock.norm_sq(hs.state), abs=1e-12)


def test_distill_and_measure_vacuum_branch():
    hs = nla.single_stage_circuit(ChannelParams(0.0, 0.0), 0.4, 6)
    res = nla.distill_and_measure(hs)
    assert res.eps_b_given_a == pytest.approx(1.0, abs=1e-12)
    assert res.purity == pytest.approx(1.0, abs=1e-12)
    assert res.success_prob == pytest.approx(0.6, abs=1e-12)
    assert res.n_stages == 1


def test_distill_ideal_single_stage_floor():
    # kappa = 0.36 on the pure truncated pair state sits at the quoted floor
    st = nla.truncated_pair_state(1, 0.36)
    eps = metrics.epr_criterion(st, "A", "B").eps_b_given_a
    assert eps == pytest.approx(0.81, abs=5e-3)


def test_distill_ideal_dual_stage_floor():
    st = nla.truncated_pair_state(2, 0.59)
    eps = metrics.epr_criterion(st, "A", "B").eps_b_given_a
    assert eps == pytest.approx(0.57, abs=5e-3)


@pytest.mark.parametrize("r,lam,eta", GRID)
def test_heralded_entanglement_bounded_by_pure_floor(r, lam, eta):
    ch = ChannelParams(r, lam)
    res1 = nla.distill_and_measure(nla.single_stage_circuit(ch, eta, 20))
    assert res1.eps_b_given_a >= 0.81 - 1e-3
    res2 = nla.distill_and_measure(nla.dual_stage_circuit(ch, eta, 8))
    assert res2.eps_b_given_a >= 0.57 - 1e-3


def test_truncated_pair_state_is_normalized():
    st = nla.truncated_pair_state(5, 0.7)
    assert fock.norm_sq(st) == pytest.approx(1.0, abs=1e-12)
    assert st.cutoffs == (5, 5)


def test_circuit_tail_budget_enforced():
    import warnings as _w
    from nla_distill.fock import TailMassError
    ch = ChannelParams(0.9, 0.3)  # heavy tail at a tiny cutoff
    with pytest.raises(TailMassError):
        nla.single_stage_circuit(ch, 0.6, 4, tail_budget=1e-10)
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        with pytest.raises(TailMassError):
            nla.dual_stage_circuit(ch, 0.6, 4, tail_budget=1e-12)
    # generous budgets pass
    nla.single_stage_circuit(ch, 0.6, 4, tail_budget=1.0)


def test_dual_stage_warns_above_cutoff_12():
    with pytest.warns(RuntimeWarning):
        nla.dual_stage_circuit(ChannelParams(0.2, 0.2), 0.5, 13)
