"""Fock-core: constructors, unitaries, projection, tracing, moments."""

import math

import numpy as np
import pytest

from nla_distill import fock


def test_vacuum_amplitudes():
    v = fock.vacuum(["A"], [5])
    assert v.amps[0] == 1.0
    assert np.count_nonzero(v.amps) == 1
    assert fock.norm_sq(v) == 1.0


def test_vacuum_two_modes_normalized():
    v = fock.vacuum(["A", "B"], [3, 3])
    assert fock.norm_sq(v) == 1.0


def test_vacuum_photon_number_zero():
    v = fock.vacuum(["A"], [5])
    x2 = fock.quadrature_moment(v, [("A", "+")] * 2)
    # <n> = (<X+^2> + <X-^2> - 2)/4
    y2 = fock.quadrature_moment(v, [("A", "-")] * 2)
    assert abs((x2 + y2 - 2.0) / 4.0) < 1e-15


def test_vacuum_needs_modes():
    with pytest.raises(ValueError):
        fock.vacuum([], [])


def test_epr_chi_zero_is_vacuum():
    st = fock.epr_state(0.0, ("M", "N"), 6)
    assert fock.fidelity(st, fock.vacuum(["M", "N"], [6, 6])) == 1.0
    assert st.tail_mass == 0.0


def test_epr_amplitude_value():
    st = fock.epr_state(0.5, ("M", "N"), 10)
    assert abs(st.amps[1, 1] - math.sqrt(0.75) * 0.5) < 1e-15
    assert st.amps[1, 0] == 0.0


def test_epr_mean_photon_number_vs_series():
    chi = 0.5
    # independent oracle: sum the geometric series numerically
    oracle = sum((1 - chi * chi) * chi ** (2 * n) * n for n in range(400))
    st = fock.epr_state(chi, ("M", "N"), 30)
    for mode in ("M", "N"):
        x2 = fock.quadrature_moment(st, [(mode, "+")] * 2)
        y2 = fock.quadrature_moment(st, [(mode, "-")] * 2)
        n_mean = (x2 + y2 - 2.0) / 4.0
        assert abs(n_mean - oracle) < 1e-10
        assert abs(n_mean - math.sinh(math.atanh(chi)) ** 2) < 1e-10


def test_epr_rejects_chi_out_of_range():
    with pytest.raises(ValueError):
        fock.epr_state(1.0, ("M", "N"), 5)


def test_epr_reports_tail_mass():
    st = fock.epr_state(0.5, ("M", "N"), 3)
    assert st.tail_mass == pytest.approx(0.5 ** (2 * 4), abs=0.0)


def test_squeeze_zero_is_identity():
    st = fock.vacuum(["A"], [20])
    out = fock.apply_single_mode_squeeze(st, "A", 0.0)
    assert np.array_equal(out.amps, st.amps)


@pytest.mark.parametrize("r", [0.3, 0.5])
def test_squeezed_vacuum_variances(r):
    # oracle: number-basis series of the squeezed vacuum, no matrix exponential
    def amp(n):
        return ((1 / math.sqrt(math.cosh(r))) * (-math.tanh(r)) ** n
                * math.sqrt(math.factorial(2 * n)) / (2 ** n * math.factorial(n)))

    amps = [amp(n) for n in range(60)]
    nbar = sum(a * a * 2 * n for n, a in enumerate(amps))
    m2 = sum(amps[n] * amps[n + 1] * math.sqrt((2 * n + 2) * (2 * n + 1))
             for n in range(59))
    oracle_plus = 1 + 2 * nbar + 2 * m2
    oracle_minus = 1 + 2 * nbar - 2 * m2

    st = fock.apply_single_mode_squeeze(fock.vacuum(["A"], [40]), "A", r)
    vp = fock.quadrature_moment(st, [("A", "+")] * 2)
    vm = fock.quadrature_moment(st, [("A", "-")] * 2)
    assert abs(vp - oracle_plus) < 1e-6
    assert abs(vm - oracle_minus) < 1e-6
    # with S(r) = exp[r(m^2 - m'^2)/2] the squeezed quadrature is X+
    assert abs(vp - math.exp(-2 * r)) < 1e-6
    assert abs(vm - math.exp(2 * r)) < 1e-6


def test_squeeze_enforces_cutoff_envelope():
    st = fock.vacuum(["A"], [10])
    with pytest.raises(ValueError):
        fock.apply_single_mode_squeeze(st, "A", 0.5)
    with pytest.raises(ValueError):
        fock.apply_single_mode_squeeze(fock.vacuum(["A"], [2000]), "A", 3.5)


@pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
def test_squeezer_beamsplitter_epr_identity(r):
    cut = fock.squeeze_cutoff_envelope(r)
    st = fock.vacuum(["C", "D"], [cut, cut])
    st = fock.apply_single_mode_squeeze(st, "C", r)
    st = fock.apply_single_mode_squeeze(st, "D", -r)
    st = fock.apply_beamsplitter(st, ("C", "D"), 0.5)
    target = fock.epr_state(math.tanh(r), ("C", "D"), cut)
    assert fock.fidelity(st, target) >= 1 - 1e-8


def test_beamsplitter_identity_at_full_transmission():
    st = fock.epr_state(0.4, ("M", "N"), 8)
    out = fock.apply_beamsplitter(st, ("M", "N"), 1.0)
    assert np.allclose(out.amps, st.amps, atol=1e-14)


def test_beamsplitter_single_photon_convention():
    st = fock.fock_state(["M", "N"], [2, 2], [1, 0])
    out = fock.apply_beamsplitter(st, ("M", "N"), 0.5)
    assert out.amps[1, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert out.amps[0, 1] == pytest.approx(-1 / math.sqrt(2), abs=1e-15)


def test_beamsplitter_rejects_same_mode():
    st = fock.vacuum(["M", "N"], [2, 2])
    with pytest.raises(ValueError):
        fock.apply_beamsplitter(st, ("M", "M"), 0.5)


def test_beamsplitter_norm_preserved_without_clipping():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=(4, 4, 3)) + 1j * rng.normal(size=(4, 4, 3))
    for j in range(4):      # keep total photon number within the sector budget
        for k in range(4):
            if j + k > 3:
                amps[j, k, :] = 0.0
    amps /= np.linalg.norm(amps)
    st = fock.PureState(("M", "N", "R"), (3, 3, 2), amps)
    out = fock.apply_beamsplitter(st, ("M", "N"), 0.37)
    assert abs(fock.norm_sq(out) - 1.0) < 1e-12
    assert out.tail_mass < 1e-12


def test_beamsplitter_clipping_reported():
    st = fock.fock_state(["M", "N"], [1, 1], [1, 1])
    out = fock.apply_beamsplitter(st, ("M", "N"), 0.5)
    # |1,1> -> (|2,0> - |0,2>)/sqrt(2) under this convention: all clipped
    assert out.tail_mass == pytest.approx(1.0, abs=1e-12)


def test_beamsplitter_inverse_composition():
    rng = np.random.default_rng(3)
    amps = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    amps /= np.linalg.norm(amps) * 1.0000001
    st = fock.PureState(("M", "N"), (4, 4), amps)
    t = 0.73
    # swapping the mode order realizes the inverse rotation
    out = fock.apply_beamsplitter(st, ("M", "N"), t)
    out = fock.apply_beamsplitter(out, ("N", "M"), t)
    kept = fock.norm_sq(out) / fock.norm_sq(st)
    overlap = abs(np.vdot(st.amps, out.amps)) / fock.norm_sq(st)
    assert overlap > kept - 1e-10  # equal up to clipped sectors
    # a sector-safe state must round-trip exactly
    amps2 = np.zeros((5, 5), dtype=complex)
    amps2[:2, :2] = amps[:2, :2]
    amps2 /= np.linalg.norm(amps2)
    st2 = fock.PureState(("M", "N"), (4, 4), amps2)
    back = fock.apply_beamsplitter(fock.apply_beamsplitter(st2, ("M", "N"), t),
                                   ("N", "M"), t)
    assert np.allclose(back.amps, st2.amps, atol=1e-10)


def test_herald_matches_apply_then_project():
    rng = np.random.default_rng(11)
    amps = rng.normal(size=(4, 3, 3)) + 1j * rng.normal(size=(4, 3, 3))
    amps /= np.linalg.norm(amps)
    st = fock.PureState(("S", "P", "R"), (3, 2, 2), amps)
    for outcome in ((1, 0), (0, 1), (2, 1)):
        fused = fock.herald_beamsplitter(st, ("S", "P"), 0.5, outcome)
        full = fock.apply_beamsplitter(st, ("S", "P"), 0.5)
        full = fock.project_fock(full, "S", outcome[0])
        full = fock.project_fock(full, "P", outcome[1])
        assert fused.modes == full.modes
        assert np.allclose(fused.amps, full.amps, atol=1e-12)


def test_project_vacuum_probability_one():
    st = fock.vacuum(["A", "B"], [3, 3])
    br = fock.project_fock(st, "B", 0)
    assert fock.norm_sq(br) == pytest.approx(1.0, abs=0.0)


def test_project_epr_single_photon_branch():
    chi = 0.5
    st = fock.epr_state(chi, ("M", "N"), 10)
    br = fock.project_fock(st, "N", 1)
    assert fock.norm_sq(br) == pytest.approx((1 - chi * chi) * chi * chi, abs=1e-15)
    assert abs(br.amps[1]) > 0 and np.count_nonzero(br.amps) == 1


def test_project_outcomes_sum_to_norm():
    rng = np.random.default_rng(5)
    amps = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    amps /= np.linalg.norm(amps) * 1.25  # subnormalized input
    st = fock.PureState(("M", "N"), (3, 3), amps)
    total = sum(fock.norm_sq(fock.project_fock(st, "N", n)) for n in range(4))
    assert abs(total - fock.norm_sq(st)) < 1e-12


def test_project_requires_known_mode():
    st = fock.vacuum(["A", "B"], [2, 2])
    with pytest.raises(ValueError):
        fock.project_fock(st, "Z", 0)


def test_partial_trace_full_keep_is_projector():
    st = fock.epr_state(0.6, ("M", "N"), 6)
    dm = fock.partial_trace(st, ["M", "N"])
    assert fock.purity(dm) == pytest.approx(1.0, abs=1e-12)
    assert dm.trace == pytest.approx(fock.norm_sq(st), abs=1e-12)


def test_partial_trace_epr_gives_thermal_diagonal():
    chi = 0.5
    st = fock.epr_state(chi, ("M", "N"), 20)
    dm = fock.partial_trace(st, ["M"])
    diag = np.diag(dm.matrix).real
    expect = (1 - chi * chi) * chi ** (2 * np.arange(21))
    assert np.allclose(diag, expect, atol=1e-12)
    off = dm.matrix - np.diag(np.diag(dm.matrix))
    assert np.abs(off).max() < 1e-14


def test_partial_trace_of_density_matrix():
    st = fock.epr_state(0.4, ("M", "N"), 8)
    rho = fock.partial_trace(st, ["M", "N"])
    reduced = fock.partial_trace(rho, ["M"])
    direct = fock.partial_trace(st, ["M"])
    assert np.allclose(reduced.matrix, direct.matrix, atol=1e-12)


def test_partial_trace_requires_subset():
    st = fock.vacuum(["A", "B"], [2, 2])
    with pytest.raises(ValueError):
        fock.partial_trace(st, ["A", "Z"])
    with pytest.raises(ValueError):
        fock.partial_trace(st, [])


def test_quadrature_first_moment_vacuum():
    v = fock.vacuum(["A"], [4])
    assert fock.quadrature_moment(v, [("A", "+")]) == 0.0
    assert fock.quadrature_moment(v, [("A", "-")]) == 0.0


def test_quadrature_vacuum_variance_is_one():
    v = fock.vacuum(["A"], [4])
    assert fock.quadrature_moment(v, [("A", "+")] * 2) == pytest.approx(1.0, abs=1e-15)
    assert fock.quadrature_moment(v, [("A", "-")] * 2) == pytest.approx(1.0, abs=1e-15)


def test_quadrature_cross_moment_epr_series_oracle():
    chi = 0.5
    c = lambda n: math.sqrt(1 - chi * chi) * chi ** n
    oracle = 2 * sum(c(n) * c(n + 1) * (n + 1) for n in range(400))
    st = fock.epr_state(chi, ("M", "N"), 30)
    got = fock.quadrature_moment(st, [("M", "+"), ("N", "+")])
    assert abs(got - oracle) < 1e-8
    assert abs(got - 4.0 / 3.0) < 1e-8
    # X- quadratures are anticorrelated with equal magnitude
    got_minus = fock.quadrature_moment(st, [("M", "-"), ("N", "-")])
    assert abs(got_minus + oracle) < 1e-8


def test_quadrature_moment_exact_at_cutoff_boundary():
    st = fock.fock_state(["A"], [1], [1])
    assert fock.quadrature_moment(st, [("A", "+")] * 2) == pytest.approx(3.0, abs=1e-14)


def test_quadrature_moment_on_density_matrix():
    st = fock.epr_state(0.5, ("M", "N"), 20)
    dm = fock.partial_trace(st, ["M", "N"])
    pure = fock.quadrature_moment(st, [("M", "+"), ("N", "+")])
    mixed = fock.quadrature_moment(dm, [("M", "+"), ("N", "+")])
    assert abs(pure - mixed) < 1e-10


def test_quadrature_moment_rejects_malformed_spec():
    v = fock.vacuum(["A"], [4])
    with pytest.raises(ValueError):
        fock.quadrature_moment(v, [])
    with pytest.raises(ValueError):
        fock.quadrature_moment(v, [("A", "+")] * 3)
    with pytest.raises(ValueError):
        fock.quadrature_moment(v, [("A", "x")])
    with pytest.raises(ValueError):
        fock.quadrature_moment(v, [("Q", "+")])


def test_purity_maximally_mixed_two_level():
    mat = np.diag([0.5, 0.5]).astype(complex)
    dm = fock.DensityMatrix(("A",), (1,), mat)
    assert fock.purity(dm) == pytest.approx(0.5, abs=1e-15)


def test_operations_are_bit_deterministic():
    st = fock.epr_state(0.37, ("M", "N"), 12)
    a = fock.apply_beamsplitter(st, ("M", "N"), 0.61)
    b = fock.apply_beamsplitter(st, ("M", "N"), 0.61)
    assert np.array_equal(a.amps, b.amps)


def test_debug_serialize_golden():
    st = fock.epr_state(0.5, ("A", "B"), 3)
    expect = "\n".join([
        "0,0: 0.8660254037844386,0",
        "1,1: 0.4330127018922193,0",
        "2,2: 0.21650635094610965,0",
        "3,3: 0.10825317547305482,0",
    ])
    assert fock.debug_serialize(st) == expect


def test_states_are_immutable():
    st = fock.vacuum(["A"], [3])
    with pytest.raises(ValueError):
        st.amps[0] = 0.0


def test_norm_invariant_enforced():
    with pytest.raises(ValueError):
        fock.PureState(("A",), (1,), np.array([1.0, 1.0], dtype=complex))


def test_density_matrix_requires_hermitian():
    mat = np.array([[0.5, 0.2], [0.0, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        fock.DensityMatrix(("A",), (1,), mat)
