import numpy as np
import pytest

from squeezeqed import analysis as an
from squeezeqed import numerics as nm
from squeezeqed import protocols as pr


def _squeezed_vacuum(zeta, cutoff):
    return nm.QuantumState(nm.squeeze(zeta, cutoff).matrix[:, 0], nm.HilbertSpace((cutoff,)), validate=False)


def test_wigner_vacuum_peak_and_normalization():
    # coherent-state closed form: W(x, p) = exp(-(x^2 + p^2))/pi; cutoff well
    # above the largest displaced-state support on the window
    cutoff = 80
    grid = an.wigner(nm.vacuum_state(cutoff), resolution=121)
    i0 = np.argmin(np.abs(grid.x))
    j0 = np.argmin(np.abs(grid.p))
    assert grid.values[i0, j0] == pytest.approx(1 / np.pi, rel=1e-10)
    closed = np.exp(-(grid.x[:, None] ** 2 + grid.p[None, :] ** 2)) / np.pi
    assert np.abs(grid.values - closed).max() < 1e-10
    assert grid.integral() == pytest.approx(1.0, abs=0.01)
    assert grid.min() >= -1e-12


def test_wigner_squeezed_vacuum_is_gaussian_positive():
    cutoff = 220
    state = _squeezed_vacuum(0.9j, cutoff)
    grid = an.wigner(state, resolution=101)
    assert grid.min() > -1e-9
    mn, negvol = an.wigner_negativity(grid)
    assert mn > -1e-9
    assert abs(negvol) < 1e-6
    assert grid.integral() == pytest.approx(1.0, abs=0.01)


def test_wigner_cat_branch_has_negative_fringes():
    # interference of orthogonally squeezed vacua dips well below zero
    cutoff = 80
    zeta = 1j * 2 * np.pi * 0.15  # the squeezing reached at g2 t / 2pi = 0.15
    state = pr.cat_squeezed_state(zeta, -1, cutoff)
    grid = an.wigner(state, resolution=161)
    assert grid.min() < -0.01
    assert grid.integral() == pytest.approx(1.0, abs=0.01)
    mn, negvol = an.wigner_negativity(grid)
    assert mn == grid.min()
    assert negvol > 1e-3


def test_wigner_marginal_matches_position_density():
    # marginal over p reproduces |<x|psi>|^2; Hermite-function oracle
    cutoff = 50
    state = _squeezed_vacuum(0.5, cutoff)
    width = 6.0
    grid = an.wigner(state, x_grid=np.linspace(-width, width, 201), p_grid=np.linspace(-width, width, 201))
    # position wavefunction from the Fock expansion: <x|n> Hermite functions
    xs = grid.x
    hermites = np.zeros((cutoff, xs.size))
    hermites[0] = np.pi**-0.25 * np.exp(-(xs**2) / 2)
    if cutoff > 1:
        hermites[1] = np.sqrt(2.0) * xs * hermites[0]
    for n in range(2, cutoff):
        hermites[n] = np.sqrt(2.0 / n) * xs * hermites[n - 1] - np.sqrt((n - 1) / n) * hermites[n - 2]
    psi_x = state.data @ hermites
    density = np.abs(psi_x) ** 2
    assert np.abs(grid.marginal_x() - density).max() < 1e-6


def test_wigner_mixed_state_matches_pure_average():
    cutoff = 30
    psi_a = nm.fock_state(0, cutoff)
    psi_b = nm.fock_state(1, cutoff)
    rho = nm.QuantumState(
        0.5 * psi_a.density_matrix() + 0.5 * psi_b.density_matrix(), psi_a.space
    )
    xs = np.linspace(-3, 3, 41)
    mixed = an.wigner(rho, x_grid=xs, p_grid=xs)
    ga = an.wigner(psi_a, x_grid=xs, p_grid=xs)
    gb = an.wigner(psi_b, x_grid=xs, p_grid=xs)
    assert np.abs(mixed.values - 0.5 * (ga.values + gb.values)).max() < 1e-10


def test_wigner_warns_near_cutoff():
    cutoff = 24
    with pytest.warns(an.TruncationWarning):
        an.wigner(_squeezed_vacuum(1.8, cutoff), resolution=31)


def test_wigner_serialization(tmp_path):
    grid = an.wigner(nm.vacuum_state(16), resolution=31)
    csv = tmp_path / "w.csv"
    grid.to_csv(csv, metadata={"state": "vacuum"})
    text = csv.read_text()
    assert text.startswith("# state: vacuum")
    assert text.splitlines()[1] == "x,p,W"
    assert len(text.splitlines()) == 2 + 31 * 31
    png = tmp_path / "w.png"
    grid.to_png(png)
    from PIL import Image

    img = Image.open(png)
    assert img.size == (31, 31)


def test_photon_trajectory_analytic_channel():
    # scalar oracle: sinh^2(1) at rate * t = 1
    cutoff = 100
    rate = 2 * np.pi * 20e6
    times = np.linspace(0, 1.0 / rate, 9)
    states = [
        _squeezed_vacuum(1j * rate * t if t > 0 else 0.0, cutoff) for t in times
    ]
    series = an.photon_trajectory(states, times, rate=rate)
    assert series.channels["n"][0] == pytest.approx(0.0, abs=1e-12)
    assert series.channels["n_analytic"][-1] == pytest.approx(np.sinh(1.0) ** 2, rel=1e-12)
    assert np.sinh(1.0) ** 2 == pytest.approx(1.3810978, abs=1e-6)
    assert np.abs(series.channels["n"] - series.channels["n_analytic"]).max() < 1e-8


def test_photon_trajectory_detuning_ordering():
    # for fixed rate, smaller detuning -> more photons at the same time
    cutoff = 60
    g2 = 2 * np.pi * 20e6
    t = 0.15 / (g2 / (2 * np.pi))
    photon_numbers = []
    for frac in (2.0, 1.0, 0.5, 0.1, 0.0):
        traj = pr.SqueezingTrajectory(g2, frac * g2)
        state = _squeezed_vacuum(traj.zeta(t), cutoff)
        photon_numbers.append(an.photon_trajectory([state], [t]).channels["n"][0])
    assert all(b > a for a, b in zip(photon_numbers, photon_numbers[1:]))


def test_squeezing_from_state_examples():
    cutoff = 80
    vac = an.squeezing_from_state(nm.vacuum_state(cutoff))
    assert vac.r == pytest.approx(0.0, abs=1e-12)
    assert vac.gaussian
    est = an.squeezing_from_state(_squeezed_vacuum(0.7j, cutoff))
    assert est.r == pytest.approx(0.7, abs=1e-6)
    assert est.phi == pytest.approx(np.pi / 2, abs=1e-8)
    assert est.gaussian
    # the squeezed quadrature variance follows exp(-2r)/2
    assert est.min_variance == pytest.approx(np.exp(-1.4) / 2, rel=1e-9)


def test_squeezing_phase_recovers_parameter_phase():
    cutoff = 80
    for phase in (0.0, 0.6, 1.5708, 2.4):
        est = an.squeezing_from_state(_squeezed_vacuum(0.6 * np.exp(1j * phase), cutoff))
        assert est.phi == pytest.approx(phase, abs=1e-6)


def test_squeezing_detuned_trajectory_magnitude():
    # |zeta(t)| from the closed-form trajectory at delta = 2 g2
    cutoff = 60
    g2 = 2 * np.pi * 20e6
    traj = pr.SqueezingTrajectory(g2, 2 * g2)
    for frac in (0.05, 0.1, 0.15):
        t = frac / (g2 / (2 * np.pi))
        est = an.squeezing_from_state(_squeezed_vacuum(traj.zeta(t), cutoff))
        assert est.r == pytest.approx(abs(traj.zeta(t)), rel=1e-8)


def test_non_gaussian_flag_on_cat_state():
    cutoff = 80
    cat = pr.cat_squeezed_state(1j * 1.0, +1, cutoff)
    est = an.squeezing_from_state(cat)
    assert not est.gaussian
    assert abs(est.excess_kurtosis) > 0.1


def test_fock_support_classifications():
    cutoff = 80
    plus = pr.cat_squeezed_state(1j * 1.0, +1, cutoff)
    minus = pr.cat_squeezed_state(1j * 1.0, -1, cutoff)
    sup_plus = an.fock_support(plus, 2)
    assert sup_plus.classification == "even-multiples"
    assert sup_plus.leakage < 1e-10
    assert sup_plus.odd_mass < 1e-10
    sup_minus = an.fock_support(minus, 2)
    assert sup_minus.classification == "odd-multiples"
    assert sup_minus.leakage < 1e-10
    vac = an.fock_support(nm.vacuum_state(cutoff), 2)
    assert vac.classification == "even-multiples"
    mixed = an.fock_support(nm.fock_state(1, cutoff), 2)
    assert mixed.classification == "mixed"


def test_parity_is_even_for_both_cat_branches():
    # both branches have even photon number; the mod-4 ladder is what
    # distinguishes them
    cutoff = 80
    parity = nm.parity_operator(cutoff)
    from squeezeqed.dynamics import expectation

    for sign in (+1, -1):
        cat = pr.cat_squeezed_state(1j * 1.0, sign, cutoff)
        assert np.real(expectation(parity, cat)) == pytest.approx(1.0, abs=1e-10)
