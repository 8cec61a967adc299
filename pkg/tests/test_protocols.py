import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezeqed import dynamics as dyn
from squeezeqed import hamiltonians as hm
from squeezeqed import numerics as nm
from squeezeqed import protocols as pr
from squeezeqed.errors import TruncationError, UnsupportedTargetError

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------------------
# squeezing trajectory


def test_trajectory_cross_resonant_limit():
    traj = pr.SqueezingTrajectory(gbar=TWO_PI * 20e6, delta=0.0)
    t = 7.5e-9
    assert traj.zeta(t) == pytest.approx(1j * TWO_PI * 20e6 * t)


@given(st.floats(min_value=1e-4, max_value=1.0))
@settings(max_examples=30, deadline=None)
def test_trajectory_continuous_at_zero_detuning(delta_frac):
    gbar = 1.0
    t = 0.8
    limit = pr.SqueezingTrajectory(gbar, 0.0).zeta(t)
    small = pr.SqueezingTrajectory(gbar, delta_frac * 1e-6).zeta(t)
    assert abs(small - limit) < 1e-5


@given(
    st.floats(min_value=0.01, max_value=5.0),
    st.floats(min_value=0.01, max_value=5.0),
    st.floats(min_value=0.0, max_value=100.0),
)
@settings(max_examples=60, deadline=None)
def test_trajectory_orbit_is_bounded(gbar, delta, t):
    traj = pr.SqueezingTrajectory(gbar, delta)
    assert abs(traj.zeta(t)) <= traj.bound() * (1 + 1e-12)


def test_trajectory_general_order_matches_two_photon_case():
    gbar, delta, t = 0.7, 0.35, 1.3
    two = pr.SqueezingTrajectory(gbar, delta, n=2)
    assert two.value(t) == pytest.approx(gbar * (np.exp(2j * delta * t) - 1) / (2 * delta))


# ---------------------------------------------------------------------------
# conditional-squeeze unitary and its Hamiltonian consistency


def test_qcs_identity_at_zero():
    u = pr.qcs_unitary(0.0, cutoff=16)
    assert np.allclose(u.matrix, np.eye(32), atol=1e-13)


def test_qcs_unitary_on_interior():
    cutoff = 60
    u = pr.qcs_unitary(0.5j, cutoff=cutoff)
    proj = np.kron(np.eye(2), nm.interior_projector(cutoff).matrix)
    defect = proj @ (u.dag().matrix @ u.matrix - np.eye(2 * cutoff)) @ proj
    assert np.linalg.norm(defect, 2) < 1e-8


def test_qcs_produces_equal_branch_superposition():
    # starting from g (x) vacuum, the dressed branches carry equal weight and
    # oppositely squeezed vacua
    cutoff = 60
    zeta = 1j * 0.6
    psi0 = nm.joint_state("g", 0, cutoff)
    evolved = nm.apply_operator(pr.qcs_unitary(zeta, cutoff=cutoff), psi0)
    result = pr.measure_qubit(evolved, basis="dressed")
    assert result.probability("+") == pytest.approx(0.5, abs=1e-12)
    assert result.probability("-") == pytest.approx(0.5, abs=1e-12)
    sq = nm.squeeze(zeta, cutoff).matrix[:, 0]
    plus_state = result.outcome("+").post_state.data
    assert abs(np.vdot(sq, plus_state)) == pytest.approx(1.0, abs=1e-10)
    sq_neg = nm.squeeze(-zeta, cutoff).matrix[:, 0]
    minus_state = result.outcome("-").post_state.data
    assert abs(np.vdot(sq_neg, minus_state)) == pytest.approx(1.0, abs=1e-10)


def test_qcs_matches_conditional_hamiltonian_propagation():
    # direct propagation oracle: evolving the dressed-conditional interaction
    # (coefficient g2/2 at Delta=0) for time t equals the protocol unitary at
    # squeezing rate g2, i.e. zeta(t) = i g2 t
    cutoff = 100
    g2 = TWO_PI * 20e6
    sys = hm.SystemParams(TWO_PI * 6e9, TWO_PI * 3e9, g2, n=2, cutoff=cutoff)
    drive = hm.DriveParams(TWO_PI * 0.5e9, sys.omega_q)  # Delta = 0, delta_2 = 0
    model = hm.effective_conditional(sys, drive)
    assert model.is_static
    rate = 2 * hm.FrameParams.from_drive(sys, drive).gbar_n
    assert rate == pytest.approx(g2)

    psi0 = nm.joint_state("g", 0, cutoff)
    for t in (2e-9, 1.0 / (g2 / TWO_PI) * 0.15):  # includes rate*t ~ 1
        assert rate * t <= 1.0 + 1e-9
        res = dyn.evolve_unitary(model, psi0, np.array([0.0, t]))
        propagated = res.states[-1].data
        protocol = nm.apply_operator(
            pr.qcs_unitary(pr.SqueezingTrajectory(rate, 0.0).zeta(t), cutoff=cutoff), psi0
        ).data
        assert np.linalg.norm(propagated - protocol) < 1e-6


def test_qcs_detuned_propagation_follows_trajectory():
    # with finite detuning the first-order-in-time trajectory still tracks the
    # propagated squeezing magnitude at the few-percent level
    cutoff = 60
    g2 = TWO_PI * 20e6
    delta2 = 2 * g2
    sys = hm.SystemParams(TWO_PI * 6e9, TWO_PI * 3e9 + delta2 / 1, g2, n=2, cutoff=cutoff)
    drive = hm.DriveParams(TWO_PI * 0.5e9, TWO_PI * 6e9)
    model = hm.effective_conditional(sys, drive)
    fp = hm.FrameParams.from_drive(sys, drive)
    assert fp.delta_n == pytest.approx(delta2)
    traj = pr.SqueezingTrajectory(2 * fp.gbar_n, delta2)
    t = 0.10 / (g2 / TWO_PI)
    res = dyn.evolve_unitary(model, nm.joint_state("g", 0, cutoff), np.array([0.0, t]))
    plus = pr.measure_qubit(res.states[-1], basis="dressed").outcome("+").post_state
    expected = nm.squeeze(traj.zeta(t), cutoff).matrix[:, 0]
    overlap = abs(np.vdot(expected, plus.data))
    assert overlap > 0.995


# ---------------------------------------------------------------------------
# measurement


def test_measure_qubit_trivial_branch():
    cutoff = 12
    state = nm.joint_state("g", 0, cutoff)
    result = pr.measure_qubit(state, basis="bare")
    assert result.probability("g") == pytest.approx(1.0)
    assert result.omitted == ("e",)


def test_measure_qubit_excited_probability_at_unit_squeezing():
    # scalar oracle from the normalization formula: P(e) = (1 - 1/sqrt(cosh 2r))/2
    cutoff = 80
    r = 1.0
    psi0 = nm.joint_state("g", 0, cutoff)
    evolved = nm.apply_operator(pr.qcs_unitary(1j * r, cutoff=cutoff), psi0)
    result = pr.measure_qubit(evolved, basis="bare")
    expected = (1 - 1 / np.sqrt(np.cosh(2 * r))) / 2
    assert expected == pytest.approx(0.242220, abs=1e-6)
    assert result.probability("e") == pytest.approx(expected, abs=1e-9)
    assert result.probability("g") == pytest.approx(1 - expected, abs=1e-9)


@pytest.mark.parametrize(
    "r,cutoff", [(0.0, 60), (0.3, 80), (0.8, 140), (1.2, 240), (1.5, 400)]
)
def test_branch_probabilities_follow_normalization_formula(r, cutoff):
    psi0 = nm.joint_state("g", 0, cutoff)
    evolved = nm.apply_operator(pr.qcs_unitary(1j * r, cutoff=cutoff), psi0)
    result = pr.measure_qubit(evolved, basis="bare")
    n_plus, n_minus = pr.cat_normalization(r)
    assert result.probability("g") == pytest.approx(n_plus**2 / 4, abs=1e-9)
    assert result.probability("e") == pytest.approx(n_minus**2 / 4, abs=1e-9)
    assert result.probability("g") + result.probability("e") == pytest.approx(1.0, abs=1e-10)


def test_measure_density_matrix_agrees_with_pure_path():
    cutoff = 40
    evolved = nm.apply_operator(
        pr.qcs_unitary(0.4j, cutoff=cutoff), nm.joint_state("g", 0, cutoff)
    )
    rho = nm.QuantumState(evolved.density_matrix(), evolved.space, validate=False)
    pure = pr.measure_qubit(evolved, basis="bare")
    mixed = pr.measure_qubit(rho, basis="bare")
    for label in ("g", "e"):
        assert mixed.probability(label) == pytest.approx(pure.probability(label), abs=1e-12)
        f = dyn.fidelity(pure.outcome(label).post_state, mixed.outcome(label).post_state)
        assert f == pytest.approx(1.0, abs=1e-10)


def test_dressed_measurement_leaves_single_squeezed_state():
    cutoff = 60
    zeta = 1j * 0.9
    evolved = nm.apply_operator(pr.qcs_unitary(zeta, cutoff=cutoff), nm.joint_state("g", 0, cutoff))
    outcome = pr.measure_qubit(evolved, basis="dressed").outcome("+")
    sq = nm.QuantumState(nm.squeeze(zeta, cutoff).matrix[:, 0], outcome.post_state.space, validate=False)
    assert dyn.fidelity(outcome.post_state, sq) == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# squeezed-superposition states


def test_cat_states_are_orthogonal():
    cutoff = 80
    plus = pr.cat_squeezed_state(1j * 1.0, +1, cutoff)
    minus = pr.cat_squeezed_state(1j * 1.0, -1, cutoff)
    assert abs(plus.overlap(minus)) < 1e-10


def test_cat_state_fock_supports():
    cutoff = 80
    plus = pr.cat_squeezed_state(1j * 1.0, +1, cutoff)
    minus = pr.cat_squeezed_state(1j * 1.0, -1, cutoff)
    idx = np.arange(cutoff)
    assert np.abs(plus.data[idx % 4 != 0]).max() ** 2 < 1e-10
    assert np.abs(minus.data[idx % 4 != 2]).max() ** 2 < 1e-10


def test_cat_state_vacuum_limit():
    state = pr.cat_squeezed_state(0.0, +1, 30)
    assert abs(state.data[0]) == pytest.approx(1.0, abs=1e-12)


def test_cat_state_coefficients_match_closed_form():
    # Fock expansion proportional to sqrt((2k)!)/(2^k k!) (e^{i phi} tanh r)^k ((-1)^k +/- 1)
    import math

    cutoff, r, phi = 120, 0.9, 0.4
    zeta = r * np.exp(1j * phi)
    for sign in (+1, -1):
        state = pr.cat_squeezed_state(zeta, sign, cutoff)
        norm = pr.cat_normalization(r)[0 if sign > 0 else 1]
        for k in range(8):
            coeff = (
                math.sqrt(math.factorial(2 * k))
                / (2**k * math.factorial(k))
                * (-np.exp(1j * phi) * np.tanh(r)) ** k
                * (1 + sign * (-1) ** k)
            ) / (norm * np.sqrt(np.cosh(r)))
            assert state.data[2 * k] == pytest.approx(coeff, abs=1e-9)


def test_cat_state_truncation_error():
    with pytest.raises(TruncationError):
        pr.cat_squeezed_state(1j * 2.5, +1, 24)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generalized_support_law(n):
    # '+' superpositions live on {2kn}, '-' on {(2k+1)n}
    cutoff = 72
    lam = 0.2 if n == 3 else 0.5
    plus = pr.cat_squeezed_state(lam, +1, cutoff, n=n)
    minus = pr.cat_squeezed_state(lam, -1, cutoff, n=n)
    idx = np.arange(cutoff)
    on_plus = (idx % (2 * n)) == 0
    on_minus = (idx % (2 * n)) == n
    assert np.linalg.norm(plus.data[~on_plus]) ** 2 < 1e-10
    assert np.linalg.norm(minus.data[~on_minus]) ** 2 < 1e-10


# ---------------------------------------------------------------------------
# logical encoding


def test_logical_encode_single_branch():
    cutoff = 80
    enc = pr.logical_encode(1.0, 0.0, 1j * 1.0, cutoff)
    assert len(enc.branches) == 2
    for branch in enc.branches:
        assert branch.probability == pytest.approx(0.5, abs=1e-10)
        assert branch.predicted_fidelity == pytest.approx(1.0, abs=1e-8)
    f = dyn.fidelity(enc.branches[0].state, enc.branches[1].state)
    assert f == pytest.approx(1.0, abs=1e-10)


def test_logical_encode_squeezed_overlap_values():
    # closed form |<+L|zeta>|^2 = (1 + sqrt(1 - c^2))/2 with c = 1/sqrt(cosh 2r)
    def closed(r):
        c = 1 / np.sqrt(np.cosh(2 * r))
        return (1 + np.sqrt(1 - c * c)) / 2

    enc15 = pr.logical_encode(1.0, 0.0, 1j * 1.5, 220)
    assert closed(1.5) == pytest.approx(0.9745187, abs=1e-6)
    assert enc15.squeezed_overlap == pytest.approx(closed(1.5), abs=1e-7)
    enc20 = pr.logical_encode(1.0, 0.0, 1j * 2.0, 400)
    assert enc20.squeezed_overlap == pytest.approx(closed(2.0), abs=1e-6)
    assert enc20.squeezed_overlap >= 0.99


def test_logical_encode_equal_superposition_matches_marginals():
    cutoff = 100
    r = 0.8
    enc = pr.logical_encode(1 / np.sqrt(2), 1 / np.sqrt(2), 1j * r, cutoff)
    n_plus, n_minus = pr.cat_normalization(r)
    probs = {b.label: b.probability for b in enc.branches}
    assert probs["g"] == pytest.approx(n_plus**2 / 4, abs=1e-9)
    assert probs["e"] == pytest.approx(n_minus**2 / 4, abs=1e-9)
    for branch in enc.branches:
        assert branch.predicted_fidelity == pytest.approx(1.0, abs=1e-8)


def test_logical_encode_rejects_unnormalized_input():
    with pytest.raises(ValueError):
        pr.logical_encode(1.0, 0.5, 0.5j, 40)


# ---------------------------------------------------------------------------
# controlled gates and decompositions


def test_controlled_gates_identity_at_zero():
    assert np.allclose(pr.controlled_squeeze(0.0, 12).matrix, np.eye(24), atol=1e-13)
    assert np.allclose(pr.controlled_displacement(0.0, 12).matrix, np.eye(24), atol=1e-13)


@pytest.mark.parametrize("zeta", [0.3, 1.0, 0.7 * np.exp(0.9j)])
def test_qcs_decomposition_identity(zeta):
    # qubit-conditional squeeze = H . S(zeta) . CS(-2 zeta) . H
    cutoff = 60
    h = pr.hadamard_gate(cutoff)
    direct = pr.qcs_unitary(zeta, cutoff=cutoff)
    composed = h @ pr.global_squeeze(zeta, cutoff) @ pr.controlled_squeeze(-2 * zeta, cutoff) @ h
    proj = np.kron(np.eye(2), nm.interior_projector(cutoff).matrix)
    defect = proj @ (direct.matrix - composed.matrix) @ proj
    assert np.linalg.norm(defect, 2) < 1e-8


@pytest.mark.parametrize("alpha", [0.5, 1.0, 0.4 - 0.6j])
def test_qcd_decomposition_identity(alpha):
    # conditional displacement = H . D(alpha) . CD(-2 alpha) . H
    cutoff = 60
    h = pr.hadamard_gate(cutoff)
    p_plus, p_minus = nm.dressed_projectors(np.pi / 2)
    direct = nm.tensor(p_plus, nm.displacement(alpha, cutoff)) + nm.tensor(
        p_minus, nm.displacement(-alpha, cutoff)
    )
    composed = (
        h @ pr.global_displacement(alpha, cutoff) @ pr.controlled_displacement(-2 * alpha, cutoff) @ h
    )
    proj = np.kron(np.eye(2), nm.interior_projector(cutoff).matrix)
    defect = proj @ (direct.matrix - composed.matrix) @ proj
    assert np.linalg.norm(defect, 2) < 1e-8


# ---------------------------------------------------------------------------
# phase estimation


def test_phase_estimation_identity_unitary():
    cutoff = 30
    cu = nm.tensor(nm.identity(2), nm.identity(cutoff))
    result = pr.phase_estimation_round(cu, nm.vacuum_state(cutoff))
    assert result.probability("g") == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("phi", [0.0, 0.7, 1.1, np.pi - 0.2])
def test_phase_estimation_scalar_phase(phi):
    # 2x2 interferometer oracle: P(g) = cos^2(phi/2) for U = e^{i phi} 1
    cutoff = 20
    q = nm.qubit_operators()
    p_g = q["sigma_minus"] @ q["sigma_plus"]
    p_e = q["sigma_plus"] @ q["sigma_minus"]
    cu = nm.tensor(p_g, nm.identity(cutoff)) + np.exp(1j * phi) * nm.tensor(
        p_e, nm.identity(cutoff)
    )
    result = pr.phase_estimation_round(cu, nm.fock_state(3, cutoff))
    assert result.probability("g") == pytest.approx(np.cos(phi / 2) ** 2, abs=1e-12)


def test_phase_estimation_rejects_non_block_diagonal():
    cutoff = 10
    q = nm.qubit_operators()
    bad = nm.tensor(q["sigma_x"], nm.identity(cutoff))
    with pytest.raises(ValueError):
        pr.phase_estimation_round(bad, nm.vacuum_state(cutoff))


def test_repeated_phase_estimation_sharpens_outcomes():
    # simulation oracle: the Bernoulli variance of round outcomes decreases
    # monotonically as the state approaches a squeeze eigenstate
    cutoff = 80
    cs = pr.controlled_squeeze(0.5, cutoff)
    records = pr.repeated_phase_estimation(cs, nm.vacuum_state(cutoff), rounds=5)
    variances = [r.probabilities.get("g", 0.0) * r.probabilities.get("e", 0.0) for r in records]
    assert all(b < a for a, b in zip(variances, variances[1:]))


# ---------------------------------------------------------------------------
# commutator identities


def _qubit_resonator_pair(cutoff=20):
    gens = pr.build_generator_set("G1", cutoff)
    return gens.member("sigma_z_x"), gens.member("sigma_y")


def test_group_commutator_exact_for_commuting_pair():
    cutoff = 14
    q = nm.qubit_operators()
    h1 = nm.tensor(q["sigma_z"], nm.identity(cutoff))
    h2 = nm.tensor(nm.identity(2), nm.number_operator(cutoff))
    u = pr.group_commutator_step(h1, h2, 0.3)
    assert np.allclose(u.matrix, np.eye(2 * cutoff), atol=1e-12)


def test_symmetric_sum_exact_for_equal_generators():
    cutoff = 14
    h = nm.tensor(nm.qubit_operators()["sigma_y"], nm.position_operator(cutoff))
    tau = 0.21
    got = pr.symmetric_sum_step(h, h, tau)
    want = pr.symmetric_sum_target(h, h, tau)
    assert np.abs(got.matrix - want.matrix).max() < 1e-12


def _slope(errs, taus):
    fit = np.polyfit(np.log(taus), np.log(errs), 1)
    return fit[0]


def test_group_commutator_third_order():
    h1, h2 = _qubit_resonator_pair()
    taus = np.geomspace(1e-3, 1e-1, 7)
    errs = [
        np.linalg.norm(
            pr.group_commutator_step(h1, h2, t).matrix - pr.group_commutator_target(h1, h2, t).matrix,
            2,
        )
        for t in taus
    ]
    assert abs(_slope(errs, taus) - 3.0) < 0.3


def test_symmetric_sum_third_order():
    h1, h2 = _qubit_resonator_pair()
    taus = np.geomspace(1e-3, 1e-1, 7)
    errs = [
        np.linalg.norm(
            pr.symmetric_sum_step(h1, h2, t).matrix - pr.symmetric_sum_target(h1, h2, t).matrix, 2
        )
        for t in taus
    ]
    assert abs(_slope(errs, taus) - 3.0) < 0.3


# ---------------------------------------------------------------------------
# generating sets and synthesis


def test_generator_sets_members():
    g1 = pr.build_generator_set("G1", 16)
    assert set(g1.members) == {"sigma_z_x", "sigma_z_p", "sigma_x", "sigma_y", "sigma_z"}
    g2 = pr.build_generator_set("G2", 16)
    assert set(g2.members) >= set(g1.members)
    assert "sigma_z_xx_minus_pp" in g2.members and "sigma_z_xp_plus_px" in g2.members
    for op in g2.members.values():
        assert op.is_hermitian()


@pytest.mark.parametrize(
    "target,set_name,count",
    [
        ("sigma_x_x", "G1", 4),
        ("sigma_y_p", "G1", 4),
        ("sigma_z_xx", "G1", 16),
        ("sigma_z_pp", "G1", 16),
        ("sigma_z_xx_minus_pp", "G1", 64),
        ("sigma_z_xp_plus_px", "G1", 64),
        ("sigma_z_xx_minus_pp", "G2", 1),
        ("sigma_z_xp_plus_px", "G2", 1),
        ("sigma_z_x", "G1", 1),
    ],
)
def test_synthesis_operation_counts(target, set_name, count):
    assert pr.synthesis_cost(target, set_name, cutoff=12).count == count


def test_synthesis_generators_point_along_targets():
    cutoff = 12
    q = nm.qubit_operators()
    x = nm.position_operator(cutoff)
    p = nm.momentum_operator(cutoff)
    expectations = {
        "sigma_x_x": nm.tensor(q["sigma_x"], x),
        "sigma_z_xx": nm.tensor(q["sigma_z"], x @ x),
        "sigma_z_xx_minus_pp": nm.tensor(q["sigma_z"], x @ x - p @ p),
        "sigma_z_xp_plus_px": nm.tensor(q["sigma_z"], x @ p + p @ x),
    }
    for target, want in expectations.items():
        got = pr.synthesis_cost(target, "G1", cutoff=cutoff).generator
        # proportional with a positive weight
        num = np.vdot(want.matrix, got.matrix).real
        den = np.vdot(want.matrix, want.matrix).real
        weight = num / den
        assert weight > 0
        assert np.abs(got.matrix - weight * want.matrix).max() < 1e-12


@pytest.mark.parametrize("target", ["sigma_x_x", "sigma_z_xx", "sigma_z_xx_minus_pp"])
def test_synthesis_sequence_error_is_third_order_dominated(target):
    plan = pr.synthesis_cost(target, "G1", cutoff=20)
    taus = np.array([0.08, 0.04, 0.02, 0.01])
    errs = np.array([plan.error(t) for t in taus])
    assert np.all(np.diff(errs) < 0)  # error decreases as tau decreases
    slope = _slope(errs, taus)
    assert slope > 2.7  # at least third order; nested sequences converge faster
    assert errs[-1] < 1e-2


def test_synthesis_tree_serializes_to_json(tmp_path):
    plan = pr.synthesis_cost("sigma_z_xx", "G1", cutoff=10)
    path = tmp_path / "plan.json"
    plan.to_json(path)
    payload = json.loads(path.read_text())
    assert payload["operation_count"] == 16
    assert payload["tree"]["rule"] == "group-commutator"

    def leaves(node):
        if node["rule"] == "primitive":
            return 1
        return sum(leaves(child) for child in node["children"]) * 2

    assert leaves(payload["tree"]) == 16


def test_synthesis_unknown_target():
    with pytest.raises(UnsupportedTargetError):
        pr.synthesis_cost("sigma_z_xxx", "G1", cutoff=10)
