"""Conditional-squeezing protocol and its quantum-information applications.

Covers the protocol-level time evolution (qubit-conditional squeezing and its
n-photon generalizations), measurement-conditioned state preparation and the
logical encoding built on superpositions of orthogonally squeezed vacua,
controlled-squeeze/displacement gates with their decomposition, ancilla-based
phase-estimation rounds, and short-time unitary synthesis from commutator and
symmetric-splitting identities.

Rate convention
---------------
`SqueezingTrajectory(gbar, delta)` stores the squeezing parameter reached by
the protocol whose cross-resonant squeezing *rate* is `gbar`, i.e.
|zeta(t)| = gbar * t at delta = 0.  Propagating the dressed-conditional
Hamiltonian whose interaction coefficient is c produces exactly this
trajectory with gbar = 2c (equivalently gbar = g_n * sin(theta)): the
conditional term drives both the raising and lowering quadratures, doubling
the exponent accumulation relative to its coefficient.  The consistency test
suite pins this mapping against direct propagation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, UnsupportedTargetError
from .numerics import (
    HilbertSpace,
    Operator,
    QuantumState,
    apply_operator,
    displacement,
    dressed_projectors,
    dressed_states,
    generalized_squeeze,
    identity,
    momentum_operator,
    position_operator,
    qubit_operators,
    squeeze,
    tensor,
    vacuum_state,
)
from .serialize import write_text_atomic

__all__ = [
    "SqueezingTrajectory",
    "MeasurementOutcome",
    "MeasurementResult",
    "qcs_unitary",
    "measure_qubit",
    "cat_normalization",
    "cat_squeezed_state",
    "logical_encode",
    "LogicalEncoding",
    "controlled_squeeze",
    "controlled_displacement",
    "hadamard_gate",
    "global_squeeze",
    "global_displacement",
    "phase_estimation_round",
    "repeated_phase_estimation",
    "group_commutator_step",
    "group_commutator_target",
    "symmetric_sum_step",
    "symmetric_sum_target",
    "GeneratorSet",
    "build_generator_set",
    "SynthesisPlan",
    "synthesis_cost",
    "SYNTHESIS_TARGETS",
]


# ---------------------------------------------------------------------------
# squeezing trajectory


@dataclass(frozen=True)
class SqueezingTrajectory:
    """Closed-form squeezing parameter of the detuned conditional interaction.

    zeta(t) = gbar (exp(2i delta t) - 1) / (2 delta) for the two-photon case,
    continuous at delta -> 0 where it reduces to i gbar t.  The orbit is
    bounded: |zeta(t)| <= gbar/|delta| whenever delta != 0.
    """

    gbar: float
    delta: float
    n: int = 2

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("interaction order n must be >= 1")

    def zeta(self, t: float) -> complex:
        if self.n != 2:
            raise ValueError("zeta() is the two-photon parameter; use value() for general n")
        return self.value(t)

    def value(self, t: float) -> complex:
        """Generalized parameter gbar n! (exp(i n delta t) - 1) / (2 n delta)."""
        n = self.n
        phase_rate = n * self.delta
        if phase_rate == 0.0:
            return 1j * self.gbar * math.factorial(n) * t / 2
        return (
            self.gbar * math.factorial(n) * (np.exp(1j * phase_rate * t) - 1.0) / (2 * phase_rate)
        )

    def bound(self) -> float:
        """Supremum of |value(t)| over all t (infinite at cross-resonance)."""
        if self.delta == 0.0:
            return np.inf
        return self.gbar * math.factorial(self.n) / (self.n * abs(self.delta))


# ---------------------------------------------------------------------------
# protocol unitaries


def qcs_unitary(zeta: complex, theta: float = np.pi / 2, cutoff: int = 60, n: int = 2) -> Operator:
    """Dressed-conditional squeeze: P_plus (x) S(zeta) + P_minus (x) S(-zeta).

    theta is the dressed mixing angle (pi/2, the default, is the strongly
    driven sigma_x-conditioned case).  For n != 2 the same structure applies
    with the generalized n-photon operator.
    """
    p_plus, p_minus = dressed_projectors(theta)
    s_plus = generalized_squeeze(n, zeta, cutoff)
    s_minus = generalized_squeeze(n, -zeta, cutoff)
    return tensor(p_plus, s_plus) + tensor(p_minus, s_minus)


def global_squeeze(zeta: complex, cutoff: int) -> Operator:
    """Unconditional squeeze on the joint space."""
    return tensor(identity(2), squeeze(zeta, cutoff))


def global_displacement(alpha: complex, cutoff: int) -> Operator:
    return tensor(identity(2), displacement(alpha, cutoff))


def controlled_squeeze(zeta: complex, cutoff: int) -> Operator:
    """|g><g| (x) 1 + |e><e| (x) S(zeta)."""
    q = qubit_operators()
    p_g = q["sigma_minus"] @ q["sigma_plus"]
    p_e = q["sigma_plus"] @ q["sigma_minus"]
    return tensor(p_g, identity(cutoff)) + tensor(p_e, squeeze(zeta, cutoff))


def controlled_displacement(alpha: complex, cutoff: int) -> Operator:
    q = qubit_operators()
    p_g = q["sigma_minus"] @ q["sigma_plus"]
    p_e = q["sigma_plus"] @ q["sigma_minus"]
    return tensor(p_g, identity(cutoff)) + tensor(p_e, displacement(alpha, cutoff))


def hadamard_gate(cutoff: int) -> Operator:
    return tensor(qubit_operators()["hadamard"], identity(cutoff))


# ---------------------------------------------------------------------------
# qubit measurement


@dataclass(frozen=True)
class MeasurementOutcome:
    basis: str
    label: str
    probability: float
    post_state: QuantumState  # resonator state after the projection


@dataclass(frozen=True)
class MeasurementResult:
    outcomes: tuple[MeasurementOutcome, ...]
    omitted: tuple[str, ...] = ()

    def probability(self, label: str) -> float:
        for outcome in self.outcomes:
            if outcome.label == label:
                return outcome.probability
        if label in self.omitted:
            return 0.0
        raise KeyError(label)

    def outcome(self, label: str) -> MeasurementOutcome:
        for outcome in self.outcomes:
            if outcome.label == label:
                return outcome
        raise KeyError(label)


_BARE_KETS = {
    "g": np.array([1.0, 0.0], dtype=complex),
    "e": np.array([0.0, 1.0], dtype=complex),
}


def _measurement_kets(basis: str, theta: float) -> dict[str, np.ndarray]:
    if basis == "bare":
        return dict(_BARE_KETS)
    if basis == "dressed":
        plus, minus = dressed_states(theta)
        return {"+": plus.data, "-": minus.data}
    raise ValueError(f"unknown measurement basis {basis!r}")


def measure_qubit(
    joint: QuantumState,
    basis: str = "bare",
    theta: float = np.pi / 2,
    zero_tol: float = 1e-12,
) -> MeasurementResult:
    """Projective qubit measurement on a qubit (x) resonator state.

    Returns every outcome with its probability and the renormalized
    resonator state; zero-probability branches are omitted and listed in
    `omitted`.  `theta` selects the dressed basis orientation and is ignored
    for bare-basis measurements.
    """
    dims = joint.space.dims
    if len(dims) != 2 or dims[0] != 2:
        raise ValueError("measure_qubit expects a qubit (x) resonator state")
    cutoff = dims[1]
    kets = _measurement_kets(basis, theta)
    res_space = HilbertSpace((cutoff,))

    outcomes, omitted = [], []
    if joint.is_pure:
        amps = joint.data.reshape(2, cutoff)
        for label, w in kets.items():
            branch = w.conj() @ amps
            prob = float(np.linalg.norm(branch) ** 2)
            if prob <= zero_tol:
                omitted.append(label)
                continue
            post = QuantumState(branch / np.sqrt(prob), res_space, validate=False)
            outcomes.append(MeasurementOutcome(basis, label, prob, post))
    else:
        rho = joint.data.reshape(2, cutoff, 2, cutoff)
        for label, w in kets.items():
            block = np.einsum("q,qmrn,r->mn", w.conj(), rho, w, optimize=True)
            prob = float(np.real(np.trace(block)))
            if prob <= zero_tol:
                omitted.append(label)
                continue
            post = QuantumState(block / prob, res_space, validate=False)
            outcomes.append(MeasurementOutcome(basis, label, prob, post))
    return MeasurementResult(tuple(outcomes), tuple(omitted))


# ---------------------------------------------------------------------------
# squeezed-superposition states and logical encoding


def cat_normalization(r: float) -> tuple[float, float]:
    """Norms (N_plus, N_minus) of |zeta> +/- |-zeta> at squeezing r = |zeta|."""
    overlap = 1.0 / np.sqrt(np.cosh(2 * r))
    return (
        float(np.sqrt(2 * (1 + overlap))),
        float(np.sqrt(2 * (1 - overlap))),
    )


def cat_squeezed_state(
    zeta: complex, sign: int, cutoff: int, n: int = 2, norm_tol: float = 1e-6
) -> QuantumState:
    """Normalized superposition of orthogonally squeezed vacua.

    sign=+1 builds (|zeta> + |-zeta>)/N_plus, supported on Fock multiples
    {2kn}; sign=-1 the {(2k+1)n}-supported partner.  Raises TruncationError
    when the truncated norm disagrees with the closed form by more than
    norm_tol (two-photon case), or when boundary leakage is visible.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    vac = vacuum_state(cutoff).data
    branch_plus = generalized_squeeze(n, zeta, cutoff).matrix @ vac
    branch_minus = generalized_squeeze(n, -zeta, cutoff).matrix @ vac
    raw = branch_plus + sign * branch_minus
    norm_sq = float(np.real(raw.conj() @ raw))
    if n == 2:
        n_plus, n_minus = cat_normalization(abs(zeta))
        exact = n_plus**2 if sign > 0 else n_minus**2
        if abs(norm_sq - exact) > norm_tol * max(1.0, exact):
            raise TruncationError(
                f"truncated norm^2 {norm_sq:.8g} deviates from closed form {exact:.8g}"
            )
    tail = float(np.linalg.norm(branch_plus[-max(2, cutoff // 10):]) ** 2)
    if tail > norm_tol:
        raise TruncationError(f"squeezed branch carries {tail:.3g} population near the cutoff")
    if norm_sq <= 0:
        raise TruncationError("superposition annihilated by truncation")
    return QuantumState(raw / np.sqrt(norm_sq), HilbertSpace((cutoff,)), validate=False)


@dataclass(frozen=True)
class LogicalBranch:
    label: str
    probability: float
    state: QuantumState
    logical_coefficients: tuple[complex, complex]  # projections on |+L>, |-L>
    predicted_fidelity: float  # overlap^2 with the mixing-formula prediction


@dataclass(frozen=True)
class LogicalEncoding:
    branches: tuple[LogicalBranch, ...]
    plus_logical: QuantumState
    minus_logical: QuantumState
    squeezed_overlap: float  # |<+L|zeta>|^2, the large-squeezing approximation quality


def logical_encode(
    c_plus: complex, c_minus: complex, zeta: complex, cutoff: int
) -> LogicalEncoding:
    """Run the conditional-squeeze encoding of c_plus|+> + c_minus|-> into the
    resonator and measure the qubit in the bare basis.

    Each measurement branch leaves the resonator in a superposition of the
    logical states |+L>, |-L> = (cat_+ +/- cat_-)/sqrt(2); the branch record
    carries the simulated state, its logical coefficients, and the fidelity
    against the closed-form normalization-mixing prediction.
    """
    if abs(abs(c_plus) ** 2 + abs(c_minus) ** 2 - 1.0) > 1e-10:
        raise ValueError("qubit coefficients must be normalized")
    plus, minus = _measurement_kets("dressed", np.pi / 2).values()
    qubit = c_plus * plus + c_minus * minus
    joint = QuantumState(np.kron(qubit, vacuum_state(cutoff).data), HilbertSpace((2, cutoff)))
    evolved = apply_operator(qcs_unitary(zeta, np.pi / 2, cutoff), joint)
    measured = measure_qubit(evolved, basis="bare")

    cat_plus = cat_squeezed_state(zeta, +1, cutoff)
    cat_minus = cat_squeezed_state(zeta, -1, cutoff)
    plus_logical = QuantumState(
        (cat_plus.data + cat_minus.data) / np.sqrt(2), cat_plus.space, validate=False
    )
    minus_logical = QuantumState(
        (cat_plus.data - cat_minus.data) / np.sqrt(2), cat_plus.space, validate=False
    )
    sq_vac = squeeze(zeta, cutoff).matrix[:, 0]
    squeezed_overlap = float(abs(plus_logical.data.conj() @ sq_vac) ** 2)

    n_plus, n_minus = cat_normalization(abs(zeta))
    total, diff = n_plus + n_minus, n_plus - n_minus
    predictions = {
        "g": (c_plus * total + c_minus * diff, c_plus * diff + c_minus * total),
        "e": (c_plus * total - c_minus * diff, c_plus * diff - c_minus * total),
    }

    branches = []
    for outcome in measured.outcomes:
        coeff_plus = complex(plus_logical.data.conj() @ outcome.post_state.data)
        coeff_minus = complex(minus_logical.data.conj() @ outcome.post_state.data)
        a, b = predictions[outcome.label]
        predicted = a * plus_logical.data + b * minus_logical.data
        nrm = np.linalg.norm(predicted)
        fid = float(abs(predicted.conj() @ outcome.post_state.data / nrm) ** 2) if nrm > 0 else 0.0
        branches.append(
            LogicalBranch(outcome.label, outcome.probability, outcome.post_state,
                          (coeff_plus, coeff_minus), fid)
        )
    return LogicalEncoding(tuple(branches), plus_logical, minus_logical, squeezed_overlap)


# ---------------------------------------------------------------------------
# phase estimation


def _is_qubit_block_diagonal(u: Operator) -> bool:
    cutoff = u.space.dims[1]
    blocks = u.matrix.reshape(2, cutoff, 2, cutoff)
    off = max(np.abs(blocks[0, :, 1, :]).max(), np.abs(blocks[1, :, 0, :]).max())
    return off < 1e-10 * max(1.0, np.abs(u.matrix).max())


def phase_estimation_round(controlled_u: Operator, state: QuantumState) -> MeasurementResult:
    """One ancilla round: H, controlled-U, H, bare-basis qubit measurement.

    `state` may be a resonator state (the ancilla is prepared in g) or a full
    qubit (x) resonator state.  The controlled unitary must be block diagonal
    in the qubit basis.
    """
    dims = controlled_u.space.dims
    if len(dims) != 2 or dims[0] != 2:
        raise ValueError("controlled unitary must act on qubit (x) resonator")
    if not _is_qubit_block_diagonal(controlled_u):
        raise ValueError("controlled unitary is not block diagonal in the qubit basis")
    cutoff = dims[1]
    if state.space.dims == (cutoff,):
        joint = QuantumState(
            np.kron(_BARE_KETS["g"], state.data), HilbertSpace((2, cutoff)), validate=False
        )
    elif state.space.dims == dims:
        joint = state
    else:
        raise ValueError("state dimension matches neither the resonator nor the joint space")
    h = hadamard_gate(cutoff)
    circuit = h @ controlled_u @ h
    return measure_qubit(apply_operator(circuit, joint), basis="bare")


@dataclass(frozen=True)
class PhaseEstimationRound:
    index: int
    probabilities: dict[str, float]
    chosen: str
    state: QuantumState


def repeated_phase_estimation(
    controlled_u: Operator,
    resonator_state: QuantumState,
    rounds: int,
    follow: str = "likely",
) -> list[PhaseEstimationRound]:
    """Iterate phase-estimation rounds, feeding the conditioned resonator
    state forward.  `follow` picks the branch: 'likely', 'g', or 'e'.
    Outcomes are enumerated, never sampled, so runs are deterministic.
    """
    records = []
    current = resonator_state
    for index in range(rounds):
        result = phase_estimation_round(controlled_u, current)
        probs = {o.label: o.probability for o in result.outcomes}
        if follow == "likely":
            chosen = max(probs, key=probs.get)
        elif follow in probs:
            chosen = follow
        else:
            chosen = max(probs, key=probs.get)  # requested branch vanished
        current = result.outcome(chosen).post_state
        records.append(PhaseEstimationRound(index, probs, chosen, current))
    return records


# ---------------------------------------------------------------------------
# commutator and splitting identities


def _expih(h: Operator, s: float) -> np.ndarray:
    from .numerics import matrix_exponential

    return matrix_exponential(-1j * s * h.matrix)


def group_commutator_step(h1: Operator, h2: Operator, tau: float) -> Operator:
    """Four-exponential commutator step.

    Applies, in temporal order, exp(-i H1 tau), exp(-i H2 tau),
    exp(+i H1 tau), exp(+i H2 tau); the net unitary approximates
    exp([H1, H2] tau^2) with an O(tau^3) defect.
    """
    u = _expih(h2, -tau) @ _expih(h1, -tau) @ _expih(h2, tau) @ _expih(h1, tau)
    return Operator(u, h1.space)


def group_commutator_target(h1: Operator, h2: Operator, tau: float) -> Operator:
    from .numerics import matrix_exponential

    return Operator(matrix_exponential(h1.commutator(h2).matrix * tau**2), h1.space)


def symmetric_sum_step(h1: Operator, h2: Operator, tau: float) -> Operator:
    """Symmetric splitting exp(iH1 tau/2) exp(iH2 tau/2) exp(iH2 tau/2)
    exp(iH1 tau/2), approximating exp(i(H1+H2) tau) with O(tau^3) defect."""
    a = _expih(h1, -tau / 2)
    b = _expih(h2, -tau / 2)
    return Operator(a @ b @ b @ a, h1.space)


def symmetric_sum_target(h1: Operator, h2: Operator, tau: float) -> Operator:
    from .numerics import matrix_exponential

    return Operator(matrix_exponential(1j * tau * (h1 + h2).matrix), h1.space)


# ---------------------------------------------------------------------------
# generating sets and synthesis cost


@dataclass(frozen=True)
class GeneratorSet:
    name: str
    members: dict[str, Operator]

    def member(self, label: str) -> Operator:
        return self.members[label]


def _joint_generators(cutoff: int) -> dict[str, Operator]:
    q = qubit_operators()
    eye_r = identity(cutoff)
    x = position_operator(cutoff)
    p = momentum_operator(cutoff)
    xx, pp = x @ x, p @ p
    anticomm = x @ p + p @ x
    return {
        "sigma_x": tensor(q["sigma_x"], eye_r),
        "sigma_y": tensor(q["sigma_y"], eye_r),
        "sigma_z": tensor(q["sigma_z"], eye_r),
        "sigma_z_x": tensor(q["sigma_z"], x),
        "sigma_z_p": tensor(q["sigma_z"], p),
        "sigma_x_x": tensor(q["sigma_x"], x),
        "sigma_y_x": tensor(q["sigma_y"], x),
        "sigma_x_p": tensor(q["sigma_x"], p),
        "sigma_y_p": tensor(q["sigma_y"], p),
        "sigma_z_xx": tensor(q["sigma_z"], xx),
        "sigma_z_pp": tensor(q["sigma_z"], pp),
        "sigma_z_xx_minus_pp": tensor(q["sigma_z"], xx - pp),
        "sigma_z_xp_plus_px": tensor(q["sigma_z"], anticomm),
    }


_G1_MEMBERS = ("sigma_z_x", "sigma_z_p", "sigma_x", "sigma_y", "sigma_z")
_G2_MEMBERS = _G1_MEMBERS + ("sigma_z_xx_minus_pp", "sigma_z_xp_plus_px")

SYNTHESIS_TARGETS = (
    "sigma_x_x",
    "sigma_y_x",
    "sigma_x_p",
    "sigma_y_p",
    "sigma_z_xx",
    "sigma_z_pp",
    "sigma_z_xx_minus_pp",
    "sigma_z_xp_plus_px",
)


def build_generator_set(name: str, cutoff: int) -> GeneratorSet:
    """Conditional-displacement set G1 or its conditional-squeezing
    extension G2, materialized at the given truncation."""
    gens = _joint_generators(cutoff)
    if name == "G1":
        labels = _G1_MEMBERS
    elif name == "G2":
        labels = _G2_MEMBERS
    else:
        raise ValueError(f"unknown generating set {name!r}")
    return GeneratorSet(name, {label: gens[label] for label in labels})


class _Node:
    """Synthesis-tree node: realizes a unitary approximating
    exp(-i generator * effective_time(tau))."""

    generator: Operator
    count: int
    depth: int

    def effective_time(self, tau: float) -> float:
        return tau ** (2**self.depth)

    def base_for_time(self, t: float) -> float:
        return t ** (1.0 / (2**self.depth))

    def realize(self, tau: float) -> np.ndarray:
        raise NotImplementedError

    def negated(self) -> "_Node":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class _Primitive(_Node):
    label: str
    sign: int
    operator: Operator

    @property
    def generator(self):
        return self.sign * self.operator

    count = 1
    depth = 0

    def realize(self, tau: float) -> np.ndarray:
        return _expih(self.operator, self.sign * tau)

    def negated(self):
        return _Primitive(self.label, -self.sign, self.operator)

    def to_dict(self):
        return {"rule": "primitive", "member": self.label, "sign": self.sign, "count": 1}


@dataclass(frozen=True)
class _Commutator(_Node):
    a: _Node
    b: _Node

    def __post_init__(self):
        if self.a.depth != self.b.depth:
            raise ValueError("commutator children must share a depth")

    @property
    def generator(self):
        return 1j * self.a.generator.commutator(self.b.generator)

    @property
    def count(self):
        return 2 * (self.a.count + self.b.count)

    @property
    def depth(self):
        return self.a.depth + 1

    def realize(self, tau: float) -> np.ndarray:
        ua, ub = self.a.realize(tau), self.b.realize(tau)
        ua_neg, ub_neg = self.a.negated().realize(tau), self.b.negated().realize(tau)
        return ub_neg @ ua_neg @ ub @ ua

    def negated(self):
        return _Commutator(self.b, self.a)

    def to_dict(self):
        return {
            "rule": "group-commutator",
            "count": self.count,
            "children": [self.a.to_dict(), self.b.to_dict()],
        }


@dataclass(frozen=True)
class _Sum(_Node):
    a: _Node
    b: _Node

    def __post_init__(self):
        if self.a.depth != self.b.depth:
            raise ValueError("sum children must share a depth")

    @property
    def generator(self):
        return self.a.generator + self.b.generator

    @property
    def count(self):
        return 2 * (self.a.count + self.b.count)

    @property
    def depth(self):
        return self.a.depth

    def realize(self, tau: float) -> np.ndarray:
        half = self.base_for_time(self.effective_time(tau) / 2)
        ua, ub = self.a.realize(half), self.b.realize(half)
        return ua @ ub @ ub @ ua

    def negated(self):
        return _Sum(self.a.negated(), self.b.negated())

    def to_dict(self):
        return {
            "rule": "symmetric-sum",
            "count": self.count,
            "children": [self.a.to_dict(), self.b.to_dict()],
        }


@dataclass(frozen=True)
class SynthesisPlan:
    target: str
    set_name: str
    count: int
    tree: _Node

    @property
    def generator(self) -> Operator:
        return self.tree.generator

    def effective_time(self, tau: float) -> float:
        return self.tree.effective_time(tau)

    def realize(self, tau: float) -> Operator:
        return Operator(self.tree.realize(tau), self.generator.space)

    def target_unitary(self, tau: float) -> Operator:
        from .numerics import matrix_exponential

        return Operator(
            matrix_exponential(-1j * self.effective_time(tau) * self.generator.matrix),
            self.generator.space,
        )

    def error(self, tau: float) -> float:
        return float(np.linalg.norm(self.realize(tau).matrix - self.target_unitary(tau).matrix, 2))

    def to_json(self, path=None) -> str:
        payload = {
            "target": self.target,
            "generating_set": self.set_name,
            "operation_count": self.count,
            "tree": self.tree.to_dict(),
        }
        text = json.dumps(payload, indent=2)
        if path is not None:
            write_text_atomic(path, text)
        return text


def _plan_table(gen_set: GeneratorSet, cutoff: int) -> dict[str, _Node]:
    prim = {label: _Primitive(label, +1, op) for label, op in gen_set.members.items()}
    table: dict[str, _Node] = dict(prim)

    if "sigma_z_x" in prim:
        # first-order conditional quadratures out of rotations + conditional
        # displacements: 4 primitive operations each
        table["sigma_x_x"] = _Commutator(prim["sigma_z_x"], prim["sigma_y"])
        table["sigma_y_x"] = _Commutator(prim["sigma_x"], prim["sigma_z_x"])
        table["sigma_x_p"] = _Commutator(prim["sigma_z_p"], prim["sigma_y"])
        table["sigma_y_p"] = _Commutator(prim["sigma_x"], prim["sigma_z_p"])
        # quadratic conditionals: 16 operations
        table["sigma_z_xx"] = _Commutator(table["sigma_y_x"], table["sigma_x_x"])
        table["sigma_z_pp"] = _Commutator(table["sigma_y_p"], table["sigma_x_p"])
        if "sigma_z_xx_minus_pp" not in table:
            table["sigma_z_xx_minus_pp"] = _Sum(table["sigma_z_xx"], table["sigma_z_pp"].negated())
        if "sigma_z_xp_plus_px" not in table:
            half_a = _Commutator(table["sigma_y_p"], table["sigma_x_x"])
            half_b = _Commutator(table["sigma_y_x"], table["sigma_x_p"])
            table["sigma_z_xp_plus_px"] = _Sum(half_a, half_b)
    return table


def synthesis_cost(target: str, generating_set, cutoff: int = 20) -> SynthesisPlan:
    """Operation count and explicit construction tree for a target generator.

    The table transcribes the fixed nested-commutator construction rules; it
    is not a general Lie-algebra search.  Costs under G1: 4 for first-order
    conditional quadratures, 16 for quadratic ones, 64 for the squeezing-type
    combinations; native members always cost 1.
    """
    if isinstance(generating_set, str):
        generating_set = build_generator_set(generating_set, cutoff)
    table = _plan_table(generating_set, cutoff)
    if target not in table:
        raise UnsupportedTargetError(target)
    node = table[target]
    return SynthesisPlan(target, generating_set.name, node.count, node)
