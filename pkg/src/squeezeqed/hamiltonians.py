"""Builders for every Hamiltonian used by the package.

All energies are angular frequencies (hbar = 1, rad/s).  Frequencies read
from config files are plain GHz/MHz values and get multiplied by 2*pi on
ingestion; see `scenarios`.

A `HamiltonianModel` is a static part plus a list of (operator, closed-form
complex coefficient) terms.  Coefficients are callables of time in seconds,
kept closed-form so propagators can pick steps freely.  Builders always add
Hermitian-conjugate partners, so the evaluated H(t) is Hermitian at every t.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .numerics import (
    HilbertSpace,
    Operator,
    dressed_projectors,
    dressed_states,
    fock_annihilation,
    identity,
    number_operator,
    qubit_operators,
    tensor,
)

__all__ = [
    "SystemParams",
    "DriveParams",
    "FrameParams",
    "TwoDriveParams",
    "TimeTerm",
    "HamiltonianModel",
    "lab_frame",
    "rotating_frame_full",
    "rotating_frame_rwa",
    "interaction_picture",
    "effective_conditional",
    "two_drive_rotating",
    "two_drive_interaction",
    "two_drive_effective",
    "rwa_report",
    "RWA_WARN_THRESHOLD",
]

# Soft threshold on dimensionless RWA ratios; chosen so the bundled figure
# presets pass while clearly flagging regimes where dropped terms matter.
RWA_WARN_THRESHOLD = 0.1


@dataclass(frozen=True)
class SystemParams:
    """Qubit/resonator frequencies and the n-photon coupling (rad/s)."""

    omega_q: float
    omega_r: float
    g_n: float
    n: int = 2
    cutoff: int = 20

    def __post_init__(self):
        for name in ("omega_q", "omega_r", "g_n"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.n < 1:
            raise ValueError("interaction order n must be >= 1")
        if self.cutoff < 2:
            raise ValueError("cutoff must be >= 2")


@dataclass(frozen=True)
class DriveParams:
    """Single-tone qubit drive: amplitude Omega and frequency omega_d (rad/s)."""

    omega: float
    omega_d: float

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("drive amplitude must be >= 0")


@dataclass(frozen=True)
class FrameParams:
    """Derived rotating/dressed-frame quantities for one drive.

    theta is the dressed mixing angle arctan(Omega/Delta) in [0, pi]; the
    limits are pinned as theta = pi/2 at Delta = 0, and theta = 0 (pi) for an
    undriven qubit with positive (negative) detuning.  gbar_n is the
    conditional-interaction coefficient g_n sin(theta)/2.
    """

    delta: float
    delta_n: float
    epsilon: float
    theta: float
    gbar_n: float

    @classmethod
    def from_drive(cls, sys: SystemParams, drive: DriveParams) -> "FrameParams":
        delta = sys.omega_q - drive.omega_d
        delta_n = sys.omega_r - drive.omega_d / sys.n
        epsilon = float(np.hypot(drive.omega, delta))
        theta = float(np.arctan2(drive.omega, delta))
        return cls(
            delta=delta,
            delta_n=delta_n,
            epsilon=epsilon,
            theta=theta,
            gbar_n=sys.g_n * np.sin(theta) / 2,
        )


@dataclass(frozen=True)
class TwoDriveParams:
    """Two-tone drive; the frame rotates with drive 1 (omega_d1)."""

    omega_1: float
    omega_d1: float
    omega_2: float
    omega_d2: float

    @property
    def delta_d(self) -> float:
        return self.omega_d1 - self.omega_d2

    def effective_parameters(self, sys: SystemParams) -> dict[str, float]:
        """Effective Rabi-model parameters engineered by the second tone."""
        return {
            "omega_q_eff": self.omega_2 / 2,
            "omega_r_eff": sys.omega_r - self.omega_d1 / sys.n,
            "g_n_eff": sys.g_n / 2,
        }


class _Phase:
    """Callable amplitude * exp(i * freq * t); picklable and re-entrant."""

    def __init__(self, amplitude: complex, freq: float):
        self.amplitude = complex(amplitude)
        self.freq = float(freq)

    def __call__(self, t: float) -> complex:
        return self.amplitude * np.exp(1j * self.freq * t)


class _Cosine:
    def __init__(self, amplitude: float, freq: float):
        self.amplitude = float(amplitude)
        self.freq = float(freq)

    def __call__(self, t: float) -> complex:
        return self.amplitude * np.cos(self.freq * t)


@dataclass(frozen=True)
class TimeTerm:
    operator: Operator
    coefficient: object  # callable t -> complex
    angular_frequency: float  # oscillation rate hint for step control
    amplitude: float  # max |coefficient(t)|
    label: str = ""


@dataclass(frozen=True)
class HamiltonianModel:
    space: HilbertSpace
    static: Operator
    terms: tuple[TimeTerm, ...] = ()
    diagnostics: tuple[str, ...] = ()

    @property
    def is_static(self) -> bool:
        return not self.terms

    def at(self, t: float) -> np.ndarray:
        h = np.array(self.static.matrix)
        for term in self.terms:
            h += complex(term.coefficient(t)) * term.operator.matrix
        return h

    def hermiticity_defect(self, t: float) -> float:
        h = self.at(t)
        scale = max(1.0, float(np.abs(h).max()))
        return float(np.abs(h - h.conj().T).max() / scale)

    def max_angular_frequency(self) -> float:
        return max((abs(term.angular_frequency) for term in self.terms), default=0.0)

    def norm_bound(self) -> float:
        """Upper bound on sup_t ||H(t)||_2."""
        bound = float(np.linalg.norm(self.static.matrix, 2))
        for term in self.terms:
            bound += term.amplitude * float(np.linalg.norm(term.operator.matrix, 2))
        return bound

    def with_diagnostics(self, *messages: str) -> "HamiltonianModel":
        return replace(self, diagnostics=self.diagnostics + tuple(messages))


# ---------------------------------------------------------------------------
# shared operator pieces


def _pieces(sys: SystemParams):
    q = qubit_operators()
    eye_r = identity(sys.cutoff)
    eye_q = identity(2)
    a = fock_annihilation(sys.cutoff)
    a_n = Operator(np.linalg.matrix_power(a.matrix, sys.n), a.space)
    return q, eye_q, eye_r, a, a_n


def _qubit_flip_ops():
    """|+><-| and |-><+| in the bare basis, for the sigma_x rotating frame."""
    plus, minus = dressed_states(np.pi / 2)
    pm = Operator(np.outer(plus.data, minus.data.conj()), plus.space)
    mp = pm.dag()
    return pm, mp


# ---------------------------------------------------------------------------
# single-drive family


def lab_frame(sys: SystemParams, drive: DriveParams) -> HamiltonianModel:
    """Driven n-photon Rabi model in the lab frame."""
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    static = (
        (sys.omega_q / 2) * tensor(q["sigma_z"], eye_r)
        + sys.omega_r * tensor(eye_q, number_operator(sys.cutoff))
        + sys.g_n * tensor(q["sigma_x"], a_n.dag() + a_n)
    )
    terms = (
        TimeTerm(
            tensor(q["sigma_x"], eye_r),
            _Cosine(drive.omega, drive.omega_d),
            drive.omega_d,
            drive.omega,
            "qubit drive",
        ),
    )
    if drive.omega == 0.0:
        terms = ()
    return HamiltonianModel(static.space, static, terms)


def rotating_frame_full(sys: SystemParams, drive: DriveParams) -> HamiltonianModel:
    """Frame rotating at omega_d (qubit) and omega_d/n (resonator), no RWA.

    Keeps the counter-rotating interaction and drive terms, which oscillate
    at 2*omega_d; dropping exactly those terms reproduces the RWA model.
    """
    fp = FrameParams.from_drive(sys, drive)
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    static = (
        (fp.delta / 2) * tensor(q["sigma_z"], eye_r)
        + fp.delta_n * tensor(eye_q, number_operator(sys.cutoff))
        + sys.g_n * (tensor(q["sigma_plus"], a_n) + tensor(q["sigma_minus"], a_n.dag()))
        + (drive.omega / 2) * tensor(q["sigma_x"], eye_r)
    )
    w2 = 2 * drive.omega_d
    terms = (
        TimeTerm(tensor(q["sigma_plus"], a_n.dag()), _Phase(sys.g_n, w2), w2, sys.g_n,
                 "counter-rotating interaction"),
        TimeTerm(tensor(q["sigma_minus"], a_n), _Phase(sys.g_n, -w2), w2, sys.g_n,
                 "counter-rotating interaction"),
        TimeTerm(tensor(q["sigma_plus"], eye_r), _Phase(drive.omega / 2, w2), w2, drive.omega / 2,
                 "counter-rotating drive"),
        TimeTerm(tensor(q["sigma_minus"], eye_r), _Phase(drive.omega / 2, -w2), w2, drive.omega / 2,
                 "counter-rotating drive"),
    )
    return HamiltonianModel(static.space, static, terms)


def rotating_frame_rwa(sys: SystemParams, drive: DriveParams) -> HamiltonianModel:
    """Rotating-frame model after dropping the 2*omega_d terms."""
    fp = FrameParams.from_drive(sys, drive)
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    static = (
        (fp.delta / 2) * tensor(q["sigma_z"], eye_r)
        + (drive.omega / 2) * tensor(q["sigma_x"], eye_r)
        + fp.delta_n * tensor(eye_q, number_operator(sys.cutoff))
        + sys.g_n * (tensor(q["sigma_plus"], a_n) + tensor(q["sigma_minus"], a_n.dag()))
    )
    diags = tuple(e.message for e in rwa_report(sys, drive).warnings())
    return HamiltonianModel(static.space, static, (), diags)


def interaction_picture(sys: SystemParams, drive: DriveParams) -> HamiltonianModel:
    """Interaction picture of the RWA model with respect to its qubit+resonator
    quadratic part; written in the dressed basis.

    The surviving structure: a dressed-diagonal conditional term rotating at
    n*delta_n, and dressed-flip terms additionally rotating at epsilon.
    """
    fp = FrameParams.from_drive(sys, drive)
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    p_plus, p_minus = dressed_projectors(fp.theta)
    plus, minus = dressed_states(fp.theta)
    flip_pm = Operator(np.outer(plus.data, minus.data.conj()), plus.space)  # |+><-| dressed
    flip_mp = flip_pm.dag()

    cond = p_plus - p_minus
    g = sys.g_n
    half_sin = np.sin(fp.theta) / 2
    cos2 = np.cos(fp.theta / 2) ** 2
    sin2 = np.sin(fp.theta / 2) ** 2
    ndn = sys.n * fp.delta_n
    eps = fp.epsilon

    def hc_pair(op_q, op_r, amplitude, freq, label):
        fwd = TimeTerm(tensor(op_q, op_r), _Phase(amplitude, freq), abs(freq), abs(amplitude), label)
        bwd = TimeTerm(
            tensor(op_q.dag(), op_r.dag()),
            _Phase(np.conj(amplitude), -freq),
            abs(freq),
            abs(amplitude),
            label + " (h.c.)",
        )
        return [fwd, bwd]

    terms: list[TimeTerm] = []
    terms += hc_pair(cond, a_n, g * half_sin, -ndn, "conditional")
    terms += hc_pair(flip_pm, a_n, g * cos2, eps - ndn, "dressed flip +-")
    terms += hc_pair(flip_mp, a_n, -g * sin2, -eps - ndn, "dressed flip -+")
    zero = Operator(np.zeros((2 * sys.cutoff, 2 * sys.cutoff)), HilbertSpace((2, sys.cutoff)))
    return HamiltonianModel(zero.space, zero, tuple(terms))


def effective_conditional(sys: SystemParams, drive: DriveParams) -> HamiltonianModel:
    """Dressed-conditional n-photon interaction after dropping the epsilon terms.

    H(t) = gbar_n (P+ - P-) (a_dag^n e^{+i n delta_n t} + a^n e^{-i n delta_n t}),
    with gbar_n = g_n sin(theta)/2.  Validity requires n|delta_n|, g_n << epsilon;
    violations are reported as diagnostics, never hard failures.  At the exact
    n-photon cross-resonance (delta_n = 0) the model is time independent.
    """
    fp = FrameParams.from_drive(sys, drive)
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    p_plus, p_minus = dressed_projectors(fp.theta)
    cond = p_plus - p_minus
    ndn = sys.n * fp.delta_n

    diags = []
    for name, value in (("n|delta_n|/epsilon", abs(ndn)), ("g_n/epsilon", sys.g_n)):
        ratio = np.inf if fp.epsilon == 0 else abs(value) / fp.epsilon
        if ratio > RWA_WARN_THRESHOLD:
            diags.append(f"driving-detuning ratio {name} = {ratio:.3g} exceeds {RWA_WARN_THRESHOLD}")

    if ndn == 0.0:
        static = fp.gbar_n * tensor(cond, a_n.dag() + a_n)
        return HamiltonianModel(static.space, static, (), tuple(diags))

    zero = Operator(np.zeros((2 * sys.cutoff, 2 * sys.cutoff)), HilbertSpace((2, sys.cutoff)))
    terms = (
        TimeTerm(tensor(cond, a_n.dag()), _Phase(fp.gbar_n, ndn), abs(ndn), abs(fp.gbar_n),
                 "conditional raising"),
        TimeTerm(tensor(cond, a_n), _Phase(fp.gbar_n, -ndn), abs(ndn), abs(fp.gbar_n),
                 "conditional lowering"),
    )
    return HamiltonianModel(zero.space, zero, terms, tuple(diags))


# ---------------------------------------------------------------------------
# two-drive family


def two_drive_rotating(sys: SystemParams, td: TwoDriveParams) -> HamiltonianModel:
    """RWA rotating-frame model (frame of drive 1) with the second tone kept."""
    drive1 = DriveParams(td.omega_1, td.omega_d1)
    base = rotating_frame_rwa(sys, drive1)
    if td.omega_2 == 0.0:
        return base
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    dd = td.delta_d
    terms = base.terms + (
        TimeTerm(tensor(q["sigma_plus"], eye_r), _Phase(td.omega_2 / 2, dd), abs(dd),
                 td.omega_2 / 2, "second drive"),
        TimeTerm(tensor(q["sigma_minus"], eye_r), _Phase(td.omega_2 / 2, -dd), abs(dd),
                 td.omega_2 / 2, "second drive (h.c.)"),
    )
    return HamiltonianModel(base.space, base.static, terms, base.diagnostics)


def two_drive_interaction(sys: SystemParams, td: TwoDriveParams) -> HamiltonianModel:
    """Interaction picture of the two-drive model with respect to the strong
    first tone (Omega_1 sigma_x / 2); the full reference for the engineered
    Rabi dynamics."""
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    pm, mp = _qubit_flip_ops()
    delta = sys.omega_q - td.omega_d1
    delta_n = sys.omega_r - td.omega_d1 / sys.n
    w1 = td.omega_1
    dd = td.delta_d
    g = sys.g_n
    o2 = td.omega_2

    static = delta_n * tensor(eye_q, number_operator(sys.cutoff)) + (g / 2) * tensor(
        q["sigma_x"], a_n + a_n.dag()
    )

    def pair(op_q, op_r, amplitude, freq, label):
        return [
            TimeTerm(tensor(op_q, op_r), _Phase(amplitude, freq), abs(freq), abs(amplitude), label),
            TimeTerm(tensor(op_q.dag(), op_r.dag()), _Phase(np.conj(amplitude), -freq),
                     abs(freq), abs(amplitude), label + " (h.c.)"),
        ]

    terms: list[TimeTerm] = []
    terms += pair(pm, eye_r, -delta / 2, w1, "detuning flip")
    terms += pair(pm, a_n, g / 2, w1, "interaction flip")
    terms += pair(mp, a_n, -g / 2, -w1, "interaction flip")
    if o2 != 0.0:
        terms.append(
            TimeTerm(tensor(q["sigma_x"], eye_r), _Cosine(o2 / 2, dd), abs(dd), o2 / 2,
                     "second drive, conditional part")
        )
        terms += pair(pm, eye_r, o2 / 4, w1 + dd, "second drive, fast flip")
        terms += pair(mp, eye_r, -o2 / 4, dd - w1, "second drive, slow flip")
    return HamiltonianModel(static.space, static, tuple(terms))


def two_drive_effective(sys: SystemParams, td: TwoDriveParams) -> HamiltonianModel:
    """Engineered effective n-photon Rabi model (bare basis).

    omega_q_eff = Omega_2/2, omega_r_eff = delta_n, g_n_eff = g_n/2.  Requires
    delta_d = Omega_1 for the slow-flip cancellation; violations attach a
    warning diagnostic instead of failing.
    """
    q, eye_q, eye_r, a, a_n = _pieces(sys)
    eff = td.effective_parameters(sys)
    static = (
        (eff["omega_q_eff"] / 2) * tensor(q["sigma_z"], eye_r)
        + eff["omega_r_eff"] * tensor(eye_q, number_operator(sys.cutoff))
        + eff["g_n_eff"] * tensor(q["sigma_x"], a_n.dag() + a_n)
    )
    diags = []
    scale = max(abs(td.omega_1), abs(td.delta_d), 1.0)
    if abs(td.delta_d - td.omega_1) > 1e-9 * scale:
        diags.append(
            f"delta_d = {td.delta_d:.6g} differs from Omega_1 = {td.omega_1:.6g}; "
            "the engineered qubit term is not stationary"
        )
    return HamiltonianModel(static.space, static, (), tuple(diags))


# ---------------------------------------------------------------------------
# RWA diagnostics


@dataclass(frozen=True)
class RwaEntry:
    name: str
    ratio: float
    threshold: float = RWA_WARN_THRESHOLD

    @property
    def ok(self) -> bool:
        return self.ratio <= self.threshold

    @property
    def message(self) -> str:
        verdict = "pass" if self.ok else "warn"
        return f"{self.name} = {self.ratio:.4g} [{verdict}]"


@dataclass(frozen=True)
class RwaReport:
    entries: tuple[RwaEntry, ...]

    def warnings(self) -> list[RwaEntry]:
        return [e for e in self.entries if not e.ok]

    def as_dict(self) -> dict[str, float]:
        return {e.name: e.ratio for e in self.entries}

    def all_pass(self) -> bool:
        return not self.warnings()


def rwa_report(sys: SystemParams, drive: DriveParams) -> RwaReport:
    """Dimensionless validity ratios for the rotating-frame and
    driving-detuning approximations, with pass/warn verdicts."""
    fp = FrameParams.from_drive(sys, drive)
    wd = abs(drive.omega_d)

    def div(num, den):
        if den == 0:
            return 0.0 if num == 0 else np.inf
        return abs(num) / den

    entries = (
        RwaEntry("g_n/omega_d", div(sys.g_n, wd)),
        RwaEntry("Omega/omega_d", div(drive.omega, wd)),
        RwaEntry("Delta/omega_d", div(fp.delta, wd)),
        RwaEntry("delta_n/omega_d", div(fp.delta_n, wd)),
        RwaEntry("n|delta_n|/epsilon", div(sys.n * fp.delta_n, fp.epsilon)),
        RwaEntry("g_n/epsilon", div(sys.g_n, fp.epsilon)),
    )
    return RwaReport(entries)
