"""Phase-space and photon-statistics diagnostics for resonator states.

The Wigner function is evaluated through the displaced-parity form
W(x, p) = (1/pi) <D(alpha) P D(alpha)^dag> with alpha = (x + i p)/sqrt(2)
and P the photon-number parity; with this normalization the grid integrates
to one over dx dp and the vacuum peaks at 1/pi.  The evaluation is exact at
the truncation and embarrassingly parallel over grid points; it is batched
through one eigendecomposition of the real displacement generator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import TimeSeries
from .numerics import (
    HilbertSpace,
    Operator,
    QuantumState,
    momentum_operator,
    number_operator,
    position_operator,
)
from .serialize import write_bytes_atomic, write_text_atomic

__all__ = [
    "WignerGrid",
    "wigner",
    "wigner_negativity",
    "photon_trajectory",
    "SqueezingEstimate",
    "squeezing_from_state",
    "FockSupport",
    "fock_support",
    "TruncationWarning",
]


class TruncationWarning(UserWarning):
    """State support approaches the Fock cutoff; results may be distorted."""


DEFAULT_RESOLUTION = 201


@dataclass
class WignerGrid:
    """W(x, p) sampled on a rectangular grid; values[i, j] = W(x[i], p[j])."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.x.size, self.p.size):
            raise ValueError("Wigner grid shape mismatch")

    def integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.p, axis=1), self.x))

    def abs_integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(np.abs(self.values), self.p, axis=1), self.x))

    def min(self) -> float:
        return float(self.values.min())

    def marginal_x(self) -> np.ndarray:
        """Integral over p, approximating the position density |psi(x)|^2."""
        return np.trapezoid(self.values, self.p, axis=1)

    def to_csv(self, path, metadata: dict | None = None) -> None:
        lines = [f"# {k}: {v}" for k, v in sorted((metadata or {}).items())]
        lines.append("x,p,W")
        for i, xv in enumerate(self.x):
            for j, pv in enumerate(self.p):
                lines.append(f"{xv:.9e},{pv:.9e},{self.values[i, j]:.12e}")
        write_text_atomic(path, "\n".join(lines) + "\n")

    def to_png(self, path) -> None:
        """Diverging blue-white-red raster, symmetric about W = 0."""
        from PIL import Image

        scale = max(np.abs(self.values).max(), 1e-300)
        # rows: p decreasing (image convention), columns: x increasing
        normed = np.clip(self.values.T[::-1] / scale, -1.0, 1.0)
        rgb = np.empty(normed.shape + (3,), dtype=np.uint8)
        pos = np.clip(normed, 0, 1)
        neg = np.clip(-normed, 0, 1)
        rgb[..., 0] = np.round(255 * (1 - neg)).astype(np.uint8)
        rgb[..., 1] = np.round(255 * (1 - np.maximum(pos, neg))).astype(np.uint8)
        rgb[..., 2] = np.round(255 * (1 - pos)).astype(np.uint8)
        import io

        buf = io.BytesIO()
        Image.fromarray(rgb, mode="RGB").save(buf, format="PNG")
        write_bytes_atomic(path, buf.getvalue())


def _resonator_state(state: QuantumState) -> QuantumState:
    if len(state.space.dims) == 1:
        return state
    raise ValueError("expected a single-mode resonator state")


def _check_support(data: np.ndarray, cutoff: int, is_pure: bool) -> None:
    if is_pure:
        tail = float(np.linalg.norm(data[-max(2, cutoff // 10):]) ** 2)
    else:
        tail = float(np.real(np.trace(data)) - np.real(np.trace(data[: -max(2, cutoff // 10), : -max(2, cutoff // 10)])))
    if tail > 1e-6:
        warnings.warn(
            f"state carries {tail:.3g} population in the top Fock decade", TruncationWarning
        )


def wigner(
    state: QuantumState,
    x_grid=None,
    p_grid=None,
    resolution: int = DEFAULT_RESOLUTION,
    half_width: float | None = None,
    chunk: int = 4096,
) -> WignerGrid:
    """Displaced-parity Wigner function of a single-mode state.

    Without an explicit grid, a symmetric window of half-width 4 + 4r is
    used, with r the extracted squeezing, so strongly squeezed frames stay
    inside the plot automatically.
    """
    state = _resonator_state(state)
    cutoff = state.space.dims[0]
    _check_support(state.data, cutoff, state.is_pure)

    if x_grid is None or p_grid is None:
        if half_width is None:
            est = squeezing_from_state(state, flag_tolerance=np.inf)
            half_width = 4.0 + 4.0 * float(np.clip(est.r, 0.0, 3.0))
        x_grid = np.linspace(-half_width, half_width, resolution)
        p_grid = np.linspace(-half_width, half_width, resolution)
    x_grid = np.asarray(x_grid, dtype=float)
    p_grid = np.asarray(p_grid, dtype=float)

    xs, ps = np.meshgrid(x_grid, p_grid, indexing="ij")
    alphas = (xs + 1j * ps).ravel() / np.sqrt(2)
    radii = np.abs(alphas)
    phases = np.angle(alphas)

    # D(alpha) = R(phi) exp(-i |alpha| M) R(phi)^dag with M = i(a_dag - a)
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)
    m = 1j * (a.conj().T - a)
    lam, vecs = np.linalg.eigh(m)
    n_index = np.arange(cutoff)
    parity = (-1.0) ** n_index

    out = np.empty(alphas.size, dtype=float)
    if state.is_pure:
        psi = state.data
        for start in range(0, alphas.size, chunk):
            sl = slice(start, min(start + chunk, alphas.size))
            rot = np.exp(-1j * np.outer(n_index, phases[sl])) * psi[:, None]
            u = vecs.conj().T @ rot
            u *= np.exp(1j * np.outer(lam, radii[sl]))
            v = vecs @ u
            out[sl] = parity @ (np.abs(v) ** 2)
    else:
        rho = state.data
        parity_v = vecs.conj().T @ np.diag(parity) @ vecs
        for k, (r_a, phi) in enumerate(zip(radii, phases)):
            phase_vec = np.exp(-1j * n_index * phi)
            rho_rot = (phase_vec[:, None] * rho) * phase_vec.conj()[None, :]
            c = vecs.conj().T @ rho_rot @ vecs
            e = np.exp(1j * lam * r_a)
            out[k] = np.real(np.sum(parity_v.T * (e[:, None] * c * e.conj()[None, :])))
    values = out.reshape(x_grid.size, p_grid.size) / np.pi
    return WignerGrid(x_grid, p_grid, values)


def wigner_negativity(grid: WignerGrid) -> tuple[float, float]:
    """Minimum value and negative volume (integral of |W| minus one)."""
    return grid.min(), grid.abs_integral() - grid.integral()


# ---------------------------------------------------------------------------
# photon statistics


def _photon_operator(space: HilbertSpace) -> Operator:
    from .numerics import identity, tensor

    if len(space.dims) == 1:
        return number_operator(space.dims[0])
    if len(space.dims) == 2 and space.dims[0] == 2:
        return tensor(identity(2), number_operator(space.dims[1]))
    raise ValueError("unsupported space for photon counting")


def photon_trajectory(
    states: list[QuantumState],
    times,
    rate: float | None = None,
) -> TimeSeries:
    """Photon number per snapshot, with the analytic cross-resonant channel
    sinh^2(rate * t) alongside when a squeezing rate is supplied."""
    times = np.asarray(times, dtype=float)
    if len(states) != times.size:
        raise ValueError("one state per time point required")
    from .dynamics import expectation

    op = _photon_operator(states[0].space)
    values = np.array([np.real(expectation(op, s)) for s in states])
    channels = {"n": values}
    if rate is not None:
        channels["n_analytic"] = np.sinh(rate * times) ** 2
    return TimeSeries(times, channels)


# ---------------------------------------------------------------------------
# squeezing extraction


@dataclass(frozen=True)
class SqueezingEstimate:
    r: float
    phi: float
    min_variance: float
    max_variance: float
    excess_kurtosis: float
    gaussian: bool


def squeezing_from_state(state: QuantumState, flag_tolerance: float = 0.1) -> SqueezingEstimate:
    """Squeezing magnitude and axis from the quadrature covariance matrix.

    r follows from the minimum variance, exp(-2r)/2; phi is twice the
    minimum-variance axis angle, which recovers the phase of the squeeze
    parameter for pure squeezed vacua.  A kurtosis probe along the principal
    axis sets `gaussian=False` when the state is visibly non-Gaussian (the
    estimate is then only indicative).
    """
    state = _resonator_state(state)
    cutoff = state.space.dims[0]
    x = position_operator(cutoff).matrix
    p = momentum_operator(cutoff).matrix
    rho = state.density_matrix()

    def ev(op):
        return float(np.real(np.trace(op @ rho)))

    mean_x, mean_p = ev(x), ev(p)
    vxx = ev(x @ x) - mean_x**2
    vpp = ev(p @ p) - mean_p**2
    vxp = ev((x @ p + p @ x) / 2) - mean_x * mean_p
    cov = np.array([[vxx, vxp], [vxp, vpp]])
    evals, evecs = np.linalg.eigh(cov)
    v_min, v_max = float(evals[0]), float(evals[1])
    axis = np.arctan2(evecs[1, 0], evecs[0, 0]) % np.pi
    phi = (2 * axis) % (2 * np.pi)
    r = float(-0.5 * np.log(2 * v_min)) if v_min > 0 else np.inf

    # fourth moment along the squeezed axis; zero excess for Gaussian states
    quad = np.cos(axis) * x + np.sin(axis) * p - (np.cos(axis) * mean_x + np.sin(axis) * mean_p) * np.eye(cutoff)
    m2 = ev(quad @ quad)
    m4 = ev(quad @ quad @ quad @ quad)
    excess = m4 / m2**2 - 3.0 if m2 > 0 else 0.0
    return SqueezingEstimate(
        r=r,
        phi=float(phi),
        min_variance=v_min,
        max_variance=v_max,
        excess_kurtosis=float(excess),
        gaussian=bool(abs(excess) <= flag_tolerance),
    )


# ---------------------------------------------------------------------------
# Fock-subspace classification


@dataclass(frozen=True)
class FockSupport:
    classification: str  # even-multiples | odd-multiples | mixed
    even_mass: float
    odd_mass: float
    leakage: float


def fock_support(state: QuantumState, n: int, dominance: float = 0.99) -> FockSupport:
    """Classify population on the {2kn} vs {(2k+1)n} Fock ladders.

    `leakage` is the mass outside both ladders; classification is by the
    dominant ladder, or 'mixed' when neither holds `dominance` of the total.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    state = _resonator_state(state)
    cutoff = state.space.dims[0]
    pops = (
        np.abs(state.data) ** 2 if state.is_pure else np.real(np.diag(state.data))
    )
    idx = np.arange(cutoff)
    even = float(pops[(idx % (2 * n)) == 0].sum())
    odd = float(pops[(idx % (2 * n)) == n].sum())
    leakage = float(pops.sum() - even - odd)
    if even >= dominance:
        label = "even-multiples"
    elif odd >= dominance:
        label = "odd-multiples"
    else:
        label = "mixed"
    return FockSupport(label, even, odd, leakage)
