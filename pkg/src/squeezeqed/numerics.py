"""Truncated-Fock and qubit operator algebra on composite Hilbert spaces.

Dense complex matrices throughout: the largest spaces used anywhere in the
package (qubit x 150-photon resonator) are comfortably tractable with dense
eigendecompositions, and sparsity machinery would buy nothing here.

Conventions fixed across the whole package:

* Composite spaces are ordered qubit first, resonator second.
* Qubit basis index 0 is the ground state ``g``, index 1 the excited
  state ``e``; ``sigma_z = |e><e| - |g><g|``.
* ``x = (a_dag + a)/sqrt(2)`` and ``p = i(a_dag - a)/sqrt(2)``.
* Truncation fact: ``[a, a_dag] != 1`` in the last Fock row; every claim
  about operator identities holds on states supported well below the cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.linalg

__all__ = [
    "HilbertSpace",
    "Operator",
    "QuantumState",
    "fock_annihilation",
    "fock_creation",
    "number_operator",
    "parity_operator",
    "position_operator",
    "momentum_operator",
    "identity",
    "qubit_operators",
    "dressed_states",
    "dressed_projectors",
    "tensor",
    "matrix_exponential",
    "generalized_squeeze",
    "displacement",
    "squeeze",
    "fock_state",
    "vacuum_state",
    "qubit_state",
    "joint_state",
    "apply_operator",
    "interior_projector",
]

_HERMITICITY_TOL = 1e-12
_STATE_NORM_TOL = 1e-10
_EIGENVALUE_FLOOR = -1e-9


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered list of subsystem dimensions (qubit = 2, resonator = cutoff)."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"all subsystem dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def __mul__(self, other: "HilbertSpace") -> "HilbertSpace":
        return HilbertSpace(self.dims + other.dims)


def _frozen_matrix(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix tagged with its composite space.

    Hermiticity and unitarity are checkable predicates, never assumptions.
    Instances are immutable and safe to share between workers.
    """

    matrix: np.ndarray
    space: HilbertSpace

    def __post_init__(self):
        m = _frozen_matrix(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.space.dim:
            raise ValueError(
                f"matrix side {m.shape[0]} does not match space dimension {self.space.dim}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.space.dim

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space)

    def is_hermitian(self, tol: float = _HERMITICITY_TOL) -> bool:
        scale = max(1.0, float(np.abs(self.matrix).max()))
        return bool(np.abs(self.matrix - self.matrix.conj().T).max() <= tol * scale)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        eye = np.eye(self.dim)
        return bool(np.abs(self.matrix.conj().T @ self.matrix - eye).max() <= tol)

    def norm(self) -> float:
        """Spectral norm."""
        return float(np.linalg.norm(self.matrix, 2))

    def _wrap(self, matrix: np.ndarray) -> "Operator":
        return Operator(matrix, self.space)

    def __add__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return self._wrap(self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return self._wrap(self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return self._wrap(-self.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return self._wrap(self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return self._wrap(self.matrix @ other.matrix)

    def commutator(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return self._wrap(self.matrix @ other.matrix - other.matrix @ self.matrix)

    def _check_space(self, other: "Operator"):
        if self.space.dims != other.space.dims:
            raise ValueError(f"space mismatch: {self.space.dims} vs {other.space.dims}")


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state vector or density matrix on a composite space."""

    data: np.ndarray
    space: HilbertSpace
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        arr = _frozen_matrix(self.data) if np.asarray(self.data).ndim == 2 else None
        if arr is None:
            vec = np.array(self.data, dtype=complex).reshape(-1)
            vec.setflags(write=False)
            if vec.size != self.space.dim:
                raise ValueError("state vector length does not match space dimension")
            if self.validate:
                norm = float(np.linalg.norm(vec))
                if abs(norm - 1.0) > _STATE_NORM_TOL:
                    raise ValueError(f"pure state norm {norm} deviates from 1")
            object.__setattr__(self, "data", vec)
        else:
            if arr.shape != (self.space.dim, self.space.dim):
                raise ValueError("density matrix shape does not match space dimension")
            if self.validate:
                scale = max(1.0, float(np.abs(arr).max()))
                if np.abs(arr - arr.conj().T).max() > _HERMITICITY_TOL * scale:
                    raise ValueError("density matrix is not Hermitian")
                tr = complex(np.trace(arr))
                if abs(tr - 1.0) > _STATE_NORM_TOL:
                    raise ValueError(f"density matrix trace {tr} deviates from 1")
                if float(np.linalg.eigvalsh(arr).min()) < _EIGENVALUE_FLOOR:
                    raise ValueError("density matrix has a significantly negative eigenvalue")
            object.__setattr__(self, "data", arr)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def density_matrix(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def overlap(self, other: "QuantumState") -> complex:
        """Inner product <self|other> (pure states only)."""
        if not (self.is_pure and other.is_pure):
            raise ValueError("overlap is defined for pure states")
        if self.space.dims != other.space.dims:
            raise ValueError("space mismatch")
        return complex(self.data.conj() @ other.data)


# ---------------------------------------------------------------------------
# elementary operators


def fock_annihilation(cutoff: int) -> Operator:
    """Annihilation operator on a Fock space truncated at `cutoff` levels.

    Matrix elements <n-1|a|n> = sqrt(n) for 1 <= n < cutoff.  The truncated
    commutator [a, a_dag] equals the identity except for the bottom-right
    element, which is 1 - cutoff.
    """
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    m = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)
    return Operator(m, HilbertSpace((cutoff,)))


def fock_creation(cutoff: int) -> Operator:
    return fock_annihilation(cutoff).dag()


def number_operator(cutoff: int) -> Operator:
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    return Operator(np.diag(np.arange(cutoff, dtype=float)), HilbertSpace((cutoff,)))


def parity_operator(cutoff: int) -> Operator:
    """Photon-number parity (-1)^n, exact at any truncation."""
    return Operator(np.diag((-1.0) ** np.arange(cutoff)), HilbertSpace((cutoff,)))


def position_operator(cutoff: int) -> Operator:
    a = fock_annihilation(cutoff)
    return Operator((a.dag().matrix + a.matrix) / np.sqrt(2), a.space)


def momentum_operator(cutoff: int) -> Operator:
    a = fock_annihilation(cutoff)
    return Operator(1j * (a.dag().matrix - a.matrix) / np.sqrt(2), a.space)


def identity(dims) -> Operator:
    space = dims if isinstance(dims, HilbertSpace) else HilbertSpace(tuple(np.atleast_1d(dims)))
    return Operator(np.eye(space.dim), space)


def qubit_operators() -> dict[str, Operator]:
    """Pauli algebra in the (g, e) <-> (0, 1) ordering.

    sigma_z = |e><e| - |g><g|, sigma_plus = |e><g|, and the Hadamard maps
    g -> (g+e)/sqrt(2), e -> (g-e)/sqrt(2).
    """
    q = HilbertSpace((2,))
    sp = np.array([[0, 0], [1, 0]], dtype=complex)
    sm = sp.conj().T
    ops = {
        "sigma_z": np.array([[-1, 0], [0, 1]], dtype=complex),
        "sigma_x": sp + sm,
        "sigma_y": -1j * (sp - sm),
        "sigma_plus": sp,
        "sigma_minus": sm,
        "hadamard": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
        "identity": np.eye(2, dtype=complex),
    }
    return {name: Operator(m, q) for name, m in ops.items()}


def dressed_states(theta: float) -> tuple[QuantumState, QuantumState]:
    """Drive-dressed qubit basis for mixing angle theta = arctan(Omega/Delta).

    ``plus = sin(theta/2)|g> + cos(theta/2)|e>`` and
    ``minus = cos(theta/2)|g> - sin(theta/2)|e>``.  At theta = pi/2 this is
    the sigma_x basis; at theta = 0 it collapses to (|e>, |g>).
    """
    q = HilbertSpace((2,))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    plus = QuantumState(np.array([s, c], dtype=complex), q)
    minus = QuantumState(np.array([c, -s], dtype=complex), q)
    return plus, minus


def dressed_projectors(theta: float) -> tuple[Operator, Operator]:
    plus, minus = dressed_states(theta)
    q = plus.space
    return (
        Operator(np.outer(plus.data, plus.data.conj()), q),
        Operator(np.outer(minus.data, minus.data.conj()), q),
    )


def tensor(*operators: Operator) -> Operator:
    """Kronecker product with concatenated space dims (qubit-first by callers)."""
    if not operators:
        raise ValueError("tensor of zero operators")
    matrix = reduce(np.kron, (op.matrix for op in operators))
    dims = sum((op.space.dims for op in operators), ())
    return Operator(matrix, HilbertSpace(dims))


# ---------------------------------------------------------------------------
# matrix functions


def matrix_exponential(m) -> Operator | np.ndarray:
    """exp(m) for a square complex matrix or Operator.

    Skew-Hermitian generators (every unitary propagator in this package) go
    through a Hermitian eigendecomposition of i*m, which is exact up to the
    eigensolver; anything else falls back to scipy's scaling-and-squaring.
    """
    is_op = isinstance(m, Operator)
    mat = m.matrix if is_op else np.asarray(m, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix_exponential requires a square matrix")
    if not np.all(np.isfinite(mat.view(float))):
        raise ValueError("matrix_exponential requires finite entries")
    herm = 1j * mat
    scale = max(1.0, float(np.abs(mat).max()))
    if np.abs(herm - herm.conj().T).max() <= 1e-13 * scale:
        evals, vecs = np.linalg.eigh(herm)
        out = (vecs * np.exp(-1j * evals)) @ vecs.conj().T
    else:
        out = scipy.linalg.expm(mat)
    return Operator(out, m.space) if is_op else out


def generalized_squeeze(n: int, lam: complex, cutoff: int) -> Operator:
    """n-photon squeezing operator exp((conj(lam) a^n - lam a_dag^n)/n!).

    n=1 is a displacement (equal to D(-lam) in the exp(alpha a_dag - conj(alpha) a)
    convention), n=2 the standard squeezing operator with exponent
    (conj(z) a^2 - z a_dag^2)/2.  For n > 2 the formal power series diverges,
    but the truncated-matrix exponential below is well defined; results in
    that regime are meaningful for the truncated space only.

    Callers are responsible for a cutoff large enough that the target state
    support stays below cutoff/2.
    """
    if n < 1:
        raise ValueError(f"interaction order n must be >= 1, got {n}")
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    a = fock_annihilation(cutoff).matrix
    an = np.linalg.matrix_power(a, n)
    gen = (np.conj(lam) * an - lam * an.conj().T) / math.factorial(n)
    return Operator(matrix_exponential(gen), HilbertSpace((cutoff,)))


def squeeze(zeta: complex, cutoff: int) -> Operator:
    """Two-photon squeeze exp((conj(zeta) a^2 - zeta a_dag^2)/2)."""
    return generalized_squeeze(2, zeta, cutoff)


def displacement(alpha: complex, cutoff: int) -> Operator:
    """Displacement exp(alpha a_dag - conj(alpha) a); equals S_1(-alpha)."""
    return generalized_squeeze(1, -alpha, cutoff)


# ---------------------------------------------------------------------------
# states


def fock_state(n: int, cutoff: int) -> QuantumState:
    if not 0 <= n < cutoff:
        raise ValueError(f"Fock index {n} outside truncation {cutoff}")
    vec = np.zeros(cutoff, dtype=complex)
    vec[n] = 1.0
    return QuantumState(vec, HilbertSpace((cutoff,)))


def vacuum_state(cutoff: int) -> QuantumState:
    return fock_state(0, cutoff)


_QUBIT_KETS = {
    "g": np.array([1, 0], dtype=complex),
    "e": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


def qubit_state(label: str) -> QuantumState:
    if label not in _QUBIT_KETS:
        raise ValueError(f"unknown qubit label {label!r}; use one of {sorted(_QUBIT_KETS)}")
    return QuantumState(_QUBIT_KETS[label], HilbertSpace((2,)))


def joint_state(qubit_label: str, fock_n: int, cutoff: int) -> QuantumState:
    """|qubit> (x) |fock_n> on the (2, cutoff) composite space."""
    q = qubit_state(qubit_label)
    r = fock_state(fock_n, cutoff)
    return QuantumState(np.kron(q.data, r.data), HilbertSpace((2, cutoff)))


def apply_operator(op: Operator, state: QuantumState, validate: bool = False) -> QuantumState:
    """op |psi> for pure states, op rho op_dag for density matrices."""
    if op.space.dims != state.space.dims:
        raise ValueError("operator and state live on different spaces")
    if state.is_pure:
        return QuantumState(op.matrix @ state.data, state.space, validate=validate)
    return QuantumState(op.matrix @ state.data @ op.matrix.conj().T, state.space, validate=validate)


def interior_projector(cutoff: int, boundary: int | None = None) -> Operator:
    """Projector onto Fock components below `boundary` (default cutoff/2)."""
    boundary = cutoff // 2 if boundary is None else boundary
    d = np.zeros(cutoff)
    d[:boundary] = 1.0
    return Operator(np.diag(d), HilbertSpace((cutoff,)))
