"""Exact two-qubit algebra over the coherent-state basis {|alpha>, |-alpha>}.

Index 0 stands for ``|alpha>`` and index 1 for ``|-alpha>``; the two are
treated as exactly orthogonal (their overlap ``exp(-4|alpha|^2)`` is about
1e-7 at ``alpha = 2`` and is only reported, never used). Two-mode states use
the ordering ``|a,a>, |a,-a>, |-a,a>, |-a,-a>``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import InvalidArgument, NonDiagonalState
from .phase_space import DEFAULT_VARIANCE, TwoModeComponent, WignerMixture, coherent_mode

STATE_TOL = 1e-12
DIAGONAL_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_BELL = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


def _check_density(m, dim):
    if m.shape != (dim, dim):
        raise InvalidArgument(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > STATE_TOL:
        raise InvalidArgument("matrix is not Hermitian")
    if abs(np.trace(m) - 1) > STATE_TOL:
        raise InvalidArgument(f"trace is {np.trace(m).real!r}, expected 1")
    if numerics.eigvalsh(m)[0] < -STATE_TOL:
        raise InvalidArgument("matrix is not positive semidefinite")


@dataclass(frozen=True, eq=False)
class LogicalState:
    """Two-mode density matrix in the logical basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        _check_density(m, 4)
        object.__setattr__(self, "matrix", m)

    @property
    def diagonal(self):
        return self.matrix.diagonal().real


@dataclass(frozen=True, eq=False)
class JointState:
    """16x16 density matrix on system1 x system2 x ancilla3 x ancilla4."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        _check_density(m, 16)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple

    def __post_init__(self):
        ops = tuple(_frozen(e) for e in self.operators)
        object.__setattr__(self, "operators", ops)
        if not ops or any(e.shape != (2, 2) for e in ops):
            raise InvalidArgument("Kraus operators must be a nonempty list of 2x2 matrices")
        completeness = sum(e.conj().T @ e for e in ops)
        if np.max(np.abs(completeness - _I2)) > STATE_TOL:
            raise InvalidArgument("Kraus operators do not sum to the identity")


@dataclass(frozen=True, eq=False)
class AncillaUnitary:
    """4x4 unitary on system x ancilla, basis |a,0>, |a,1>, |-a,0>, |-a,1>."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (4, 4):
            raise InvalidArgument(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.max(np.abs(m.conj().T @ m - np.eye(4))) > STATE_TOL:
            raise InvalidArgument("matrix is not unitary")
        object.__setattr__(self, "matrix", m)


def rho0():
    return LogicalState(np.diag([0.5, 0, 0, 0.5]))


def rho1():
    return LogicalState(np.diag([0, 0.5, 0.5, 0]))


def rho_target(theta, phi):
    d = theta - phi
    return LogicalState(math.cos(d) ** 2 * rho0().matrix + math.sin(d) ** 2 * rho1().matrix)


def bitflip_channel(theta):
    return KrausChannel((math.cos(theta) * _I2, math.sin(theta) * _X))


def identity_channel():
    return KrausChannel((_I2,))


def apply_local_channels(state, ch_a, ch_b):
    """Apply ``ch_a`` to mode 1 and ``ch_b`` to mode 2."""
    rho = state.matrix
    out = np.zeros((4, 4), dtype=complex)
    for ea in ch_a.operators:
        for eb in ch_b.operators:
            k = np.kron(ea, eb)
            out += k @ rho @ k.conj().T
    return LogicalState(out)


def trace_distance(a, b):
    """Half the sum of absolute eigenvalues of ``a - b``."""
    ma = getattr(a, "matrix", a)
    mb = getattr(b, "matrix", b)
    return 0.5 * float(np.sum(np.abs(numerics.eigvalsh(ma - mb))))


def nogo_gap(theta, phi):
    """Distance between bit-flipping each side locally and the target state.

    Zero would mean product local channels reproduce ``rho_target``; it
    equals ``|sin 2theta sin 2phi| / 2``.
    """
    reached = apply_local_channels(rho0(), bitflip_channel(theta), bitflip_channel(phi))
    return trace_distance(reached, rho_target(theta, phi))


def ancilla_unitary(theta):
    c, s = math.cos(theta), math.sin(theta)
    return AncillaUnitary(np.array([
        [c, -s, 0, 0],
        [0, 0, s, c],
        [0, 0, c, -s],
        [s, c, 0, 0],
    ]))


def bell_ancillae():
    """Density matrix of ``(|00> + |11>)/sqrt(2)``."""
    return np.outer(_BELL, _BELL.conj())


def tensor_states(*mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def apply_pair_unitary(rho, u, system, ancilla):
    """Conjugate a 16x16 ``rho`` by ``u`` acting on factors (system, ancilla).

    Factors are numbered 1..4 in storage order (1, 2, 3, 4); ``u`` is in the
    basis ``|s, a>`` with the system index most significant.
    """
    u4 = np.asarray(getattr(u, "matrix", u)).reshape(2, 2, 2, 2)
    t = rho.reshape((2,) * 8)
    s, a = system - 1, ancilla - 1
    # ket side: contract u's input legs with (s, a)
    t = np.tensordot(u4, t, axes=([2, 3], [s, a]))
    t = np.moveaxis(t, [0, 1], [s, a])
    # bra side: contract conj(u)'s input legs with (s + 4, a + 4)
    t = np.tensordot(t, u4.conj(), axes=([s + 4, a + 4], [2, 3]))
    t = np.moveaxis(t, [6, 7], [s + 4, a + 4])
    return t.reshape(16, 16)


def partial_trace(state, keep):
    """Reduce a 16x16 state on factors (1, 2, 3, 4) to the factors in `keep`."""
    keep = sorted(set(keep))
    if not keep:
        raise InvalidArgument("keep set must be nonempty")
    if any(k not in (1, 2, 3, 4) for k in keep):
        raise InvalidArgument(f"subsystem indices must lie in 1..4, got {keep}")
    m = getattr(state, "matrix", state)
    t = np.asarray(m).reshape((2,) * 8)
    letters = "abcdefgh"
    ket = list(letters[:4])
    bra = list(letters[4:])
    for i in range(4):
        if i + 1 not in keep:
            bra[i] = ket[i]
    kept_ket = "".join(ket[k - 1] for k in keep)
    kept_bra = "".join(bra[k - 1] for k in keep)
    out = np.einsum("".join(ket) + "".join(bra) + "->" + kept_ket + kept_bra, t)
    dim = 2 ** len(keep)
    return out.reshape(dim, dim)


def ancilla_protocol(theta, phi, unitary=ancilla_unitary, unitary_b=None):
    """Run the entangled-ancilla protocol on ``rho0`` and trace out the ancillae.

    `unitary` maps an angle to Alice's system-ancilla rotation and
    `unitary_b` (default: the same) to Bob's; both are hooks for negative
    controls.
    """
    unitary_b = unitary if unitary_b is None else unitary_b
    joint = JointState(tensor_states(rho0().matrix, bell_ancillae()))
    m = apply_pair_unitary(joint.matrix, unitary(theta), 1, 3)
    m = apply_pair_unitary(m, unitary_b(phi), 2, 4)
    return LogicalState(partial_trace(JointState(m), {1, 2}))


def logical_overlap(alpha):
    """``|<alpha|-alpha>|^2``."""
    return math.exp(-4.0 * abs(complex(alpha)) ** 2)


def to_wigner(state, alpha, variance=DEFAULT_VARIANCE):
    """Positive Gaussian-mixture Wigner function of a diagonal logical state."""
    m = state.matrix
    off = m - np.diag(m.diagonal())
    if np.max(np.abs(off)) > DIAGONAL_TOL:
        raise NonDiagonalState("state has coherences between |alpha> and |-alpha>")
    alpha = complex(alpha)
    modes = (coherent_mode(alpha, variance), coherent_mode(-alpha, variance))
    comps = []
    for idx, weight in enumerate(m.diagonal().real):
        if weight > 0:
            comps.append(TwoModeComponent(float(weight), modes[idx >> 1], modes[idx & 1]))
    return WignerMixture.build(comps)
