"""Dense complex linear algebra over multi-qudit registers.

Everything is plain numpy: operators are square ``complex128`` arrays,
states are flat amplitude vectors indexed big-endian over the register
wires (first wire = most significant base-d digit). All functions are
pure; the small dataclasses below are immutable after construction.
"""

from dataclasses import dataclass, field, InitVar

import numpy as np

DEFAULT_TOL = 1e-10

# Dense operators are refused above this dimension; full-register state
# vectors above 2**22 amplitudes are refused. Keeps every supported run
# desk-scale.
OPERATOR_DIM_CAP = 4096
STATE_AMPLITUDE_CAP = 2 ** 22


class SizeCapError(ValueError):
    """A requested object would exceed the configured dense-size caps."""


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def _check_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite entries")


def kron(a: np.ndarray, b: np.ndarray, dim_cap: int = OPERATOR_DIM_CAP) -> np.ndarray:
    """Kronecker product of two square operators."""
    a, b = _as_complex(a), _as_complex(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("kron: first operand is not square")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("kron: second operand is not square")
    dim = a.shape[0] * b.shape[0]
    if dim > dim_cap:
        raise SizeCapError(
            f"kron result dimension {dim} exceeds the operator cap {dim_cap}"
        )
    return np.kron(a, b)


def kron_all(mats, dim_cap: int = OPERATOR_DIM_CAP) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of square operators."""
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = kron(out, m, dim_cap=dim_cap)
    return out


@dataclass(frozen=True)
class Register:
    """An ordered set of same-dimension qudit wires."""

    d: int
    wires: tuple[str, ...]

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"qudit dimension must be >= 2, got {self.d}")
        object.__setattr__(self, "wires", tuple(self.wires))
        if len(self.wires) == 0:
            raise ValueError("register needs at least one wire")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"duplicate wire labels in {self.wires}")

    @property
    def num_wires(self) -> int:
        return len(self.wires)

    @property
    def dim(self) -> int:
        return self.d ** len(self.wires)

    def positions(self, wires) -> tuple[int, ...]:
        """Axis positions of the given wires, in the order given."""
        pos = []
        for w in wires:
            if w not in self.wires:
                raise ValueError(f"wire {w!r} not in register {self.wires}")
            pos.append(self.wires.index(w))
        if len(set(pos)) != len(pos):
            raise ValueError(f"repeated wires in {tuple(wires)}")
        return tuple(pos)

    def subregister(self, wires) -> "Register":
        wires = tuple(wires)
        self.positions(wires)
        return Register(self.d, wires)


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitude vector over a register (big-endian indexing)."""

    register: Register
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex(self.amplitudes).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if self.register.dim > STATE_AMPLITUDE_CAP:
            raise SizeCapError(
                f"state vector of {self.register.dim} amplitudes exceeds the "
                f"cap {STATE_AMPLITUDE_CAP}"
            )
        if amps.size != self.register.dim:
            raise ValueError(
                f"amplitude count {amps.size} does not match register "
                f"dimension {self.register.dim}"
            )
        _check_finite(amps, "state vector")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-8:
            raise ValueError(f"state vector norm {norm} is not 1")

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per wire."""
        d, w = self.register.d, self.register.num_wires
        return self.amplitudes.reshape([d] * w)


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator over a register (possibly a sub-register)."""

    register: Register
    matrix: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        mat = _as_complex(self.matrix)
        object.__setattr__(self, "matrix", mat)
        if mat.shape != (self.register.dim, self.register.dim):
            raise ValueError(
                f"matrix shape {mat.shape} does not match register "
                f"dimension {self.register.dim}"
            )
        _check_finite(mat, "density matrix")
        if validate:
            tol = 1e-8
            if np.max(np.abs(mat - mat.conj().T)) > tol:
                raise ValueError("density matrix is not hermitian")
            if abs(np.trace(mat) - 1.0) > tol:
                raise ValueError(f"density matrix trace {np.trace(mat)} is not 1")
            if np.min(np.linalg.eigvalsh(mat)) < -tol:
                raise ValueError("density matrix has a negative eigenvalue")


def basis_state(register: Register, digits) -> StateVector:
    """Computational basis ket |digits> in register order."""
    digits = tuple(digits)
    if len(digits) != register.num_wires:
        raise ValueError("one digit per wire required")
    idx = 0
    for x in digits:
        if not 0 <= x < register.d:
            raise ValueError(f"digit {x} out of range for d={register.d}")
        idx = idx * register.d + x
    amps = np.zeros(register.dim, dtype=complex)
    amps[idx] = 1.0
    return StateVector(register, amps)


def product_state(register: Register, parts) -> StateVector:
    """Assemble a product state from per-group amplitude factors.

    ``parts`` is an iterable of ``(wires, amplitudes)`` pairs whose wire
    groups partition the register; each factor is a flat amplitude array
    over its own wires (big-endian).
    """
    d = register.d
    t = np.ones(1, dtype=complex)
    order: list[str] = []
    for wires, amps in parts:
        wires = tuple(wires)
        amps = _as_complex(amps).reshape(-1)
        if amps.size != d ** len(wires):
            raise ValueError(f"factor on {wires} has wrong size {amps.size}")
        t = np.kron(t, amps)
        order.extend(wires)
    if sorted(order) != sorted(register.wires):
        raise ValueError("factors do not partition the register wires")
    perm = [order.index(w) for w in register.wires]
    amps = t.reshape([d] * len(order)).transpose(perm).reshape(-1)
    return StateVector(register, amps)


def _apply_on_axes(tensor: np.ndarray, op: np.ndarray, positions) -> np.ndarray:
    """Contract ``op`` against the given axes of an amplitude tensor.

    ``tensor`` may carry extra trailing axes (e.g. a column axis when the
    target is a matrix); only the listed axes are transformed.
    """
    m = len(positions)
    dims = [tensor.shape[p] for p in positions]
    opt = op.reshape(dims + dims)
    out = np.tensordot(opt, tensor, axes=(list(range(m, 2 * m)), list(positions)))
    return np.moveaxis(out, list(range(m)), list(positions))


def embed_apply(state: StateVector, op: np.ndarray, wires) -> StateVector:
    """Apply ``op`` to a wire subset, identity on all other wires.

    The operator dimension must be d**len(wires); wire order is the
    caller's, so the same matrix can target any permutation of wires.
    """
    reg = state.register
    positions = reg.positions(wires)
    op = _as_complex(op)
    want = reg.d ** len(positions)
    if op.shape != (want, want):
        raise ValueError(
            f"operator shape {op.shape} does not match {len(positions)} "
            f"wire(s) of dimension {reg.d}"
        )
    t = _apply_on_axes(state.tensor(), op, positions)
    return StateVector(reg, t.reshape(-1))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every wire not listed in ``keep`` (output in keep order)."""
    keep = tuple(keep)
    if len(keep) == 0:
        raise ValueError("partial_trace: keep set must be nonempty")
    reg = rho.register
    kpos = reg.positions(keep)
    w = reg.num_wires
    t = rho.matrix.reshape([reg.d] * (2 * w))
    # row axis i pairs with column axis w+i; traced wires share a symbol
    syms = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = list(syms[:w])
    col = list(syms[w:2 * w])
    for i in range(w):
        if i not in kpos:
            col[i] = row[i]
    out = "".join(row[i] for i in kpos) + "".join(col[i] for i in kpos)
    mat = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    dk = reg.d ** len(keep)
    sub = reg.subregister(keep)
    return DensityMatrix(sub, mat.reshape(dk, dk), validate=False)


def reduced_density(state: StateVector, keep) -> DensityMatrix:
    """Reduced density matrix of a pure state on the kept wires.

    Equivalent to ``partial_trace(|s><s|, keep)`` but never materializes
    the full-register density matrix.
    """
    keep = tuple(keep)
    if len(keep) == 0:
        raise ValueError("reduced_density: keep set must be nonempty")
    reg = state.register
    kpos = reg.positions(keep)
    rest = [i for i in range(reg.num_wires) if i not in kpos]
    t = np.transpose(state.tensor(), list(kpos) + rest)
    a = t.reshape(reg.d ** len(keep), -1)
    return DensityMatrix(reg.subregister(keep), a @ a.conj().T, validate=False)


@dataclass(frozen=True)
class UnitaryCheck:
    """Outcome of a unitarity test with its worst entrywise deviation."""

    ok: bool
    max_deviation: float
    tol: float = field(default=DEFAULT_TOL)

    def __bool__(self) -> bool:
        return self.ok


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> UnitaryCheck:
    """Check max |(M M^dag - I)_ij| <= tol."""
    m = _as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("is_unitary: matrix is not square")
    dev = float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))
    return UnitaryCheck(dev <= tol, dev, tol)


def overlap(a: StateVector, b: StateVector) -> complex:
    """Inner product <a|b>."""
    if a.register != b.register:
        raise ValueError("overlap: states live on different registers")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
