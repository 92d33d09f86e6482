"""Small dense complex linear algebra for two-qubit states and operators.

Matrices are plain ``numpy`` complex arrays in the ``|00>, |01>, |10>, |11>``
ordering. Only 2x2 and 4x4 shapes occur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ComplexMatrix = np.ndarray

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
TOL_NUM = 1e-9


class DensityError(ValueError):
    """Raised when a matrix violates a density-matrix invariant.

    ``invariant`` is one of ``"shape"``, ``"finite"``, ``"hermitian"``,
    ``"trace"`` or ``"psd"``.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class NumericalError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 two-qubit density matrix. Build it with :func:`validate_density`."""

    mat: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _require_shape(arr: np.ndarray, shape: tuple[int, int], name: str) -> None:
    if arr.shape != shape:
        raise ValueError(f"{name} must be {shape[0]}x{shape[1]}, got {arr.shape[0]}x{arr.shape[1]}")


def tensor_product(a, b) -> ComplexMatrix:
    """Kronecker product of two 2x2 operators, first factor acting on the first qubit."""
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    _require_shape(a, (2, 2), "a")
    _require_shape(b, (2, 2), "b")
    return np.kron(a, b)


def adjoint(a) -> ComplexMatrix:
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("adjoint requires a square matrix")
    return a.conj().T


def trace_of_product(a, b) -> complex:
    """Return ``Tr(a @ b)`` for two 4x4 matrices."""
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    _require_shape(a, (4, 4), "a")
    _require_shape(b, (4, 4), "b")
    # Tr(AB) = sum_ij A_ij B_ji, avoids forming the product
    return complex(np.einsum("ij,ji->", a, b))


def validate_density(
    mat,
    tol_herm: float = TOL_HERM,
    tol_trace: float = TOL_TRACE,
    tol_psd: float = TOL_PSD,
) -> DensityMatrix:
    """Check the density-matrix invariants and wrap ``mat``.

    Raises
    ------
    DensityError
        Naming the first violated invariant (shape, finite, hermitian,
        trace, psd), checked in that order.
    """
    arr = np.asarray(mat.mat if isinstance(mat, DensityMatrix) else mat, dtype=complex)
    if arr.shape != (4, 4):
        raise DensityError("shape", f"expected 4x4, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DensityError("finite", "matrix has NaN or infinite entries")
    herm_dev = float(np.max(np.abs(arr - arr.conj().T)))
    if herm_dev > tol_herm:
        raise DensityError("hermitian", f"max |A - A^dagger| = {herm_dev:.3e}")
    tr = np.trace(arr)
    if abs(tr - 1.0) > tol_trace:
        raise DensityError("trace", f"trace = {tr.real:.12g}{tr.imag:+.3g}j")
    herm = (arr + arr.conj().T) / 2
    min_eig = float(_eigvalsh(herm)[0])
    if min_eig < -tol_psd:
        raise DensityError("psd", f"minimum eigenvalue {min_eig:.3e}")
    frozen = herm.copy()
    frozen.flags.writeable = False
    return DensityMatrix(frozen)


def _eigvalsh(h: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"hermitian eigen-solver failed: {exc}") from exc


def partial_transpose(rho) -> ComplexMatrix:
    """Transpose the second qubit of a 4x4 two-qubit operator."""
    arr = _as_matrix(np.asarray(rho), "rho")
    _require_shape(arr, (4, 4), "rho")
    # indices (a, b, a', b') -> (a, b', a', b)
    return arr.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def partial_transpose_min_eig(rho: DensityMatrix) -> float:
    """Smallest eigenvalue of the partial transpose; negative certifies entanglement."""
    pt = partial_transpose(rho)
    return float(_eigvalsh((pt + pt.conj().T) / 2)[0])


def is_unitary(u, atol: float = 1e-12) -> bool:
    u = _as_matrix(u)
    return bool(np.allclose(u @ u.conj().T, np.eye(u.shape[0]), rtol=0, atol=atol))
