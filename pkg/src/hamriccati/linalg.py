"""Dense complex linear-algebra kernel.

Schur decomposition and eigenvalue reordering, Sylvester/Lyapunov solvers
with explicit solvability verdicts, principal matrix square roots, and
Hermitian definiteness classification with dead-band tolerances.  Everything
downstream (staircase forms, Riccati solvers, perturbation analysis) is built
on these routines.

All matrices are complex numpy arrays.  Inputs are validated on entry and
numerical contracts are enforced by raising, never by silently degrading.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla

__all__ = [
    "LinalgError",
    "OrderingBreakdown",
    "SolvabilityError",
    "BranchCutError",
    "POSITIVE_DEFINITE",
    "POSITIVE_SEMIDEFINITE",
    "INDEFINITE",
    "NEGATIVE_SEMIDEFINITE",
    "NEGATIVE_DEFINITE",
    "as_matrix",
    "hermitian_part",
    "is_hermitian",
    "SchurForm",
    "schur_decompose",
    "order_schur",
    "order_schur_smallest",
    "SylvesterSolution",
    "solve_sylvester",
    "solve_lyapunov",
    "principal_sqrt",
    "DefinitenessVerdict",
    "definiteness",
    "loewner_leq",
]


class LinalgError(RuntimeError):
    """A numerical contract could not be met."""


class OrderingBreakdown(LinalgError):
    """Requested ordering splits numerically identical eigenvalues."""


class SolvabilityError(LinalgError):
    """Spectral preconditions of a matrix equation are violated."""


class BranchCutError(SolvabilityError):
    """An eigenvalue lies on the closed negative real axis."""


# Definiteness kinds.
POSITIVE_DEFINITE = "positive-definite"
POSITIVE_SEMIDEFINITE = "positive-semidefinite"
INDEFINITE = "indefinite"
NEGATIVE_SEMIDEFINITE = "negative-semidefinite"
NEGATIVE_DEFINITE = "negative-definite"


def as_matrix(a, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite complex 2-D array (read-only view)."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.size and not np.isfinite(m).all():
        raise ValueError(f"{name} has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    m.setflags(write=False)
    return m


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    if a.shape[0] != a.shape[1]:
        return False
    scale = 1.0 + np.linalg.norm(a)
    return bool(np.linalg.norm(a - a.conj().T) <= tol * scale)


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a)) if a.size else 0.0


# ---------------------------------------------------------------------------
# Schur decomposition and reordering


@dataclass(frozen=True)
class SchurForm:
    """Unitary Schur factorization a = q t q^H with t upper triangular."""

    q: np.ndarray
    t: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.t).copy()

    @property
    def n(self) -> int:
        return self.t.shape[0]


def schur_decompose(a, *, tol: float | None = None) -> SchurForm:
    """Complex Schur decomposition a = q t q^H.

    Parameters
    ----------
    a : array_like
        Square complex matrix.
    tol : float, optional
        Acceptance tolerance for the unitarity and factorization residuals,
        scaled by the dimension. Defaults to ``1e-12 * n``.

    Returns
    -------
    SchurForm
        With ``t`` exactly upper triangular (strict lower part zeroed) and
        ``q`` unitary to working precision.
    """
    a = as_matrix(a, "a", square=True)
    n = a.shape[0]
    if n == 0:
        return SchurForm(q=np.zeros((0, 0), complex), t=np.zeros((0, 0), complex))
    try:
        t, q = sla.schur(a, output="complex")
    except sla.LinAlgError as exc:  # pragma: no cover - LAPACK failure is rare
        raise LinalgError(f"Schur iteration did not converge: {exc}") from exc
    t = np.triu(t)
    tol = 1e-12 * n if tol is None else tol
    orth = np.linalg.norm(q.conj().T @ q - np.eye(n))
    fact = np.linalg.norm(q @ t @ q.conj().T - a)
    if orth > tol * 10.0 or fact > tol * 10.0 * (1.0 + _norm(a)):
        raise LinalgError(
            f"Schur residuals out of tolerance: orth={orth:.3e}, fact={fact:.3e}"
        )
    q = q.copy()
    q.setflags(write=False)
    t.setflags(write=False)
    return SchurForm(q=q, t=t)


def _swap_adjacent(t: np.ndarray, q: np.ndarray, k: int) -> None:
    """Exchange diagonal entries k and k+1 of triangular t, updating q."""
    t11 = t[k, k]
    t22 = t[k + 1, k + 1]
    t12 = t[k, k + 1]
    gap_tol = 1e-13 * (1.0 + abs(t11) + abs(t22) + abs(t12))
    if abs(t22 - t11) <= gap_tol:
        if abs(t12) <= gap_tol:
            g = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        else:
            raise OrderingBreakdown(
                "cannot reorder numerically identical eigenvalues "
                f"{t11} and {t22} coupled by t12={t12}; selection is ill conditioned"
            )
    else:
        x = np.array([t12, t22 - t11], dtype=complex)
        r = np.linalg.norm(x)
        c, s = x[0] / r, x[1] / r
        # Unitary with first column the eigenvector of [[t11,t12],[0,t22]] at t22.
        g = np.array([[c, -np.conj(s)], [s, np.conj(c)]], dtype=complex)
    t[:, k : k + 2] = t[:, k : k + 2] @ g
    t[k : k + 2, :] = g.conj().T @ t[k : k + 2, :]
    q[:, k : k + 2] = q[:, k : k + 2] @ g
    t[k + 1, k] = 0.0


def _order_by_flags(s: SchurForm, flags: list[bool]) -> SchurForm:
    """Stable reorder moving flagged eigenvalues to the leading positions."""
    t = s.t.copy()
    q = s.q.copy()
    flags = list(flags)
    n = len(flags)
    target = 0
    for i in range(n):
        if flags[i]:
            j = i
            while j > target:
                _swap_adjacent(t, q, j - 1)
                flags[j - 1], flags[j] = flags[j], flags[j - 1]
                j -= 1
            target += 1
    q.setflags(write=False)
    t.setflags(write=False)
    return SchurForm(q=q, t=t)


def order_schur(s: SchurForm, select: Callable[[complex], bool]) -> SchurForm:
    """Reorder a Schur form so selected eigenvalues occupy the leading block.

    Parameters
    ----------
    s : SchurForm
    select : callable
        Predicate on a single eigenvalue. Evaluated once per diagonal entry
        of the incoming form; the flags then travel with the eigenvalues.

    Returns
    -------
    SchurForm
        Same factorized matrix, with every eigenvalue satisfying ``select``
        moved (stably) in front of the others.

    Raises
    ------
    OrderingBreakdown
        If the required exchanges would split a numerically identical,
        defectively coupled eigenvalue pair.
    """
    flags = [bool(select(lam)) for lam in np.diag(s.t)]
    before = np.sort_complex(np.diag(s.t))
    out = _order_by_flags(s, flags)
    after = np.sort_complex(np.diag(out.t))
    scale = 1.0 + _norm(s.t)
    if np.max(np.abs(before - after), initial=0.0) > 1e-10 * scale:
        raise LinalgError("reordering failed to preserve the spectrum")
    return out


def order_schur_smallest(s: SchurForm, key: Callable[[complex], float], count: int) -> SchurForm:
    """Reorder so the ``count`` eigenvalues with smallest ``key`` lead.

    Ties are broken by original diagonal position, which keeps the
    selection deterministic.
    """
    lams = np.diag(s.t)
    if not 0 <= count <= len(lams):
        raise ValueError(f"count={count} out of range for n={len(lams)}")
    ranked = sorted(range(len(lams)), key=lambda i: (key(lams[i]), i))
    chosen = set(ranked[:count])
    flags = [i in chosen for i in range(len(lams))]
    return _order_by_flags(s, flags)


# ---------------------------------------------------------------------------
# Sylvester and Lyapunov equations


@dataclass(frozen=True)
class SylvesterSolution:
    """Outcome of ``solve_sylvester``.

    ``kind`` is one of ``"unique"``, ``"consistent"`` (minimum-Frobenius-norm
    representative of an affine solution set) or ``"inconsistent"`` (``x`` is
    then the least-squares minimizer, kept for diagnostics).
    ``residual_norm`` is the Frobenius norm of a x + x b + c at the returned
    ``x``. ``spectral_gap`` is min |lambda_i(a) + mu_j(b)| and the two
    thresholds record the decisions taken, so a caller can audit the branch.
    """

    kind: str
    x: np.ndarray | None
    residual_norm: float
    spectral_gap: float
    gap_threshold: float
    consistency_threshold: float


def _sylvester_residual(a, b, c, x) -> float:
    return _norm(a @ x + x @ b + c)


def solve_sylvester(
    a,
    b,
    c,
    *,
    sep_tol: float | None = None,
    consist_tol: float = 1e-8,
) -> SylvesterSolution:
    """Solve a x + x b + c = 0 with an explicit solvability verdict.

    Parameters
    ----------
    a, b, c : array_like
        ``a`` is m x m, ``b`` is k x k, ``c`` is m x k.
    sep_tol : float, optional
        Spectral-gap threshold separating the unique branch from the
        overlapping-spectrum branch. Defaults to ``1e-8 * (||a|| + ||b||)``
        in the spectral norm.
    consist_tol : float
        Relative residual threshold deciding consistency on the
        overlapping branch. Recorded in the result so the (heuristic)
        decision is auditable.

    Returns
    -------
    SylvesterSolution

    Notes
    -----
    When the spectra of ``a`` and ``-b`` are separated by more than
    ``sep_tol`` the equation has a unique solution and a triangular
    (Schur-based) solver is used. Otherwise the equation is solved as a
    dense least-squares problem on the vectorized system, which yields the
    minimum-norm solution when the system is consistent and a residual
    certificate when it is not. The dense branch is intended for the
    modest sizes this package targets.
    """
    a = as_matrix(a, "a", square=True)
    b = as_matrix(b, "b", square=True)
    c = as_matrix(c, "c")
    m, k = a.shape[0], b.shape[0]
    if c.shape != (m, k):
        raise ValueError(f"c must have shape {(m, k)}, got {c.shape}")
    norm_a = float(np.linalg.norm(a, 2)) if m else 0.0
    norm_b = float(np.linalg.norm(b, 2)) if k else 0.0
    gap_threshold = 1e-8 * (norm_a + norm_b) if sep_tol is None else sep_tol

    if m == 0 or k == 0:
        x = np.zeros((m, k), complex)
        return SylvesterSolution("unique", x, 0.0, np.inf, gap_threshold, consist_tol)

    eig_a = np.linalg.eigvals(a)
    eig_b = np.linalg.eigvals(b)
    gap = float(np.min(np.abs(eig_a[:, None] + eig_b[None, :])))

    if gap > gap_threshold:
        x = sla.solve_sylvester(a, b, -c)
        res = _sylvester_residual(a, b, c, x)
        x.setflags(write=False)
        return SylvesterSolution("unique", x, res, gap, gap_threshold, consist_tol)

    # Overlapping spectra: minimum-norm least squares on the Kronecker form.
    # Singular values of the vectorized operator at or below the spectral-gap
    # threshold are shadows of the very overlap that routed us onto this
    # branch, so they are truncated before inverting; a cutoff relative to
    # the operator's own largest singular value would let coefficient dust
    # of order eps pass for an invertible system with a huge "solution".
    big = np.kron(np.eye(k), a) + np.kron(b.T, np.eye(m))
    rhs = -c.flatten(order="F")
    u, sing, vh = np.linalg.svd(big)
    keep = sing > gap_threshold
    z = vh.conj().T[:, keep] @ ((u.conj().T[keep] @ rhs) / sing[keep])
    x = z.reshape((m, k), order="F")
    res = _sylvester_residual(a, b, c, x)
    scale = _norm(c) + (norm_a + norm_b) * _norm(x) + 1e-300
    kind = "consistent" if res <= consist_tol * scale else "inconsistent"
    x.setflags(write=False)
    return SylvesterSolution(kind, x, res, gap, gap_threshold, consist_tol)


def solve_lyapunov(a, c, *, sep_tol: float | None = None) -> np.ndarray:
    """Solve a^H x + x a + c = 0 for Hermitian ``c``.

    The result is Hermitian by construction (the computed solution is
    symmetrized; the defect is checked first).

    Raises
    ------
    SolvabilityError
        If some eigenvalue pair of ``a`` satisfies conj(lambda_i) ~= -lambda_j,
        in which case the equation is singular.
    ValueError
        If ``c`` is not Hermitian.
    """
    a = as_matrix(a, "a", square=True)
    c = as_matrix(c, "c", square=True)
    n = a.shape[0]
    if c.shape[0] != n:
        raise ValueError("a and c must have matching dimensions")
    if not is_hermitian(c):
        raise ValueError("c must be Hermitian")
    if n == 0:
        return np.zeros((0, 0), complex)
    norm_a = float(np.linalg.norm(a, 2))
    threshold = 2e-8 * norm_a if sep_tol is None else sep_tol
    eig = np.linalg.eigvals(a)
    gap = float(np.min(np.abs(eig.conj()[:, None] + eig[None, :])))
    if gap <= threshold:
        raise SolvabilityError(
            f"eigenvalue pair of a sums to zero within tolerance (gap={gap:.3e}); "
            "the equation is singular"
        )
    x = sla.solve_sylvester(a.conj().T, a, -c)
    herm_defect = _norm(x - x.conj().T)
    if herm_defect > 1e-8 * (1.0 + _norm(x)):
        raise LinalgError(f"solution lost Hermitian symmetry (defect {herm_defect:.3e})")
    x = hermitian_part(x)
    x.setflags(write=False)
    return x


# ---------------------------------------------------------------------------
# Principal square root


def principal_sqrt(a, *, tol: float = 1e-10) -> np.ndarray:
    """Principal matrix square root (spectrum in the open right half-plane).

    Hermitian positive-definite inputs take an eigendecomposition fast
    path; everything else goes through the dense Schur-based square root.

    Raises
    ------
    BranchCutError
        If some eigenvalue of ``a`` lies on the closed negative real axis.
    """
    a = as_matrix(a, "a", square=True)
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0), complex)
    scale = 1.0 + _norm(a)
    eig = np.linalg.eigvals(a)
    cut = 1e-12 * scale
    on_cut = (eig.real <= cut) & (np.abs(eig.imag) <= cut)
    if on_cut.any():
        raise BranchCutError(
            f"eigenvalues {eig[on_cut]} lie on the closed negative real axis"
        )
    if is_hermitian(a, 1e-12):
        w, u = np.linalg.eigh(hermitian_part(a))
        if w.min() <= cut:
            raise BranchCutError("Hermitian input is not positive definite")
        s = (u * np.sqrt(w)) @ u.conj().T
    else:
        s = np.asarray(sla.sqrtm(a), dtype=complex)
    res = _norm(s @ s - a)
    if res > 1e-8 * scale:
        raise LinalgError(f"square-root residual {res:.3e} exceeds tolerance")
    if np.linalg.eigvals(s).real.min() < -tol * scale:
        raise LinalgError("computed square root has spectrum outside the right half-plane")
    s.setflags(write=False)
    return s


# ---------------------------------------------------------------------------
# Definiteness classification and the semidefinite order


@dataclass(frozen=True)
class DefinitenessVerdict:
    """Classified inertia of a Hermitian matrix.

    ``margin`` is the relevant extreme eigenvalue: the smallest one for
    positive (semi)definite verdicts, the largest one for negative
    (semi)definite verdicts, and the eigenvalue of smallest magnitude for
    indefinite matrices.
    """

    kind: str
    margin: float
    eigenvalues: np.ndarray

    @property
    def is_psd(self) -> bool:
        return self.kind in (POSITIVE_DEFINITE, POSITIVE_SEMIDEFINITE)

    @property
    def is_nsd(self) -> bool:
        return self.kind in (NEGATIVE_DEFINITE, NEGATIVE_SEMIDEFINITE)


def definiteness(a, *, tol: float = 1e-10) -> DefinitenessVerdict:
    """Classify a Hermitian matrix with a dead band of ``tol * (1 + ||a||)``.

    Eigenvalues within the dead band count as zero, so a zero matrix is
    positive semidefinite by convention (with margin 0).

    Raises
    ------
    ValueError
        If ``a`` is further from Hermitian than the tolerance allows.
    """
    a = as_matrix(a, "a", square=True)
    if a.size == 0:
        return DefinitenessVerdict(POSITIVE_DEFINITE, np.inf, np.zeros(0))
    scale = 1.0 + _norm(a)
    if np.linalg.norm(a - a.conj().T) > max(tol, 1e-10) * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(hermitian_part(a))
    band = tol * scale
    if w.min() > band:
        kind, margin = POSITIVE_DEFINITE, w.min()
    elif w.min() >= -band:
        kind, margin = POSITIVE_SEMIDEFINITE, w.min()
    elif w.max() < -band:
        kind, margin = NEGATIVE_DEFINITE, w.max()
    elif w.max() <= band:
        kind, margin = NEGATIVE_SEMIDEFINITE, w.max()
    else:
        kind = INDEFINITE
        margin = w[np.argmin(np.abs(w))]
    return DefinitenessVerdict(kind, float(margin), w)


def loewner_leq(x, y, *, tol: float = 1e-10) -> bool:
    """Decide x <= y in the semidefinite (Loewner) order.

    Both matrices must be Hermitian of equal size; the comparison applies
    ``definiteness`` to y - x with the same dead-band convention.
    """
    x = as_matrix(x, "x", square=True)
    y = as_matrix(y, "y", square=True)
    if x.shape != y.shape:
        raise ValueError("x and y must have equal shapes")
    for name, m in (("x", x), ("y", y)):
        if not is_hermitian(m, max(tol, 1e-8)):
            raise ValueError(f"{name} must be Hermitian")
    return definiteness(y - x, tol=tol).is_psd
