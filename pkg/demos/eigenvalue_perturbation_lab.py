"""How Hamiltonian eigenvalues move under growing Hermitian bumps.

Three instruments on the same 2x2 family:

* first-order slopes of imaginary-axis eigenvalues, with a definite
  cluster form guaranteeing the signs;
* the critical bump size at which the spectrum first touches the
  imaginary axis, bracketed by a sign change of an exact solvability
  oracle and compared with a certified lower bound;
* a vertex walk that greedily accumulates weight bumps until every
  eigenvalue is pinned at zero and the solution set collapses to a
  single matrix.

Run:  python3 demos/eigenvalue_perturbation_lab.py
"""

import numpy as np

from hamriccati import (
    HamiltonianMatrix,
    PerturbationDirection,
    critical_time,
    first_order_slopes,
    spectrum_snapshot,
    vertex_path,
)

np.set_printoptions(precision=6, suppress=True, linewidth=100)


def banner(text):
    print()
    print("=" * 72)
    print(text)
    print("=" * 72)


f = np.array([[-3.0, -1.0], [-1.0, -5.0]])
g = np.eye(2)
k0 = np.array([[6.0, 8.0], [8.0, 17.0]])
base = HamiltonianMatrix.from_triple(f, g, k0)

banner("1. First-order slopes on a spectrum pinned to the axis")
# J times a positive definite form: every eigenvalue purely imaginary,
# semisimple, with a definite cluster form at each axis point.
j = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
theta = 0.4
rot = np.kron(
    np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]),
    np.eye(2),
)
form = rot @ np.diag([1.0, 2.0, 2.8, 4.1]) @ rot.T
pinned = j @ (0.5 * (form + form.T))
jp = j @ pinned
pinned = -j @ (0.5 * (jp + jp.conj().T))  # symmetrize in the Hamiltonian sense
snapshot = spectrum_snapshot(pinned)
print("eigenvalues:", np.round(np.sort_complex(snapshot.eigenvalues), 6))
print("axis count:", snapshot.n_axis)
bump = PerturbationDirection.from_full(0.5 * np.eye(4))
for cluster in sorted(snapshot.imaginary_groups, key=lambda cl: cl.alpha):
    slopes = first_order_slopes(pinned, bump, cluster.alpha)
    print(f"  slopes at height {cluster.alpha:+.4f}: {np.round(slopes, 6)}")
print()
print(
    "A positive semidefinite bump with a definite cluster form moves\n"
    "upper-half eigenvalues up and lower-half eigenvalues down: the\n"
    "spectrum spreads along the axis at a predictable rate."
)

banner("2. Critical bump size along the ray toward the vertex")
ray = PerturbationDirection.delta11_only([[4.0, 0.0], [0.0, 9.0]])
result = critical_time(base, ray)
print("status:           ", result.status)
print("first axis touch: t0 =", result.t0)
print("bisection bracket:", result.bracket)
if result.bound is not None:
    print("certified ceiling: any crossing happens before t =", f"{result.bound:.4f}")
print("axis count at t=0:", result.n_axis_start)
print()
print(
    "Along this ray the spectrum stays off the axis for all t < 1 and\n"
    "touches it exactly at t0 = 1, where the bumped weight reaches the\n"
    "region boundary.  The ceiling comes from a solvability estimate:\n"
    "past it the bumped equation certifiably has no Hermitian solution,\n"
    "so the scan never needs to look further."
)

banner("3. Vertex walk: accumulate bumps until the spectrum collapses")
rng = np.random.default_rng(7)
path = vertex_path(base, rng=rng)
print("status:", path.status)
for i, leg in enumerate(path.legs, start=1):
    print(f"leg {i}: t in [{leg.t_start:.6f}, {leg.t_end:.6f}]")
    print("  direction delta11 =")
    print(np.asarray(leg.direction.delta11).real)
print()
assert path.terminal is not None
print("accumulated bump delta_k =\n", np.asarray(path.terminal.delta_accumulated).real)
print("terminal solution x =\n", np.asarray(path.terminal.x).real)
print("terminal extremal gap:", f"{path.terminal.gap:.2e}")
print()
print(
    "Each leg freezes the eigenvalues it has already pinned to the axis\n"
    "and pushes the remaining ones toward zero; at the vertex the minimal\n"
    "and maximal solutions coincide."
)
