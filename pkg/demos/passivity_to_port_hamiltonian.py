"""Certify passivity of a state-space system and build a port form.

A square system (A, B, C, D) is passive when it cannot create energy:
there is a positive definite storage matrix X making the dissipation
block matrix negative semidefinite.  Finding such an X is a Riccati
inequality problem; once found, a change of coordinates by X^(1/2)
rewrites the dynamics in port form

    x' = (J - R) x + (B_hat - P_hat) u,

where J is skew-Hermitian (lossless coupling) and the block matrix
W = [[R, P_hat], [P_hat^H, S]] is positive semidefinite (dissipation).

Run:  python3 demos/passivity_to_port_hamiltonian.py
"""

import numpy as np

from hamriccati import StateSpace, passivity_verdict, ph_realization

np.set_printoptions(precision=6, suppress=True, linewidth=100)


def banner(text):
    print()
    print("=" * 72)
    print(text)
    print("=" * 72)


banner("1. A passive two-state system")
a = np.array([[-3.0, -1.0], [-1.0, -5.0]])
b = np.eye(2)
c = np.array([[6.0, 8.0], [8.0, 17.0]])
d = np.eye(2) * 4.0
system = StateSpace(a, b, c, d)
verdict = passivity_verdict(system)
print("certified passive:", verdict.certified, f" (route: {verdict.route})")
print("storage matrix x =\n", verdict.x.real)
print("dissipation LMI margin:", f"{verdict.lmi_margin:.2e}", "(<= 0 required)")

banner("2. The port form")
real = ph_realization(system, verdict.x)
print("skew part j =\n", np.round(real.j, 10).real)
print("resistive part r =\n", real.r.real)
print("port input b_hat - p_hat =\n", (real.b_hat - real.p_hat).real)
w = np.block([[real.r, real.p_hat], [real.p_hat.conj().T, real.s]])
print("dissipation block w eigenvalues:", np.sort(np.linalg.eigvalsh(w)))
print()
print(
    "W is positive semidefinite: every trajectory dissipates at rate\n"
    "[x; u]^H W [x; u] >= 0, which is the energy-balance certificate."
)

banner("3. A system that is not passive is refused")
antistable = StateSpace(np.eye(2), b, c, d)
refused = passivity_verdict(antistable)
print("certified passive:", refused.certified)
print("what was tried:")
for attempt in refused.diagnostics["attempts"]:
    print("  -", attempt)
print()
print(
    "No storage matrix exists for an energy-creating system; the verdict\n"
    "reports every route it tried instead of guessing."
)
