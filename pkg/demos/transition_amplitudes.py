"""Transition amplitudes between square roots of states, step by step.

The amplitude between two positive functionals is the inner product of
their square-root vectors in the Hilbert-Schmidt space.  This script
walks through the basic quantities on a qubit: amplitude, Uhlmann
fidelity, the norm inequality chain, and the fidelity sandwich.
"""

import numpy as np

from amplitude_lab import (
    Functional,
    functional_norm,
    inequality_suite,
    make_algebra,
    sqrt_vector,
    transition_amplitude,
    uhlmann_fidelity,
)

alg = make_algebra([2])
phi = Functional(alg, (np.diag([0.9, 0.1]).astype(complex),))
psi = Functional(alg, (np.diag([0.5, 0.5]).astype(complex),))

print("two diagonal qubit states, p = (0.9, 0.1) and q = (0.5, 0.5)")
amp = transition_amplitude(phi, psi)
print(f"  amplitude  sum_i sqrt(p_i q_i)          = {amp:.9f}")
print(f"  fidelity   (trace norm of root product)^2 = {uhlmann_fidelity(phi, psi):.9f}")

# the amplitude is literally an L^2 inner product of root vectors
v, w = sqrt_vector(phi), sqrt_vector(psi)
print(f"  <phi^(1/2)|psi^(1/2)> recomputed          = {v.inner(w).real:.9f}")

# norm chain: ||root diff||^2 <= ||phi - psi|| <= ||root diff|| ||root sum||
lhs = (v - w).inner(v - w).real
mid = functional_norm(phi - psi)
rhs = (v - w).norm() * (v + w).norm()
print("\nnorm inequality chain for the same pair:")
print(f"  {lhs:.5f}  <=  {mid:.5f}  <=  {rhs:.5f}")

# the full report bundles the defects (all nonnegative up to roundoff)
rep = inequality_suite(phi, psi)
print("\nsigned defects from the inequality report:")
print(f"  lower defect          {rep.lower_defect:+.3e}")
print(f"  upper defect          {rep.upper_defect:+.3e}")
print(f"  sandwich: amp^2 <= fidelity <= amp")
print(f"    {rep.amplitude**2:.6f} <= {rep.fidelity:.6f} <= {rep.amplitude:.6f}")
print(f"  root concavity min eigenvalue {rep.concavity_min_eig:+.3e}")

# a pure pair makes the right end of the sandwich tight
pure0 = Functional(alg, (np.diag([1.0, 0.0]).astype(complex),))
plus = Functional(alg, (np.full((2, 2), 0.5, dtype=complex),))
print("\npure pair |0> vs |+>:")
print(f"  amplitude = {transition_amplitude(pure0, plus):.6f}")
print(f"  fidelity  = {uhlmann_fidelity(pure0, plus):.6f}   (sandwich right end is tight)")
