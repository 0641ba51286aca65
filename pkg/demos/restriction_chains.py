"""Amplitudes along increasing subalgebra chains are monotone.

Restricting a pair of states to a smaller subalgebra can only raise
their transition amplitude, so amplitudes along an increasing chain
decrease toward the ambient value.  Two worked families have closed
forms: product chains (per-site amplitudes multiply) and tail-lumped
diagonal chains with geometric weights (limit is the thermal closed
form).
"""

import numpy as np

from amplitude_lab import (
    build_lumped_diagonal_chain,
    build_product_chain,
    chain_amplitudes,
    diagonal_state,
    geometric_weights,
    make_algebra,
    product_state,
    thermal_amplitude,
    transition_amplitude,
    ucp_pullback,
)
from amplitude_lab.sampling import dephasing_ucp, random_state
from amplitude_lab import Functional

# product chain: first n qubit sites of an 8-site system
sites = 8
_, chain = build_product_chain([2] * sites)
phi = product_state([np.diag([1.0, 0.0])] * sites)
psi = product_state([np.eye(2) / 2.0] * sites)
amps = chain_amplitudes(phi, psi, chain)
print("product chain, pure vs maximally mixed per site (a_n = 2^(-n/2)):")
for n, a in enumerate(amps, start=1):
    print(f"  n = {n}:  a_n = {a:.9f}   2^(-n/2) = {2 ** (-n / 2):.9f}")

# random entangled ambient states: still monotone
rng = np.random.default_rng(5)
ambient, chain4 = build_product_chain([2] * 4)
a = random_state(rng, ambient)
b = random_state(rng, ambient)
amps = chain_amplitudes(a, b, chain4)
print("\nrandom entangled pair on 4 sites (decreasing to the ambient value):")
print("  ", " >= ".join(f"{x:.6f}" for x in amps))
print("   ambient amplitude =", f"{transition_amplitude(a, b):.6f}")

# lumped diagonal chain with geometric weights converges to the thermal
# closed form sqrt((1-l)(1-m)) / (1 - sqrt(lm))
lam, mu = 0.35, 0.65
n = 200
p, q = geometric_weights(lam, n), geometric_weights(mu, n)
lumped = build_lumped_diagonal_chain(p, q)
amps = chain_amplitudes(diagonal_state(p), diagonal_state(q), lumped)
target = thermal_amplitude(lam, mu)
print(f"\nlumped diagonal chain, geometric weights lam={lam}, mu={mu}:")
for idx in (1, 2, 5, 20, 200):
    print(f"  a_{idx:<3d} = {amps[idx - 1]:.9f}")
print(f"  thermal closed form = {target:.9f}")
print(f"  |a_200 - closed form| = {abs(amps[-1] - target):.2e}")

# the monotonicity mechanism in isolation: any unital CP pullback can
# only raise the amplitude (dephasing |0><0| and |+><+| as the example)
alg = make_algebra([2])
chan = dephasing_ucp(alg)
p0 = Functional(alg, (np.diag([1.0, 0.0]).astype(complex),))
pp = Functional(alg, (np.full((2, 2), 0.5, dtype=complex),))
before = transition_amplitude(p0, pp)
after = transition_amplitude(ucp_pullback(chan, p0), ucp_pullback(chan, pp))
print("\ndephasing raises the amplitude of |0><0| vs |+><+|:")
print(f"  before = {before:.6f},  after = {after:.6f}  (= 1/sqrt(2))")
