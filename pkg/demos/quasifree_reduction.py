"""Covariance forms on a presymplectic space and their kernel reduction.

A covariance form is a PSD Hermitian form whose antisymmetric imaginary
part is half the presymplectic form.  Quotienting out the kernel of the
majorizing inner product leaves the associated character values
unchanged, and the purely thermal commutative case has a closed-form
amplitude.
"""

import numpy as np

from amplitude_lab import (
    CovarianceForm,
    PresymplecticSpace,
    majorizing_inner_product,
    make_covariance,
    quasifree_character,
    reduce_covariance,
    thermal_amplitude,
    validate_covariance,
)

# one symplectic pair plus a degenerate third direction
sigma = np.zeros((3, 3))
sigma[0, 1], sigma[1, 0] = 1.0, -1.0
space = PresymplecticSpace(sigma)
s = make_covariance(np.diag([1.0, 1.0, 0.0]), sigma)
print("covariance (diag(1,1,0) + i sigma)/2 on R^3, sigma = e1 ^ e2:")
print("  valid:", validate_covariance(s, space))

bad = CovarianceForm(0.5j * sigma)
print("  the imaginary part alone is not PSD:", validate_covariance(bad, space))

gram = majorizing_inner_product(s, s, space)
print("\nmajorizing inner product (kernel = the degenerate direction):")
print(np.round(gram, 6))

triple = reduce_covariance(space, s, s)
print("\nafter reduction:")
print("  kernel dimension :", triple.kernel_dim)
print("  reduced dimension:", triple.space.dim)
print("  reduced sigma    :")
print(np.round(triple.space.sigma, 6))
print("  reduced form valid:", validate_covariance(triple.s_form, triple.space))

# characters are invariant under the quotient
rng = np.random.default_rng(7)
print("\ncharacter invariance exp(-S(x,x)/2) = exp(-S'(qx,qx)/2):")
for _ in range(3):
    x = rng.standard_normal(3)
    before = quasifree_character(s, x)
    after = quasifree_character(triple.s_form, triple.quotient @ x)
    print(f"  x = {np.round(x, 3)}:  {before:.9f}  vs  {after:.9f}")

# thermal closed form: Hellinger affinity of geometric distributions
print("\nthermal amplitude sqrt((1-l)(1-m))/(1 - sqrt(lm)):")
for lam, mu in ((0.5, 0.0), (0.25, 0.5), (0.9, 0.9)):
    print(f"  l = {lam}, m = {mu}:  {thermal_amplitude(lam, mu):.9f}")
series = sum(
    np.sqrt((1 - 0.25) * 0.25**n * (1 - 0.5) * 0.5**n) for n in range(60)
)
print(f"  series oracle at (0.25, 0.5): {series:.9f}")
