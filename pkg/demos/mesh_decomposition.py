"""Factoring a random circuit into site-local couplings and pulse trains.

Any M-mode unitary becomes a fixed rectangular mesh: M layers alternating
between even and odd adjacent mode pairs, M(M-1)/2 couplings in total, and
one final layer of output phases.  Each coupling then maps onto a composite
microwave/phase-imprint pulse sequence.
"""

import numpy as np

from atomsampler import (
    clements_decompose,
    composite_pulse,
    coupling_matrix,
    haar_random_unitary,
    reconstruct,
)

m = 6
u = haar_random_unitary(m, seed=5)
plan = clements_decompose(u)

print(f"decomposed a Haar-random {m}x{m} unitary:")
print(f"  depth {plan.depth} layers, {plan.coupling_count} couplings "
      f"(maximum {m * (m - 1) // 2})")
for layer in plan.layers:
    desc = ", ".join(
        f"({c.pair[0]},{c.pair[1]}) theta={c.theta:.3f} phi={c.phi:.3f}" for c in layer
    )
    print(f"  layer {layer[0].layer}: {desc}")
print(f"  output phases: {np.round(plan.output_phases, 3)}")

err = np.linalg.norm(reconstruct(plan) - u)
print(f"\nreconstruction Frobenius error: {err:.2e}")

# one coupling as the hardware would run it
coupling = plan.layers[0][0]
seq = composite_pulse(coupling.theta, coupling.phi)
print(f"\npulse train for the first coupling (theta={coupling.theta:.3f}, phi={coupling.phi:.3f}):")
for label, factor in seq.factors():
    print(f"  {label:16s} {np.round(factor, 3).tolist()}")
gap = np.abs(seq.as_matrix() - coupling_matrix(coupling.theta, coupling.phi)).max()
print(f"pulse product deviation from the coupling: {gap:.2e}")
