#!/usr/bin/env python3
"""Mode windows, states, tensor structure, and entropy functionals."""

import numpy as np

from eblab import (
    ModeWindow,
    PureVector,
    StateOperator,
    partial_trace,
    partial_transpose,
    relative_entropy,
    tensor,
    trace_norm_distance,
    von_neumann_entropy,
)

# Everything is indexed by integer Fourier modes on a window [-K, K].
window = ModeWindow.symmetric(1)
print("window:", window, "dimension:", window.dimension)

# States are Hermitian, positive, trace-one matrices over the window.
flat = StateOperator.maximally_mixed(window)
plus = PureVector(ModeWindow(0, 1), [1.0, 1.0]).projector()
print("entropy of the flat state:", von_neumann_entropy(flat), "(= log 3)")
print("entropy of a pure state:  ", von_neumann_entropy(plus))

# Dyadic spectra give dyadic entropies.
dyadic = StateOperator(ModeWindow(0, 2), np.diag([0.25, 0.25, 0.5]))
print("entropy of diag(1/4,1/4,1/2):", von_neumann_entropy(dyadic),
      "(= 1.5 log 2 =", 1.5 * np.log(2.0), ")")

# Tensor products carry a product window; partial operations need it.
w2 = ModeWindow(0, 1)
a = StateOperator(w2, np.diag([0.7, 0.3]))
b = StateOperator(w2, np.diag([0.4, 0.6]))
joint = StateOperator.from_operator(tensor(a, b))
print("\nTr_2 (a x b) recovers a:",
      np.allclose(partial_trace(joint, "second").entries, a.entries))

# The partial transpose detects entanglement: product states stay
# positive, the Bell state does not.
bell_vec = np.zeros(4)
bell_vec[0] = bell_vec[3] = 1.0 / np.sqrt(2.0)
bell = StateOperator(joint.window, np.outer(bell_vec, bell_vec))
print("min eigenvalue of PT(product):",
      np.linalg.eigvalsh(partial_transpose(joint).entries).min())
print("min eigenvalue of PT(Bell):   ",
      np.linalg.eigvalsh(partial_transpose(bell).entries).min(), "(= -1/2)")

# Distances and divergences.
pure0 = StateOperator(w2, np.diag([1.0, 0.0]))
mixed = StateOperator(w2, np.diag([0.5, 0.5]))
print("\ntrace distance pure vs flat:", trace_norm_distance(pure0, mixed))
print("relative entropy pure vs flat:", relative_entropy(pure0, mixed), "(= log 2)")
print("relative entropy off support:",
      relative_entropy(pure0, StateOperator(w2, np.diag([0.0, 1.0]))))
