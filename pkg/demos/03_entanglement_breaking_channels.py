#!/usr/bin/env python3
"""Channel blocks, Choi states, the PPT screen, and measure-and-prepare forms."""

import numpy as np

from eblab import (
    MatrixOperator,
    ModeWindow,
    StateOperator,
    blocks_from_holevo,
    constant_channel,
    cp_check,
    eb_extract,
    eb_necessary_test,
    holevo_apply,
    HolevoForm,
    identity_channel,
    kraus_apply,
    kraus_rank_one,
    separable_choi_from_holevo,
    transpose_channel,
)

w = ModeWindow(0, 2)
rng = np.random.default_rng(3)

# A channel is pinned down by its blocks Phi(|i><j|); complete positivity
# is the positivity of the stacked block matrix.
print("identity channel cp:", cp_check(identity_channel(w)))
print("transposition map cp:", cp_check(transpose_channel(w)), "(swap spectrum: not a channel)")

# The Choi state over a full-rank reference separates the entanglement-
# breaking candidates from the rest: the identity fails PPT, a constant
# channel passes.
sigma = StateOperator.maximally_mixed(w)
print("\nidentity channel PPT:", eb_necessary_test(identity_channel(w), sigma))
target = StateOperator(w, np.diag([0.5, 0.3, 0.2]))
print("constant channel PPT:", eb_necessary_test(constant_channel(w, target), sigma))

# A measure-and-prepare form: measure a POVM, prepare a state per outcome.
form = HolevoForm([
    (MatrixOperator(w, np.diag([1.0, 0.0, 0.0])), StateOperator(w, np.diag([0.6, 0.4, 0.0]))),
    (MatrixOperator(w, np.diag([0.0, 1.0, 1.0])), StateOperator(w, np.diag([0.0, 0.1, 0.9]))),
])
rho = StateOperator(w, np.diag([0.3, 0.3, 0.4]))
print("\nmeasure-and-prepare output diag:",
      np.round(np.diag(holevo_apply(form, rho).entries).real, 6))

# Round trip: the Choi state of a measure-and-prepare channel decomposes
# into pure products, and the decomposition extracts back to an equivalent
# form (a different atom list, the same channel).
chan = blocks_from_holevo(form)
sigma_full = StateOperator(w, 0.5 * np.eye(3) / 3 + 0.5 * np.diag([0.5, 0.3, 0.2]))
decomposition = separable_choi_from_holevo(form, sigma_full)
extracted = eb_extract(decomposition, chan)
residual = np.abs(blocks_from_holevo(extracted).blocks - chan.blocks).max()
print("extraction block residual:", residual)
print("extracted atom count:", len(extracted.atoms), "(grouping by spectral branch)")

# Atomic forms synthesize rank-one Kraus families with the same action.
kraus = kraus_rank_one(form)
out_difference = np.abs(kraus_apply(kraus, rho).entries
                        - holevo_apply(form, rho).entries).max()
print("\nrank-one Kraus operators:", len(kraus.operators),
      "| action residual:", out_difference)
completeness = sum(a.conj().T @ a for a in kraus.operators)
print("completeness residual:", np.abs(completeness - np.eye(3)).max())
