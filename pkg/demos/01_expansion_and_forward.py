"""Walk through the input expansion and one winner-take-all forward pass.

The model never adds hidden neurons: capacity comes from expanding the
raw input into trigonometric harmonics and letting M units compete on
their excitatory activations.
"""

import numpy as np

from wtanet import ExpansionSpec, WtaModel, expand, expansion_dim, forward

# A one-dimensional input with three harmonics per component:
spec = ExpansionSpec(input_dim=1, order=3)
print(f"expansion: n={spec.input_dim}, K={spec.order}, "
      f"m={expansion_dim(spec)} basis components")

s = np.array([0.25])
pattern = expand(spec, s)
print(f"\nraw input {s} expands to:")
labels = ["x"] + [f"{f}(pi*{k}*x)" for k in (1, 2, 3) for f in ("sin", "cos")] \
    + ["bias"]
for name, value in zip(labels, pattern):
    print(f"  {name:12s} {value:+.6f}")

# Two units compete; the winner's excitatory-minus-inhibitory response
# is the output.  Ties always go to the smaller unit index.
rng = np.random.default_rng(0)
model = WtaModel(
    spec,
    rng.uniform(-1, 1, size=(2, expansion_dim(spec))),
    rng.uniform(-0.2, 0.2, size=(2, expansion_dim(spec))),
)
pred = forward(model, s)
print(f"\nexcitations: {np.round(pred.excitation, 4)}")
print(f"winner: unit {pred.winner}")
print(f"output (excitatory - inhibitory response): {pred.output:.6f}")

# The competition is scale-invariant: scaling every excitatory vector by
# the same positive constant never changes the winner.
scaled = WtaModel(spec, model.excitatory * 7.5, model.inhibitory)
assert forward(scaled, s).winner == pred.winner
print("\nscaling all excitatory weights by 7.5 keeps the same winner")
