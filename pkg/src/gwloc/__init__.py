"""gwloc: exact torus-localization computations of genus-0 (twisted)
Gromov-Witten invariants for projective spaces and split projective bundles,
plus an identity-verification suite relating the two."""

__version__ = "0.1.0"
