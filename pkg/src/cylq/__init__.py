"""Exact q-series toolkit: cylindric partition identities and their proofs.

The package has three layers.

* Arithmetic: sparse Laurent polynomials in q and z over the integers, and
  truncated q-series with explicit validity windows (`exactalg`), plus the
  standard q-factory functions built on top of them (`qseries`).

* Objects of study: cylindric partitions with their generating functions,
  product formulas and recurrences (`cylindric`); the double-sum families
  indexed by a modulus together with their contiguous relations (`ssums`,
  `relations`).

* Proving: fraction-free elimination over the polynomial ring with
  certificate extraction (`prover`), the claim tables (`claims`), and the
  verification / proving pipelines plus command line front end
  (`pipeline`, `cli`).

All computations are exact; there is no floating point anywhere.
"""

__version__ = "0.1.0"
