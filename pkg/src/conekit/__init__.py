"""conekit: invariants of weighted line arrangements and their local models.

Subpackages and modules:

* arrangement - exact projective-line combinatorics and admissibility
* pk_cone     - tangent-cone classification, spectra and densities
* invariants  - energy / logarithmic Chern-Weil numbers and cross-checks
* valuations  - curve-germ densities via normalized volumes of valuations
* cp1         - flat conical metrics on the line: areas and periods
* cone_lab    - indicial roots and model Poisson problems on cones
* cli         - batch front end (JSON in, JSON/CSV out)
"""

__version__ = "0.1.0"
