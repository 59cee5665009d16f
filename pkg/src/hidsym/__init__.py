"""hidsym: Lie point symmetries of Laplace-type equations from conformal geometry.

Given a metric, the package derives the Lie point symmetries of the
Laplace/Poisson/Klein-Gordon equation from the conformal algebra of the
metric, reduces the equation by a chosen symmetry, and classifies the
symmetries of the reduced equation as inherited or Type II hidden.
"""

__version__ = "0.1.0"
