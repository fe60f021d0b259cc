"""defalg: an exact-arithmetic workbench for the algebra of deformation
theory: free-Lie/BCH computation, differential graded Lie algebra and
Maurer-Cartan/gauge/obstruction calculus over nilpotent dg-algebras,
symmetric-coalgebra coderivations, L-infinity structure and morphism
verification, Gerstenhaber/Schouten/BV identities, and the Lefschetz
decomposition in the exterior algebra of a Hermitian space.

All computation is exact: rationals or Gaussian rationals, never floats.
"""

__version__ = "0.1.0"
