"""weakhopf: exact verification of weak Hopf algebra structures.

Builds finite-dimensional weak Hopf algebras over exact fields, checks all
of their defining axioms, constructs Jones towers of symmetric Markov
extensions, and derives (and re-verifies identity by identity) the weak
Hopf structure carried by the second centralizer of a depth-2 extension.
"""

from weakhopf._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
