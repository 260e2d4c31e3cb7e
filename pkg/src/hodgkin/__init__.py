"""Exact-arithmetic certification of K-theory rings of compact Lie groups.

The pipeline: ``cartan`` builds root data and Weyl groups, ``laurent``
provides characters and Demazure operators, ``flagk`` realizes the
equivariant K-theory of the flag variety as a certified free module,
``homology`` takes Koszul homology over the integers, ``torring``
assembles the ring structure and certifies it is exterior, and ``cli``
drives everything.  ``oracles`` and ``verify`` hold the independent
cross-checks.
"""

__version__ = "0.1.0"

from . import (cartan, errors, flagk, homology, laurent, linalg, oracles,
               torring, verify)

__all__ = ["cartan", "errors", "flagk", "homology", "laurent", "linalg",
           "oracles", "torring", "verify", "__version__"]
