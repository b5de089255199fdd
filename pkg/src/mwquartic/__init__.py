"""Exact tools around the 28 minimal-vector pairs of the dual E7 lattice.

Subpackages cover: the Q^8 model of the lattice and its 56 minimal vectors
(`lattice`), exact linear algebra (`exactmath`), rank-oracle matroids
(`matroid`), the signature census over all subset sizes (`classifier`),
dihedral-cover existence criteria (`dihedral`), and reconstruction of a
smooth plane quartic with its 28 bitangent lines from an Aronhold set
(`bitangents`).  The `mwquartic` CLI exposes all of it.
"""

__version__ = "0.1.0"

from . import bitangents, classifier, colex, dihedral, exactmath, lattice, matroid  # noqa: F401
