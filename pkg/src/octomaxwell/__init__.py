"""Octonion algebra, its 4x4 matrix representation and the octonionic form of Maxwell's equations.

Submodules:

* :mod:`octomaxwell.octonion` - algebra, structure constants, complex-pair forms
* :mod:`octomaxwell.representation` - the 4x4 complex map and real/2x2 images
* :mod:`octomaxwell.calculus` - 4D lattices, finite differences, the derivative operator
* :mod:`octomaxwell.maxwell` - the field dictionary, residuals, duality rotation
* :mod:`octomaxwell.scenarios` - named sampled fields for residual studies
* :mod:`octomaxwell.fdtd` - leapfrog solver for the symmetric curl equations
* :mod:`octomaxwell.cli` - the ``octomaxwell`` command
"""

__version__ = "0.1.0"

from .octonion import (  # noqa: E402
    ComplexScalar,
    Octonion,
    associator,
    basis,
    conjugate,
    mul,
    norm,
)

__all__ = ["__version__", "Octonion", "ComplexScalar", "basis", "mul", "conjugate", "norm", "associator"]
