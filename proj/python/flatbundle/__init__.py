"""Sampled unitary cocycles over finite simplicial complexes.

Everything lives in the compiled core: complexes, sampled transition
cocycles, flatness and cocycle audits, simplicial transport with certified
defect bounds, trivialization and skeleton extension, almost representation
conversions, and Chern number detection over closed oriented surfaces.
"""

from flatbundle._core import *  # noqa: F401,F403
from flatbundle._core import __doc__  # noqa: F401

__version__ = "0.1.0"
