"""Exact spectral theory of the edge Laplacian on finite graphs.

Eigenspaces are computed over the rationals, transforms live on truncated
universal covers, and the operator Hecke algebra acts on regular-tree balls.
"""

from . import errors
from .errors import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from .hecke import *  # noqa: F401,F403
from .linalg import *  # noqa: F401,F403
from .spectral import *  # noqa: F401,F403
from .tree import *  # noqa: F401,F403
from . import graph, hecke, linalg, spectral, tree

__version__ = "0.1.0"
