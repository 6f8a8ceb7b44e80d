"""High-order discontinuous Galerkin solver for wall distance via a modified eikonal system."""
from .estimator import EikonalDG
from .mesh import CurvedMesh, read_mesh, write_mesh
from .physics import EikonalConfig, Mode
from .solver import InitMode, SolveReport, SolveSettings, Status

__all__ = ["CurvedMesh", "EikonalConfig", "EikonalDG", "InitMode", "Mode", "SolveReport", "SolveSettings",
           "Status", "read_mesh", "write_mesh"]
__version__ = "0.1.0"
