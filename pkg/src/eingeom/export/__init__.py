from __future__ import annotations

from eingeom.export.mesh import Mesh, MeshMode, export_mesh

__all__ = ["Mesh", "MeshMode", "export_mesh"]
