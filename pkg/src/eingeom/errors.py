from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    import numpy as np


class GeometryError(ValueError):
    """A geometric invariant of the input failed."""


class DimensionError(GeometryError):
    pass


class DegenerateError(GeometryError):
    pass


class NotNullError(GeometryError):
    pass


class NotInGroupError(GeometryError):
    pass


class NotInvolutionError(GeometryError):
    pass


class IdealPointError(GeometryError):
    """The point lies on the ideal lightcone of the Minkowski patch."""

    def __init__(self, stratum: str, message: str | None = None) -> None:
        self.stratum = stratum
        super().__init__(message or f"point lies on the ideal lightcone ({stratum})")


class PoleError(GeometryError):
    pass


class WallError(GeometryError):
    pass


class NoEscapeError(GeometryError):
    pass


class NonConvergentError(GeometryError):
    pass


class DistortionClassError(GeometryError):
    pass


class PatchError(GeometryError):
    pass


class FactorizationError(GeometryError):
    pass


class NotUltraparallelError(GeometryError):
    pass


class NotSurfaceError(GeometryError):
    pass


class WallsIntersectError(GeometryError):
    def __init__(self, pair: tuple[int, int], witness: np.ndarray) -> None:
        self.pair = pair
        self.witness = witness
        coords = ", ".join(f"{c:.6g}" for c in witness)
        super().__init__(f"walls {pair[0]} and {pair[1]} intersect at ({coords})")


class SceneError(GeometryError):
    def __init__(
        self,
        message: str,
        object_id: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        self.object_id = object_id
        self.line = line
        self.column = column
        where = []
        if object_id is not None:
            where.append(f"object {object_id!r}")
        if line is not None:
            where.append(f"line {line}, column {column}")
        prefix = f"{'; '.join(where)}: " if where else ""
        super().__init__(prefix + message)
