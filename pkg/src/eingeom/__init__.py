from eingeom._version import __version__
from eingeom.config import Settings
from eingeom.crooked import CrookedPlane, CrookedSurface, closure_strata, disjoint
from eingeom.einstein import ConformalTransform, EinPoint, Photon
from eingeom.forms import EIN_21, Convention, FormSpec
from eingeom.groups import GroupPresentation, SpacelikeCircle, example_group

__all__ = [
    "EIN_21",
    "ConformalTransform",
    "Convention",
    "CrookedPlane",
    "CrookedSurface",
    "EinPoint",
    "FormSpec",
    "GroupPresentation",
    "Photon",
    "Settings",
    "SpacelikeCircle",
    "__version__",
    "closure_strata",
    "disjoint",
    "example_group",
]
