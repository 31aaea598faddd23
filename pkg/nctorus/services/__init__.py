from .circle import CircleService
from .coverings import CoveringService
from .dixmier import DixmierService
from .spectral import SpectralService

__all__ = [
    "CircleService",
    "CoveringService",
    "DixmierService",
    "SpectralService",
]
