from .toolkit import Toolkit

__all__ = ["Toolkit"]

__version__ = "0.1.0"
