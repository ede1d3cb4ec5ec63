"""p-adic Hausdorff Operator Lab."""

from . import constants
from . import functions
from . import operators
from . import spaces
from . import verify
from . import weights

__version__ = "0.1.0"

__all__ = [
    'constants',
    'functions',
    'operators',
    'spaces',
    'verify',
    'weights',
]
