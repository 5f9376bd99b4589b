from .codec import Decoded, decode, encode
from .core import build_core
from .lpfile import export_lp
from .model import MatrixForm, MipModel
from .proximity import attach_directive, attach_occupancy, build_model

__all__ = [
    "Decoded", "MatrixForm", "MipModel", "attach_directive", "attach_occupancy",
    "build_core", "build_model", "decode", "encode", "export_lp",
]
