"""Construction, exact verification and bound evaluation for w-frameproof codes."""

__version__ = "0.1.0"

from .code import Code, CodeError, CodeFormatError, PositionSymbol, corresponding_set, load_code, save_code
from .verifier import FrameproofReport, descendant_count, descendant_symbols, distance, is_frameproof

__all__ = [
    "Code",
    "CodeError",
    "CodeFormatError",
    "PositionSymbol",
    "corresponding_set",
    "load_code",
    "save_code",
    "FrameproofReport",
    "descendant_count",
    "descendant_symbols",
    "distance",
    "is_frameproof",
]
