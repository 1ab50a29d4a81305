from .tree import (
    Gap,
    Handle,
    HandleError,
    KeyQuery,
    LazySearchTree,
    LSTError,
    OutOfGapError,
    RankError,
    ShapeError,
    lst_construct,
)

__all__ = [
    "Gap", "Handle", "HandleError", "KeyQuery", "LazySearchTree", "LSTError",
    "OutOfGapError", "RankError", "ShapeError", "lst_construct",
]
