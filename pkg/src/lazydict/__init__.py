"""Lazy search trees and the heap machinery behind them."""

from .fibheap import FibHeap, fh_make
from .lst import LazySearchTree, lst_construct
from .order import ComparisonCounter, Entry, compare
from .select import soft_select
from .softheap import SoftHeap, sh_make

__all__ = [
    "ComparisonCounter", "Entry", "FibHeap", "LazySearchTree", "SoftHeap",
    "compare", "fh_make", "lst_construct", "sh_make", "soft_select",
]
