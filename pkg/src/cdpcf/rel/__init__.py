"""Relational semantics: web points and intersection-typing search."""

from .points import APoint, GPoint, Point, parse_point, point_act, point_decompose, point_str, sdiff_expand, sdiff_split
from .search import PROVED, UNKNOWN, Verdict, icheck, icheck_stack, icheck_state, interp_ground

__all__ = [
    "APoint",
    "GPoint",
    "PROVED",
    "Point",
    "UNKNOWN",
    "Verdict",
    "icheck",
    "icheck_stack",
    "icheck_state",
    "interp_ground",
    "parse_point",
    "point_act",
    "point_decompose",
    "point_str",
    "sdiff_expand",
    "sdiff_split",
]
