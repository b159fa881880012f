"""Line-oriented ``key: value`` reports."""

from __future__ import annotations

from typing import Iterable, Sequence


def format_quad(q: Sequence[int]) -> str:
    a, b, c, d = q
    return f"[{a} {b}; {c} {d}]"


def render(items: Iterable[tuple[str, str]], porcelain: bool = False) -> str:
    sep = "\t" if porcelain else ": "
    return "".join(f"{k}{sep}{v}\n" for k, v in items)


def yes_no(flag) -> str:
    if flag is None:
        return "unknown"
    return "yes" if flag else "no"
