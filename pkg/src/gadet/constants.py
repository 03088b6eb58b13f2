"""Loader for the shipped reference values (orbits, base elements, B0/B1 table)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Union

from .errors import UnsupportedCase
from .rings import AbRingElement, parse_poly, parse_product

Q27_CASES = ("4*1", "4*2", "4*3", "4*4", "4*5", "4*6", "13^2")


@lru_cache(maxsize=None)
def reference() -> dict:
    text = resources.files("gadet").joinpath("data/reference_values.json").read_text()
    return json.loads(text)


def poly_from_entry(entry: Union[str, dict], p: int, k: int) -> AbRingElement:
    """A polynomial stored either as text or as {"w^i": text} slices."""
    if isinstance(entry, str):
        return parse_poly(entry, p, k)
    total = AbRingElement.zero(p, k)
    for power, text in entry.items():
        total = total + parse_poly(power, p, k) * parse_poly(text, p, k)
    return total


def t_from_entry(factors: list[str], p: int, k: int) -> AbRingElement:
    return parse_product(factors, p, k)


def q27_case(case: str) -> dict:
    try:
        return reference()["q27"][case]
    except KeyError:
        raise UnsupportedCase(f"unknown q=27 case {case!r}; expected one of {Q27_CASES}") from None
