"""Group descriptor mini-grammar, shared by the CLI and script files.

`Z` is a free summand, `Zn` a cyclic summand of order n, `+` joins
summands, and an optional `@{p,q,...}` suffix tags the locality.  The
trivial group prints as `0` (and `Z1` parses to it).

>>> print(format_group(parse_group("Z8+Z2")))
Z8+Z2
>>> print(format_group(parse_group("Z+Z12@{2,3}")))
Z+Z4+Z3@{2,3}
"""

from __future__ import annotations

import re

from .abelian import GLOBAL, CanonicalGroup, Locality
from .errors import DescriptorError

_SUMMAND = re.compile(r"^Z(\d+)?$")


def parse_group(text: str) -> CanonicalGroup:
    s = text.strip().replace(" ", "")
    if not s:
        raise DescriptorError("empty group descriptor")
    locality = GLOBAL
    if "@" in s:
        body, _, tail = s.partition("@")
        m = re.fullmatch(r"\{(\d+(,\d+)*)\}", tail)
        if not m:
            raise DescriptorError(f"bad locality suffix in {text!r}")
        try:
            locality = Locality.at(int(p) for p in m.group(1).split(","))
        except ValueError as exc:
            raise DescriptorError(str(exc)) from None
        s = body
    if s == "0":
        return CanonicalGroup.trivial(locality)
    orders = []
    for part in s.split("+"):
        m = _SUMMAND.match(part)
        if not m:
            raise DescriptorError(f"bad summand {part!r} in {text!r}")
        orders.append(0 if m.group(1) is None else int(m.group(1)))
    try:
        return CanonicalGroup.from_orders(orders, locality)
    except Exception as exc:
        raise DescriptorError(f"{text!r}: {exc}") from None


def format_group(g: CanonicalGroup) -> str:
    tors = sorted(g.torsion, key=lambda pe: (pe[0], -pe[1]))
    parts = ["Z"] * g.free_rank + [f"Z{p ** e}" for p, e in tors]
    body = "+".join(parts) if parts else "0"
    return body + str(g.locality)
