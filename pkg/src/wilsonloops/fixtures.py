"""Shipped lattice loops with declared expectations.

Each JSON file under ``fixtures/`` is also a valid loop file (it carries
``origin`` and ``moves``) plus metadata:

``kind = "table1"``
    ``row``, ``areas`` (name -> area) and ``labels`` (name -> a plaquette
    base inside that region).  Expected polynomial and ``#K`` come from the
    catalogue in :mod:`wilsonloops.closedform`.
``kind = "winding"``
    a simple base loop of area ``winding.area``, wound ``n = 1..n_max``
    times; the expected coefficient is ``c_n(area)``.
``kind = "explicit"``
    a stored ``expected`` polynomial, ``k_count`` and ``regions`` count.

Validation checks the declared geometry against :func:`regions` before any
engine run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .canonical import collection_size
from .closedform import c_n, table1_entry
from .geometry import regions
from .lattice import Loop, parse_loop, remove_backtracks, wind
from .polynomial import BetaPolynomial


class FixtureError(ValueError):
    pass


@dataclass
class Fixture:
    name: str
    loop: Loop
    kind: str
    data: dict = field(repr=False)
    path: str | None = None

    @property
    def description(self) -> str:
        return self.data.get("description", "")

    @property
    def row(self) -> int | None:
        return self.data.get("row")

    @property
    def areas(self) -> dict:
        return dict(self.data.get("areas", {}))

    def expected_k_count(self) -> int:
        if self.kind == "table1":
            return table1_entry(self.row).k_count
        if self.kind == "winding":
            return 1
        return int(self.data["k_count"])

    def expected_polynomial(self) -> BetaPolynomial:
        if self.kind == "table1":
            return table1_entry(self.row).polynomial(**self.areas)
        if self.kind == "explicit":
            return BetaPolynomial.from_json(self.data["expected"])
        raise FixtureError("winding fixtures describe a family; use winding_instances()")

    def winding_instances(self):
        """``(n, wound loop, expected polynomial)`` for ``n = 1..n_max``."""
        if self.kind != "winding":
            raise FixtureError(f"{self.name} is not a winding family")
        a = int(self.data["winding"]["area"])
        for n in range(1, int(self.data["winding"]["n_max"]) + 1):
            yield n, wind(self.loop, n), BetaPolynomial({n * a: c_n(n, a)})


def _from_dict(d: dict, path=None) -> Fixture:
    try:
        name = d["name"]
        kind = d["kind"]
    except KeyError as exc:
        raise FixtureError(f"fixture {path}: missing field {exc}") from None
    if kind not in ("table1", "winding", "explicit"):
        raise FixtureError(f"fixture {name}: unknown kind {kind!r}")
    return Fixture(name, parse_loop(d), kind, d, str(path) if path else None)


def load_fixture(path) -> Fixture:
    path = Path(path)
    with open(path) as fh:
        return _from_dict(json.load(fh), path)


def fixture_dir():
    return resources.files("wilsonloops") / "fixtures"


def all_fixtures() -> list[Fixture]:
    out = []
    for entry in sorted(fixture_dir().iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            with entry.open() as fh:
                out.append(_from_dict(json.load(fh), entry.name))
    return out


def get_fixture(name: str) -> Fixture:
    for f in all_fixtures():
        if f.name == name:
            return f
    raise KeyError(name)


def validate(fx: Fixture) -> None:
    """Check declared areas, region count and ``#K`` against the geometry."""
    loop = remove_backtracks(fx.loop)
    if loop != fx.loop:
        raise FixtureError(f"{fx.name}: fixture loops must be stored without backtracks")
    dec = regions(loop)
    interior = dec.interior
    if fx.kind == "winding":
        if not loop.is_simple():
            raise FixtureError(f"{fx.name}: winding base loop must be simple")
        area = int(fx.data["winding"]["area"])
        if len(interior) != 1 or interior[0].area != area:
            raise FixtureError(f"{fx.name}: base loop area is not {area}")
        return
    if fx.kind == "table1":
        entry = table1_entry(fx.row)
        labels = fx.data.get("labels", {})
        if set(labels) != set(entry.params) or set(fx.areas) != set(entry.params):
            raise FixtureError(f"{fx.name}: labels/areas must name exactly {entry.params}")
        seen = set()
        for name, base in labels.items():
            base = tuple(base)
            hit = [r for r in interior if base in r.plaquettes]
            if not hit:
                raise FixtureError(f"{fx.name}: label {name} at {base} is not inside the loop")
            r = hit[0]
            if r.area != fx.areas[name]:
                raise FixtureError(f"{fx.name}: region {name} has area {r.area}, declared {fx.areas[name]}")
            if r.key() in seen:
                raise FixtureError(f"{fx.name}: two labels point at the same region")
            seen.add(r.key())
        if len(seen) != len(interior):
            raise FixtureError(f"{fx.name}: {len(interior)} regions but {len(seen)} labels")
    else:
        if "regions" in fx.data and len(interior) != int(fx.data["regions"]):
            raise FixtureError(f"{fx.name}: {len(interior)} regions, declared {fx.data['regions']}")
    got = collection_size(loop)
    if got != fx.expected_k_count():
        raise FixtureError(f"{fx.name}: canonical collection has {got} members, declared {fx.expected_k_count()}")
