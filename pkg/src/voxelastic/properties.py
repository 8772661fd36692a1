"""Named simulation parameters with defaults, units, and validation.

Three parameters support an ``auto`` value resolved at run time:

* ``mass``: block weight magnitude divided by standard gravity.
* ``dt``: a quarter of the kernel radius over the material wave speed,
  rounded down to one significant digit (explicit stability bound).
* ``eta``: mass / (16 dt), a safe fraction of the explicit viscous
  stability ceiling; larger values destabilize the integrator, much
  smaller ones leave the transient ringing for a long time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .engine import STANDARD_GRAVITY, SimConfig
from .errors import OutOfRange, UnknownProperty
from .kernel import KernelParams
from .mechanics import MaterialParams
from .world import Coord

Number = Union[int, float]


@dataclass(frozen=True)
class PropertySpec:
    name: str
    unit: str
    default: Optional[float]  # None means auto-derived
    lo: float
    hi: float
    lo_open: bool = True
    hi_open: bool = True
    integer: bool = False
    auto: bool = False
    doc: str = ""

    def validate(self, value: Number) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise OutOfRange(f"{self.name}: expected a number, got {value!r}")
        v = float(value)
        if not math.isfinite(v):
            raise OutOfRange(f"{self.name}: value must be finite")
        low_ok = v > self.lo if self.lo_open else v >= self.lo
        high_ok = v < self.hi if self.hi_open else v <= self.hi
        if not (low_ok and high_ok):
            raise OutOfRange(f"{self.name}: {v:g} outside valid range {self.range_text()}")
        if self.integer and v != int(v):
            raise OutOfRange(f"{self.name}: must be an integer, got {v:g}")
        return v

    def range_text(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


INF = math.inf

PROPERTY_SPECS: dict[str, PropertySpec] = {
    spec.name: spec
    for spec in [
        PropertySpec("youngs_modulus", "Pa", 1e9, 0.0, INF, doc="Young's modulus"),
        PropertySpec("poisson", "-", 0.4, -1.0, 0.5, doc="Poisson ratio"),
        PropertySpec("eta", "Pa*s", None, 0.0, INF, lo_open=False, auto=True, doc="viscous damping"),
        PropertySpec("mass", "kg", None, 0.0, INF, auto=True, doc="per-block mass"),
        PropertySpec("h", "m", 2.0, 1.0, INF, doc="kernel support radius"),
        PropertySpec("dt", "s", None, 0.0, INF, auto=True, doc="time step"),
        PropertySpec("num_steps", "steps", 5000.0, 1, INF, lo_open=False, integer=True, doc="steps per run"),
        PropertySpec("ult_stress", "Pa", 15000.0, 0.0, INF, doc="ultimate stress for pass/fail"),
        PropertySpec("block_weight", "N", -900.0, -INF, 0.0, doc="per-block weight (y component)"),
        PropertySpec("gravity_toggle", "0/1", 1.0, 0, 1, lo_open=False, hi_open=False, integer=True,
                     doc="apply self weight"),
    ]
}


def round_down_one_digit(x: float) -> float:
    """Largest single-significant-digit number not exceeding x."""
    if x <= 0:
        raise ValueError("expected a positive value")
    exp = math.floor(math.log10(x))
    mantissa = math.floor(x / 10**exp)
    return mantissa * 10.0**exp


class PropertyRegistry:
    """Mutable bag of named parameters; unknown names and bad values rejected."""

    def __init__(self, overrides: Optional[dict[str, Number]] = None):
        self._values: dict[str, Optional[float]] = {
            name: spec.default for name, spec in PROPERTY_SPECS.items()
        }
        if overrides:
            for name, value in overrides.items():
                self.set(name, value)

    def copy(self) -> "PropertyRegistry":
        clone = PropertyRegistry()
        clone._values = dict(self._values)
        return clone

    def set(self, name: str, value: Union[Number, str, None]) -> float | None:
        spec = self._spec(name)
        if value is None or (isinstance(value, str) and value.lower() == "auto"):
            self._values[name] = None if spec.auto else spec.default
            return self._values[name]
        v = spec.validate(value)
        self._values[name] = v
        return v

    def get(self, name: str) -> Optional[float]:
        """Raw stored value; None while an auto parameter is unresolved."""
        return self._values[self._spec(name).name]

    def resolve(self, name: str) -> float:
        """Effective value with auto parameters derived."""
        raw = self.get(name)
        if raw is not None:
            return raw
        if name == "mass":
            return abs(self.resolve("block_weight")) / STANDARD_GRAVITY
        if name == "dt":
            density = self.resolve("mass")  # unit block volume: kg/m^3
            speed = math.sqrt(self.resolve("youngs_modulus") / density)
            return round_down_one_digit(0.25 * self.resolve("h") / speed)
        if name == "eta":
            return self.resolve("mass") / (16.0 * self.resolve("dt"))
        raise UnknownProperty(f"no rule to derive {name!r}")

    def _spec(self, name: str) -> PropertySpec:
        try:
            return PROPERTY_SPECS[name]
        except KeyError:
            raise UnknownProperty(f"unknown property {name!r}") from None

    # -- derived objects -----------------------------------------------------
    def material(self, viscous_literal_f_inv: bool = False) -> MaterialParams:
        return MaterialParams(
            youngs_modulus=self.resolve("youngs_modulus"),
            poisson_ratio=self.resolve("poisson"),
            eta=self.resolve("eta"),
            viscous_literal_f_inv=viscous_literal_f_inv,
        )

    def kernel(self) -> KernelParams:
        return KernelParams(h=self.resolve("h"))

    def sim_config(
        self,
        record_every: int = 100,
        special_block: Optional[Coord] = None,
        ke_tolerance: Optional[float] = None,
    ) -> SimConfig:
        weight = self.resolve("block_weight")
        num_steps = int(self.resolve("num_steps"))
        return SimConfig(
            dt=self.resolve("dt"),
            num_steps=num_steps,
            gravity_force_per_block=(0.0, weight, 0.0),
            load_force=(0.0, weight, 0.0),
            record_every=min(record_every, num_steps),
            special_block=special_block,
            self_weight_enabled=bool(self.resolve("gravity_toggle")),
            mass=self.resolve("mass"),
            ke_tolerance=ke_tolerance,
        )

    # -- presentation and persistence -----------------------------------------
    def describe(self) -> list[dict]:
        rows = []
        for name, spec in PROPERTY_SPECS.items():
            raw = self._values[name]
            rows.append(
                {
                    "name": name,
                    "value": self.resolve(name),
                    "auto": raw is None,
                    "unit": spec.unit,
                    "range": spec.range_text(),
                    "doc": spec.doc,
                }
            )
        return rows

    def to_dict(self) -> dict[str, Optional[float]]:
        return dict(self._values)

    @classmethod
    def from_dict(cls, values: dict[str, Union[Number, str, None]]) -> "PropertyRegistry":
        reg = cls()
        for name, value in values.items():
            reg.set(name, value)
        return reg
