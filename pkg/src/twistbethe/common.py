"""Shared enumerations for boundary kind and chain-length parity."""

from __future__ import annotations

import enum


class Boundary(enum.Enum):
    ANTIPERIODIC = "antiperiodic"
    PERIODIC = "periodic"

    @classmethod
    def coerce(cls, value) -> "Boundary":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("anti", "antiperiodic", "twisted"):
            return cls.ANTIPERIODIC
        if key in ("per", "periodic"):
            return cls.PERIODIC
        raise ValueError(f"unknown boundary kind: {value!r}")


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def coerce(cls, value) -> "Parity":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("even", "e"):
            return cls.EVEN
        if key in ("odd", "o"):
            return cls.ODD
        raise ValueError(f"unknown parity: {value!r}")

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD
