"""Linear constraint systems over population variables."""

from enum import StrEnum
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Row = tuple[int, ...]


class Movement(StrEnum):
    UP = "up"
    DOWN = "down"
    FLAT = "flat"


class LinearSystem(BaseModel):
    """
    Strict inequalities ``A x > 0``, equations ``B x = b`` and a target row ``c``.

    Every coefficient is in {-1, 0, +1} and every row has ``columns`` entries.
    """

    columns: int = Field(..., ge=0)
    A: tuple[Row, ...] = ()
    B: tuple[Row, ...] = ()
    b: tuple[int, ...] = ()
    c: Row = ()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="before")
    @classmethod
    def _default_target(cls, data: object) -> object:
        if isinstance(data, dict) and not data.get("c") and "columns" in data:
            data = {**data, "c": (0,) * int(data["columns"])}
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> "LinearSystem":
        for name, rows in (("A", self.A), ("B", self.B), ("c", (self.c,))):
            for index, row in enumerate(rows):
                if len(row) != self.columns:
                    raise ValueError(f"{name} row {index} has {len(row)} entries, expected {self.columns}")
                if any(value not in (-1, 0, 1) for value in row):
                    raise ValueError(f"{name} row {index} has a coefficient outside {{-1, 0, +1}}")
        if len(self.b) != len(self.B):
            raise ValueError(f"b has {len(self.b)} entries for {len(self.B)} equation rows")
        return self

    @property
    def row_count(self) -> int:
        return len(self.A) + len(self.B)

    def a_matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=np.int64).reshape(len(self.A), self.columns)

    def b_matrix(self) -> np.ndarray:
        return np.array(self.B, dtype=np.int64).reshape(len(self.B), self.columns)

    def b_vector(self) -> np.ndarray:
        return np.array(self.b, dtype=np.int64)

    def c_vector(self) -> np.ndarray:
        return np.array(self.c, dtype=np.int64)

    def is_satisfied_by(self, x: tuple[int, ...] | list[int]) -> bool:
        for row in self.A:
            if sum(a * v for a, v in zip(row, x, strict=True)) <= 0:
                return False
        for row, rhs in zip(self.B, self.b, strict=True):
            if sum(a * v for a, v in zip(row, x, strict=True)) != rhs:
                return False
        return True


class RowTag(BaseModel):
    """Where a constraint row came from: its day, the observed movement and its matrix slot."""

    day: int
    movement: Movement
    matrix: Literal["A", "B"]
    row: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)


class DayProvenance(BaseModel):
    """One tag per post-initial day, in day order."""

    rows: tuple[RowTag, ...] = ()

    model_config = ConfigDict(frozen=True)

    @property
    def beta(self) -> int:
        return len(self.rows)

    def tag_for_day(self, day: int) -> RowTag:
        for tag in self.rows:
            if tag.day == day:
                return tag
        raise KeyError(f"no constraint row for day {day}")

    def day_of(self, matrix: Literal["A", "B"], row: int) -> int:
        for tag in self.rows:
            if tag.matrix == matrix and tag.row == row:
                return tag.day
        raise KeyError(f"no day for {matrix} row {row}")


class SolutionTally(BaseModel):
    """0-1 solutions of a system, split by the sign of the target row's value."""

    total: int = Field(0, ge=0)
    up: int = Field(0, ge=0)
    down: int = Field(0, ge=0)
    flat: int = Field(0, ge=0)

    model_config = ConfigDict(frozen=True)
