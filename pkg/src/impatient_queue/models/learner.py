"""
Imperfect-QSI observation log.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, model_validator


class ObservationLog(BaseModel):
    """
    Timestamped queue-position observations of one waiting task.

    Entries are (position, time) pairs with strictly increasing times and
    non-increasing positions.
    """

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[int, float], ...] = ()

    @model_validator(mode="after")
    def check_order(self) -> "ObservationLog":
        for (k_prev, t_prev), (k, t) in zip(self.entries, self.entries[1:]):
            if t <= t_prev:
                raise ValueError(f"observation times must increase: {t} after {t_prev}")
            if k > k_prev:
                raise ValueError(f"positions must not increase: {k} after {k_prev}")
        if any(k < 1 for k, _ in self.entries):
            raise ValueError("positions must be at least 1")
        return self

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def last_position(self) -> int:
        return self.entries[-1][0]

    @property
    def span(self) -> float:
        """Time between the first and the last observation."""
        return self.entries[-1][1] - self.entries[0][1]

    def without_last(self) -> "ObservationLog":
        return ObservationLog.model_construct(entries=self.entries[:-1])
