"""Text scorer interface for the pluggable content scorers."""

from __future__ import annotations

from abc import ABC, abstractmethod


class TextScorer(ABC):
    """A pure function of text producing a fixed number of outputs.

    Probability-type outputs must lie in [0, 1]. `labels` names the outputs
    in order; categorical scorers return a single integer code.
    """

    name: str = "scorer"
    labels: tuple[str, ...] = ()

    @property
    def outputs(self) -> int:
        return len(self.labels)

    @abstractmethod
    def score(self, text: str) -> tuple[float, ...]:
        raise NotImplementedError

    def __call__(self, text: str) -> tuple[float, ...]:
        values = self.score(text)
        if len(values) != self.outputs:
            raise ValueError(
                f"scorer {self.name!r} returned {len(values)} values, expected {self.outputs}"
            )
        return values
