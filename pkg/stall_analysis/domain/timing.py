from dataclasses import dataclass, asdict
from typing import Dict, Any, Tuple


@dataclass(frozen=True)
class EpochTiming:
    """
    One simulated epoch. ``total`` is the exact sum of the five components;
    ``fetch`` and ``prep`` hold only the data-loading time the GPUs waited on.
    """
    total: float
    fetch: float
    prep: float
    compute: float
    comm_interconnect_exposed: float
    comm_network_exposed: float
    iterations: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class TrainingTiming:
    epochs: Tuple[EpochTiming, ...]
    total: float

    @property
    def epoch_count(self) -> int:
        return len(self.epochs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'epochs': [epoch.to_dict() for epoch in self.epochs],
            'total': self.total,
        }
