"""Deterministic, labeled random streams.

Every sampling operation takes a :class:`Seed` rather than a bare integer.
A seed is a 64-bit root plus a tuple of labels (strings or nonnegative
integers) identifying the stream, e.g. ``("power-k", trial, "null-omni", j)``.
Equal (root, labels) pairs produce bit-identical streams on every platform,
independent of scheduling, so parallel trials stay reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_MASK64 = (1 << 64) - 1


def _label_word(label) -> int:
    """Map a stream label to a 64-bit word (strings via a stable hash)."""
    if isinstance(label, (bool,)):
        raise ConfigError(f"seed label must be int or str, got {label!r}")
    if isinstance(label, (int, np.integer)):
        if label < 0:
            raise ConfigError(f"integer seed label must be nonnegative, got {label}")
        return int(label) & _MASK64
    if isinstance(label, str):
        digest = hashlib.blake2s(label.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    raise ConfigError(f"seed label must be int or str, got {type(label).__name__}")


@dataclass(frozen=True)
class Seed:
    """Root entropy plus the label path of a derived stream."""

    root: int
    labels: tuple = ()

    def __post_init__(self):
        if not isinstance(self.root, (int, np.integer)) or isinstance(self.root, bool):
            raise ConfigError(f"seed root must be an integer, got {type(self.root).__name__}")
        if not 0 <= self.root <= _MASK64:
            raise ConfigError(f"seed root must fit in 64 bits, got {self.root}")
        for label in self.labels:
            _label_word(label)

    def derive(self, *labels) -> "Seed":
        """Child seed with ``labels`` appended to this seed's label path."""
        return Seed(self.root, self.labels + tuple(labels))

    def generator(self) -> np.random.Generator:
        """Fresh PCG64 generator keyed by (root, labels)."""
        entropy = [int(self.root)] + [_label_word(label) for label in self.labels]
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
