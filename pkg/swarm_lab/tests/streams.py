"""Random streams with scripted draws, for hand-traced optimizer steps."""
from collections import deque

import numpy as np

from swarm_lab.core import RandomStream


class ScriptedStream(RandomStream):
    """
    Replays queued draws in order instead of sampling.

    ``uniforms`` are returned as they are (scalars or vectors); ``normals`` are
    standard normal draws, scaled and shifted by the requested mu and sigma.
    """

    def __init__(self, uniforms=(), normals=()):
        super().__init__(0)
        self.uniforms = deque(uniforms)
        self.normals = deque(normals)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._next(self.uniforms, 'uniform')

    def normal(self, mu=0.0, sigma=1.0, size=None):
        return mu + sigma * self._next(self.normals, 'normal')

    @staticmethod
    def _next(queue, kind):
        if not queue:
            raise AssertionError(f"no scripted {kind} draw left")
        value = queue.popleft()
        return np.array(value, dtype=np.float64) if np.ndim(value) else float(value)

    @property
    def exhausted(self) -> bool:
        return not self.uniforms and not self.normals


class CountingFunction:
    """Wraps a cost function and counts how often it is really called."""

    def __init__(self, function):
        self.function = function
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self.function(x)
