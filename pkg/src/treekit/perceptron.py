"""Sparse weight table with lazy perceptron averaging.

Weights are keyed by (feature text, class index). The averaged view is the
mean of the weight vector taken after every training step (one step per
sentence visit), computed lazily: each cell remembers the step at which it
last changed and accumulates weight * elapsed-steps on the next change.
"""


class AveragedTable:
    def __init__(self, width: int, record_updates: bool = False):
        if width < 1:
            raise ValueError("width must be >= 1")
        self.width = width
        self.raw: dict[str, list[float]] = {}
        self._accum: dict[str, list[float]] = {}
        self._stamp: dict[str, list[int]] = {}
        self._steps = 0
        self.update_log: list[tuple[int, str, int, float]] | None = (
            [] if record_updates else None)

    @property
    def steps(self) -> int:
        return self._steps

    def grow(self, width: int) -> None:
        """Widen every vector with zero cells (used when a warm-started model
        meets previously unseen classes)."""
        if width < self.width:
            raise ValueError("cannot shrink the table")
        pad = width - self.width
        if pad == 0:
            return
        for table in (self.raw, self._accum):
            for vector in table.values():
                vector.extend([0.0] * pad)
        for vector in self._stamp.values():
            vector.extend([0] * pad)
        self.width = width

    def set_initial(self, weights: dict[str, tuple[float, ...]]) -> None:
        """Seed the raw table before any step has been taken (warm start)."""
        if self._steps:
            raise ValueError("initial weights must be set before training")
        for feature, vector in weights.items():
            row = [0.0] * self.width
            row[:len(vector)] = [float(v) for v in vector]
            self.raw[feature] = row
            self._accum[feature] = [0.0] * self.width
            self._stamp[feature] = [0] * self.width

    def update(self, feature: str, index: int, delta: float) -> None:
        if feature not in self.raw:
            self.raw[feature] = [0.0] * self.width
            self._accum[feature] = [0.0] * self.width
            self._stamp[feature] = [0] * self.width
        accum = self._accum[feature]
        stamp = self._stamp[feature]
        accum[index] += self.raw[feature][index] * (self._steps - stamp[index])
        stamp[index] = self._steps
        self.raw[feature][index] += delta
        if self.update_log is not None:
            self.update_log.append((self._steps, feature, index, delta))

    def tick(self) -> None:
        """Close one training step (one sentence visit)."""
        self._steps += 1

    def score(self, features) -> list[float]:
        """Sum of raw weight vectors over a feature list (training-time
        scoring). Repeated features count once per occurrence."""
        total = [0.0] * self.width
        raw = self.raw
        for feature in features:
            vector = raw.get(feature)
            if vector is not None:
                for i, value in enumerate(vector):
                    total[i] += value
        return total

    def averaged(self) -> dict[str, tuple[float, ...]]:
        """Mean weight vector over all completed steps; with zero steps this
        is a copy of the raw table. Zero rows are dropped."""
        result = {}
        if self._steps == 0:
            for feature, vector in self.raw.items():
                if any(vector):
                    result[feature] = tuple(vector)
            return result
        for feature, vector in self.raw.items():
            accum = self._accum[feature]
            stamp = self._stamp[feature]
            averaged = tuple(
                (accum[i] + vector[i] * (self._steps - stamp[i])) / self._steps
                for i in range(self.width))
            if any(averaged):
                result[feature] = averaged
        return result


def score_features(weights: dict[str, tuple[float, ...]], features,
                   width: int) -> list[float]:
    """Sum averaged weight vectors over a feature list."""
    total = [0.0] * width
    for feature in features:
        vector = weights.get(feature)
        if vector is not None:
            for i, value in enumerate(vector):
                total[i] += value
    return total
