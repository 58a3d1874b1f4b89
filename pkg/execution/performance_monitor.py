import numpy as np


class PerformanceMonitor:
    """Wall times per (strategy, N) for `bench`, and the 2N / N ratio."""

    def __init__(self):
        self.samples = {}

    # -------------------------------------------------
    # Record one timed run
    # -------------------------------------------------

    def record_run(self, strategy, N, seconds):

        self.samples.setdefault((strategy, N), []).append(seconds)

    # -------------------------------------------------
    # Statistics
    # -------------------------------------------------

    def stats(self, strategy, N):

        times = np.array(self.samples.get((strategy, N), []))

        if not len(times):
            return {"runs": 0, "median": 0, "mean": 0, "std": 0, "min": 0}

        return {
            "runs": len(times),
            "median": round(float(np.median(times)), 6),
            "mean": round(float(times.mean()), 6),
            "std": round(float(times.std()), 6),
            "min": round(float(times.min()), 6),
        }

    def ratio(self, strategy, small, large):

        base = self.stats(strategy, small)["median"]
        grown = self.stats(strategy, large)["median"]
        return round(grown / base, 3) if base > 0 else float("inf")

    def summary(self):

        strategies = sorted({s for s, _ in self.samples})
        out = {}
        for strategy in strategies:
            sizes = sorted(N for s, N in self.samples if s == strategy)
            out[strategy] = {
                "sizes": {str(N): self.stats(strategy, N) for N in sizes},
                "ratio": self.ratio(strategy, sizes[0], sizes[-1]) if len(sizes) > 1 else None,
            }
        return out
