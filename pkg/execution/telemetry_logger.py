# 2026-10-19 | v0.3.0 | Run telemetry logger
import csv
import os
from datetime import datetime, timezone

from config import LOG_DIR


class TelemetryLogger:

    RUN_HEADERS = ["timestamp", "query", "strategy", "requested", "switched", "seed",
                   "fhtw_F", "B", "cost", "answers", "pruned", "total_ms"]
    DISJUNCT_HEADERS = ["timestamp", "query", "strategy", "disjunct", "U", "N", "c",
                        "theta", "family_size", "r", "certification", "answers", "ms"]

    def __init__(self, log_dir=LOG_DIR):

        self.runs_path = os.path.join(log_dir, "runs.csv")
        self.disjuncts_path = os.path.join(log_dir, "disjuncts.csv")

        os.makedirs(log_dir, exist_ok=True)

        self._init_file(self.runs_path, self.RUN_HEADERS)
        self._init_file(self.disjuncts_path, self.DISJUNCT_HEADERS)

    def _init_file(self, path, headers):
        if not os.path.exists(path):
            with open(path, "w", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(headers)

    def _append(self, path, row):
        with open(path, "a", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(row)

    # -------------------------------------------------
    # One row per run, one per evaluated disjunct
    # -------------------------------------------------

    def log_run(self, result, seed):

        plan = result.plan
        now = datetime.now(timezone.utc).isoformat()
        name = plan.query.ir.name

        self._append(self.runs_path, [
            now,
            name,
            plan.strategy,
            plan.requested,
            plan.switched,
            seed,
            str(plan.width.value),
            plan.B,
            plan.cost,
            len(result.answers),
            result.pruned,
            round(sum(result.timings.values()), 3),
        ])

        for d in plan.disjuncts:
            structure, family = d.structure, d.family
            self._append(self.disjuncts_path, [
                now,
                name,
                d.strategy,
                d.index,
                len(structure.U) if structure else 0,
                structure.N if structure else "",
                structure.c if structure else "",
                str(family.theta) if family and family.theta is not None else "",
                family.size if family else "",
                d.r,
                family.certification if family else "",
                result.counts.get(d.index, 0),
                round(result.timings.get(d.index, 0.0), 3),
            ])
