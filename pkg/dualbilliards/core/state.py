import threading
from dataclasses import dataclass
from typing import Dict, List, Optional


@dataclass
class CaseFailure:
    """A case whose identity did not hold, or whose check raised."""

    case: str
    reason: str


class BatchState:
    """Progress of one `verify` batch, shared by the worker threads."""

    def __init__(self):
        self.lock = threading.Lock()
        self._selector: Optional[str] = None  # None while idle
        self._seed: Optional[int] = None
        self._total = 0
        self._passed = 0
        self._failures: List[CaseFailure] = []
        self._last_case = ""

    def start_batch(self, selector, seed):
        with self.lock:
            self._selector = selector
            self._seed = seed
            self._total = 0
            self._passed = 0
            self._failures.clear()
            self._last_case = ""

    def finish_batch(self):
        """Back to idle; the counters of the finished batch stay readable."""
        with self.lock:
            self._selector = None

    def set_total(self, total: int):
        with self.lock:
            self._total = total

    def record_pass(self, case: str):
        with self.lock:
            self._passed += 1
            self._last_case = case

    def record_failure(self, case: str, reason: str):
        with self.lock:
            self._failures.append(CaseFailure(case, reason))
            self._last_case = case

    def get_snapshot(self) -> Dict:
        with self.lock:
            done = self._passed + len(self._failures)
            return {
                "running": self._selector is not None,
                "selector": self._selector,
                "seed": self._seed,
                "success": not self._failures,
                "progress": {
                    "done": done,
                    "total": self._total,
                    "percent": int(done / self._total * 100) if self._total else 0,
                },
                "passed": self._passed,
                "last_case": self._last_case,
                # workers finish out of order
                "failures": [
                    {"case": f.case, "reason": f.reason}
                    for f in sorted(self._failures, key=lambda f: f.case)
                ],
            }
