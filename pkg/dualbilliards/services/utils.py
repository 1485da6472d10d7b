import logging
import sys
from concurrent.futures import ThreadPoolExecutor


class Colors:
    """ANSI color codes for terminal UI."""

    CYAN = "\033[96m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    RED = "\033[91m"
    ENDC = "\033[0m"

    @staticmethod
    def paint(text, color, stream=None):
        """Wraps text in a color only when the stream is a terminal."""
        stream = stream or sys.stdout
        if hasattr(stream, "isatty") and stream.isatty():
            return f"{color}{text}{Colors.ENDC}"
        return text


def setup_logging(level="INFO"):
    """Configures logging system."""
    logging.basicConfig(
        format="%(asctime)s - %(levelname)s - %(message)s",
        level=getattr(logging, str(level).upper(), logging.INFO),
        stream=sys.stderr,
    )

    # Route numpy warnings through logging, minus the overflow chatter of long hyperbolic scans
    logging.captureWarnings(True)

    class MessageFilter(logging.Filter):
        def filter(self, record):
            msg = record.getMessage()
            if "overflow encountered in cosh" in msg or "overflow encountered in sinh" in msg:
                return False
            return True

    logging.getLogger("py.warnings").addFilter(MessageFilter())


def run_parallel_cases(cases, process_func, batch_state, label, jobs=1):
    """
    Generic runner for independent identity cases.

    process_func(case) returns a result dict with a boolean "passed" or raises.
    Results come back in input order whatever the number of workers.
    """
    results = [None] * len(cases)

    def worker(indexed):
        index, case = indexed
        name = f"{label}#{index}"
        try:
            result = process_func(case)
            results[index] = result
            if result.get("passed"):
                batch_state.record_pass(name)
            else:
                batch_state.record_failure(name, "identity does not hold")
        except Exception as e:
            results[index] = {"passed": False, "error": str(e)}
            batch_state.record_failure(name, str(e))
            logging.error(f"Failed on {name}: {e}")

    if not cases:
        logging.warning(f"No cases generated for {label}.")
        return results

    total = len(cases)
    workers = max(1, min(jobs, total))
    batch_state.set_total(total)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        list(executor.map(worker, enumerate(cases)))

    passed = sum(1 for r in results if r.get("passed"))
    logging.info(f"Finished {label} verification: {passed}/{total} passed")
    return results
