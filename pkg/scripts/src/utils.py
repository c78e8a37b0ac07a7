import concurrent.futures
import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Sequence

import cloudpickle
import psutil
from multiprocessing.reduction import ForkingPickler
from tqdm import tqdm

# Use cloudpickle so trial functions built from closures can cross process boundaries.
ForkingPickler.dumps = cloudpickle.dumps  # type: ignore[method-assign]


LOGGER_NAME = "msettop"


class MSetError(Exception):
    """Base class for every engine error."""


class SpaceMismatchError(MSetError):
    pass


class NotASubsetError(MSetError):
    pass


class MalformedFamilyError(MSetError):
    pass


class ChainError(MSetError):
    pass


class UnknownClaimError(MSetError):
    pass


class BudgetExceededError(MSetError):
    def __init__(self, what: str, cardinality: int, budget: int) -> None:
        super().__init__(f"{what}: {cardinality} exceeds budget {budget}")
        self.what = what
        self.cardinality = cardinality
        self.budget = budget


class BasisGenerationError(MSetError):
    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class EquivalenceViolationError(MSetError):
    """Two procedures that must agree returned different answers."""

    def __init__(self, message: str, topology: Any = None, candidate: Any = None) -> None:
        super().__init__(message)
        self.topology = topology
        self.candidate = candidate


class ParseError(MSetError):
    """Malformed input; ``line`` and ``column`` are set only for positional errors."""

    def __init__(
        self, message: str, line: int | None = None, column: int | None = None
    ) -> None:
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


def setup_logging(
    run_dir: Path | None = None, level: int = logging.INFO
) -> logging.Logger:
    """Setup logging to the console and, when a run directory is given, a file."""
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    logger.handlers.clear()

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter("%(levelname)s - %(message)s"))
    logger.addHandler(console_handler)

    if run_dir is not None:
        run_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(run_dir / "msettop.log")
        file_handler.setLevel(level)
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
        logger.addHandler(file_handler)

    return logger


def read_file(path: str | Path) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def write_to_file(filename: str | Path, content: str) -> None:
    with open(filename, "w", encoding="utf-8") as file:
        file.write(content)


def dump_json(data: Any) -> str:
    """Stable JSON text: fixed indentation, insertion order kept, trailing newline."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def resolve_workers(workers: int) -> int:
    if workers > 0:
        return workers
    return psutil.cpu_count(logical=False) or os.cpu_count() or 1


class ParallelRun:
    """Map a trial function over indexed items, inline or across processes.

    Results come back in item order whatever the completion order, so the
    aggregate built from them is deterministic.
    """

    def __init__(self, func: Callable[..., Any], *args: Any) -> None:
        self.func = func
        self.args = args

    def __call__(
        self,
        items: Sequence[Any],
        workers: int = 1,
        desc: str = "Running trials",
        quiet: bool = False,
    ) -> list[Any]:
        workers = resolve_workers(workers)
        results: list[Any] = [None] * len(items)
        pbar = tqdm(total=len(items), desc=desc, unit="trial", disable=quiet)

        if workers == 1:
            for idx, item in enumerate(items):
                results[idx] = self.func(idx, item, *self.args)
                pbar.update(1)
            pbar.close()
            return results

        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_idx = {
                executor.submit(self.func, idx, item, *self.args): idx
                for idx, item in enumerate(items)
            }
            for future in concurrent.futures.as_completed(future_to_idx):
                idx = future_to_idx[future]
                results[idx] = future.result()
                pbar.update(1)
        pbar.close()
        return results
