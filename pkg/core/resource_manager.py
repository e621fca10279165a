"""
Worker and batch sizing for protocol simulations.

Protocol rounds are CPU bound and tiny (a 6-qubit state is 64 complex
amplitudes), so the worker count follows the physical cores and the batch
size mostly bounds how long one worker runs between results.
"""
import logging
import os
import platform
from typing import Any, Dict, Optional

import psutil

logger = logging.getLogger(__name__)

STRATEGIES = ("balanced", "performance", "memory")

FALLBACK_LOGICAL_CPUS = 4
FALLBACK_MEMORY_BYTES = 4 << 30
GIB = float(1 << 30)

# (upper memory bound in GiB, rounds per batch)
BATCH_TIERS = ((2, 250), (8, 500), (32, 1000))
LARGEST_BATCH = 2000
SMALLEST_BATCH = 50


def _probe(what: str, fallback, query):
    try:
        value = query()
    except Exception as e:
        logger.warning("Could not read %s, assuming %s: %s", what, fallback, e)
        return fallback
    return value or fallback


class ResourceManager:
    """Host capabilities plus per-strategy worker and batch recommendations."""

    def __init__(self, strategy: str = "balanced"):
        self.cpu_count = _probe("logical CPU count", os.cpu_count() or FALLBACK_LOGICAL_CPUS,
                                lambda: psutil.cpu_count(logical=True))
        self.physical_cores = _probe("physical core count", max(1, self.cpu_count // 2),
                                     lambda: psutil.cpu_count(logical=False))
        self.total_memory = _probe("system memory", FALLBACK_MEMORY_BYTES,
                                   lambda: psutil.virtual_memory().total)
        self.platform_name = platform.system().lower() or "unknown"

        # Leave roughly a third of the cores to the rest of the machine
        self.recommended_process_count = max(1, int(self.physical_cores * 0.7))
        memory_gib = self.total_memory / GIB
        self.recommended_batch_size = next(
            (rounds for bound, rounds in BATCH_TIERS if memory_gib < bound), LARGEST_BATCH)

        self.strategy = "balanced"
        self.set_strategy(strategy)
        logger.debug("Resources: %d logical / %d physical CPUs, %.1f GiB, strategy %s",
                     self.cpu_count, self.physical_cores, memory_gib, self.strategy)

    def get_optimal_resources(self) -> Dict[str, int]:
        """Worker processes and rounds per batch for a protocol session."""
        processes = self.recommended_process_count
        batch = self.recommended_batch_size

        if self.strategy == "performance":
            ceiling = max(1, int(self.cpu_count * 0.8))
            processes = min(processes + 2, ceiling)
            batch = batch * 6 // 5
        elif self.strategy == "memory":
            processes = max(1, processes // 2)
            batch = max(SMALLEST_BATCH, batch // 2)

        return {"process_count": processes, "batch_size": batch}

    def set_strategy(self, strategy: str):
        """Switch to one of STRATEGIES; anything else falls back to balanced."""
        if strategy not in STRATEGIES:
            logger.warning("Unknown strategy %r, using 'balanced'", strategy)
            strategy = "balanced"
        self.strategy = strategy

    def get_system_info(self) -> Dict[str, Any]:
        """Host summary shown by --show-resources."""
        info = dict(
            platform=self.platform_name,
            cpu_count=self.cpu_count,
            physical_cores=self.physical_cores,
            total_memory_gb=round(self.total_memory / GIB, 2),
            recommended_process_count=self.recommended_process_count,
            recommended_batch_size=self.recommended_batch_size,
            current_strategy=self.strategy,
        )
        freq = _probe("CPU frequency", None, psutil.cpu_freq)
        if freq:
            info["frequency_mhz"] = round(freq.current)
        return info


_shared: Optional[ResourceManager] = None


def get_resource_manager(strategy: Optional[str] = None) -> ResourceManager:
    """Process-wide ResourceManager; a given strategy is applied to it."""
    global _shared
    if _shared is None:
        _shared = ResourceManager()
    if strategy is not None and strategy != _shared.strategy:
        _shared.set_strategy(strategy)
    return _shared
