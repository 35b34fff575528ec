# experiments/scheduler.py
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


def format_instance_count(count: int) -> str:
    """
    Форматирует количество экземпляров с учетом правил русского языка.
    """
    if count % 10 == 1 and count % 100 != 11:
        return f"{count} экземпляр"
    if 2 <= count % 10 <= 4 and not 12 <= count % 100 <= 14:
        return f"{count} экземпляра"
    return f"{count} экземпляров"


class SweepScheduler:
    """
    Запускает независимые экземпляры прогона.

    Каждый экземпляр - отдельная asyncio-задача, тяжёлая работа уходит в
    пул исполнителя. Строки сортируются по instance_id, поэтому порядок
    завершения не влияет на результат.
    """

    def __init__(self, workers: int = 1):
        self.tasks: List[asyncio.Task] = []
        self.workers = workers

    async def _run_instance(self, loop, executor, job: Callable[[], Dict[str, str]]) -> Dict[str, str]:
        row = await loop.run_in_executor(executor, job)
        logger.debug(f"Экземпляр {row.get('instance_id')} обработан")
        return row

    async def run(self, jobs: Sequence[Callable[[], Dict[str, str]]]) -> List[Dict[str, str]]:
        loop = asyncio.get_running_loop()
        executor: Optional[ProcessPoolExecutor] = ProcessPoolExecutor(self.workers) if self.workers > 1 else None
        try:
            self.tasks = [asyncio.create_task(self._run_instance(loop, executor, job)) for job in jobs]
            logger.info(f"Запущено {format_instance_count(len(self.tasks))}")
            rows = await asyncio.gather(*self.tasks)
        finally:
            self.tasks.clear()
            if executor is not None:
                executor.shutdown()
        return sorted(rows, key=lambda row: row["instance_id"])

    def run_sync(self, jobs: Sequence[Callable[[], Dict[str, str]]]) -> List[Dict[str, str]]:
        return asyncio.run(self.run(jobs))
