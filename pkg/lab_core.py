# lab_core.py
import logging
from dataclasses import dataclass, replace
from typing import Optional

from bounds.logbound import set_precision
from config import Config
from engine.parallel import resolve_workers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabContext:
    """Параметры запуска, собранные из конфигурации и флагов командной строки"""
    enumeration_cap: int
    general_cap: int
    workers: int
    partition_bits: int
    exact_search_budget: int
    m_search_budget: int
    fixing_cap: int
    box_cap: int
    cover_cap: int
    edgestats_cap: int
    decoupling_cap: int
    seed: int
    precision_bits: int

    def with_overrides(self, seed: Optional[int] = None, cap: Optional[int] = None) -> "LabContext":
        """
        Флаги --seed и --cap командной строки.

        :param cap: заменяет лимит перебора знаков
        """
        context = self
        if seed is not None:
            context = replace(context, seed=seed)
        if cap is not None:
            context = replace(context, enumeration_cap=cap)
        return context


def initialize_lab(config: Config) -> LabContext:
    """
    Создаёт контекст лаборатории и настраивает точность вычислений.

    :param config: Конфигурация, загруженная из config.yaml.
    :return: Экземпляр LabContext.
    """
    set_precision(config.bounds.precision_bits)
    workers = resolve_workers(config.engine.workers)

    context = LabContext(
        enumeration_cap=config.engine.enumeration_cap,
        general_cap=config.engine.general_cap,
        workers=workers,
        partition_bits=config.engine.partition_bits,
        exact_search_budget=config.rank.exact_search_budget,
        m_search_budget=config.rank.m_search_budget,
        fixing_cap=config.structure.fixing_cap,
        box_cap=config.structure.box_cap,
        cover_cap=config.structure.cover_cap,
        edgestats_cap=config.experiments.edgestats_cap,
        decoupling_cap=config.experiments.decoupling_cap,
        seed=config.experiments.seed,
        precision_bits=config.bounds.precision_bits,
    )

    logger.debug(
        f"Инициализация завершена: "
        f"лимит перебора 2^{context.enumeration_cap}, "
        f"процессов {context.workers}, "
        f"точность {context.precision_bits} бит"
    )
    return context
