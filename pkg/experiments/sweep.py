# experiments/sweep.py
"""
Прогон семейства многочленов: точная точечная вероятность против
структурных метрик и оценок.

Столбцы оценок, чьи условия не выполнены (s < 4 для итоговой оценки,
s < 1 для формы 1/√s, m_fixing не найдено или 0 для формы 1/√m), помечаются n/a.
"""
import csv
import io
import logging
import math
from functools import partial
from typing import Dict, List, Literal, Optional

from mpmath import mp
from pydantic import BaseModel, Field, model_validator

from bounds.formulas import erdos_lo
from bounds.recursion import main_bound
from core.errors import CapExceededError, ParameterError
from core.formats import parse_quad, read_json
from core.types import QuadPoly
from engine.exact import DEFAULT_ENUMERATION_CAP, histogram
from experiments.families import FAMILIES, generate
from experiments.scheduler import SweepScheduler
from structure.fixing import DEFAULT_FIXING_CAP, min_fixing_number
from structure.robustness import DEFAULT_COVER_CAP, matching_lower_bound, offdiag_robustness

logger = logging.getLogger(__name__)

SWEEP_SCHEMA = "# qlo-sweep v1"
NOT_APPLICABLE = "n/a"
COLUMNS = [
    "instance_id", "family", "n",
    "sup_value", "sup_prob", "sup_prob_float", "zero_prob",
    "m_fixing", "offdiag_s", "matching_l",
    "erdos_lo_ref", "main_bound_log2", "main_bound_clamped",
    "offdiag_shape", "ratio_offdiag", "fixing_shape",
]


class ExperimentSpec(BaseModel):
    """Полностью определяет прогон при заданном seed"""
    kind: Literal["sweep", "decoupling", "edgestats", "certify", "split", "bound", "prob"] = "sweep"
    family: Optional[str] = None
    input: Optional[str] = None
    sizes: List[int] = Field(default_factory=lambda: list(range(2, 13)))
    replicates: int = Field(default=1, ge=1)
    seed: int = 0
    output: Optional[str] = None
    enumeration_cap: int = Field(default=DEFAULT_ENUMERATION_CAP, ge=0)
    fixing_cap: int = Field(default=DEFAULT_FIXING_CAP, ge=0)
    cover_cap: int = Field(default=DEFAULT_COVER_CAP, ge=0)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def check_source(self):
        if self.kind == "sweep":
            if (self.family is None) == (self.input is None):
                raise ValueError("Для прогона нужен ровно один источник: family или input")
            if self.family is not None and self.family not in FAMILIES:
                raise ValueError(f"Неизвестное семейство {self.family!r}")
        return self


def _fmt_float(value: float) -> str:
    return f"{value:.12g}"


def evaluate_instance(instance_id: str, family: str, q: QuadPoly, enumeration_cap: int,
                      fixing_cap: int, cover_cap: int) -> Dict[str, str]:
    """Одна строка таблицы; все значения - строки"""
    row = {column: NOT_APPLICABLE for column in COLUMNS}
    row.update(instance_id=instance_id, family=family, n=str(q.n))

    sup_prob = None
    try:
        law = histogram(q, cap=enumeration_cap)
        z, prob = law.sup()
        sup_prob = prob.value
        row.update(sup_value=str(z), sup_prob=str(sup_prob), sup_prob_float=_fmt_float(float(prob)),
                   zero_prob=str(law.point_prob(0).value))
    except CapExceededError as e:
        logger.warning(f"{instance_id}: точный перебор пропущен ({e})")

    fixing = min_fixing_number(q, cap=fixing_cap)
    if fixing.m is not None:
        row["m_fixing"] = str(fixing.m)
        if fixing.m > 0:
            row["fixing_shape"] = _fmt_float(1 / math.sqrt(fixing.m))

    try:
        s = offdiag_robustness(q.A, cap=cover_cap)
        row["offdiag_s"] = str(s)
    except CapExceededError as e:
        logger.warning(f"{instance_id}: вершинное покрытие пропущено ({e})")
        s = None
    row["matching_l"] = str(matching_lower_bound(q.A)[0])
    row["erdos_lo_ref"] = str(erdos_lo(q.n).exact)

    if s is not None and s >= 4:
        bound = main_bound(s)
        row["main_bound_log2"] = mp.nstr(bound.log2_value, 20)
        row["main_bound_clamped"] = str(bound.clamped).lower()
    if s is not None and s >= 1:
        row["offdiag_shape"] = _fmt_float(1 / math.sqrt(s))
        if sup_prob is not None:
            row["ratio_offdiag"] = _fmt_float(float(sup_prob) * math.sqrt(s))
    return row


def _instances(spec: ExperimentSpec):
    if spec.family is not None:
        for size in spec.sizes:
            for replicate in range(spec.replicates):
                instance_id = f"{spec.family}-{size:04d}-{replicate:03d}"
                yield instance_id, spec.family, generate(spec.family, size, spec.seed, replicate)
        return
    data = read_json(spec.input)
    items = data if isinstance(data, list) else [data]
    for index, item in enumerate(items):
        yield f"input-{index:04d}", "input", parse_quad(item)


def run_sweep(spec: ExperimentSpec) -> List[Dict[str, str]]:
    """Строки таблицы, отсортированные по instance_id"""
    if spec.kind != "sweep":
        raise ParameterError(f"run_sweep ожидает kind = sweep, получено {spec.kind}")
    jobs = [
        partial(evaluate_instance, instance_id, family, q, spec.enumeration_cap, spec.fixing_cap, spec.cover_cap)
        for instance_id, family, q in _instances(spec)
    ]
    rows = SweepScheduler(spec.workers).run_sync(jobs)
    logger.info(f"Прогон завершён: {len(rows)} строк")
    return rows


def sweep_csv(rows: List[Dict[str, str]]) -> str:
    buffer = io.StringIO()
    buffer.write(SWEEP_SCHEMA + "\n")
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()
