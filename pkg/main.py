import functools
import logging
import os
import sys
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Tuple, Union

import click

from bounds import BOUNDS
from config import ENV_OVERRIDES, ConfigLoader, default_config_path
from core.errors import FormatError, LabError, ParameterError
from core.formats import load_constraint, load_dist, load_matrix, load_product, load_quad, parse_matrix, read_json
from core.rational import format_rational, parse_rational
from engine.exact import parallel_histogram
from engine.general import ProductDist, general_histogram
from engine.sampling import monte_carlo
from experiments.decoupling import verify_decoupling
from experiments.edgestats import edge_stats, load_graph
from experiments.sweep import SWEEP_SCHEMA, ExperimentSpec, run_sweep
from lab_core import LabContext, initialize_lab
from ranklab.certificates import Verdict
from ranklab.halasz import halasz_membership
from ranklab.mclass import m_membership
from ranklab.splitting import matrix_split
from report_writer import emit
from structure.fixing import SearchStatus, fixing_box_robustness, min_fixing_number
from structure.representation import represent_discrete
from structure.robustness import matching_lower_bound, offdiag_robustness

# Настройка логирования; stdout остаётся за JSON/CSV
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
INCONCLUSIVE_VERDICTS = (Verdict.INCONCLUSIVE, Verdict.NOT_FOUND, SearchStatus.INCONCLUSIVE)


# загрузчики по пути и значениям переопределений; файл перечитывается только после изменения
_loaders: Dict[Tuple[str, ...], ConfigLoader] = {}


def load_context(config_path: Optional[str], seed: Optional[int], cap: Optional[int]) -> LabContext:
    path = config_path or default_config_path()
    key = (path, *(os.getenv(variable, "") for variable in ENV_OVERRIDES))
    loader = _loaders.setdefault(key, ConfigLoader(path))
    config = loader.load_if_changed()
    logging.getLogger().setLevel(config.logging.level.upper())
    return initialize_lab(config).with_overrides(seed=seed, cap=cap)


def common_options(command):
    """--input, --output, --seed, --cap, --format, --config для каждой команды"""
    options = [
        click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="Входной файл"),
        click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None,
                     help="Файл результата; по умолчанию стандартный вывод"),
        click.option("--seed", type=int, default=None, help="64-битный seed"),
        click.option("--cap", type=int, default=None, help="Лимит перебора 2^cap"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json"),
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="Путь к config.yaml"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def lab_command(func):
    """Загружает контекст и переводит ошибки лаборатории в код выхода 1"""
    @functools.wraps(func)
    def wrapper(input_path, output_path, seed, cap, fmt, config_path, **kwargs):
        try:
            context = load_context(config_path, seed, cap)
            code = func(context=context, input_path=input_path, output_path=output_path, fmt=fmt, **kwargs)
        except (LabError, OSError, ValueError) as e:
            logger.error(f"Ошибка: {e}")
            sys.exit(EXIT_ERROR)
        sys.exit(code or EXIT_OK)
    return wrapper


def require_input(input_path: Optional[str]) -> str:
    if input_path is None:
        raise ParameterError("Нужен --input")
    return input_path


def verdict_exit(verdict: Union[Verdict, SearchStatus]) -> int:
    if verdict in INCONCLUSIVE_VERDICTS:
        logger.warning(f"Вердикт: {verdict.value}")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def parse_params(text: str) -> Dict[str, object]:
    """
    "k=2,s=2^64" → {"k": 2, "s": 2**64}; целые значения приводятся к int.
    """
    params: Dict[str, object] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        if "=" not in item:
            raise ParameterError(f"Ожидалось имя=значение, получено {item!r}")
        name, value = (part.strip() for part in item.split("=", 1))
        if "^" in value:
            base, exponent = value.split("^", 1)
            number = parse_rational(base) ** int(exponent)
        else:
            number = parse_rational(value)
        params[name] = int(number) if number.denominator == 1 else number
    return params


def event_json(event: str, count: int, total: int) -> Dict[str, str]:
    """Событие в формате {"event", "count", "total", "prob"}; целые передаются строками"""
    return {"event": event, "count": str(count), "total": str(total),
            "prob": format_rational(Fraction(count, total))}


def histogram_pairs(counts: Dict[Fraction, int]) -> List[List[str]]:
    return [[format_rational(v), str(c)] for v, c in sorted(counts.items())]


def exact_event_data(n: int, counts: Dict[Fraction, int], total: int, z: Optional[Fraction],
                     condition: str = "") -> Dict[str, object]:
    """
    Точный результат prob: событие Q = z (или самый тяжёлый атом), sup и гистограмма.

    :param counts: число исходов (или веса над общим знаменателем total) для каждого значения
    :param condition: дописывается к имени события, например « ∧ Mξ = w»
    """
    if counts:
        sup_z, sup_count = max(counts.items(), key=lambda item: (item[1], -item[0]))
        sup = event_json(f"Q = {format_rational(sup_z)}{condition}", sup_count, total)
    else:
        sup = event_json(f"Q ∈ ∅{condition}", 0, total)
    main = sup if z is None else event_json(f"Q = {format_rational(z)}{condition}", counts.get(z, 0), total)
    return {"method": "exact", "n": n, **main, "sup": sup, "histogram": histogram_pairs(counts)}


@click.group()
def qlo():
    """Точные и выборочные оценки антиконцентрации квадратичных многочленов"""


@qlo.command()
@common_options
@click.option("--constraint", "constraint_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--dist", "dist_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Произведение распределений вместо знаков")
@click.option("--z", "z_text", default=None, help="Точка p/q")
@click.option("--method", type=click.Choice(["exact", "mc"]), default="exact")
@click.option("--samples", type=int, default=100_000)
@lab_command
def prob(context, input_path, output_path, fmt, constraint_path, dist_path, z_text, method, samples):
    """Распределение Q, самый тяжёлый атом и Pr[Q = z]"""
    q = load_quad(require_input(input_path))
    z = parse_rational(z_text) if z_text is not None else None
    dist = ProductDist(tuple(load_product(dist_path))) if dist_path else None

    if method == "mc":
        z = z if z is not None else Fraction(0)
        result = monte_carlo(q, dist, z, samples, context.seed, workers=context.workers)
        data = {
            "method": "mc", **event_json(f"Q = {format_rational(z)}", result.hits, result.samples),
            "seed": context.seed, "estimate": float(result.estimate),
            "interval": [float(result.center - result.halfwidth), float(result.center + result.halfwidth)],
        }
        emit(data, fmt, output_path)
        return EXIT_OK

    if dist is not None and not dist.is_rademacher():
        law = general_histogram(q, dist, cap=context.general_cap)
        # веса над общим знаменателем вероятностей
        total = lcm(*(p.denominator for p in law.values()))
        counts = {v: int(p * total) for v, p in law.items()}
        data = exact_event_data(q.n, counts, total, z)
    else:
        constraint = load_constraint(constraint_path) if constraint_path else None
        hist = parallel_histogram(q, constraint, workers=context.workers,
                                  partition_bits=context.partition_bits, cap=context.enumeration_cap)
        counts, total = hist.as_dict(), hist.total
        data = exact_event_data(q.n, counts, total, z, " ∧ Mξ = w" if constraint is not None else "")

    rows = [{"value": format_rational(v), "count": c, "prob": format_rational(Fraction(c, total))}
            for v, c in sorted(counts.items())]
    emit(data, fmt, output_path, rows=rows)
    return EXIT_OK


@qlo.command()
@common_options
@click.argument("name", type=click.Choice(sorted(BOUNDS)))
@click.option("--params", "params_text", default="", help="k=...,s=...")
@lab_command
def bound(context, input_path, output_path, fmt, name, params_text):
    """Значение оценки в шкале log2"""
    fn, names = BOUNDS[name]
    params = parse_params(params_text)
    missing = [p for p in names if p not in params]
    if missing:
        raise ParameterError(f"Для {name} не заданы параметры: {', '.join(missing)}")
    result = fn(*(params[p] for p in names))
    emit(result.to_json(), fmt, output_path)
    return EXIT_OK


@qlo.group()
def certify():
    """Сертификаты и структурные метрики"""


@certify.command("halasz")
@common_options
@click.option("--s", "s", type=int, required=True)
@lab_command
def certify_halasz(context, input_path, output_path, fmt, s):
    M = load_matrix(require_input(input_path))
    cert = halasz_membership(M, s, budget=context.exact_search_budget)
    emit(cert.to_json(), fmt, output_path)
    return verdict_exit(cert.verdict)


@certify.command("m")
@common_options
@click.option("--r", "r", type=int, required=True)
@click.option("--s", "s", type=int, required=True)
@lab_command
def certify_m(context, input_path, output_path, fmt, r, s):
    """Вход: {"T": матрица, "U": матрица, "A": матрица}"""
    bundle = read_json(require_input(input_path))
    missing = [key for key in ("T", "U", "A") if not isinstance(bundle, dict) or key not in bundle]
    if missing:
        raise FormatError(f"Во входе нет матриц: {', '.join(missing)}")
    T, U, A = (parse_matrix(bundle[key]) for key in ("T", "U", "A"))
    cert = m_membership(T, U, A, r, s, budget=context.m_search_budget)
    emit(cert.to_json(), fmt, output_path)
    return verdict_exit(cert.verdict)


@certify.command("fixing")
@common_options
@click.option("--dist", "dist_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Произведение распределений для фиксирующих коробок")
@click.option("--delta", "delta_text", default="1/2")
@lab_command
def certify_fixing(context, input_path, output_path, fmt, dist_path, delta_text):
    q = load_quad(require_input(input_path))
    if dist_path is None:
        result = min_fixing_number(q, cap=context.fixing_cap)
    else:
        d = ProductDist(tuple(load_product(dist_path)))
        result = fixing_box_robustness(q, d, parse_rational(delta_text), cap=context.box_cap)
    emit(result.to_json(), fmt, output_path)
    return verdict_exit(result.verdict)


@certify.command("offdiag")
@common_options
@lab_command
def certify_offdiag(context, input_path, output_path, fmt):
    """Вход: многочлен или симметричная матрица"""
    data = read_json(require_input(input_path))
    A = parse_matrix(data) if "entries" in data else load_quad(input_path).A
    s = offdiag_robustness(A, cap=context.cover_cap)
    ell, pairs = matching_lower_bound(A)
    emit({"s": s, "matching_l": ell, "pairs": [list(p) for p in pairs]}, fmt, output_path)
    return EXIT_OK


@certify.command("represent")
@common_options
@lab_command
def certify_represent(context, input_path, output_path, fmt):
    out = represent_discrete(load_dist(require_input(input_path)))
    rows = [{"alpha": format_rational(a), "beta": format_rational(b), "prob": format_rational(p)}
            for (a, b), p in out.atoms]
    emit(out.to_json(), fmt, output_path, rows=rows)
    return EXIT_OK


@qlo.command()
@common_options
@click.option("--matrix", "matrix_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Симметричная матрица A")
@click.option("--s", "s_text", required=True)
@lab_command
def split(context, input_path, output_path, fmt, matrix_path, s_text):
    """Разбиение [n] = I ∪ J для матрицы M из рангового класса"""
    M = load_matrix(require_input(input_path))
    A = load_matrix(matrix_path)
    result = matrix_split(M, A, parse_rational(s_text), budget=context.exact_search_budget)
    emit(result.to_json(), fmt, output_path)
    return verdict_exit(result.cert.verdict)


@qlo.group()
def experiment():
    """Воспроизводимые прогоны"""


def parse_sizes(text: str):
    """"2-12" или "2,4,8" """
    sizes = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "-" in part:
            low, high = part.split("-", 1)
            sizes.extend(range(int(low), int(high) + 1))
        else:
            sizes.append(int(part))
    return sizes


@experiment.command("sweep")
@common_options
@click.option("--family", default=None)
@click.option("--sizes", "sizes_text", default="2-12")
@click.option("--replicates", type=int, default=1)
@lab_command
def experiment_sweep(context, input_path, output_path, fmt, family, sizes_text, replicates):
    spec = ExperimentSpec(
        kind="sweep", family=family, input=input_path, sizes=parse_sizes(sizes_text),
        replicates=replicates, seed=context.seed, output=output_path,
        enumeration_cap=context.enumeration_cap, fixing_cap=context.fixing_cap,
        cover_cap=context.cover_cap, workers=context.workers,
    )
    rows = run_sweep(spec)
    if fmt == "csv":
        emit(None, "csv", output_path, rows=rows, header=SWEEP_SCHEMA)
    else:
        emit({"schema": SWEEP_SCHEMA.lstrip("# "), "rows": rows}, "json", output_path)
    return EXIT_OK


@experiment.command("decoupling")
@common_options
@click.option("--indices", "indices_text", required=True, help="Множество I через запятую")
@click.option("--trials", default="exact", help='"exact" или число выборок')
@click.option("--z", "z_text", default="0")
@lab_command
def experiment_decoupling(context, input_path, output_path, fmt, indices_text, trials, z_text):
    q = load_quad(require_input(input_path))
    I = [int(i) for i in indices_text.split(",") if i.strip()]
    report = verify_decoupling(q, I, trials if trials == "exact" else int(trials), z=parse_rational(z_text),
                               cap=context.decoupling_cap, seed=context.seed)
    emit(report.to_json(), fmt, output_path)
    return EXIT_OK


@qlo.command()
@common_options
@click.option("--k", "k", type=int, required=True)
@click.option("--n", "n", type=int, default=None, help="Число вершин, если есть изолированные")
@lab_command
def edgestats(context, input_path, output_path, fmt, k, n):
    """N_G(k, ℓ) для графа из списка рёбер"""
    g = load_graph(require_input(input_path), n)
    stats = edge_stats(g, k, cap=context.edgestats_cap)
    emit(stats.to_json(), fmt, output_path, rows=stats.rows())
    return EXIT_OK


if __name__ == "__main__":
    qlo()
