# report_writer.py
import csv
import io
import json
import logging
import sys
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


def render_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def render_csv(rows: List[Dict[str, Any]], header: Optional[str] = None) -> str:
    """
    Таблица из списка словарей; порядок столбцов - порядок первого появления ключа.

    :param header: строка-комментарий перед заголовком столбцов
    """
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buffer = io.StringIO()
    if header:
        buffer.write(header + "\n")
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buffer.getvalue()


def write_report(text: str, output: Optional[str] = None) -> bool:
    """
    Записывает отчёт в файл или в стандартный вывод.

    :param text: Готовый текст отчёта
    :param output: Путь к файлу; None - стандартный вывод
    """
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return True
    try:
        with open(output, "w", encoding="utf-8", newline="") as file:
            file.write(text)
        logger.info(f"Отчёт записан в {output} ({len(text)} символов)")
        return True
    except OSError as e:
        logger.error(f"Ошибка записи отчёта в {output}: {e}")
        raise


def emit(data: Any, fmt: str = "json", output: Optional[str] = None,
         rows: Optional[List[Dict[str, Any]]] = None, header: Optional[str] = None) -> bool:
    """
    Выводит результат команды.

    :param data: JSON-представление результата
    :param rows: табличное представление для --format csv; без него CSV строится из data
    """
    if fmt not in FORMATS:
        raise ValueError(f"Неизвестный формат {fmt!r}; доступны: {', '.join(FORMATS)}")
    if fmt == "json":
        return write_report(render_json(data), output)
    if rows is None:
        rows = data if isinstance(data, list) else [_flatten(data)]
    return write_report(render_csv(rows, header), output)


def _flatten(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value, ensure_ascii=False)
        else:
            flat[name] = value
    return flat
