# core/formats.py
"""
Чтение и запись JSON-форматов лаборатории.

Многочлен: {"n": int, "quad": [[i, j, "p/q"], ...], "lin": [...], "const": "p/q"},
где quad содержит коэффициенты мономов x_i·x_j с i ≤ j.
Матрица: {"rows": r, "cols": c, "entries": [["p/q", ...], ...]}.
Распределение: {"atoms": [["значение", "вероятность"], ...]}.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ValidationError, field_validator, model_validator

from core.errors import FormatError
from core.rational import format_rational, format_vector, parse_rational, parse_vector
from core.types import DiscreteDist, LinearConstraint, QuadPoly, RatMatrix

logger = logging.getLogger(__name__)

Rational = Union[str, int]


class MatrixModel(BaseModel):
    rows: int
    cols: int
    entries: List[List[Rational]]

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries не соответствуют размеру {self.rows}x{self.cols}")
        return self


class QuadPolyModel(BaseModel):
    n: int
    quad: List[Tuple[int, int, Rational]] = []
    lin: Optional[List[Rational]] = None
    const: Rational = "0"

    @field_validator("n")
    @classmethod
    def check_n(cls, value):
        if value < 0:
            raise ValueError("n должно быть неотрицательным")
        return value


class DistModel(BaseModel):
    atoms: List[Tuple[Rational, Rational]]


class ProductDistModel(BaseModel):
    variables: List[DistModel]


class ConstraintModel(BaseModel):
    M: MatrixModel
    w: List[Rational] = []


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as file:
            return json.load(file)
    except json.JSONDecodeError as e:
        raise FormatError(f"Некорректный JSON в {path}: {e}") from e


def _validate(model, data: Any, what: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise FormatError(f"Некорректный формат ({what}): {e}") from e


def parse_matrix(data: Dict) -> RatMatrix:
    model = _validate(MatrixModel, data, "матрица")
    return RatMatrix.from_rows([parse_vector(r) for r in model.entries], cols=model.cols)


def parse_quad(data: Dict) -> QuadPoly:
    """Коэффициенты мономов переводятся в симметричную A (A[i,j] = коэф/2 при i ≠ j)"""
    model = _validate(QuadPolyModel, data, "многочлен")
    quad: Dict[Tuple[int, int], Fraction] = {}
    for i, j, coef in model.quad:
        if i > j:
            raise FormatError(f"Моном [{i}, {j}]: ожидалось i ≤ j")
        key = (i, j)
        quad[key] = quad.get(key, Fraction(0)) + parse_rational(coef)
    lin = parse_vector(model.lin) if model.lin is not None else None
    if lin is not None and len(lin) != model.n:
        raise FormatError(f"lin длины {len(lin)} при n = {model.n}")
    return QuadPoly.from_monomials(model.n, quad, lin, parse_rational(model.const))


def dump_quad(q: QuadPoly) -> Dict:
    return {
        "n": q.n,
        "quad": [[i, j, format_rational(v)] for (i, j), v in sorted(q.monomials().items())],
        "lin": format_vector(q.b),
        "const": format_rational(q.c),
    }


def parse_dist(data: Dict) -> DiscreteDist:
    model = _validate(DistModel, data, "распределение")
    return DiscreteDist(tuple((parse_rational(v), parse_rational(p)) for v, p in model.atoms))


def parse_product(data: Dict) -> List[DiscreteDist]:
    """{"variables": [распределение, ...]}"""
    model = _validate(ProductDistModel, data, "произведение распределений")
    return [parse_dist(v.model_dump()) for v in model.variables]


def parse_constraint(data: Dict) -> LinearConstraint:
    model = _validate(ConstraintModel, data, "линейное ограничение")
    M = parse_matrix(model.M.model_dump())
    return LinearConstraint(M, parse_vector(model.w))


def load_quad(path: Union[str, Path]) -> QuadPoly:
    return parse_quad(read_json(path))


def load_matrix(path: Union[str, Path]) -> RatMatrix:
    return parse_matrix(read_json(path))


def load_dist(path: Union[str, Path]) -> DiscreteDist:
    return parse_dist(read_json(path))


def load_constraint(path: Union[str, Path]) -> LinearConstraint:
    return parse_constraint(read_json(path))


def load_product(path: Union[str, Path]) -> List[DiscreteDist]:
    return parse_product(read_json(path))
