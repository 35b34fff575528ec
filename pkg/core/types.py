# core/types.py
"""
Общие доменные типы лаборатории.

Все коэффициенты рациональные (fractions.Fraction), все объекты неизменяемые.
Квадратичная часть хранится полной симметричной матрицей A в соглашении
xᵀAx: коэффициент монома x_i·x_j (i ≠ j) равен 2·A[i,j].
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from core.errors import DimensionMismatchError, FormatError

Vector = Tuple[Fraction, ...]


def as_vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]  # построчно

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError(f"Отрицательный размер матрицы: {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"Матрица {self.rows}x{self.cols} требует {self.rows * self.cols} элементов, "
                f"передано {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RatMatrix":
        """
        Строит матрицу из списка строк.

        :param rows: строки матрицы
        :param cols: число столбцов; обязательно для пустой (0 x n) матрицы
        """
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatchError(f"Строка длины {len(r)} в матрице с {cols} столбцами")
        entries = tuple(Fraction(v) for r in rows for v in r)
        return cls(len(rows), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, tuple(Fraction(0) for _ in range(rows * cols)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n)))

    @classmethod
    def empty(cls, cols: int) -> "RatMatrix":
        """Единственная пустая матрица 0 x cols"""
        return cls(0, cols, ())

    @classmethod
    def diagonal(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls(n, n, tuple(Fraction(values[i]) if i == j else Fraction(0) for i in range(n) for j in range(n)))

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        """A[I x J] в порядке переданных индексов"""
        return RatMatrix(
            len(row_idx), len(col_idx),
            tuple(self.entries[i * self.cols + j] for i in row_idx for j in col_idx),
        )

    def columns(self, col_idx: Sequence[int]) -> "RatMatrix":
        return self.submatrix(range(self.rows), col_idx)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Сложение матриц {self.shape} и {other.shape}")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Вычитание матриц {self.shape} и {other.shape}")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, factor) -> "RatMatrix":
        factor = Fraction(factor)
        return RatMatrix(self.rows, self.cols, tuple(factor * v for v in self.entries))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Умножение матриц {self.shape} и {other.shape}")
        other_cols = [other.col(j) for j in range(other.cols)]
        entries = []
        for i in range(self.rows):
            r = self.row(i)
            for c in other_cols:
                entries.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
        return RatMatrix(self.rows, other.cols, tuple(entries))

    def mat_vec(self, vector: Sequence) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"Матрица {self.shape} и вектор длины {len(vector)}")
        return tuple(
            sum((a * Fraction(x) for a, x in zip(self.row(i), vector) if a), Fraction(0))
            for i in range(self.rows)
        )

    def stack(self, other: "RatMatrix") -> "RatMatrix":
        """Приписывает строки other снизу"""
        if self.cols != other.cols:
            raise DimensionMismatchError(f"Склейка по строкам {self.shape} и {other.shape}")
        return RatMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.rows != other.rows:
            raise DimensionMismatchError(f"Склейка по столбцам {self.shape} и {other.shape}")
        return RatMatrix.from_rows([self.row(i) + other.row(i) for i in range(self.rows)],
                                   cols=self.cols + other.cols)


@dataclass(frozen=True)
class QuadPoly:
    """Q(x) = xᵀAx + bᵀx + c с симметричной A"""
    n: int
    A: RatMatrix
    b: Vector
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if self.A.shape != (self.n, self.n):
            raise DimensionMismatchError(f"Квадратичная часть {self.A.shape} при n = {self.n}")
        if len(self.b) != self.n:
            raise DimensionMismatchError(f"Линейная часть длины {len(self.b)} при n = {self.n}")
        if not self.A.is_symmetric():
            raise FormatError("Матрица квадратичной части должна быть симметричной")
        object.__setattr__(self, "b", as_vector(self.b))
        object.__setattr__(self, "c", Fraction(self.c))

    @classmethod
    def from_monomials(cls, n: int, quad: Dict[Tuple[int, int], Fraction],
                       lin: Optional[Sequence] = None, const=0) -> "QuadPoly":
        """
        Переводит коэффициенты мономов (i ≤ j) в соглашение xᵀAx.

        :param quad: {(i, j): коэффициент при x_i·x_j}
        """
        entries = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), coef in quad.items():
            if i > j:
                i, j = j, i
            if not (0 <= i < n and 0 <= j < n):
                raise DimensionMismatchError(f"Моном x{i}·x{j} вне размерности n = {n}")
            coef = Fraction(coef)
            if i == j:
                entries[i][i] += coef
            else:
                entries[i][j] += coef / 2
                entries[j][i] += coef / 2
        b = as_vector(lin) if lin is not None else tuple(Fraction(0) for _ in range(n))
        return cls(n, RatMatrix.from_rows(entries, cols=n), b, Fraction(const))

    @classmethod
    def constant(cls, n: int, value=0) -> "QuadPoly":
        return cls(n, RatMatrix.zeros(n, n), tuple(Fraction(0) for _ in range(n)), Fraction(value))

    @classmethod
    def linear(cls, coefficients: Sequence, const=0) -> "QuadPoly":
        n = len(coefficients)
        return cls(n, RatMatrix.zeros(n, n), as_vector(coefficients), Fraction(const))

    @classmethod
    def product_of_linear(cls, u: Sequence, u0, v: Sequence, v0) -> "QuadPoly":
        """(uᵀx + u0)(vᵀx + v0), квадратичная часть (uvᵀ + vuᵀ)/2"""
        if len(u) != len(v):
            raise DimensionMismatchError(f"Линейные формы разной длины: {len(u)} и {len(v)}")
        n = len(u)
        u, v = as_vector(u), as_vector(v)
        u0, v0 = Fraction(u0), Fraction(v0)
        A = RatMatrix(n, n, tuple((u[i] * v[j] + v[i] * u[j]) / 2 for i in range(n) for j in range(n)))
        b = tuple(u0 * v[i] + v0 * u[i] for i in range(n))
        return cls(n, A, b, u0 * v0)

    @classmethod
    def square_of_linear(cls, u: Sequence, u0=0) -> "QuadPoly":
        return cls.product_of_linear(u, u0, u, u0)

    def monomials(self) -> Dict[Tuple[int, int], Fraction]:
        """Обратное преобразование в коэффициенты мономов (i ≤ j)"""
        out = {}
        for i in range(self.n):
            if self.A[i, i]:
                out[(i, i)] = self.A[i, i]
            for j in range(i + 1, self.n):
                if self.A[i, j]:
                    out[(i, j)] = 2 * self.A[i, j]
        return out

    def __add__(self, other: "QuadPoly") -> "QuadPoly":
        if self.n != other.n:
            raise DimensionMismatchError(f"Сложение многочленов размерностей {self.n} и {other.n}")
        return QuadPoly(self.n, self.A + other.A, tuple(a + b for a, b in zip(self.b, other.b)), self.c + other.c)

    def scale(self, factor) -> "QuadPoly":
        factor = Fraction(factor)
        return QuadPoly(self.n, self.A.scale(factor), tuple(factor * v for v in self.b), factor * self.c)


@dataclass(frozen=True)
class SignVector:
    """Бит j установлен ⇔ ξ_j = +1"""
    n: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise DimensionMismatchError(f"Битовая маска {self.bits:#x} не помещается в n = {self.n}")

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "SignVector":
        bits = 0
        for j, s in enumerate(signs):
            if s not in (1, -1):
                raise FormatError(f"Знак должен быть ±1, получено {s!r}")
            if s == 1:
                bits |= 1 << j
        return cls(len(signs), bits)

    @classmethod
    def all_minus(cls, n: int) -> "SignVector":
        return cls(n, 0)

    @classmethod
    def all_plus(cls, n: int) -> "SignVector":
        return cls(n, (1 << n) - 1)

    def sign(self, j: int) -> int:
        return 1 if (self.bits >> j) & 1 else -1

    def signs(self) -> List[int]:
        return [self.sign(j) for j in range(self.n)]

    def flip(self, j: int) -> "SignVector":
        if not 0 <= j < self.n:
            raise IndexError(f"Индекс {j} вне диапазона [0, {self.n})")
        return SignVector(self.n, self.bits ^ (1 << j))


@dataclass(frozen=True)
class DyadicProb:
    """Точная вероятность count / total"""
    count: int
    total: int

    def __post_init__(self):
        if self.total <= 0:
            raise ValueError(f"total должен быть положительным, получено {self.total}")
        if not 0 <= self.count <= self.total:
            raise ValueError(f"Нужно 0 ≤ count ≤ total, получено {self.count}/{self.total}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.count, self.total)

    def __float__(self) -> float:
        return self.count / self.total


@dataclass(frozen=True)
class LinearConstraint:
    """Событие Mξ = w; k = 0 означает пустое ограничение"""
    M: RatMatrix
    w: Vector = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "w", as_vector(self.w))
        if len(self.w) != self.M.rows:
            raise DimensionMismatchError(f"Длина w = {len(self.w)}, а в M {self.M.rows} строк")

    @classmethod
    def vacuous(cls, n: int) -> "LinearConstraint":
        return cls(RatMatrix.empty(n), ())

    @property
    def n(self) -> int:
        return self.M.cols

    @property
    def k(self) -> int:
        return self.M.rows

    def holds(self, point: Sequence) -> bool:
        return self.M.mat_vec(point) == self.w


@dataclass(frozen=True)
class DiscreteDist:
    """Конечное распределение: атомы (значение, вероятность), отсортированы по значению"""
    atoms: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        atoms = tuple(sorted((Fraction(v), Fraction(p)) for v, p in self.atoms))
        if not atoms:
            raise FormatError("Распределение без атомов")
        values = [v for v, _ in atoms]
        if len(set(values)) != len(values):
            raise FormatError(f"Повторяющиеся атомы: {values}")
        if any(p <= 0 for _, p in atoms):
            raise FormatError("Вероятность каждого атома должна быть положительной")
        if sum(p for _, p in atoms) != 1:
            raise FormatError(f"Сумма вероятностей {sum(p for _, p in atoms)} ≠ 1")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def rademacher(cls) -> "DiscreteDist":
        return cls(((Fraction(-1), Fraction(1, 2)), (Fraction(1), Fraction(1, 2))))

    @classmethod
    def constant(cls, value) -> "DiscreteDist":
        return cls(((Fraction(value), Fraction(1)),))

    @classmethod
    def uniform_on(cls, values: Sequence) -> "DiscreteDist":
        values = sorted(set(Fraction(v) for v in values))
        return cls(tuple((v, Fraction(1, len(values))) for v in values))

    @classmethod
    def uniform_integers(cls, bound: int) -> "DiscreteDist":
        """Равномерно на {−B, …, B}"""
        return cls.uniform_on(range(-bound, bound + 1))

    @property
    def support(self) -> Tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    def prob(self, value) -> Fraction:
        value = Fraction(value)
        for v, p in self.atoms:
            if v == value:
                return p
        return Fraction(0)

    def max_atom(self) -> Tuple[Fraction, Fraction]:
        """Атом наибольшей массы; при равенстве берётся меньшее значение"""
        return max(self.atoms, key=lambda a: (a[1], -a[0]))
