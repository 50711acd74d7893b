"""
Exact Linear Algebra - Integer and rational matrix kernels

Smith normal form with recorded unimodular transforms, integer kernel
lattices, determinant signs and exact rational solving. Everything here
works over Python integers and fractions.Fraction; floating point never
enters.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from core.errors import InconsistentSystemError, NonSquareError

logger = logging.getLogger(__name__)

GF2 = galois.GF(2)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored in row-major order"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"IntMatrix of shape {self.rows}x{self.cols} needs "
                f"{self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        """
        Build a matrix from a list of rows

        Args:
            rows: Row vectors
            cols: Column count, required when there are no rows

        Returns:
            IntMatrix
        """
        rows = [tuple(int(x) for x in row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError(f"Ragged row of length {len(row)}, expected {cols}")
        return cls(len(rows), cols, tuple(x for row in rows for x in row))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        """Build a matrix whose columns are the given vectors"""
        columns = [tuple(int(x) for x in col) for col in columns]
        if rows is None:
            rows = len(columns[0]) if columns else 0
        return cls.from_rows(
            [[col[i] for col in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, rows: int, cols: int, values: Sequence[int]) -> "IntMatrix":
        """Matrix with the given values on the main diagonal, zero elsewhere"""
        entries = [0] * (rows * cols)
        for k, value in enumerate(values):
            entries[k * cols + k] = int(value)
        return cls(rows, cols, tuple(entries))

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> "IntMatrix":
        rows, cols = array.shape
        return cls(rows, cols, tuple(int(x) for x in array.reshape(-1)))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["IntMatrix"]]) -> "IntMatrix":
        """
        Assemble a block matrix

        Args:
            blocks: Rows of blocks; blocks in a block row share a row count,
                blocks in a block column share a column count

        Returns:
            The assembled IntMatrix
        """
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]] if blocks else []
        rows = []
        for block_row, height in zip(blocks, heights):
            for block, width in zip(block_row, widths):
                if block.rows != height or block.cols != width:
                    raise ValueError("Block shapes do not line up")
            for i in range(height):
                rows.append([x for block in block_row for x in block.row(i)])
        return cls.from_rows(rows, cols=sum(widths))

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_numpy(self) -> np.ndarray:
        """Object-dtype array, so products stay in arbitrary precision"""
        return np.array(self.entries, dtype=object).reshape(self.rows, self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([self.column(j) for j in range(self.cols)], cols=self.rows)

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix.from_numpy(self.to_numpy() @ other.to_numpy())

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def apply(self, vector: Sequence[int]) -> Vector:
        """Matrix times column vector"""
        if len(vector) != self.cols:
            raise ValueError(f"Vector of length {len(vector)} for {self.shape} matrix")
        return tuple(
            sum(a * b for a, b in zip(self.row(i), vector)) for i in range(self.rows)
        )

    def reduce(self, modulus: int) -> "IntMatrix":
        """Entrywise residue; modulus 0 leaves the matrix unchanged"""
        if modulus == 0:
            return self
        return IntMatrix(self.rows, self.cols, tuple(x % modulus for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)


@dataclass(frozen=True)
class SnfResult:
    """
    Smith normal form with recorded transforms

    left * A * right is the diagonal of ``factors`` padded with zeros;
    both transforms are unimodular and their inverses are kept alongside.
    """
    factors: Tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    left_inverse: IntMatrix
    right_inverse: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.factors)

    def diagonal(self) -> IntMatrix:
        return IntMatrix.diagonal(self.left.rows, self.right.cols, self.factors)


class _Reduction:
    """Mutable working state of one Smith normal form computation"""

    def __init__(self, matrix: IntMatrix):
        m, n = matrix.rows, matrix.cols
        self.m = m
        self.n = n
        self.a = matrix.to_rows()
        self.left = [[int(i == j) for j in range(m)] for i in range(m)]
        self.left_inv = [[int(i == j) for j in range(m)] for i in range(m)]
        self.right = [[int(i == j) for j in range(n)] for i in range(n)]
        self.right_inv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(self, i: int, j: int):
        a, left = self.a, self.left
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]
        for row in self.left_inv:
            row[i], row[j] = row[j], row[i]

    def add_row(self, target: int, source: int, q: int):
        """row[target] += q * row[source]"""
        a, left = self.a, self.left
        a[target] = [x + q * y for x, y in zip(a[target], a[source])]
        left[target] = [x + q * y for x, y in zip(left[target], left[source])]
        for row in self.left_inv:
            row[source] -= q * row[target]

    def negate_row(self, i: int):
        self.a[i] = [-x for x in self.a[i]]
        self.left[i] = [-x for x in self.left[i]]
        for row in self.left_inv:
            row[i] = -row[i]

    def swap_cols(self, i: int, j: int):
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.right:
            row[i], row[j] = row[j], row[i]
        self.right_inv[i], self.right_inv[j] = self.right_inv[j], self.right_inv[i]

    def add_col(self, target: int, source: int, q: int):
        """col[target] += q * col[source]"""
        for row in self.a:
            row[target] += q * row[source]
        for row in self.right:
            row[target] += q * row[source]
        inv = self.right_inv
        inv[source] = [x - q * y for x, y in zip(inv[source], inv[target])]

    def smallest_entry(self, t: int) -> Optional[Tuple[int, int]]:
        """Smallest nonzero |entry| of the trailing block, earliest row then column"""
        best = None
        best_value = 0
        for i in range(t, self.m):
            row = self.a[i]
            for j in range(t, self.n):
                value = abs(row[j])
                if value and (best is None or value < best_value):
                    best, best_value = (i, j), value
        return best

    def clear_cross(self, t: int) -> bool:
        """Reduce row t and column t modulo the pivot; True if anything survived"""
        a = self.a
        survived = False
        for i in range(t + 1, self.m):
            if a[i][t]:
                self.add_row(i, t, -(a[i][t] // a[t][t]))
                survived = survived or a[i][t] != 0
        for j in range(t + 1, self.n):
            if a[t][j]:
                self.add_col(j, t, -(a[t][j] // a[t][t]))
                survived = survived or a[t][j] != 0
        return survived

    def promote_smallest_in_cross(self, t: int):
        a = self.a
        candidates = [(abs(a[i][t]), 0, i) for i in range(t + 1, self.m) if a[i][t]]
        candidates += [(abs(a[t][j]), 1, j) for j in range(t + 1, self.n) if a[t][j]]
        _, axis, index = min(candidates)
        if axis == 0:
            self.swap_rows(t, index)
        else:
            self.swap_cols(t, index)

    def non_divisible(self, t: int) -> Optional[int]:
        """Row index of an entry not divisible by the pivot, if any"""
        p = self.a[t][t]
        for i in range(t + 1, self.m):
            row = self.a[i]
            for j in range(t + 1, self.n):
                if row[j] % p:
                    return i
        return None

    def run(self) -> SnfResult:
        t = 0
        while t < min(self.m, self.n):
            pivot = self.smallest_entry(t)
            if pivot is None:
                break
            i, j = pivot
            if i != t:
                self.swap_rows(t, i)
            if j != t:
                self.swap_cols(t, j)
            while True:
                if self.clear_cross(t):
                    self.promote_smallest_in_cross(t)
                    continue
                offender = self.non_divisible(t)
                if offender is None:
                    break
                self.add_row(t, offender, 1)
            if self.a[t][t] < 0:
                self.negate_row(t)
            t += 1
        factors = tuple(self.a[k][k] for k in range(t))
        return SnfResult(
            factors=factors,
            left=IntMatrix.from_rows(self.left, cols=self.m),
            right=IntMatrix.from_rows(self.right, cols=self.n),
            left_inverse=IntMatrix.from_rows(self.left_inv, cols=self.m),
            right_inverse=IntMatrix.from_rows(self.right_inv, cols=self.n),
        )


@lru_cache(maxsize=512)
def smith_normal_form(matrix: IntMatrix) -> SnfResult:
    """
    Compute the Smith normal form of an integer matrix

    Pivots are chosen as the smallest nonzero absolute value, earliest row
    and then earliest column on ties, so the result is reproducible.

    Args:
        matrix: Any integer matrix, including empty shapes

    Returns:
        SnfResult with invariant factors and unimodular transforms
    """
    logger.debug(f"Smith normal form of {matrix.rows}x{matrix.cols} matrix")
    return _Reduction(matrix).run()


def rank(matrix: IntMatrix) -> int:
    """Rank over the rationals"""
    return smith_normal_form(matrix).rank


def rank_mod2(matrix: IntMatrix) -> int:
    """Rank over GF(2)"""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    residues = np.array([x % 2 for x in matrix.entries], dtype=np.int64)
    return int(np.linalg.matrix_rank(GF2(residues.reshape(matrix.rows, matrix.cols))))


def integer_kernel_basis(matrix: IntMatrix) -> List[Vector]:
    """
    Basis of the saturated integer kernel lattice

    The trailing columns of the right SNF transform span the kernel; being
    columns of a unimodular matrix they are primitive.

    Args:
        matrix: Integer matrix A

    Returns:
        cols - rank vectors v with A v = 0
    """
    snf = smith_normal_form(matrix)
    return [snf.right.column(j) for j in range(snf.rank, matrix.cols)]


def determinant(matrix: IntMatrix) -> int:
    """
    Exact determinant by fraction-free (Bareiss) elimination

    Raises:
        NonSquareError: If the matrix is not square
    """
    if matrix.rows != matrix.cols:
        raise NonSquareError(f"Determinant of a {matrix.rows}x{matrix.cols} matrix")
    n = matrix.rows
    if n == 0:
        return 1
    a = matrix.to_rows()
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
        previous = a[k][k]
    return sign * a[n - 1][n - 1]


def det_sign(matrix: IntMatrix) -> int:
    """Sign of the determinant: +1, 0 or -1"""
    d = determinant(matrix)
    return (d > 0) - (d < 0)


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct sortable items"""
    order = sorted(range(len(perm)), key=lambda k: perm[k])
    seen = [False] * len(order)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def invariant_factors(orders: Iterable[int]) -> Tuple[int, ...]:
    """
    Normal form of a direct sum of finite cyclic groups

    Args:
        orders: Orders of the cyclic summands (entries 0 and 1 are ignored)

    Returns:
        Invariant factors > 1, each dividing the next
    """
    orders = [abs(int(x)) for x in orders if abs(int(x)) > 1]
    if not orders:
        return ()
    snf = smith_normal_form(IntMatrix.diagonal(len(orders), len(orders), orders))
    return tuple(f for f in snf.factors if f > 1)


# Rational helpers. Rational matrices are numpy object arrays of Fraction.

def fraction_array(rows: Sequence[Sequence], shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """
    Convert nested rows to a 2-D object array of Fractions

    Args:
        rows: Row vectors of ints or Fractions
        shape: Explicit shape, needed when rows are empty

    Returns:
        Object-dtype array
    """
    if shape is None:
        shape = (len(rows), len(rows[0]) if len(rows) else 0)
    array = np.empty(shape, dtype=object)
    for i in range(shape[0]):
        for j in range(shape[1]):
            array[i, j] = Fraction(rows[i][j])
    return array


def columns_array(columns: Sequence[Sequence], height: int) -> np.ndarray:
    """Object array whose columns are the given vectors"""
    array = np.empty((height, len(columns)), dtype=object)
    for j, column in enumerate(columns):
        for i in range(height):
            array[i, j] = Fraction(column[i])
    return array


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of object arrays, including empty inner dimensions"""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"Cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return fraction_array([[0] * b.shape[1]] * a.shape[0], shape=(a.shape[0], b.shape[1]))
    return a @ b


def block_diagonal(*blocks: np.ndarray) -> np.ndarray:
    """Block-diagonal object array"""
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    result = fraction_array([[0] * cols] * rows, shape=(rows, cols))
    r = c = 0
    for block in blocks:
        result[r:r + block.shape[0], c:c + block.shape[1]] = block
        r += block.shape[0]
        c += block.shape[1]
    return result


def integral_rows(array: np.ndarray) -> IntMatrix:
    """Scale each row by the lcm of its denominators (kernel preserving)"""
    rows = []
    for row in array:
        scale = lcm(*(Fraction(x).denominator for x in row)) if len(row) else 1
        rows.append([int(Fraction(x) * scale) for x in row])
    return IntMatrix.from_rows(rows, cols=array.shape[1])


def integral_columns(array: np.ndarray) -> IntMatrix:
    """Scale each column by the lcm of its denominators (determinant sign preserving)"""
    return integral_rows(array.T).transpose()


def rational_rank(array: np.ndarray) -> int:
    return rank(integral_rows(array))


def rational_kernel_basis(array: np.ndarray) -> List[Vector]:
    """Primitive integer basis of the kernel of a rational matrix"""
    return integer_kernel_basis(integral_rows(array))


def rational_det_sign(array: np.ndarray) -> int:
    return det_sign(integral_columns(array))


def rational_solve(array: np.ndarray, rhs: Sequence) -> List[Fraction]:
    """
    Find one exact solution x of A x = b

    Gauss-Jordan elimination with the first nonzero entry of each column
    as pivot; free variables are set to zero.

    Args:
        array: Coefficient matrix A
        rhs: Right-hand side b

    Returns:
        Solution vector as Fractions

    Raises:
        InconsistentSystemError: If the system has no solution
    """
    n_rows, n_cols = array.shape
    aug = [[Fraction(x) for x in array[i]] + [Fraction(rhs[i])] for i in range(n_rows)]
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pivot = aug[r][c]
        aug[r] = [x / pivot for x in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            raise InconsistentSystemError(f"No solution for {n_rows}x{n_cols} system")
    solution = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        solution[c] = aug[i][n_cols]
    return solution
