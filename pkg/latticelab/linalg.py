"""Small dense matrices stored as lists of rows.

Rational and integer work is done by sympy's `DomainMatrix` over QQ and ZZ; Hermite and Smith
normal forms supply echelon bases, integer kernels and unimodular completions. Entries sympy has
no domain for (intervals, number-field elements) go through `_gauss_jordan`, which needs only
+ - * / and a truthiness test for zero. `det_by_minors` is division-free and is used for intervals.
"""

from fractions import Fraction
from math import gcd, lcm
from typing import Any, List, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

Matrix = List[List[Any]]


def transpose(matrix: Sequence[Sequence[Any]]) -> Matrix:
    return [list(col) for col in zip(*matrix)]


def identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    columns = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in columns:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def vec_mat(v: Sequence[Any], matrix: Sequence[Sequence[Any]]) -> List[Any]:
    return mat_mul([list(v)], matrix)[0]


# ---------------------------------------------------------------------------
# sympy adapters
# ---------------------------------------------------------------------------


def _is_rational(matrix: Sequence[Sequence[Any]]) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in matrix for x in row)


def _shape(matrix: Sequence[Sequence[Any]]):
    return len(matrix), len(matrix[0]) if matrix else 0


def _lift(x: Any) -> Any:
    return Fraction(x) if isinstance(x, int) else x


def _to_qq(value: Any):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _from_qq(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def to_qq(matrix: Sequence[Sequence[Any]]) -> DomainMatrix:
    return DomainMatrix([[_to_qq(x) for x in row] for row in matrix], _shape(matrix), QQ)


def to_zz(matrix: Sequence[Sequence[Any]]) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in matrix], _shape(matrix), ZZ)


def from_qq(dm: DomainMatrix) -> List[List[Fraction]]:
    return [[_from_qq(x) for x in row] for row in dm.to_list()]


def from_zz(dm: DomainMatrix) -> List[List[int]]:
    return [[int(x) for x in row] for row in dm.to_list()]


# ---------------------------------------------------------------------------
# Field routines
# ---------------------------------------------------------------------------


def det(matrix: Sequence[Sequence[Any]]) -> Any:
    if _is_rational(matrix):
        return _from_qq(to_qq(matrix).det())
    a = [[_lift(x) for x in row] for row in matrix]
    n = len(a)
    result: Any = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return a[0][0] - a[0][0]
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / p
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return result


def det_by_minors(matrix: Sequence[Sequence[Any]]) -> Any:
    """Division-free determinant by expansion over column subsets."""
    n = len(matrix)
    if n == 0:
        return 1
    partial = {0: 1}
    for row in range(n):
        extended = {}
        for mask, value in partial.items():
            for col in range(n):
                bit = 1 << col
                if mask & bit:
                    continue
                term = value * matrix[row][col]
                if bin(mask >> (col + 1)).count("1") % 2:
                    term = -term
                key = mask | bit
                extended[key] = extended[key] + term if key in extended else term
        partial = extended
    return partial[(1 << n) - 1]


def rank(matrix: Sequence[Sequence[Any]]) -> int:
    if not matrix:
        return 0
    return to_qq(matrix).rank()


def kernel(matrix: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    """Basis of {x : matrix . x = 0}, one vector per row."""
    return from_qq(to_qq(matrix).nullspace())


def _gauss_jordan(a: Sequence[Sequence[Any]], b: Sequence[Any]) -> List[Any]:
    n = len(a)
    aug = [[_lift(x) for x in row] + [_lift(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def solve(a: Sequence[Sequence[Any]], b: Sequence[Any]) -> List[Any]:
    """Solve a . x = b for square nonsingular a."""
    if not (_is_rational(a) and _is_rational([b])):
        return _gauss_jordan(a, b)
    try:
        numerator, denominator = to_qq(a).solve_den(to_qq([[x] for x in b]))
    except DMNonInvertibleMatrixError as exc:
        raise ZeroDivisionError("singular system") from exc
    return [_from_qq(row[0] / denominator) for row in numerator.to_list()]


def solve_left(matrix: Sequence[Sequence[Any]], v: Sequence[Any]) -> List[Any]:
    """Coefficients c with c . matrix = v."""
    return solve(transpose(matrix), v)


def inverse(matrix: Sequence[Sequence[Any]]) -> List[List[Fraction]]:
    try:
        return from_qq(to_qq(matrix).inv())
    except DMNonInvertibleMatrixError as exc:
        raise ZeroDivisionError("singular matrix") from exc


# ---------------------------------------------------------------------------
# Integer routines
# ---------------------------------------------------------------------------


def integer_det(matrix: Sequence[Sequence[int]]) -> int:
    if not matrix:
        return 1
    return int(to_zz(matrix).det())


def hermite_rows(matrix: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row Hermite form of the lattice spanned by the integer rows: positive leading entries,
    leading positions increasing, entries above each leading entry reduced modulo it."""
    rows = [list(row) for row in matrix if any(row)]
    if not rows:
        return []
    # sympy reduces columns with pivots towards the bottom right; reversing both axes of the
    # transposed input turns that into the usual upper row echelon layout
    flipped = [row[::-1] for row in rows]
    columns = hermite_normal_form(to_zz(transpose(flipped)))
    out = [row[::-1] for row in transpose(from_zz(columns))]
    return out[::-1]


def _integral_columns(matrix: Sequence[Sequence[Any]]) -> List[List[int]]:
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return []
    scales = [lcm(*(row[c].denominator for row in rows)) for c in range(len(rows[0]))]
    return [[int(x * s) for x, s in zip(row, scales)] for row in rows]


def integer_kernel(matrix: Sequence[Sequence[Any]]) -> List[List[int]]:
    """Basis of the lattice {u in Z^n : u . matrix = 0} for a rational n x k matrix.

    With S = s . M . t in Smith form, u . M = 0 exactly when u . s^-1 vanishes on the nonzero
    rows of S, so the kernel is spanned by the rows of s facing zero rows of S.
    """
    n = len(matrix)
    if not matrix or not matrix[0]:
        return identity(n)
    smith, s, _ = smith_normal_decomp(to_zz(_integral_columns(matrix)))
    diagonal = from_zz(smith)
    return [row for row, facing in zip(from_zz(s), diagonal) if not any(facing)]


def primitive(vector: Sequence[Any]) -> List[int]:
    """Smallest integer multiple of a rational vector, with the same direction."""
    q = [Fraction(x) for x in vector]
    scale = lcm(*(x.denominator for x in q))
    ints = [int(x * scale) for x in q]
    g = gcd(*ints)
    return [x // g for x in ints] if g else ints


def saturate(rows: Sequence[Sequence[Any]]) -> List[List[int]]:
    """Primitive integer basis of span_Q(rows) intersected with Z^d, in row Hermite form."""
    d = len(rows[0])
    complement = kernel(rows)
    if not complement:
        basis = identity(d)
    else:
        basis = integer_kernel(transpose(complement))
    return hermite_rows(basis)


def complete_to_unimodular(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Unimodular d x d matrix whose leading rows are the given primitive rows.

    From S = s . M . t with S = [I 0], M = s^-1 . (t^-1)[:p], so the trailing rows of t^-1 complete M.
    """
    p = len(rows)
    d = len(rows[0])
    smith, _, t = smith_normal_decomp(to_zz(rows))
    invariants = [from_zz(smith)[i][i] for i in range(p)]
    if any(abs(x) != 1 for x in invariants):
        raise ValueError("rows do not generate a primitive sublattice")
    completed = from_qq(t.convert_to(QQ).inv())
    out = [[int(x) for x in row] for row in rows]
    for row in completed[p:]:
        if any(x.denominator != 1 for x in row):
            raise ValueError("inverse of a unimodular transform is not integral")
        out.append([int(x) for x in row])
    if len(out) != d or abs(integer_det(out)) != 1:
        raise ValueError("completion is not unimodular")
    return out
