"""Linear algebra over GF(2) and (co)homology of finite chain complexes.

Vectors are Python ints used as bitsets: bit ``j`` is coordinate ``j``.  A
matrix stores one such int per row.  Chains handed to the public functions
are frozensets of cell labels (simplices for simplicial complexes).
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from functools import cached_property

from .errors import InputError, InvariantViolation


def bits_from(values: Iterable[int]) -> int:
    """Pack a 0/1 sequence into an int, first entry in bit 0."""
    out = 0
    for j, v in enumerate(values):
        if v & 1:
            out |= 1 << j
    return out


def iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Gf2Matrix:
    """Dense bit-packed matrix; row ``i`` is ``rows[i]``."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        self.rows = list(rows)
        self.nrows = len(self.rows)
        self.ncols = ncols
        mask = ~((1 << ncols) - 1)
        if any(r & mask for r in self.rows):
            raise InputError("row has bits beyond ncols")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Gf2Matrix:
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> Gf2Matrix:
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls([bits_from(r) for r in entries], ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> Gf2Matrix:
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in iter_bits(col):
                rows[i] |= 1 << j
        return cls(rows, len(columns))

    def columns(self) -> list[int]:
        return self.transpose().rows

    def transpose(self) -> Gf2Matrix:
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                cols[j] |= 1 << i
        return Gf2Matrix(cols, self.nrows)

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def matvec(self, x: int) -> int:
        out = 0
        for i, row in enumerate(self.rows):
            if (row & x).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: Gf2Matrix) -> Gf2Matrix:
        if self.ncols != other.nrows:
            raise InputError("dimension mismatch in product")
        rows = []
        for row in self.rows:
            acc = 0
            for j in iter_bits(row):
                acc ^= other.rows[j]
            rows.append(acc)
        return Gf2Matrix(rows, other.ncols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.nrows}x{self.ncols}, rank={rank(self)})"


def _eliminate(rows: list[int]) -> list[tuple[int, int]]:
    """Row-reduce in place; return (pivot column, row) pairs in pivot order.

    Pivots are the lowest set bit of each reduced row, so column order is
    cell-id order.
    """
    pivots: list[tuple[int, int]] = []
    for row in rows:
        for p, prow in pivots:
            if (row >> p) & 1:
                row ^= prow
        if row:
            p = (row & -row).bit_length() - 1
            # keep the basis fully reduced on pivot columns
            pivots = [(q, qrow ^ row if (qrow >> p) & 1 else qrow) for q, qrow in pivots]
            pivots.append((p, row))
    return pivots


def rank(m: Gf2Matrix) -> int:
    rows = m.rows if m.nrows <= m.ncols else m.transpose().rows
    count = 0
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            p = row & -row
            if p in basis:
                row ^= basis[p]
            else:
                basis[p] = row
                count += 1
                break
    return count


def solve(m: Gf2Matrix, b: int | Sequence[int]) -> int | None:
    """Return some ``x`` with ``m @ x == b`` or ``None``.

    Free variables are set to zero after elimination in column order, which
    makes the answer deterministic.
    """
    if not isinstance(b, int):
        if len(b) != m.nrows:
            raise InputError(f"rhs has length {len(b)}, expected {m.nrows}")
        b = bits_from(b)
    elif b >> m.nrows:
        raise InputError("rhs has bits beyond nrows")
    aug = 1 << m.ncols
    rows = [row | (aug if (b >> i) & 1 else 0) for i, row in enumerate(m.rows)]
    x = 0
    for p, row in _eliminate(rows):
        if p == m.ncols:
            return None
        if row & aug:
            x |= 1 << p
    return x


def nullspace(m: Gf2Matrix) -> list[int]:
    """Basis of ``{x : m @ x == 0}``, one vector per free column."""
    pivots = _eliminate(list(m.rows))
    pivot_cols = {p: row for p, row in pivots}
    basis = []
    for free in range(m.ncols):
        if free in pivot_cols:
            continue
        x = 1 << free
        for p, row in pivot_cols.items():
            if (row >> free) & 1:
                x |= 1 << p
        basis.append(x)
    return basis


class SpanReducer:
    """Incremental basis that remembers how each vector was combined.

    Every inserted vector carries a tag (a bitset over caller-chosen
    generators); reducing a vector returns the residual and the XOR of the
    tags used, which yields coordinates relative to the tagged generators.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: int) -> tuple[int, int]:
        tag = 0
        residual = 0
        while v:
            low = v & -v
            entry = self._pivots.get(low)
            if entry is None:
                residual |= low
                v ^= low
            else:
                v ^= entry[0]
                tag ^= entry[1]
        return residual, tag

    def insert(self, v: int, tag: int = 0) -> bool:
        """Add ``v``; return False if it was already in the span."""
        while v:
            low = v & -v
            entry = self._pivots.get(low)
            if entry is None:
                self._pivots[low] = (v, tag)
                return True
            v ^= entry[0]
            tag ^= entry[1]
        return False


class ChainComplex:
    """Finite chain complex over GF(2) with labelled cells.

    ``cells[i]`` lists the labels of the i-cells; ``boundary[i]`` maps i-chains
    to (i-1)-chains (rows are (i-1)-cells, columns are i-cells) for ``i >= 1``.
    """

    def __init__(
        self,
        cells: Mapping[int, Sequence[Hashable]],
        boundary: Mapping[int, Gf2Matrix],
        check: bool = True,
    ):
        top = max((i for i, c in cells.items() if len(c)), default=-1)
        self.cells: dict[int, tuple] = {i: tuple(cells.get(i, ())) for i in range(top + 1)}
        self.boundary: dict[int, Gf2Matrix] = {}
        for i in range(1, top + 1):
            mat = boundary.get(i)
            if mat is None:
                mat = Gf2Matrix.zeros(len(self.cells[i - 1]), len(self.cells[i]))
            if (mat.nrows, mat.ncols) != (len(self.cells[i - 1]), len(self.cells[i])):
                raise InputError(f"boundary matrix {i} has the wrong shape")
            self.boundary[i] = mat
        self._index = {i: {c: j for j, c in enumerate(cs)} for i, cs in self.cells.items()}
        for i, cs in self.cells.items():
            if len(self._index[i]) != len(cs):
                raise InputError(f"duplicate cell labels in dimension {i}")
        if check:
            self.check_boundary_squares()

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, i: int) -> int:
        return len(self.cells.get(i, ()))

    def is_empty(self) -> bool:
        return not self.cells

    def boundary_matrix(self, i: int) -> Gf2Matrix:
        """∂_i; zero matrices outside ``1..dimension``."""
        if i in self.boundary:
            return self.boundary[i]
        return Gf2Matrix.zeros(self.n_cells(i - 1), self.n_cells(i))

    def check_boundary_squares(self) -> None:
        for i in range(2, self.dimension + 1):
            if not (self.boundary[i - 1] @ self.boundary[i]).is_zero():
                raise InvariantViolation(f"boundary squares to nonzero in degree {i}")

    def dim_of(self, label: Hashable) -> int:
        for i, idx in self._index.items():
            if label in idx:
                return i
        raise InputError(f"{label!r} is not a cell of this complex")

    def to_bits(self, chain: Iterable[Hashable], i: int) -> int:
        idx = self._index.get(i, {})
        out = 0
        for c in chain:
            j = idx.get(c)
            if j is None:
                raise InputError(f"{c!r} is not an {i}-cell of this complex")
            out ^= 1 << j
        return out

    def from_bits(self, x: int, i: int) -> frozenset:
        cs = self.cells.get(i, ())
        return frozenset(cs[j] for j in iter_bits(x))

    def boundary_of(self, chain: Iterable[Hashable], i: int) -> frozenset:
        if i <= 0:
            return frozenset()
        return self.from_bits(self.boundary[i].matvec(self.to_bits(chain, i)), i - 1)

    @cached_property
    def _ranks(self) -> dict[int, int]:
        return {i: rank(m) for i, m in self.boundary.items()}

    def boundary_rank(self, i: int) -> int:
        return self._ranks.get(i, 0)


def as_chain_complex(obj) -> ChainComplex:
    if isinstance(obj, ChainComplex):
        return obj
    convert = getattr(obj, "chain_complex", None)
    if convert is None:
        raise InputError(f"cannot treat {type(obj).__name__} as a chain complex")
    return convert()


def betti(complex_, i: int, reduced: bool = False) -> int:
    """i-th Betti number over GF(2); the empty complex reports 0 everywhere."""
    if i < 0:
        raise InputError("degree must be non-negative")
    c = as_chain_complex(complex_)
    if c.is_empty() or i > c.dimension:
        return 0
    value = c.n_cells(i) - c.boundary_rank(i) - c.boundary_rank(i + 1)
    if reduced and i == 0:
        value -= 1  # augmentation has rank 1 on a nonempty complex
    return value


def betti_numbers(complex_, reduced: bool = False) -> list[int]:
    c = as_chain_complex(complex_)
    return [betti(c, i, reduced) for i in range(c.dimension + 1)]


def _infer_dim(c: ChainComplex, chain: frozenset, dim: int | None) -> int:
    if dim is not None:
        return dim
    return c.dim_of(next(iter(chain)))


def _require_cycle(c: ChainComplex, z: frozenset, i: int) -> int:
    bits = c.to_bits(z, i)
    if i > 0 and c.boundary[i].matvec(bits):
        raise InputError("chain is not a cycle")
    return bits


def is_boundary(z: Iterable[Hashable], complex_, dim: int | None = None) -> frozenset | None:
    """Return a chain ``c`` with ``∂c = z`` inside ``complex_``, or ``None``."""
    z = frozenset(z)
    if not z:
        return frozenset()
    c = as_chain_complex(complex_)
    i = _infer_dim(c, z, dim)
    bits = _require_cycle(c, z, i)
    if i + 1 > c.dimension:
        return None
    x = solve(c.boundary[i + 1], bits)
    if x is None:
        return None
    return c.from_bits(x, i + 1)


class HomologyBasis:
    """Cycle representatives of H_i and a coordinate map for cycles."""

    def __init__(self, complex_, i: int):
        self.complex = as_chain_complex(complex_)
        self.grade = i
        c = self.complex
        self._reducer = SpanReducer()
        if i + 1 <= c.dimension:
            for col in c.boundary[i + 1].columns():
                self._reducer.insert(col)
        if i == 0:
            cycles = [1 << j for j in range(c.n_cells(0))]
        elif i <= c.dimension:
            cycles = nullspace(c.boundary[i])
        else:
            cycles = []
        reps = []
        for z in cycles:
            if self._reducer.insert(z, 1 << len(reps)):
                reps.append(z)
        self._reps = reps
        self.representatives = [c.from_bits(z, i) for z in reps]

    def __len__(self) -> int:
        return len(self._reps)

    def coordinates(self, z: Iterable[Hashable]) -> tuple[int, ...]:
        z = frozenset(z)
        if not z:
            return (0,) * len(self)
        bits = _require_cycle(self.complex, z, self.grade)
        residual, tag = self._reducer.reduce(bits)
        if residual:
            raise InvariantViolation("cycle outside the span of boundaries and representatives")
        return tuple((tag >> j) & 1 for j in range(len(self)))


def homology_class(z: Iterable[Hashable], basis: HomologyBasis) -> tuple[int, ...]:
    return basis.coordinates(z)


def is_coboundary(cochain: Iterable[Hashable], complex_, d: int) -> frozenset | None:
    """Solve δν = c for a (d-1)-cochain ν; ``None`` if c is not a coboundary.

    Cochains are given by their support (a set of cell labels).
    """
    c = as_chain_complex(complex_)
    bits = c.to_bits(cochain, d)
    if d + 1 <= c.dimension and c.boundary[d + 1].transpose().matvec(bits):
        raise InputError("cochain is not a cocycle")
    if not bits:
        return frozenset()
    if d == 0:
        return None
    x = solve(c.boundary[d].transpose(), bits)
    if x is None:
        return None
    return c.from_bits(x, d - 1)
