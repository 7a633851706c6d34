"""Dense exterior/Clifford algebra over a euclidean n-dimensional space.

Basis blades are addressed by bitmask: bit ``k`` set means ``e_{k+1}`` is a
factor, and factors are always taken in ascending index order.  A
:class:`Multivector` stores all ``2**n`` coefficients.

The scalar product is ``A . B = <reverse(A) B>_0``, which is positive-definite
on every grade, so ``norm`` is the coefficient 2-norm in the orthonormal
computational frame.  All convention-dependent signs live in
:func:`_product_tables`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

MAX_DIM = 8
DEFAULT_ATOL = 1e-9
DEFAULT_RTOL = 1e-9


class AlgebraError(ValueError):
    """Raised for dimension or grade mismatches."""


class LiteralError(ValueError):
    """Raised for malformed multivector literals; ``offset`` is a byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


# ---------------------------------------------------------------------------
# blade bookkeeping


def grade_of(bits: int) -> int:
    return bin(bits).count("1")


def blade_indices(bits: int) -> tuple[int, ...]:
    """1-based factor indices of a blade, ascending."""
    out = []
    k = 1
    while bits:
        if bits & 1:
            out.append(k)
        bits >>= 1
        k += 1
    return tuple(out)


def blade_bits(indices) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << (i - 1)
    return bits


def blade_label(bits: int) -> str:
    """Ascending digit string, '' for the scalar blade."""
    return "".join(str(i) for i in blade_indices(bits))


@lru_cache(maxsize=None)
def blades_of_grade(n: int, p: int) -> tuple[int, ...]:
    """Bitmasks of the grade-p blades, in lexicographic order of index sets."""
    if not 0 <= p <= n:
        raise AlgebraError(f"grade {p} out of range for dimension {n}")
    return tuple(blade_bits(c) for c in combinations(range(1, n + 1), p))


def _reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the factors of e_a e_b into ascending order."""
    a >>= 1
    swaps = 0
    while a:
        swaps += grade_of(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


@dataclass(frozen=True)
class _Tables:
    index: np.ndarray  # a ^ b, flattened
    clifford: np.ndarray
    wedge: np.ndarray
    lcontract: np.ndarray
    rcontract: np.ndarray
    grades: np.ndarray
    reverse: np.ndarray
    scalar: np.ndarray  # diagonal weights of <~A B>_0


@lru_cache(maxsize=None)
def _product_tables(n: int) -> _Tables:
    size = 1 << n
    a = np.arange(size)[:, None]
    b = np.arange(size)[None, :]
    gp = np.array(
        [[_reorder_sign(i, j) for j in range(size)] for i in range(size)], dtype=float
    )
    wedge = np.where((a & b) == 0, gp, 0.0)
    lcon = np.where((a & b) == a, gp, 0.0)
    rcon = np.where((a & b) == b, gp, 0.0)
    grades = np.array([grade_of(i) for i in range(size)])
    rev = np.where((grades * (grades - 1) // 2) % 2 == 0, 1.0, -1.0)
    scalar = rev * np.diag(gp)
    tables = _Tables(
        index=(a ^ b).ravel(),
        clifford=gp.ravel(),
        wedge=wedge.ravel(),
        lcontract=lcon.ravel(),
        rcontract=rcon.ravel(),
        grades=grades,
        reverse=rev,
        scalar=scalar,
    )
    for arr in (tables.index, tables.clifford, tables.wedge, tables.lcontract,
                tables.rcontract, tables.grades, tables.reverse, tables.scalar):
        arr.setflags(write=False)
    return tables


# ---------------------------------------------------------------------------
# multivectors


class Multivector:
    """Immutable dense multivector of dimension ``dim``."""

    __slots__ = ("dim", "coeffs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, dim: int, coeffs=None):
        if not 1 <= dim <= MAX_DIM:
            raise AlgebraError(f"dimension must be in [1, {MAX_DIM}], got {dim}")
        size = 1 << dim
        if coeffs is None:
            arr = np.zeros(size)
        else:
            arr = np.array(coeffs, dtype=float)
            if arr.shape != (size,):
                raise AlgebraError(f"expected {size} coefficients, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors

    @classmethod
    def zero(cls, dim: int) -> Multivector:
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, value: float) -> Multivector:
        c = np.zeros(1 << dim)
        c[0] = value
        return cls(dim, c)

    @classmethod
    def blade(cls, dim: int, bits: int, value: float = 1.0) -> Multivector:
        if not 0 <= bits < (1 << dim):
            raise AlgebraError(f"blade {bits:b} out of range for dimension {dim}")
        c = np.zeros(1 << dim)
        c[bits] = value
        return cls(dim, c)

    @classmethod
    def basis_vector(cls, dim: int, k: int) -> Multivector:
        """The 1-based basis vector e_k."""
        if not 1 <= k <= dim:
            raise AlgebraError(f"e{k} out of range for dimension {dim}")
        return cls.blade(dim, 1 << (k - 1))

    @classmethod
    def vector(cls, components) -> Multivector:
        comps = np.asarray(components, dtype=float)
        dim = comps.shape[0]
        c = np.zeros(1 << dim)
        for k in range(dim):
            c[1 << k] = comps[k]
        return cls(dim, c)

    # queries

    def grades(self) -> frozenset[int]:
        t = _product_tables(self.dim)
        return frozenset(int(g) for g in t.grades[self.coeffs != 0])

    def is_homogeneous(self, p: int) -> bool:
        """True when every coefficient off grade ``p`` is exactly zero."""
        t = _product_tables(self.dim)
        return not np.any(self.coeffs[t.grades != p])

    def vector_part(self) -> np.ndarray:
        return np.array([self.coeffs[1 << k] for k in range(self.dim)])

    def __getitem__(self, bits: int) -> float:
        return float(self.coeffs[bits])

    # arithmetic

    def _check(self, other: Multivector) -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.dim != self.dim:
            raise AlgebraError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        return Multivector(self.dim, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        return Multivector(self.dim, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.dim, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return clifford(self, other)
        return Multivector(self.dim, self.coeffs * float(other))

    def __rmul__(self, other):
        return Multivector(self.dim, self.coeffs * float(other))

    def __truediv__(self, other):
        return Multivector(self.dim, self.coeffs / float(other))

    def __xor__(self, other):
        return wedge(self, other)

    def __invert__(self):
        return reverse(self)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"Multivector({self.dim}, {format_multivector(self)!r})"

    def __str__(self):
        return format_multivector(self, digits=12)

    def to_json(self) -> dict:
        return multivector_to_json(self)


def _binary(table_name: str, A: Multivector, B: Multivector) -> Multivector:
    A._check(B)
    t = _product_tables(A.dim)
    weights = getattr(t, table_name) * np.outer(A.coeffs, B.coeffs).ravel()
    return Multivector(A.dim, np.bincount(t.index, weights=weights, minlength=1 << A.dim))


def wedge(A: Multivector, B: Multivector) -> Multivector:
    """Exterior product."""
    return _binary("wedge", A, B)


def clifford(A: Multivector, B: Multivector) -> Multivector:
    """Geometric product for the euclidean metric."""
    return _binary("clifford", A, B)


def left_contract(A: Multivector, B: Multivector) -> Multivector:
    """Left contraction: for A_r, B_s the grade s-r part of AB, zero if r > s."""
    return _binary("lcontract", A, B)


def right_contract(A: Multivector, B: Multivector) -> Multivector:
    """Right contraction: for A_r, B_s the grade r-s part of AB, zero if s > r."""
    return _binary("rcontract", A, B)


def scalar_product(A: Multivector, B: Multivector) -> float:
    """``<reverse(A) B>_0``."""
    A._check(B)
    t = _product_tables(A.dim)
    return float(np.dot(t.scalar * A.coeffs, B.coeffs))


def grade_project(A: Multivector, k: int) -> Multivector:
    if not 0 <= k <= A.dim:
        raise AlgebraError(f"grade {k} out of range for dimension {A.dim}")
    t = _product_tables(A.dim)
    return Multivector(A.dim, np.where(t.grades == k, A.coeffs, 0.0))


def reverse(A: Multivector) -> Multivector:
    t = _product_tables(A.dim)
    return Multivector(A.dim, t.reverse * A.coeffs)


def norm(A: Multivector) -> float:
    return float(np.sqrt(max(scalar_product(A, A), 0.0)))


def allclose(A: Multivector, B: Multivector, atol: float = DEFAULT_ATOL,
             rtol: float = DEFAULT_RTOL) -> bool:
    A._check(B)
    return bool(np.allclose(A.coeffs, B.coeffs, atol=atol, rtol=rtol))


def outer_product_of(vectors: list[Multivector], dim: int) -> Multivector:
    """Wedge of a sequence of vectors, in order; the empty wedge is 1."""
    out = Multivector.scalar(dim, 1.0)
    for v in vectors:
        out = wedge(out, v)
    return out


# ---------------------------------------------------------------------------
# frames


class FrameError(AlgebraError):
    pass


@dataclass(frozen=True, eq=False)
class Frame:
    """A basis {e_k} with its reciprocal {e^k}; rows are vectors in the
    orthonormal computational frame."""

    dim: int
    basis: np.ndarray
    gram: np.ndarray
    reciprocal: np.ndarray

    @classmethod
    def orthonormal(cls, dim: int) -> Frame:
        return reciprocal_basis(np.eye(dim))

    def vectors(self) -> list[Multivector]:
        return [Multivector.vector(row) for row in self.basis]

    def reciprocal_vectors(self) -> list[Multivector]:
        return [Multivector.vector(row) for row in self.reciprocal]

    def blades(self, p: int) -> list[Multivector]:
        """e_J = e_{j1} ^ ... ^ e_{jp} for ordered J (lexicographic)."""
        vecs = self.vectors()
        return [outer_product_of([vecs[i - 1] for i in blade_indices(J)], self.dim)
                for J in blades_of_grade(self.dim, p)]

    def reciprocal_blades(self, p: int) -> list[Multivector]:
        """e^J = e^{j1} ^ ... ^ e^{jp}, same order as :meth:`blades`."""
        vecs = self.reciprocal_vectors()
        return [outer_product_of([vecs[i - 1] for i in blade_indices(J)], self.dim)
                for J in blades_of_grade(self.dim, p)]

    def to_json(self) -> list[list[float]]:
        return self.basis.tolist()


def reciprocal_basis(basis) -> Frame:
    """Build the reciprocal frame e^i with e^i . e_j = delta^i_j.

    Raises FrameError for a singular (|det| <= 1e-12) or non-square basis.
    """
    B = np.array(basis, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise FrameError(f"basis must be a square matrix, got shape {B.shape}")
    n = B.shape[0]
    if not 1 <= n <= MAX_DIM:
        raise FrameError(f"frame dimension must be in [1, {MAX_DIM}], got {n}")
    if not np.all(np.isfinite(B)):
        raise FrameError("basis has non-finite entries")
    if abs(np.linalg.det(B)) <= 1e-12:
        raise FrameError("basis is singular")
    gram = B @ B.T
    gram = (gram + gram.T) / 2
    recip = np.linalg.inv(B).T
    resid = np.max(np.abs(recip @ B.T - np.eye(n)))
    if resid > 1e-12:
        raise FrameError(f"basis too ill-conditioned: reciprocity residual {resid:.3g}")
    for arr in (B, gram, recip):
        arr.setflags(write=False)
    return Frame(dim=n, basis=B, gram=gram, reciprocal=recip)


def coordinates(A: Multivector, frame: Frame, p: int,
                variant: str = "contravariant") -> list[float]:
    """Coefficients of a p-vector on the ordered p-blades of ``frame``.

    ``contravariant`` gives A^J = A . e^J, so that A = sum A^J e_J;
    ``covariant`` gives A_J = A . e_J, so that A = sum A_J e^J.
    """
    if A.dim != frame.dim:
        raise AlgebraError(f"dimension mismatch: {A.dim} vs {frame.dim}")
    if not A.is_homogeneous(p):
        raise AlgebraError(f"multivector is not homogeneous of grade {p}")
    if variant == "contravariant":
        duals = frame.reciprocal_blades(p)
    elif variant == "covariant":
        duals = frame.blades(p)
    else:
        raise ValueError(f"unknown coordinate variant {variant!r}")
    return [scalar_product(A, E) for E in duals]


def from_coordinates(coords, frame: Frame, p: int,
                     variant: str = "contravariant") -> Multivector:
    """Inverse of :func:`coordinates`."""
    if variant == "contravariant":
        blades = frame.blades(p)
    elif variant == "covariant":
        blades = frame.reciprocal_blades(p)
    else:
        raise ValueError(f"unknown coordinate variant {variant!r}")
    if len(coords) != len(blades):
        raise AlgebraError(f"expected {len(blades)} coordinates, got {len(coords)}")
    out = Multivector.zero(frame.dim)
    for c, E in zip(coords, blades):
        out = out + float(c) * E
    return out


# ---------------------------------------------------------------------------
# extensors


@dataclass(frozen=True, eq=False)
class Extensor:
    """Linear map from p-vectors to q-vectors.

    ``matrix[i, j]`` is the coefficient of output blade j in the image of
    input blade i, both in :func:`blades_of_grade` order.
    """

    dim: int
    p: int
    q: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        shape = (comb(self.dim, self.p), comb(self.dim, self.q))
        if m.shape != shape:
            raise AlgebraError(f"extensor matrix must have shape {shape}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, A: Multivector) -> Multivector:
        if A.dim != self.dim:
            raise AlgebraError(f"dimension mismatch: {A.dim} vs {self.dim}")
        if not A.is_homogeneous(self.p):
            raise AlgebraError(f"extensor input must be a {self.p}-vector")
        x = A.coeffs[list(blades_of_grade(self.dim, self.p))]
        y = x @ self.matrix
        out = np.zeros(1 << self.dim)
        out[list(blades_of_grade(self.dim, self.q))] = y
        return Multivector(self.dim, out)

    def to_json(self) -> dict:
        return {"dim": self.dim, "p": self.p, "q": self.q, "matrix": self.matrix.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> Extensor:
        return cls(int(obj["dim"]), int(obj["p"]), int(obj["q"]), np.array(obj["matrix"]))


# ---------------------------------------------------------------------------
# literal syntax:  "1 + 2 e1 - 3 e12"

_LIT_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.?\d*|\.\d+)|(?P<blade>e\d*)|(?P<op>[+-]))")


def parse_multivector(text: str, dim: int, base_offset: int = 0) -> Multivector:
    """Parse the literal syntax ``c``, ``c e<digits>`` joined by ``+``/``-``."""
    if not 1 <= dim <= MAX_DIM:
        raise AlgebraError(f"dimension must be in [1, {MAX_DIM}], got {dim}")
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _LIT_TOKEN.match(text, pos)
        if not m:
            off = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise LiteralError(f"unexpected character {text[off]!r}", base_offset + off)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), base_offset + m.start(kind)))
        pos = m.end()
    end = base_offset + len(text)
    coeffs = np.zeros(1 << dim)
    i = 0
    first = True
    while i < len(tokens) or first:
        sign = 1.0
        if i < len(tokens) and tokens[i][0] == "op":
            sign = -1.0 if tokens[i][1] == "-" else 1.0
            i += 1
        elif not first:
            raise LiteralError("expected '+' or '-'", tokens[i][2])
        first = False
        value = 1.0
        seen = False
        if i < len(tokens) and tokens[i][0] == "num":
            value = float(tokens[i][1])
            i += 1
            seen = True
        bits = 0
        if i < len(tokens) and tokens[i][0] == "blade":
            bits = _blade_from_label(tokens[i][1], dim, tokens[i][2])
            i += 1
            seen = True
        if not seen:
            off = tokens[i][2] if i < len(tokens) else end
            raise LiteralError("expected a number or a basis blade", off)
        coeffs[bits] += sign * value
    return Multivector(dim, coeffs)


def _blade_from_label(label: str, dim: int, offset: int) -> int:
    digits = label[1:]
    if not digits:
        raise LiteralError("basis blade needs at least one index digit", offset)
    idx = [int(d) for d in digits]
    for k, d in enumerate(idx):
        if d < 1 or d > dim:
            raise LiteralError(f"index {d} out of range for dimension {dim}", offset + 1 + k)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise LiteralError("blade indices must be strictly ascending", offset)
    return blade_bits(idx)


def format_number(x: float, digits: int | None) -> str:
    if digits is None:
        return np.format_float_positional(x, unique=True, trim="-")
    return np.format_float_positional(x, precision=digits, unique=False,
                                      fractional=False, trim="-")


def format_multivector(A: Multivector, digits: int | None = None) -> str:
    """Render in literal syntax.

    With ``digits=None`` the output parses back to exactly the same
    coefficients.  With a digit count, coefficients negligible at that
    precision relative to the largest one are dropped.
    """
    c = A.coeffs
    keep = c != 0
    if digits is not None and np.any(keep):
        scale = max(1.0, float(np.max(np.abs(c))))
        keep = np.abs(c) > scale * 10.0 ** (-digits)
    order = sorted(np.flatnonzero(keep), key=lambda b: (grade_of(int(b)), blade_indices(int(b))))
    parts = []
    for b in order:
        b = int(b)
        v = float(c[b])
        mag = format_number(abs(v), digits)
        label = "e" + blade_label(b) if b else ""
        if label and mag == "1":
            term = label
        elif label:
            term = f"{mag} {label}"
        else:
            term = mag
        if not parts:
            parts.append(f"-{term}" if v < 0 else term)
        else:
            parts.append(f"- {term}" if v < 0 else f"+ {term}")
    return " ".join(parts) if parts else "0"


def multivector_to_json(A: Multivector, digits: int | None = None) -> dict:
    coeffs = {}
    for b in sorted(np.flatnonzero(A.coeffs), key=lambda b: (grade_of(int(b)), blade_indices(int(b)))):
        v = float(A.coeffs[b])
        if digits is not None:
            v = float(f"{v:.{digits}g}")
        coeffs[blade_label(int(b))] = v
    return {"dim": A.dim, "coeffs": coeffs}


def multivector_from_json(obj) -> Multivector:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        dim = int(obj["dim"])
        items = obj["coeffs"].items()
    except (KeyError, TypeError, AttributeError) as exc:
        raise LiteralError(f"malformed multivector JSON: {exc}", 0) from exc
    c = np.zeros(1 << dim) if 1 <= dim <= MAX_DIM else None
    if c is None:
        raise AlgebraError(f"dimension must be in [1, {MAX_DIM}], got {dim}")
    for key, value in items:
        bits = _blade_from_label("e" + key, dim, 0) if key else 0
        c[bits] += float(value)
    return Multivector(dim, c)
