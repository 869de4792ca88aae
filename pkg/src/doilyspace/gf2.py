"""Exact arithmetic over GF(2): binary vectors, symplectic and quadratic forms.

Coordinate convention used throughout the package: coordinate x_k (1-based,
as written in the standard form equations) is stored at bit position k - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

HYPERBOLIC = "hyperbolic"
ELLIPTIC = "elliptic"
PARABOLIC = "parabolic"
DEGENERATE = "degenerate"

FORM_KINDS = (HYPERBOLIC, ELLIPTIC, PARABOLIC, DEGENERATE)

# projective zero counts of the non-degenerate forms, confirmed by the
# exhaustive enumerations in the test suite
_NONDEGENERATE_ZEROS = {
    4: {9: HYPERBOLIC, 5: ELLIPTIC},
    6: {35: HYPERBOLIC, 27: ELLIPTIC},
}
_PARABOLIC_ZEROS = {3: 3, 5: 15}


@dataclass(frozen=True, order=True)
class BinaryVector:
    """Fixed-length bit vector; addition is bitwise xor (^)."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits:
            raise ValueError("vector must have at least one coordinate")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"coordinates must be 0 or 1: {self.bits!r}")

    @classmethod
    def from_int(cls, value: int, dim: int) -> BinaryVector:
        """Vector whose k-th coordinate is bit k of ``value``."""
        if not 0 <= value < (1 << dim):
            raise ValueError(f"value {value} out of range for dimension {dim}")
        return cls(tuple((value >> k) & 1 for k in range(dim)))

    def to_int(self) -> int:
        return sum(b << k for k, b in enumerate(self.bits))

    @property
    def dim(self) -> int:
        return len(self.bits)

    def is_zero(self) -> bool:
        return not any(self.bits)

    def weight(self) -> int:
        return sum(self.bits)

    def __xor__(self, other: BinaryVector) -> BinaryVector:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return BinaryVector(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def zero_vector(dim: int) -> BinaryVector:
    return BinaryVector((0,) * dim)


def basis_vector(position: int, dim: int) -> BinaryVector:
    """Standard basis vector with a 1 at ``position`` (0-based)."""
    if not 0 <= position < dim:
        raise ValueError(f"position {position} out of range for dimension {dim}")
    return BinaryVector(tuple(1 if k == position else 0 for k in range(dim)))


def all_vectors(dim: int) -> tuple[BinaryVector, ...]:
    return tuple(BinaryVector.from_int(v, dim) for v in range(1 << dim))


def projective_points(dim: int) -> tuple[BinaryVector, ...]:
    """The 2^dim - 1 nonzero vectors, one per projective point over GF(2)."""
    return tuple(BinaryVector.from_int(v, dim) for v in range(1, 1 << dim))


@dataclass(frozen=True)
class SymplecticForm:
    """The standard alternating form pairing coordinates (1,2), (3,4), ..."""

    dim: int

    def __post_init__(self) -> None:
        if self.dim < 2 or self.dim % 2:
            raise ValueError(f"symplectic dimension must be a positive even integer: {self.dim}")

    def evaluate(self, x: BinaryVector, y: BinaryVector) -> int:
        if x.dim != self.dim or y.dim != self.dim:
            raise ValueError(f"dimension mismatch: form is {self.dim}, got {x.dim} and {y.dim}")
        acc = 0
        for k in range(0, self.dim, 2):
            acc ^= (x.bits[k] & y.bits[k + 1]) ^ (x.bits[k + 1] & y.bits[k])
        return acc

    def gram(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for i in range(self.dim):
            partner = i + 1 if i % 2 == 0 else i - 1
            rows.append(tuple(1 if j == partner else 0 for j in range(self.dim)))
        return tuple(rows)


def symplectic_eval(form: SymplecticForm, x: BinaryVector, y: BinaryVector) -> int:
    return form.evaluate(x, y)


@dataclass(frozen=True)
class QuadraticForm:
    """Sum of monomials x_i x_j over GF(2), indexed by 0-based positions i <= j."""

    dim: int
    monomials: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "monomials", frozenset(tuple(m) for m in self.monomials))
        for i, j in self.monomials:
            if not (0 <= i <= j < self.dim):
                raise ValueError(f"monomial ({i},{j}) out of range for dimension {self.dim}")

    def evaluate(self, x: BinaryVector) -> int:
        if x.dim != self.dim:
            raise ValueError(f"dimension mismatch: form is {self.dim}, got {x.dim}")
        acc = 0
        for i, j in self.monomials:
            acc ^= x.bits[i] & x.bits[j]
        return acc

    def zero_points(self) -> tuple[BinaryVector, ...]:
        """All projective points on the quadric Q(x) = 0."""
        return tuple(v for v in projective_points(self.dim) if self.evaluate(v) == 0)

    def __add__(self, other: QuadraticForm) -> QuadraticForm:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return QuadraticForm(self.dim, self.monomials ^ other.monomials)

    @property
    def kind(self) -> str:
        return classify_form(self)


def quad_eval(form: QuadraticForm, x: BinaryVector) -> int:
    return form.evaluate(x)


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric bilinear form given by its Gram matrix over GF(2)."""

    gram: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.gram)

    def evaluate(self, x: BinaryVector, y: BinaryVector) -> int:
        if x.dim != self.dim or y.dim != self.dim:
            raise ValueError("dimension mismatch")
        acc = 0
        for i in range(self.dim):
            if x.bits[i]:
                row = self.gram[i]
                for j in range(self.dim):
                    acc ^= row[j] & y.bits[j]
        return acc

    def radical(self) -> tuple[BinaryVector, ...]:
        """Nonzero vectors orthogonal to the whole space, by exhaustion."""
        out = []
        for v in projective_points(self.dim):
            if all(self.evaluate(v, basis_vector(j, self.dim)) == 0 for j in range(self.dim)):
                out.append(v)
        return tuple(out)

    def is_alternating(self) -> bool:
        if any(self.gram[i][i] for i in range(self.dim)):
            return False
        return all(self.gram[i][j] == self.gram[j][i]
                   for i, j in combinations(range(self.dim), 2))


def polarize(form: QuadraticForm) -> BilinearForm:
    """The bilinear form B(x,y) = Q(x+y) + Q(x) + Q(y)."""
    dim = form.dim
    basis = [basis_vector(k, dim) for k in range(dim)]
    vals = [form.evaluate(e) for e in basis]
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            if i == j:
                row.append(0)
            else:
                row.append(form.evaluate(basis[i] ^ basis[j]) ^ vals[i] ^ vals[j])
        rows.append(tuple(row))
    return BilinearForm(tuple(rows))


def classify_form(form: QuadraticForm) -> str:
    """Classify a form by counting its projective zeros exhaustively.

    Even dimension with non-degenerate polarization: hyperbolic or elliptic
    by zero count.  Odd dimension: parabolic when the polarized form has a
    one-dimensional radical on which the form does not vanish (the nucleus
    direction) and the zero count matches; anything else is degenerate.
    """
    if form.dim not in (4, 5, 6):
        raise ValueError(f"unsupported dimension for classification: {form.dim}")
    zeros = len(form.zero_points())
    radical = polarize(form).radical()
    if form.dim % 2 == 0:
        if radical:
            return DEGENERATE
        kind = _NONDEGENERATE_ZEROS[form.dim].get(zeros)
        if kind is None:
            raise RuntimeError(
                f"non-degenerate form in dimension {form.dim} with {zeros} zeros")
        return kind
    if (len(radical) == 1 and form.evaluate(radical[0]) == 1
            and zeros == _PARABOLIC_ZEROS[form.dim]):
        return PARABOLIC
    return DEGENERATE


def standard_symplectic(dim: int) -> SymplecticForm:
    return SymplecticForm(dim)


def hyperbolic_form(dim: int) -> QuadraticForm:
    """x1x2 + x3x4 + ... on an even number of coordinates."""
    if dim < 2 or dim % 2:
        raise ValueError(f"hyperbolic form needs a positive even dimension: {dim}")
    return QuadraticForm(dim, frozenset((k, k + 1) for k in range(0, dim, 2)))


def elliptic_form(dim: int) -> QuadraticForm:
    """f(x1,x2) + x3x4 + ... with f = x1^2 + x1x2 + x2^2, irreducible over GF(2)."""
    if dim < 4 or dim % 2:
        raise ValueError(f"elliptic form needs an even dimension >= 4: {dim}")
    monomials = {(0, 0), (0, 1), (1, 1)}
    monomials.update((k, k + 1) for k in range(2, dim, 2))
    return QuadraticForm(dim, frozenset(monomials))


def parabolic_form(dim: int) -> QuadraticForm:
    """x1x2 + ... + x_{2N-1}x_{2N} + x_{2N+1}^2 on an odd number of coordinates."""
    if dim < 3 or dim % 2 == 0:
        raise ValueError(f"parabolic form needs an odd dimension >= 3: {dim}")
    monomials = {(k, k + 1) for k in range(0, dim - 1, 2)}
    monomials.add((dim - 1, dim - 1))
    return QuadraticForm(dim, frozenset(monomials))
