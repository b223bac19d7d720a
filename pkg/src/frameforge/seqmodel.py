"""Vector sequences: finite lists in C^d and structured sequences in l^2.

Two structured families are supported:

* :class:`EditedBasis` -- the standard orthonormal basis ``e_1, e_2, ...`` after
  a finite script of drops, inserts and replacements.
* :class:`RuleSequence` -- ``f_n = sum_j p_j(n) e_{a_j n + b_j}`` with affine
  index maps and coefficient polynomials of degree at most two.

Sequence positions and basis indices are 1-based throughout, matching the
usual ``f_1, f_2, ...`` notation. Coordinates in returned numpy arrays are of
course 0-based (``vec[k - 1]`` is the ``e_k`` coefficient).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidInput, OutOfRange
from .numkernel import as_matrix

__all__ = [
    "Drop",
    "Insert",
    "Replace",
    "Edit",
    "RuleTerm",
    "VectorSequence",
    "FiniteSequence",
    "EditedBasis",
    "RuleSequence",
    "Truncation",
    "Section",
    "make_finite",
    "from_matrix",
    "make_structured",
    "make_rule",
    "vector_at",
    "truncate",
    "lossless_truncation",
    "common_sections",
]

# A sparse coefficient vector: sorted ((basis_index, coeff), ...) with nonzero coeffs.
Sparse = tuple


def _as_coeffs(vector) -> tuple:
    try:
        values = tuple(complex(v) for v in vector)
    except TypeError:
        raise InvalidInput(f"coefficient vector must be a sequence of numbers, got {vector!r}") from None
    if not values:
        raise InvalidInput("coefficient vector must be nonempty")
    if not all(np.isfinite(v.real) and np.isfinite(v.imag) for v in values):
        raise InvalidInput("coefficient vector has non-finite entries")
    return tuple(v.real if v.imag == 0 else v for v in values)


def _sparse(values: Sequence) -> Sparse:
    return tuple((k + 1, v) for k, v in enumerate(values) if v != 0)


def _unit(k: int) -> Sparse:
    return ((k, 1.0),)


def _check_position(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidInput(f"{name} must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class Drop:
    index: int

    def __post_init__(self):
        object.__setattr__(self, "index", _check_position(self.index, "Drop index"))


@dataclass(frozen=True)
class Insert:
    position: int
    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "position", _check_position(self.position, "Insert position"))
        object.__setattr__(self, "vector", _as_coeffs(self.vector))


@dataclass(frozen=True)
class Replace:
    index: int
    vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "index", _check_position(self.index, "Replace index"))
        object.__setattr__(self, "vector", _as_coeffs(self.vector))


Edit = Union[Drop, Insert, Replace]


@dataclass(frozen=True)
class RuleTerm:
    """One term ``p(n) * e_{a n + b}`` of a coefficient rule.

    ``poly`` holds ``(c0, c1, c2)`` for ``p(n) = c0 + c1 n + c2 n^2``.
    """

    a: int
    b: int
    poly: tuple = (1.0,)

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidInput(f"rule index {name} must be an integer, got {value!r}")
        if self.a < 0:
            raise InvalidInput("rule index slope a must be nonnegative")
        if self.a + self.b < 1:
            raise InvalidInput(f"rule index {self.a}n{self.b:+d} is not positive at n=1")
        poly = _as_coeffs(self.poly) if len(self.poly) else (0.0,)
        if len(poly) > 3:
            raise InvalidInput("rule coefficient polynomials have degree at most 2")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))
        object.__setattr__(self, "poly", poly)

    def index(self, n):
        return self.a * n + self.b

    def coeff(self, n):
        return sum(c * n**k for k, c in enumerate(self.poly))

    @property
    def is_zero(self) -> bool:
        return not any(self.poly)

    @property
    def is_constant(self) -> bool:
        return not any(self.poly[1:])


@dataclass(frozen=True)
class Truncation:
    n_vectors: int
    d_coords: int

    def __post_init__(self):
        if self.n_vectors < 0 or self.d_coords < 0:
            raise InvalidInput("truncation sizes must be nonnegative")


class Section(NamedTuple):
    """A finite section: ``d_coords x n_vectors`` synthesis matrix."""

    matrix: np.ndarray
    lossy: bool


class VectorSequence:
    """Common interface of finite and structured sequences."""

    kind: str
    field: str

    def sparse_at(self, n: int) -> Sparse:
        raise NotImplementedError

    def support_bound(self, n_vectors: int) -> int:
        """Largest basis index carrying a nonzero coefficient among the first ``n_vectors``."""
        best = 0
        for n in range(1, n_vectors + 1):
            sp = self.sparse_at(n)
            if sp:
                best = max(best, sp[-1][0])
        return best

    def vector_at(self, n: int, d_coords: int) -> tuple[np.ndarray, bool]:
        if n < 1:
            raise InvalidInput(f"sequence positions start at 1, got {n}")
        dtype = np.complex128 if self.field == "complex" else np.float64
        vec = np.zeros(d_coords, dtype=dtype)
        lossy = False
        for k, c in self.sparse_at(n):
            if k <= d_coords:
                vec[k - 1] = c
            else:
                lossy = True
        return vec, lossy

    def truncate(self, t: Truncation) -> Section:
        dtype = np.complex128 if self.field == "complex" else np.float64
        m = np.zeros((t.d_coords, t.n_vectors), dtype=dtype)
        lossy = False
        for n in range(1, t.n_vectors + 1):
            for k, c in self.sparse_at(n):
                if k <= t.d_coords:
                    m[k - 1, n - 1] = c
                else:
                    lossy = True
        return Section(m, lossy)


@dataclass(frozen=True, eq=False)
class FiniteSequence(VectorSequence):
    """Finitely many vectors in C^d, stored as the columns of a ``d x n`` matrix."""

    matrix: np.ndarray
    field: str = "real"
    kind = "finite"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __len__(self) -> int:
        return self.matrix.shape[1]

    def sparse_at(self, n: int) -> Sparse:
        if n > len(self):
            raise OutOfRange(f"position {n} past the end of a {len(self)}-vector sequence")
        return _sparse(self.matrix[:, n - 1].tolist())

    def support_bound(self, n_vectors: int) -> int:
        if n_vectors > len(self):
            raise OutOfRange(f"{n_vectors} vectors requested from a {len(self)}-vector sequence")
        rows = np.flatnonzero(np.any(self.matrix[:, :n_vectors] != 0, axis=1))
        return int(rows[-1]) + 1 if rows.size else 0

    def vector_at(self, n: int, d_coords: int | None = None):
        if n < 1:
            raise InvalidInput(f"sequence positions start at 1, got {n}")
        if n > len(self):
            raise OutOfRange(f"position {n} past the end of a {len(self)}-vector sequence")
        d = self.dim if d_coords is None else d_coords
        col = self.matrix[:, n - 1]
        vec = np.zeros(d, dtype=self.matrix.dtype)
        keep = min(d, self.dim)
        vec[:keep] = col[:keep]
        return vec, bool(np.any(col[keep:] != 0))

    def truncate(self, t: Truncation) -> Section:
        if t.n_vectors > len(self):
            raise OutOfRange(f"{t.n_vectors} vectors requested from a {len(self)}-vector sequence")
        m = np.zeros((t.d_coords, t.n_vectors), dtype=self.matrix.dtype)
        keep = min(t.d_coords, self.dim)
        m[:keep] = self.matrix[:keep, : t.n_vectors]
        return Section(m, bool(np.any(self.matrix[keep:, : t.n_vectors] != 0)))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteSequence)
            and self.field == other.field
            and self.matrix.shape == other.matrix.shape
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    def __hash__(self):
        return hash((self.field, self.matrix.shape, self.matrix.tobytes()))


def _normal_form(edits: Sequence[Edit]) -> tuple[tuple[Sparse, ...], int]:
    """Apply ``edits`` in order to ``e_1, e_2, ...``.

    Returns ``(head, tail_start)``: the sequence is ``head`` followed by
    ``e_tail_start, e_{tail_start+1}, ...``. The head is kept as short as
    possible, which makes the pair a canonical form: two scripts describe the
    same sequence iff their normal forms are equal.
    """
    head: list[Sparse] = []
    tail = 1

    def grow(length):
        nonlocal tail
        while len(head) < length:
            head.append(_unit(tail))
            tail += 1

    for edit in edits:
        if isinstance(edit, Drop):
            grow(edit.index)
            del head[edit.index - 1]
        elif isinstance(edit, Insert):
            grow(edit.position - 1)
            head.insert(edit.position - 1, _sparse(edit.vector))
        elif isinstance(edit, Replace):
            grow(edit.index)
            head[edit.index - 1] = _sparse(edit.vector)
        else:
            raise InvalidInput(f"unknown edit {edit!r}")
    while head and tail > 1 and head[-1] == _unit(tail - 1):
        head.pop()
        tail -= 1
    return tuple(head), tail


@dataclass(frozen=True, eq=False)
class EditedBasis(VectorSequence):
    """The standard basis of l^2 after a finite edit script.

    Edits are applied left to right; each index or position refers to the
    sequence as it stands when that edit is applied. So ``Drop(2), Drop(1)``
    removes ``e_2`` and then ``e_1``, while ``Drop(1), Drop(1)`` does the same.
    """

    edits: tuple = ()
    field: str = "real"
    kind = "structured"
    head: tuple = dataclasses.field(init=False, repr=False)
    tail_start: int = dataclasses.field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "edits", tuple(self.edits))
        head, tail = _normal_form(self.edits)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail_start", tail)

    @property
    def horizon(self) -> int:
        """``N`` such that ``f_n = e_{n + shift}`` for every ``n > N``."""
        return len(self.head)

    @property
    def shift(self) -> int:
        return self.tail_start - 1 - len(self.head)

    def sparse_at(self, n: int) -> Sparse:
        if n < 1:
            raise InvalidInput(f"sequence positions start at 1, got {n}")
        if n <= len(self.head):
            return self.head[n - 1]
        return _unit(n + self.shift)

    def __eq__(self, other):
        return (
            isinstance(other, EditedBasis)
            and self.field == other.field
            and (self.head, self.tail_start) == (other.head, other.tail_start)
        )

    def __hash__(self):
        return hash((self.field, self.head, self.tail_start))


def _rule_collision(s: RuleTerm, t: RuleTerm) -> int | None:
    """First ``n >= 1`` where both terms hit the same basis index with nonzero coefficients."""
    if (s.a, s.b) == (t.a, t.b):
        return 1 if not (s.is_zero or t.is_zero) else None
    if s.a == t.a:
        return None
    num, den = t.b - s.b, s.a - t.a
    if num % den:
        return None
    n = num // den
    if n >= 1 and s.coeff(n) != 0 and t.coeff(n) != 0:
        return n
    return None


@dataclass(frozen=True, eq=False)
class RuleSequence(VectorSequence):
    """``f_n = sum_j p_j(n) e_{a_j n + b_j}`` for ``n = 1, 2, ...``."""

    terms: tuple
    field: str = "real"
    kind = "structured"

    def __post_init__(self):
        terms = tuple(t if isinstance(t, RuleTerm) else RuleTerm(*t) for t in self.terms)
        for i, s in enumerate(terms):
            for t in terms[i + 1 :]:
                n = _rule_collision(s, t)
                if n is not None:
                    raise InvalidInput(f"rule terms {s} and {t} hit the same basis index at n={n}")
        object.__setattr__(self, "terms", terms)

    @property
    def live_terms(self) -> tuple:
        return tuple(t for t in self.terms if not t.is_zero)

    def sparse_at(self, n: int) -> Sparse:
        if n < 1:
            raise InvalidInput(f"sequence positions start at 1, got {n}")
        out = []
        for t in self.live_terms:
            c = t.coeff(n)
            if c != 0:
                out.append((t.index(n), c))
        return tuple(sorted(out))

    def support_bound(self, n_vectors: int) -> int:
        # index maps are nondecreasing and a nonzero polynomial of degree <= 2
        # cannot vanish at three consecutive integers
        best = 0
        for n in range(max(1, n_vectors - 2), n_vectors + 1):
            sp = self.sparse_at(n)
            if sp:
                best = max(best, sp[-1][0])
        return best

    def bessel_obstruction(self) -> str | None:
        """Exact reason why the rule is not Bessel, or ``None`` if it is.

        A rule is Bessel iff every live term has a constant coefficient and a
        strictly increasing index map: a growing coefficient makes
        ``||f_n||`` unbounded, and a constant index ``b`` with nonzero
        coefficient gives ``sum_n |<e_b, f_n>|^2 = infinity``. Otherwise each
        term is a bounded multiple of an isometry.
        """
        for t in self.live_terms:
            if not t.is_constant:
                return f"coefficient of e_({t.a}n{t.b:+d}) grows without bound, so sup ||f_n|| = infinity"
        for t in self.live_terms:
            if t.a == 0:
                return f"every vector has a nonzero e_{t.b} component, so sum |<e_{t.b}, f_n>|^2 = infinity"
        return None

    def __eq__(self, other):
        return isinstance(other, RuleSequence) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.terms))


def _infer_field(values, field):
    has_complex = any(isinstance(v, complex) and v.imag != 0 for v in values)
    if field is None:
        return "complex" if has_complex else "real"
    if field not in ("real", "complex"):
        raise InvalidInput(f"field must be 'real' or 'complex', got {field!r}")
    if field == "real" and has_complex:
        raise InvalidInput("real-tagged sequence has nonzero imaginary parts")
    return field


def make_finite(vectors, field: str | None = None) -> FiniteSequence:
    """Finite sequence from a list of equal-length coefficient vectors."""
    vectors = list(vectors)
    if not vectors:
        raise InvalidInput("a finite sequence needs at least one vector")
    coeffs = [_as_coeffs(v) for v in vectors]
    if len({len(v) for v in coeffs}) != 1:
        raise InvalidInput(f"ragged vector lengths {[len(v) for v in coeffs]}")
    field = _infer_field([c for v in coeffs for c in v], field)
    dtype = np.complex128 if field == "complex" else np.float64
    matrix = np.array(coeffs, dtype=dtype).T.copy()
    matrix.setflags(write=False)
    return FiniteSequence(matrix, field)


def from_matrix(matrix, field: str | None = None) -> FiniteSequence:
    """Finite sequence whose vectors are the columns of ``matrix`` (zero columns allowed)."""
    m = as_matrix(matrix)
    if field is None:
        field = "complex" if np.iscomplexobj(m) and np.any(m.imag) else "real"
    if field == "real":
        if np.iscomplexobj(m):
            if np.any(m.imag):
                raise InvalidInput("real-tagged sequence has nonzero imaginary parts")
            m = m.real
    else:
        m = m.astype(np.complex128)
    m = m.copy()
    m.setflags(write=False)
    return FiniteSequence(m, field)


def make_structured(edits: Sequence[Edit] = (), base: str = "onb", field: str | None = None) -> EditedBasis:
    """Standard basis of l^2 with a finite edit script applied."""
    if base != "onb":
        raise InvalidInput(f"only the standard orthonormal basis is supported as a base, got {base!r}")
    edits = tuple(edits)
    values = [c for e in edits if not isinstance(e, Drop) for c in e.vector]
    return EditedBasis(edits, _infer_field(values, field))


def make_rule(terms, field: str | None = None) -> RuleSequence:
    """Rule-generated sequence; ``terms`` are :class:`RuleTerm` or ``(a, b, poly)`` tuples."""
    terms = tuple(t if isinstance(t, RuleTerm) else RuleTerm(*t) for t in terms)
    return RuleSequence(terms, _infer_field([c for t in terms for c in t.poly], field))


def vector_at(s: VectorSequence, n: int, d_coords: int | None = None) -> tuple[np.ndarray, bool]:
    """The ``n``-th vector projected onto the first ``d_coords`` coordinates, plus a lossy flag."""
    if d_coords is None:
        d_coords = s.dim if isinstance(s, FiniteSequence) else s.support_bound(n)
    return s.vector_at(n, d_coords)


def lossless_truncation(s: VectorSequence, n_vectors: int | None = None) -> Truncation:
    """Smallest lossless truncation keeping the first ``n_vectors`` vectors.

    Finite sequences keep their ambient dimension.
    """
    if isinstance(s, FiniteSequence):
        return Truncation(len(s) if n_vectors is None else n_vectors, s.dim)
    if n_vectors is None:
        raise InvalidInput("structured sequences need an explicit n_vectors")
    return Truncation(n_vectors, s.support_bound(n_vectors))


def truncate(s: VectorSequence, t: Truncation) -> Section:
    return s.truncate(t)


DEFAULT_SECTION_SIZE = 16


def common_sections(f: VectorSequence, g: VectorSequence, n_vectors: int | None = None) -> tuple:
    """Lossless sections of two sequences on a shared coordinate space.

    Finite sequences fix the vector count; structured ones use ``n_vectors``
    (default: 16, or more when an edit script reaches further).
    Returns ``(S_f, S_g, truncation)``.
    """
    finite = [x for x in (f, g) if isinstance(x, FiniteSequence)]
    counts = {len(x) for x in finite}
    if len(counts) > 1:
        raise InvalidInput(f"sequences have different lengths {sorted(counts)}")
    if counts:
        n = counts.pop()
        if n_vectors is not None and n_vectors != n:
            raise InvalidInput(f"n_vectors={n_vectors} does not match the finite length {n}")
    elif n_vectors is not None:
        n = n_vectors
    else:
        n = max([DEFAULT_SECTION_SIZE] + [x.horizon + 2 for x in (f, g) if isinstance(x, EditedBasis)])
    d = max(x.dim if isinstance(x, FiniteSequence) else x.support_bound(n) for x in (f, g))
    t = Truncation(n, d)
    sf, sg = f.truncate(t), g.truncate(t)
    if sf.lossy or sg.lossy:
        raise InvalidInput("sequences do not fit a common lossless truncation")
    return sf.matrix, sg.matrix, t
