"""Synthesis-operator diagnostics and the frame / Riesz / pseudo-Riesz taxonomy.

The synthesis matrix of a sequence has the vectors as columns. Its kernel and
the orthogonal complement of its range decide every class:

=====================  ===========================================
frame                  range is everything (corange 0)
Riesz sequence         injective with closed range (kernel 0)
pseudo-frame           closed range of finite codimension
pseudo-Riesz sequence  closed range, finite-dimensional kernel
pseudo-Riesz basis     Fredholm (both of the above)
near-Riesz basis       frame and pseudo-Riesz sequence
=====================  ===========================================

In finite dimensions every matrix is Fredholm, so the ``pseudo_*`` flags are
always true for :class:`~frameforge.seqmodel.FiniteSequence` inputs. They
carry information only for structured sequences in l^2.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInput, UnsupportedExact
from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    as_matrix,
    numeric_rank,
    orthonormal_complement_basis,
    svd,
)
from .seqmodel import (
    EditedBasis,
    FiniteSequence,
    RuleSequence,
    Truncation,
    VectorSequence,
    from_matrix,
    lossless_truncation,
)

__all__ = [
    "SynthesisAnalysis",
    "Taxonomy",
    "ScanReport",
    "FLAG_NAMES",
    "DEFAULT_SCAN_SIZES",
    "analyze",
    "classify_finite",
    "classify_structured",
    "exact_block",
    "scan",
    "classify",
    "excess_bruteforce",
    "extend_to_frame",
    "reduce_to_riesz",
]

FLAG_NAMES = (
    "bessel",
    "frame",
    "riesz_sequence",
    "riesz_basis",
    "quasi_frame",
    "pseudo_frame",
    "pseudo_riesz_sequence",
    "pseudo_riesz_basis",
    "near_riesz_basis",
)

DEFAULT_SCAN_SIZES = (8, 16, 32, 64)

# growth factor of the Bessel bound across a scan that counts as divergence
DIVERGENCE_FACTOR = 10.0


@dataclass(frozen=True)
class SynthesisAnalysis:
    rows: int
    cols: int
    singular_values: tuple
    rank: int
    bessel_bound: float
    frame_lower: float
    riesz_lower: float
    gamma: float
    kernel_dim: int
    corange_dim: int
    index: int

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["singular_values"] = list(self.singular_values)
        return d


def analyze(m, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> SynthesisAnalysis:
    """Bounds, reduced minimum modulus and Fredholm data of a synthesis matrix.

    ``gamma`` is the smallest nonzero singular value. For a matrix this equals
    ``inf ||S c|| / dist(c, ker S)`` over ``c`` outside the kernel.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    s = svd(m).singular_values
    r = numeric_rank(s, tol)
    sq = [float(x) ** 2 for x in s]
    return SynthesisAnalysis(
        rows=rows,
        cols=cols,
        singular_values=tuple(float(x) for x in s),
        rank=r,
        bessel_bound=sq[0] if sq else 0.0,
        frame_lower=sq[rows - 1] if 0 < rows == r else 0.0,
        riesz_lower=sq[cols - 1] if 0 < cols == r else 0.0,
        gamma=float(s[r - 1]) if r else 0.0,
        kernel_dim=cols - r,
        corange_dim=rows - r,
        index=cols - rows,
    )


@dataclass(frozen=True)
class Taxonomy:
    bessel: bool = True
    frame: bool = False
    riesz_sequence: bool = False
    riesz_basis: bool = False
    quasi_frame: bool = False
    pseudo_frame: bool = False
    pseudo_riesz_sequence: bool = False
    pseudo_riesz_basis: bool = False
    near_riesz_basis: bool = False
    excess: int | None = None
    deficit: int | None = None
    provenance: str = "exact"

    @classmethod
    def from_dimensions(cls, kernel: int | None, corange: int | None, *, quasi: bool = True,
                        provenance: str = "exact") -> "Taxonomy":
        """Flags of a Bessel sequence with closed range (if ``quasi``).

        ``None`` for ``kernel`` or ``corange`` means infinite dimension.
        """
        prs = quasi and kernel is not None
        pf = quasi and corange is not None
        frame = pf and corange == 0
        riesz = prs and kernel == 0
        return cls(
            bessel=True,
            frame=frame,
            riesz_sequence=riesz,
            riesz_basis=frame and riesz,
            quasi_frame=quasi,
            pseudo_frame=pf,
            pseudo_riesz_sequence=prs,
            pseudo_riesz_basis=pf and prs,
            near_riesz_basis=frame and prs,
            excess=kernel if prs else None,
            deficit=corange if pf else None,
            provenance=provenance,
        )

    def flags(self) -> dict:
        return {name: getattr(self, name) for name in FLAG_NAMES}

    def lattice_violations(self) -> list[str]:
        """Implication-lattice clauses this taxonomy breaks (empty when consistent)."""
        bad = []
        if self.riesz_basis != (self.frame and self.riesz_sequence):
            bad.append("riesz_basis <=> frame and riesz_sequence")
        if self.pseudo_riesz_basis != (self.pseudo_frame and self.pseudo_riesz_sequence):
            bad.append("pseudo_riesz_basis <=> pseudo_frame and pseudo_riesz_sequence")
        if self.near_riesz_basis != (self.frame and self.pseudo_riesz_sequence):
            bad.append("near_riesz_basis <=> frame and pseudo_riesz_sequence")
        if (
            (self.frame and not self.pseudo_frame)
            or (self.riesz_sequence and not self.pseudo_riesz_sequence)
            or ((self.frame or self.riesz_sequence) and not self.quasi_frame)
            or (not self.bessel and any(v for k, v in self.flags().items() if k != "bessel"))
        ):
            bad.append("frame => pseudo_frame, riesz_sequence => pseudo_riesz_sequence, "
                       "frame or riesz_sequence => quasi_frame, every class => bessel")
        if (self.excess is not None) != self.pseudo_riesz_sequence or (
            (self.deficit is not None) != self.pseudo_frame
        ):
            bad.append("excess defined <=> pseudo_riesz_sequence, deficit defined <=> pseudo_frame")
        return bad

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


NOT_BESSEL = Taxonomy(bessel=False, provenance="truncation-extrapolated")


def classify_finite(s: FiniteSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Taxonomy:
    if not isinstance(s, FiniteSequence):
        raise InvalidInput("classify_finite needs a finite sequence")
    a = analyze(s.matrix, tol)
    return Taxonomy.from_dimensions(a.kernel_dim, a.corange_dim)


def exact_block(s: EditedBasis) -> Truncation:
    """Truncation capturing an edited basis exactly.

    Past the block the sequence is ``e_{D+1}, e_{D+2}, ...`` and touches no
    coordinate inside it, so the synthesis operator is ``block (+) identity``.
    The block always carries at least one tail vector, which makes its
    extreme singular values those of the whole operator.
    """
    n_head = s.horizon
    d = max(s.tail_start - 1, s.support_bound(n_head)) + 1
    return Truncation(n_head + d - s.tail_start + 1, d)


def classify_structured(s: EditedBasis, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Taxonomy:
    """Exact taxonomy of a finitely edited standard basis."""
    if isinstance(s, RuleSequence):
        raise UnsupportedExact("rule-based sequences are classified by scan(), not exactly")
    if not isinstance(s, EditedBasis):
        raise InvalidInput("classify_structured needs an edited-basis sequence")
    a = analyze(s.truncate(exact_block(s)).matrix, tol)
    return Taxonomy.from_dimensions(a.kernel_dim, a.corange_dim)


@dataclass(frozen=True)
class ScanReport:
    schedule: tuple
    steps: tuple
    stabilized: bool
    trends: dict
    extrapolated_taxonomy: Taxonomy
    divergence_notes: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "schedule": [dataclasses.asdict(t) for t in self.schedule],
            "steps": [a.to_dict() for a in self.steps],
            "stabilized": self.stabilized,
            "trends": dict(self.trends),
            "extrapolated_taxonomy": self.extrapolated_taxonomy.to_dict(),
            "divergence_notes": list(self.divergence_notes),
        }


def _trend(values: Sequence[int]) -> str:
    if len(set(values)) == 1:
        return "stable"
    if all(b > a for a, b in zip(values, values[1:])):
        return "growing"
    return "unsettled"


def _as_schedule(s: VectorSequence, schedule) -> tuple:
    out = []
    for t in schedule:
        out.append(t if isinstance(t, Truncation) else lossless_truncation(s, int(t)))
    if not out:
        raise InvalidInput("scan schedule is empty")
    if any(b.n_vectors <= a.n_vectors for a, b in zip(out, out[1:])):
        raise InvalidInput("scan schedule must be strictly increasing in n_vectors")
    return tuple(out)


def scan(s: VectorSequence, schedule=DEFAULT_SCAN_SIZES,
         tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ScanReport:
    """Finite-section scan of a structured sequence.

    ``schedule`` holds :class:`Truncation` objects or plain vector counts
    (turned into the smallest lossless truncation).

    The scan is stabilized when, over the last three steps, the reduced
    minimum modulus changes by less than ``tol.stabilization_rtol`` and the
    kernel and corange dimensions are each either constant or strictly
    increasing. A strictly increasing dimension is extrapolated as infinite.
    """
    if isinstance(s, FiniteSequence):
        raise InvalidInput("scan is for structured sequences; use classify_finite")
    schedule = _as_schedule(s, schedule)
    steps = []
    for t in schedule:
        section = s.truncate(t)
        if section.lossy:
            raise InvalidInput(f"truncation {t} clips coefficients; use a lossless d_coords")
        steps.append(analyze(section.matrix, tol))

    notes = []
    bessel = True
    if isinstance(s, RuleSequence):
        why = s.bessel_obstruction()
        if why:
            notes.append(f"not Bessel: {why}")
            bessel = False
    m_first, m_last = steps[0].bessel_bound, steps[-1].bessel_bound
    if m_last > DIVERGENCE_FACTOR * m_first and m_last > tol.abs_floor:
        notes.append(
            f"Bessel bound grows without bound: M = {m_first:.6g} at n={schedule[0].n_vectors} "
            f"-> {m_last:.6g} at n={schedule[-1].n_vectors} (not Bessel)"
        )
        bessel = False

    window = steps[-3:]
    trends = {
        "kernel_dim": _trend([a.kernel_dim for a in window]),
        "corange_dim": _trend([a.corange_dim for a in window]),
    }
    gammas = [a.gamma for a in window]
    scale = max(abs(gammas[-1]), tol.abs_floor)
    gamma_stable = all(abs(y - x) / scale < tol.stabilization_rtol for x, y in zip(gammas, gammas[1:]))
    trends["gamma"] = "stable" if gamma_stable else "unsettled"
    stabilized = (
        len(steps) >= 3
        and gamma_stable
        and trends["kernel_dim"] != "unsettled"
        and trends["corange_dim"] != "unsettled"
    )

    if not bessel:
        tax = NOT_BESSEL
    elif not stabilized:
        tax = Taxonomy(bessel=True, provenance="truncation-extrapolated")
        notes.append("finite sections did not stabilize; only the Bessel flag is reported")
    else:
        last = steps[-1]
        tax = Taxonomy.from_dimensions(
            last.kernel_dim if trends["kernel_dim"] == "stable" else None,
            last.corange_dim if trends["corange_dim"] == "stable" else None,
            quasi=last.gamma > 0 or last.rank == 0,
            provenance="truncation-extrapolated",
        )
    return ScanReport(tuple(schedule), tuple(steps), stabilized, trends, tax, tuple(notes))


def classify(s: VectorSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE,
             schedule=DEFAULT_SCAN_SIZES) -> Taxonomy:
    """Exact taxonomy where possible, scan extrapolation for rule-based sequences."""
    if isinstance(s, FiniteSequence):
        return classify_finite(s, tol)
    if isinstance(s, EditedBasis):
        return classify_structured(s, tol)
    return scan(s, schedule, tol).extrapolated_taxonomy


def _kernel_dim(m: np.ndarray, tol: TolerancePolicy) -> int:
    return m.shape[1] - numeric_rank(svd(m).singular_values, tol)


def excess_bruteforce(s: FiniteSequence, k_max: int = 4,
                      tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int | None:
    """Fewest deletions (at most ``k_max``) leaving linearly independent vectors.

    Plain subset search, independent of the kernel computation it is meant to
    check. Returns ``None`` when no deletion of ``k_max`` or fewer vectors works.
    """
    if not 0 <= k_max <= 4:
        raise InvalidInput("k_max must be between 0 and 4")
    m = s.matrix
    n = m.shape[1]
    for k in range(min(k_max, n) + 1):
        for removed in itertools.combinations(range(n), k):
            keep = [j for j in range(n) if j not in removed]
            if _kernel_dim(m[:, keep], tol) == 0:
                return k
    return None


def extend_to_frame(s: FiniteSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> FiniteSequence:
    """Append an orthonormal basis of the range complement; the result is a frame."""
    q = orthonormal_complement_basis(s.matrix, tol)
    if q.shape[1] == 0:
        return s
    return from_matrix(np.hstack([s.matrix, q.astype(s.matrix.dtype, copy=False)]), s.field)


def reduce_to_riesz(s: FiniteSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Greedily delete ``kernel_dim`` vectors until the rest are independent.

    Each round deletes, among the vectors whose removal keeps the rank, the
    one leaving the largest smallest-nonzero singular value. Ties go to the
    lowest position. Returns ``(reduced_sequence, removed_positions)`` with
    1-based positions in the original sequence.
    """
    m = s.matrix
    alive = list(range(m.shape[1]))
    removed = []
    rank = numeric_rank(svd(m).singular_values, tol)
    while len(alive) > rank:
        scores = []
        for j in alive:
            rest = m[:, [i for i in alive if i != j]]
            a = analyze(rest, tol)
            scores.append(a.gamma if a.rank == rank else -1.0)
        best = max(scores)
        pick = next(j for j, sc in zip(alive, scores) if best - sc <= tol.threshold(best))
        alive.remove(pick)
        removed.append(pick + 1)
    return from_matrix(m[:, alive], s.field), tuple(removed)
