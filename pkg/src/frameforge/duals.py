"""Canonical duals, pseudo-duals and pseudo-coduals.

For a pair ``(f, g)`` the *dual defect* is ``S_f S_g^* - I`` and the *codual
defect* is ``S_g^* S_f - I``. ``g`` is a pseudo-(co)dual when the defect has
finite rank; reconstruction then holds on the defect's kernel, a subspace of
codimension equal to that rank.

Both constructions here use the Moore-Penrose inverse. With ``F = S S^*`` and
``G = S^* S`` one has ``F^+ S = S G^+ = (S^+)^*``, so the pseudo-dual
``g_n = F^+ f_n`` and the pseudo-codual ``g_n = sum_k (G^+)_{kn} f_k`` are the
same sequence. They are computed from ``S^+`` directly, which avoids squaring
the condition number. Any other pseudo-inverse gives another valid pseudo-dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .classify import Taxonomy, classify, classify_finite
from .errors import InvalidInput, NotAFrame
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy, defect_rank, pseudo_inverse, svd
from .seqmodel import FiniteSequence, RuleSequence, VectorSequence, common_sections, from_matrix

__all__ = [
    "DualityCertificate",
    "PartnerCheck",
    "canonical_dual",
    "pseudo_dual_construct",
    "pseudo_codual_construct",
    "verify_duality",
    "check_partner_class",
    "default_rank_budget",
]

BIORTHOGONALITY_ATOL = 1e-8


@dataclass(frozen=True)
class DualityCertificate:
    relation: str
    defect_matrix: np.ndarray
    defect_rank: int
    rank_budget: int
    bessel_flag_of_partner: bool
    verdict: str
    notes: tuple = ()

    @property
    def is_pseudo(self) -> bool:
        return self.verdict != "not-a-pseudo-dual"

    @property
    def codimension(self) -> int:
        """Codimension of the subspace on which the (co)dual relation holds exactly."""
        return self.defect_rank

    def valid_subspace(self) -> np.ndarray:
        """Orthonormal basis of the defect's kernel, where reconstruction is exact."""
        _, _, v = svd(self.defect_matrix)
        return v[:, self.defect_rank:]

    def to_dict(self, include_matrix: bool = False) -> dict:
        d = {
            "relation": self.relation,
            "defect_rank": self.defect_rank,
            "rank_budget": self.rank_budget,
            "codimension": self.codimension,
            "bessel_flag_of_partner": self.bessel_flag_of_partner,
            "verdict": self.verdict,
            "defect_norm": float(np.linalg.norm(self.defect_matrix, 2)) if self.defect_matrix.size else 0.0,
            "notes": list(self.notes),
        }
        if include_matrix:
            d["defect_matrix"] = _matrix_to_json(self.defect_matrix)
        return d


def _matrix_to_json(m: np.ndarray):
    if np.iscomplexobj(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return m.tolist()


def _verdict(rank: int, budget: int) -> str:
    if rank == 0:
        return "exact-dual"
    if rank < budget:
        return f"pseudo-dual({rank})"
    return "not-a-pseudo-dual"


def _product(sf: np.ndarray, sg: np.ndarray, relation: str) -> np.ndarray:
    if relation == "dual":
        return sf @ sg.conj().T
    if relation == "codual":
        return sg.conj().T @ sf
    raise InvalidInput(f"relation must be 'dual' or 'codual', got {relation!r}")


def _certificate(sf, sg, relation, budget, tol, bessel=True, notes=()) -> DualityCertificate:
    product = _product(sf, sg, relation)
    r = defect_rank(product, tol)
    defect = product - np.eye(product.shape[0])
    return DualityCertificate(relation, defect, r, budget, bessel, _verdict(r, budget), tuple(notes))


def default_rank_budget(taxonomy: Taxonomy) -> int:
    """``max(excess, deficit) + 2``; an undefined count contributes nothing."""
    return max(taxonomy.excess or 0, taxonomy.deficit or 0) + 2


def _require_finite(s) -> FiniteSequence:
    if not isinstance(s, FiniteSequence):
        raise InvalidInput("dual constructions work on finite sequences; truncate structured ones first")
    return s


def canonical_dual(s: FiniteSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> FiniteSequence:
    """``F^{-1} f_n`` with the frame operator ``F = S S^*``."""
    s = _require_finite(s)
    if not classify_finite(s, tol).frame:
        raise NotAFrame("canonical dual requested for a sequence that is not a frame")
    frame_op = s.matrix @ s.matrix.conj().T
    return from_matrix(np.linalg.solve(frame_op, s.matrix), s.field)


def _moore_penrose_dual(s: FiniteSequence, tol: TolerancePolicy) -> FiniteSequence:
    return from_matrix(pseudo_inverse(s.matrix, tol).conj().T, s.field)


def pseudo_dual_construct(s: FiniteSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Bessel pseudo-dual ``g_n = R f_n`` with ``R`` the pseudo-inverse of ``S S^*``.

    The dual defect is minus the projection onto the range complement, so its
    rank is the deficit.
    """
    s = _require_finite(s)
    g = _moore_penrose_dual(s, tol)
    budget = default_rank_budget(classify_finite(s, tol))
    return g, _certificate(s.matrix, g.matrix, "dual", budget, tol)


def pseudo_codual_construct(s: FiniteSequence, tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Bessel pseudo-codual from the pseudo-inverse ``R`` of the Gram matrix.

    ``d_n = R e_n`` and ``g_n = sum_k d_n^k f_k``. The codual defect is minus
    the projection onto the kernel, so its rank is the excess.
    """
    s = _require_finite(s)
    g = _moore_penrose_dual(s, tol)
    budget = default_rank_budget(classify_finite(s, tol))
    return g, _certificate(s.matrix, g.matrix, "codual", budget, tol)


def _partner_bessel(g: VectorSequence) -> tuple[bool, str | None]:
    if isinstance(g, RuleSequence):
        why = g.bessel_obstruction()
        return why is None, (f"partner is not Bessel: {why}" if why else None)
    return True, None


def verify_duality(f: VectorSequence, g: VectorSequence, relation: str = "dual",
                   rank_budget: int | None = None, tol: TolerancePolicy = DEFAULT_TOLERANCE,
                   n_vectors: int | None = None) -> DualityCertificate:
    """Certificate for a user-supplied pair under ``relation`` ('dual' or 'codual').

    Structured sequences are compared on a common lossless section of
    ``n_vectors`` vectors. Without an explicit ``rank_budget`` the default is
    ``max(excess, deficit) + 2`` from the taxonomy of ``f``.
    """
    sf, sg, t = common_sections(f, g, n_vectors)
    if rank_budget is None:
        rank_budget = default_rank_budget(classify(f, tol))
    bessel, note = _partner_bessel(g)
    notes = [f"section: {t.n_vectors} vectors in {t.d_coords} coordinates"]
    if note:
        notes.append(note)
    if relation == "codual":
        gram = sg.conj().T @ sf
        if np.allclose(gram, np.eye(t.n_vectors), rtol=0, atol=BIORTHOGONALITY_ATOL):
            notes.append("biorthogonal: <g_i, f_j> = delta_ij")
    return _certificate(sf, sg, relation, rank_budget, tol, bessel, notes)


class PartnerCheck(NamedTuple):
    status: str  # "pass" | "fail" | "hypotheses-unmet"
    clause: str


def check_partner_class(cert: DualityCertificate, partner_taxonomy: Taxonomy,
                        source_taxonomy: Taxonomy | None = None) -> PartnerCheck:
    """Check the class a Bessel pseudo-(co)dual must belong to.

    * a Bessel pseudo-dual is a pseudo-frame;
    * a Bessel pseudo-codual is a pseudo-Riesz sequence;
    * if the source is a pseudo-Riesz basis, so is the partner;
    * an exact Bessel dual of a frame is a frame, and an exact Bessel codual
      (biorthogonal sequence) of a Riesz sequence is a Riesz sequence.

    Non-Bessel partners are outside every one of these statements and yield
    ``hypotheses-unmet`` rather than a failure.
    """
    if not cert.is_pseudo:
        return PartnerCheck("hypotheses-unmet", f"not a pseudo-{cert.relation}: defect rank {cert.defect_rank}")
    if not (cert.bessel_flag_of_partner and partner_taxonomy.bessel):
        return PartnerCheck("hypotheses-unmet", "theorem hypotheses unmet (not Bessel)")
    clauses = []
    if cert.relation == "dual":
        clauses.append((partner_taxonomy.pseudo_frame, "a Bessel pseudo-dual is a pseudo-frame"))
    else:
        clauses.append((partner_taxonomy.pseudo_riesz_sequence,
                        "a Bessel pseudo-codual is a pseudo-Riesz sequence"))
    if source_taxonomy is not None:
        if source_taxonomy.pseudo_riesz_basis:
            clauses.append((partner_taxonomy.pseudo_riesz_basis,
                            "a Bessel pseudo-(co)dual of a pseudo-Riesz basis is a pseudo-Riesz basis"))
        if cert.defect_rank == 0 and cert.relation == "dual" and source_taxonomy.frame:
            clauses.append((partner_taxonomy.frame, "a Bessel dual of a frame is a frame"))
        if cert.defect_rank == 0 and cert.relation == "codual" and source_taxonomy.riesz_sequence:
            clauses.append((partner_taxonomy.riesz_sequence,
                            "a Bessel biorthogonal sequence of a Riesz sequence is a Riesz sequence"))
    for ok, clause in clauses:
        if not ok:
            return PartnerCheck("fail", clause)
    return PartnerCheck("pass", "; ".join(c for _, c in clauses))
