"""Named example sequences with their expected classification.

Parameterized names take one argument in parentheses, e.g.
``shifted-basis-pair(3)`` or ``scaled-onb(0.5)``. :func:`list_names` shows
each template with its default argument.

Paired entries carry a ``partner`` sequence and the expected outcome of
:func:`frameforge.duals.verify_duality` for ``(sequence, partner)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .classify import NOT_BESSEL, Taxonomy
from .errors import InvalidInput, NotFound
from .seqmodel import (Drop, Replace, RuleTerm, VectorSequence, from_matrix, make_finite, make_rule,
                       make_structured)

__all__ = ["Claim", "GalleryEntry", "get", "list_names", "triangular_basis"]


@dataclass(frozen=True)
class Claim:
    text: str
    source: str


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    sequence: VectorSequence
    expected_taxonomy: Taxonomy
    expected_notes: tuple = ()
    suggested_truncations: tuple = (8, 16, 32, 64)
    partner: VectorSequence | None = None
    partner_taxonomy: Taxonomy | None = None
    expected_pair: dict = field(default_factory=dict)
    # closed form of the partner's Bessel bound on a section of n vectors
    partner_bessel_bound: object = None

    @property
    def is_pair(self) -> bool:
        return self.partner is not None

    def expectations(self) -> dict:
        d = {
            "name": self.name,
            "expected_taxonomy": self.expected_taxonomy.to_dict(),
            "expected_notes": [{"text": c.text, "source": c.source} for c in self.expected_notes],
            "suggested_truncations": list(self.suggested_truncations),
        }
        if self.is_pair:
            d["partner_taxonomy"] = self.partner_taxonomy.to_dict()
            d["expected_pair"] = dict(self.expected_pair)
        return d


def _onb(_arg=None) -> GalleryEntry:
    return GalleryEntry(
        "onb",
        make_finite(np.eye(4), field="complex"),
        Taxonomy.from_dimensions(0, 0),
        (Claim("an orthonormal basis is a Riesz basis", "definitions"),),
    )


def _scaled_onb(lam: float) -> GalleryEntry:
    if lam == 0:
        raise InvalidInput("scaled-onb needs a nonzero scale")
    return GalleryEntry(
        f"scaled-onb({_fmt(lam)})",
        make_finite(lam * np.eye(4), field="complex"),
        Taxonomy.from_dimensions(0, 0),
        (Claim(f"{_fmt(lam)} times an orthonormal basis is a Riesz basis with bounds {lam * lam:g}",
               "definitions; classical Paley-Wiener regime"),),
    )


def _mercedes_benz(_arg=None) -> GalleryEntry:
    h = math.sqrt(3) / 2
    vectors = [[0.0, 1.0], [-h, -0.5], [h, -0.5]]
    return GalleryEntry(
        "mercedes-benz",
        make_finite(vectors),
        Taxonomy.from_dimensions(1, 0),
        (Claim("tight frame with frame operator (3/2) I; removing one vector leaves a Riesz basis",
               "standard finite frame example; near-Riesz basis definition"),),
    )


def _duplicate_e1(_arg=None) -> GalleryEntry:
    return GalleryEntry(
        "duplicate-e1",
        make_structured([Replace(2, (1.0,))]),
        Taxonomy.from_dimensions(1, 1),
        (
            Claim("{e1, e1, e3, e4, ...} is neither a frame nor a Riesz sequence",
                  "introductory example"),
            Claim("it becomes a Riesz basis after removing one vector and adding one", "introductory example"),
            Claim("excess equals the kernel dimension of the synthesis operator", "excess characterization"),
        ),
    )


def _dropped_head(m: int) -> GalleryEntry:
    return GalleryEntry(
        f"dropped-head({m})",
        make_structured([Drop(k) for k in range(m, 0, -1)]),
        Taxonomy.from_dimensions(0, m),
        (Claim(f"removing the first {m} basis vectors leaves a Riesz sequence whose span misses {m} dimensions",
               "pseudo-frame definition"),),
    )


def _odd_basis(_arg=None) -> GalleryEntry:
    f = make_rule([RuleTerm(2, -1)])
    g = make_rule([RuleTerm(2, -1), RuleTerm(2, 0, (0.0, 1.0))])
    return GalleryEntry(
        "odd-basis-with-growing-codual",
        f,
        Taxonomy.from_dimensions(0, None, provenance="truncation-extrapolated"),
        (
            Claim("f_n = e_{2n-1} is a Riesz sequence but not a pseudo-frame", "pseudo-codual example"),
            Claim("g_n = e_{2n-1} + n e_{2n} is biorthogonal to f", "pseudo-codual example"),
            Claim("g is clearly not Bessel", "pseudo-codual example"),
        ),
        partner=g,
        partner_taxonomy=NOT_BESSEL,
        expected_pair={"codual_defect_rank": 0, "dual_verdict": "not-a-pseudo-dual", "partner_bessel": False},
        partner_bessel_bound=lambda n: 1 + n * n,
    )


def _shifted_pair(m: int) -> GalleryEntry:
    f = make_structured([Drop(k) for k in range(m, 0, -1)])
    g = make_rule([RuleTerm(0, 1), RuleTerm(1, m)])
    return GalleryEntry(
        f"shifted-basis-pair({m})",
        f,
        Taxonomy.from_dimensions(0, m),
        (
            Claim(f"f_i = e_(m+i) with m = {m} is a pseudo-Riesz basis", "pseudo-dual example"),
            Claim("g_i = e_1 + e_(m+i) satisfies <g_i, f_j> = delta_ij", "pseudo-dual example"),
            Claim(f"g reconstructs on a subspace of codimension {m}", "pseudo-dual example"),
            Claim("g is not Bessel", "pseudo-dual example"),
        ),
        suggested_truncations=(4, 8, 16, 32, 64),
        partner=g,
        partner_taxonomy=NOT_BESSEL,
        expected_pair={"codual_defect_rank": 0, "dual_defect_rank": m, "partner_bessel": False},
        # S_g^* S_g = I + (all-ones matrix) on any section of n vectors
        partner_bessel_bound=lambda n: 1 + n,
    )


TRIANGULAR_SIZE = 8
TRIANGULAR_C = 0.5


def triangular_basis(size: int = TRIANGULAR_SIZE, c: float = TRIANGULAR_C) -> tuple[np.ndarray, np.ndarray]:
    """``(H, H_dual)``: columns ``h_n = U e_n`` and their biorthogonal partners.

    ``U`` is upper-triangular with ones on the diagonal and ``c`` on the
    superdiagonal; its inverse has entries ``(-c)^(j-i)`` for ``j >= i``, so
    ``H_dual = (U^{-1})^*`` is known in closed form.
    """
    u = np.eye(size) + c * np.eye(size, k=1)
    i, j = np.indices((size, size))
    u_inv = np.where(j >= i, (-c) ** (j - i).clip(min=0), 0.0)
    return u, u_inv.conj().T


def _shifted_pair_triangular(m: int) -> GalleryEntry:
    if m >= TRIANGULAR_SIZE:
        raise InvalidInput(f"m must be below {TRIANGULAR_SIZE}")
    h, h_dual = triangular_basis()
    f = from_matrix(h[:, m:])
    g = from_matrix(h_dual[:, [0]] + h_dual[:, m:])
    return GalleryEntry(
        f"shifted-basis-pair-triangular({m})",
        f,
        Taxonomy.from_dimensions(0, m),
        (
            Claim("f_i = h_(m+i) for a non-orthogonal Riesz basis h", "pseudo-dual example"),
            Claim("g_i = h~_1 + h~_(m+i) is biorthogonal to f", "pseudo-dual example"),
            Claim(f"g reconstructs on a subspace of codimension {m}", "pseudo-dual example"),
        ),
        partner=g,
        partner_taxonomy=Taxonomy.from_dimensions(0, m),
        expected_pair={"codual_defect_rank": 0, "dual_defect_rank": m, "partner_bessel": True},
    )


def _int_arg(text: str) -> int:
    if not re.fullmatch(r"[1-9]\d*", text):
        raise InvalidInput(f"expected a positive integer, got {text!r}")
    return int(text)


def _float_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InvalidInput(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise InvalidInput(f"expected a finite number, got {text!r}")
    return value


def _fmt(x: float) -> str:
    return f"{x:g}"


# name -> (builder, argument parser or None, default argument)
_REGISTRY = {
    "onb": (_onb, None, None),
    "mercedes-benz": (_mercedes_benz, None, None),
    "duplicate-e1": (_duplicate_e1, None, None),
    "odd-basis-with-growing-codual": (_odd_basis, None, None),
    "dropped-head": (_dropped_head, _int_arg, "2"),
    "scaled-onb": (_scaled_onb, _float_arg, "1.5"),
    "shifted-basis-pair": (_shifted_pair, _int_arg, "2"),
    "shifted-basis-pair-triangular": (_shifted_pair_triangular, _int_arg, "2"),
}

_NAME = re.compile(r"(?P<base>[a-z0-9-]+?)(?:\((?P<arg>[^()]*)\))?")


def list_names() -> list[str]:
    """Entry names, parameterized ones shown with their default argument."""
    names = [base if parse is None else f"{base}({default})" for base, (_, parse, default) in _REGISTRY.items()]
    return sorted(names)


def get(name: str) -> GalleryEntry:
    match = _NAME.fullmatch(name.strip())
    if not match or match["base"] not in _REGISTRY:
        raise NotFound(f"no gallery entry named {name!r}; try one of {list_names()}")
    build, parse, default = _REGISTRY[match["base"]]
    arg = match["arg"]
    if parse is None:
        if arg is not None:
            raise NotFound(f"gallery entry {match['base']!r} takes no argument")
        return build()
    return build(parse(default if arg is None else arg))
