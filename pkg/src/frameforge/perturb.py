"""Perturbation certificates for synthesis operators.

Every certificate follows the same pattern: measure the hypothesis on the
concrete pair, list the conclusions the corresponding stability result
guarantees (only when the hypothesis holds), and attach the measured kernel,
corange, index and taxonomy of both objects so the guarantees can be checked
against what actually happened.

Kato's stability theorem is the engine: if ``||A u|| <= a ||u|| + b ||T u||``
with ``a < (1 - b) gamma(T)``, then ``T + A`` has kernel and corange no larger
than those of ``T`` and the same index.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass

import numpy as np

from .classify import FLAG_NAMES, Taxonomy, analyze, classify, scan
from .errors import InvalidInput
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy, as_matrix
from .seqmodel import EditedBasis, FiniteSequence, RuleSequence, VectorSequence, common_sections

__all__ = [
    "PerturbationCertificate",
    "TrialReport",
    "KERNEL_MONOTONE",
    "CORANGE_MONOTONE",
    "INDEX_PRESERVED",
    "default_seed",
    "kato_certificate",
    "pw_certificate",
    "bari_certificate",
    "stability_trials",
]

KERNEL_MONOTONE = "dim N(perturbed) <= dim N(reference)"
CORANGE_MONOTONE = "codim R(perturbed) <= codim R(reference)"
INDEX_PRESERVED = "ind(perturbed) = ind(reference)"
KATO_CONCLUSIONS = (KERNEL_MONOTONE, CORANGE_MONOTONE, INDEX_PRESERVED)

# slack when testing a supplied bound against sampled coefficient vectors
BOUND_SLACK = 1e-10
N_SAMPLES = 1000


def default_seed() -> int:
    """RNG seed for sampled checks: ``$FRAMEFORGE_SEED`` or 0."""
    raw = os.environ.get("FRAMEFORGE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InvalidInput(f"FRAMEFORGE_SEED must be an integer, got {raw!r}") from None


def _preserves(flag: str) -> str:
    return f"preserves {flag}"


@dataclass(frozen=True)
class PerturbationCertificate:
    theorem: str
    params: dict
    gamma_of_reference: float
    hypothesis_met: bool
    guaranteed: tuple
    empirical: dict
    notes: tuple = ()
    provenance: str = "exact"

    def violations(self) -> list[str]:
        """Guaranteed conclusions contradicted by the measured data."""
        ref, new = self.empirical["reference"], self.empirical["perturbed"]
        bad = []
        for claim in self.guaranteed:
            if claim == KERNEL_MONOTONE:
                ok = new["kernel_dim"] <= ref["kernel_dim"]
            elif claim == CORANGE_MONOTONE:
                ok = new["corange_dim"] <= ref["corange_dim"]
            elif claim == INDEX_PRESERVED:
                ok = new["index"] == ref["index"]
            else:
                flag = claim.removeprefix("preserves ")
                ok = bool(new.get("taxonomy", {}).get(flag))
            if not ok:
                bad.append(claim)
        return bad

    @property
    def empirically_consistent(self) -> bool:
        return not self.violations()

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["guaranteed"] = list(self.guaranteed)
        d["notes"] = list(self.notes)
        d["violations"] = self.violations()
        return _finite_floats(d)


def _finite_floats(obj):
    # JSON has no infinity; report it as a string
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _finite_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_floats(v) for v in obj]
    return obj


def _dims(a) -> dict:
    return {"kernel_dim": a.kernel_dim, "corange_dim": a.corange_dim, "index": a.index, "gamma": a.gamma}


def _sigma_max(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def _check_bound(diff, ref, lam, mu, rng, samples=N_SAMPLES) -> tuple[bool, str]:
    """Test ``||diff c|| <= lam ||ref c|| + mu ||c||`` for all coefficient vectors ``c``.

    First tries the sufficient operator inequality
    ``diff^* diff <= lam^2 ref^* ref + mu^2 I`` (exact), then falls back to
    ``samples`` random unit vectors plus the right singular vectors of
    ``diff``. Returns ``(holds, method)`` with method ``"exact"`` or
    ``"sampled"``.
    """
    n = diff.shape[1]
    if n == 0:
        return True, "exact"
    gap = diff.conj().T @ diff - lam**2 * (ref.conj().T @ ref) - mu**2 * np.eye(n)
    if float(np.linalg.eigvalsh((gap + gap.conj().T) / 2).max()) <= BOUND_SLACK:
        return True, "exact"
    complex_field = np.iscomplexobj(diff) or np.iscomplexobj(ref)
    c = rng.standard_normal((n, samples))
    if complex_field:
        c = c + 1j * rng.standard_normal((n, samples))
    c = np.hstack([c, np.linalg.svd(diff)[2].conj().T])
    c = c / np.linalg.norm(c, axis=0)
    lhs = np.linalg.norm(diff @ c, axis=0)
    rhs = lam * np.linalg.norm(ref @ c, axis=0) + mu
    return bool(np.all(lhs <= rhs + BOUND_SLACK)), "sampled"


def kato_certificate(t, a_mat, tol: TolerancePolicy = DEFAULT_TOLERANCE, *, a: float | None = None,
                     b: float = 0.0, seed: int | None = None) -> PerturbationCertificate:
    """Kato stability check for ``T`` perturbed to ``T + A``.

    Without an explicit ``a`` the bound ``a = s_max(A)`` is used, which holds
    for every ``b >= 0``. An explicit ``a`` is checked against
    ``||A u|| <= a ||u|| + b ||T u||`` before it is trusted.
    """
    t, a_mat = as_matrix(t), as_matrix(a_mat)
    if t.shape != a_mat.shape:
        raise InvalidInput(f"shape mismatch {t.shape} vs {a_mat.shape}")
    if b < 0 or (a is not None and a < 0):
        raise InvalidInput("Kato constants a, b must be nonnegative")
    ref = analyze(t, tol)
    new = analyze(t + a_mat, tol)
    notes = []
    bound_ok, method = True, "exact"
    if a is None:
        a = _sigma_max(a_mat)
    else:
        rng = np.random.default_rng(default_seed() if seed is None else seed)
        bound_ok, method = _check_bound(a_mat, t, b, a, rng)
        if not bound_ok:
            notes.append(f"supplied (a, b) = ({a}, {b}) rejected: ||A u|| <= a||u|| + b||T u|| fails")
    met = bound_ok and b < 1 and ref.gamma > 0 and a < (1 - b) * ref.gamma
    if not met:
        notes.append("hypothesis unmet, conclusion not asserted")
    return PerturbationCertificate(
        theorem="kato",
        params={"a": a, "b": b, "bound_check": method},
        gamma_of_reference=ref.gamma,
        hypothesis_met=met,
        guaranteed=KATO_CONCLUSIONS if met else (),
        empirical={"reference": _dims(ref), "perturbed": _dims(new)},
        notes=tuple(notes),
    )


def _class_guarantees(reference: Taxonomy) -> tuple:
    return tuple(_preserves(flag) for flag in FLAG_NAMES if getattr(reference, flag))


def _empirical(f, g, sf, sg, tol, schedule):
    ref, new = analyze(sf, tol), analyze(sg, tol)
    tf, tg = classify(f, tol, schedule), classify(g, tol, schedule)
    reference = dict(_dims(ref), taxonomy=tf.to_dict())
    perturbed = dict(_dims(new), taxonomy=tg.to_dict())
    return ref, tf, {"reference": reference, "perturbed": perturbed}


def _provenance(f, g) -> str:
    return "exact" if isinstance(f, FiniteSequence) and isinstance(g, FiniteSequence) else "truncation"


def _rule_gamma(f, tol, schedule) -> tuple[float, str]:
    """Reduced minimum modulus of a rule-based reference from its finite-section scan."""
    report = scan(f, schedule, tol)
    if not report.stabilized:
        return 0.0, "reference scan did not stabilize; gamma unavailable"
    return report.steps[-1].gamma, "gamma of the reference taken from its stabilized scan (extrapolated)"


def pw_certificate(f: VectorSequence, g: VectorSequence, lam: float | None = None, mu: float | None = None,
                   tol: TolerancePolicy = DEFAULT_TOLERANCE, *, n_vectors: int | None = None,
                   seed: int | None = None, schedule=(8, 16, 32, 64)) -> PerturbationCertificate:
    """Paley-Wiener-type check: ``||sum c (g - f)|| <= lam ||sum c f|| + mu ||c||``.

    When neither constant is given, ``lam = 0`` and ``mu = s_max(S_g - S_f)``.
    The hypothesis is ``mu < (1 - lam) gamma(S_f)``; it then preserves every
    class ``f`` belongs to.
    """
    sf, sg, t = common_sections(f, g, n_vectors)
    diff = sg - sf
    estimated = lam is None and mu is None
    if lam is None:
        lam = 0.0
    if mu is None:
        mu = _sigma_max(diff)
    if lam < 0 or mu < 0:
        raise InvalidInput("lambda and mu must be nonnegative")
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    bound_ok, method = _check_bound(diff, sf, lam, mu, rng)
    ref, tf, empirical = _empirical(f, g, sf, sg, tol, schedule)
    gamma, provenance = ref.gamma, _provenance(f, g)
    notes = []
    if isinstance(f, RuleSequence):
        gamma, note = _rule_gamma(f, tol, schedule)
        notes.append(note)
        provenance = "truncation-extrapolated"
    if estimated:
        notes.append("constants estimated: lambda = 0, mu = s_max(S_g - S_f)")
    if not bound_ok:
        notes.append(f"supplied (lambda, mu) = ({lam}, {mu}) rejected by sampled coefficient vectors")
    if lam >= 1:
        notes.append("lambda >= 1: mu < (1 - lambda) gamma cannot hold")
    met = bound_ok and gamma > 0 and mu < (1 - lam) * gamma
    if not met:
        notes.append("hypothesis unmet, conclusion not asserted")
    if provenance == "truncation":
        notes.append(f"gamma measured on a section of {t.n_vectors} vectors in {t.d_coords} coordinates")
    return PerturbationCertificate(
        theorem="pw_type",
        params={"lambda": lam, "mu": mu, "bound_check": method},
        gamma_of_reference=gamma,
        hypothesis_met=met,
        guaranteed=(KATO_CONCLUSIONS + _class_guarantees(tf)) if met else (),
        empirical=empirical,
        notes=tuple(notes),
        provenance=provenance,
    )


def _tail_terms(s: VectorSequence) -> dict:
    """Rule terms describing the sequence past its edit horizon, keyed by index map."""
    if isinstance(s, EditedBasis):
        return {(1, s.shift): (1.0, 0.0, 0.0)}
    terms = {}
    for term in s.live_terms:
        terms[(term.a, term.b)] = tuple(complex(c) for c in term.poly) + (0.0,) * (3 - len(term.poly))
    return {k: tuple(complex(c) for c in v) for k, v in terms.items()}


def _horizon(s: VectorSequence) -> int:
    return s.horizon if isinstance(s, EditedBasis) else 0


def bari_certificate(f: VectorSequence, g: VectorSequence, variant: str = "gamma",
                     tol: TolerancePolicy = DEFAULT_TOLERANCE, *, n_vectors: int | None = None,
                     schedule=(8, 16, 32, 64)) -> PerturbationCertificate:
    """Quadratic-closeness check with ``q = sum ||f_n - g_n||^2``.

    ``variant="prb"``: ``q < infinity`` and ``f`` a pseudo-Riesz basis keep
    ``g`` a pseudo-Riesz basis (same index).
    ``variant="gamma"``: ``q < gamma(S_f)^2`` preserves every class of ``f``;
    Kato is applied with ``a = sqrt(q)``.

    For structured pairs the sum past the section is exactly zero when both
    sequences follow the same tail description, and infinite otherwise.
    """
    if variant not in ("prb", "gamma"):
        raise InvalidInput(f"variant must be 'prb' or 'gamma', got {variant!r}")
    finite = [isinstance(x, FiniteSequence) for x in (f, g)]
    if any(finite) and not all(finite):
        raise InvalidInput("quadratic closeness compares two finite or two structured sequences")
    notes = []
    if not any(finite):
        n_vectors = max(n_vectors or 0, _horizon(f) + 2, _horizon(g) + 2, 16)
    sf, sg, t = common_sections(f, g, n_vectors)
    q = float(np.sum(np.abs(sg - sf) ** 2))
    if not any(finite):
        if _tail_terms(f) == _tail_terms(g):
            notes.append(f"tail past n={t.n_vectors} contributes exactly 0")
        else:
            notes.append("tails differ, so sum ||f_n - g_n||^2 diverges")
            q = math.inf
    ref, tf, empirical = _empirical(f, g, sf, sg, tol, schedule)
    gamma, provenance = ref.gamma, _provenance(f, g)
    if isinstance(f, RuleSequence) and variant == "gamma":
        gamma, note = _rule_gamma(f, tol, schedule)
        notes.append(note)
        provenance = "truncation-extrapolated"
    if variant == "prb":
        met = math.isfinite(q) and tf.pseudo_riesz_basis
        if not tf.pseudo_riesz_basis:
            notes.append("reference is not a pseudo-Riesz basis")
        guaranteed = (_preserves("bessel"), _preserves("pseudo_riesz_basis"), INDEX_PRESERVED)
        params = {"q": q}
    else:
        met = math.isfinite(q) and gamma > 0 and q < gamma**2
        guaranteed = KATO_CONCLUSIONS + _class_guarantees(tf)
        params = {"q": q, "a": math.sqrt(q), "b": 0.0}
    if not met:
        notes.append("hypothesis unmet, conclusion not asserted")
    return PerturbationCertificate(
        theorem=f"bari_{variant}",
        params=params,
        gamma_of_reference=gamma,
        hypothesis_met=met,
        guaranteed=guaranteed if met else (),
        empirical=empirical,
        notes=tuple(notes),
        provenance=provenance,
    )


TRIAL_SHAPES = ((4, 6), (6, 4), (5, 5))


@dataclass(frozen=True)
class TrialReport:
    seed: int
    trials: int
    hypothesis_met: int
    unasserted: int
    violations: tuple
    records: tuple

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _random_rank(rng, shape, rank) -> np.ndarray:
    m, n = shape
    return rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))


def stability_trials(seed: int | None = None, trials: int = 1000, tol: TolerancePolicy = DEFAULT_TOLERANCE,
                     *, hypothesis_scale: float = 0.9, deficiency: int | None = None) -> TrialReport:
    """Random check of Kato's conclusions.

    Trial ``i`` draws from its own generator seeded by ``(seed, i)``: a shape
    from :data:`TRIAL_SHAPES`, a rank deficiency in 0..2 (unless fixed by
    ``deficiency``), ``T`` of that rank, ``b`` uniform in [0, 0.5) and ``A``
    rescaled to ``s_max(A) = hypothesis_scale * (1 - b) * gamma(T)``.
    ``hypothesis_scale >= 1`` produces negative controls.
    """
    if trials < 1:
        raise InvalidInput("trials must be at least 1")
    seed = default_seed() if seed is None else seed
    records, violations = [], []
    met_count = unasserted = 0
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        shape = TRIAL_SHAPES[rng.integers(len(TRIAL_SHAPES))]
        defic = int(rng.integers(3)) if deficiency is None else deficiency
        t = _random_rank(rng, shape, min(shape) - defic)
        b = float(rng.uniform(0.0, 0.5))
        a_mat = rng.standard_normal(shape)
        gamma = analyze(t, tol).gamma
        a_mat *= hypothesis_scale * (1 - b) * gamma / _sigma_max(a_mat)
        cert = kato_certificate(t, a_mat, tol, b=b)
        rec = {"trial": i, "shape": list(shape), "deficiency": defic, "a": cert.params["a"], "b": b,
               "gamma": gamma, "hypothesis_met": cert.hypothesis_met}
        if cert.hypothesis_met:
            met_count += 1
            bad = cert.violations()
            rec["violations"] = bad
            violations.extend(f"trial {i}: {v}" for v in bad)
        else:
            unasserted += 1
            rec["status"] = "hypothesis unmet, conclusion not asserted"
        records.append(rec)
    return TrialReport(seed, trials, met_count, unasserted, tuple(violations), tuple(records))
