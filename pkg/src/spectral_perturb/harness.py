"""
Matrix generators and Monte Carlo campaigns.

Two deterministic families reproduce the sharpness examples for the
population-gap bounds; two random ensembles (spiked symmetric and
rectangular low-rank plus noise) feed soundness campaigns.

Random streams
--------------
Trial ``i`` of a campaign with seed ``s`` draws from
``numpy.random.Generator(PCG64(SeedSequence(s, spawn_key=(i,))))``.  The
stream depends only on ``(s, i)``, so a campaign gives identical records
whether its trials run serially or in a process pool.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .bounds import BlockSelection
from .matrix_core import as_symmetric

KINDS = ("spiked_symmetric", "rectangular")


class SpecError(ValueError):
    """Invalid ensemble specification; ``field`` names the offending entry."""

    def __init__(self, field_name, msg):
        super().__init__(f"{field_name}: {msg}")
        self.field = field_name


class CampaignViolation(RuntimeError):
    """A trial produced an observed distance above an applicable bound."""

    def __init__(self, trial_index, spec, report, matrices):
        super().__init__(f"soundness violation in trial {trial_index}: {report.violations()}")
        self.trial_index = trial_index
        self.spec = spec
        self.report = report
        self.matrices = matrices


@dataclass(frozen=True)
class EnsembleSpec:
    """Random ensemble and campaign parameters.

    For ``spiked_symmetric`` the spectrum holds the ``p`` population
    eigenvalues.  For ``rectangular`` it holds the nonzero singular values
    (at most ``min(p, q)``; the rest are zero).
    """

    kind: str
    p: int
    spectrum: tuple
    noise_scale: float
    trials: int
    seed: int
    r: int = 1
    s: int = 1
    q: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "spectrum", tuple(float(x) for x in self.spectrum))
        if self.kind not in KINDS:
            raise SpecError("kind", f"must be one of {KINDS}, got {self.kind!r}")
        if not isinstance(self.p, (int, np.integer)) or self.p < 1:
            raise SpecError("p", f"must be a positive integer, got {self.p!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise SpecError("trials", f"must be >= 1, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise SpecError("seed", "must be an unsigned 64-bit integer")
        if not (math.isfinite(self.noise_scale) and self.noise_scale >= 0):
            raise SpecError("noise_scale", f"must be finite and >= 0, got {self.noise_scale!r}")
        spec = np.array(self.spectrum)
        if spec.size == 0 or not np.all(np.isfinite(spec)):
            raise SpecError("spectrum", "must be a non-empty list of finite values")
        if np.any(np.diff(spec) > 0):
            raise SpecError("spectrum", "must be in nonincreasing order")
        if self.kind == "spiked_symmetric":
            if spec.size != self.p:
                raise SpecError("spectrum", f"needs p = {self.p} values, got {spec.size}")
            limit = self.p
        else:
            if self.q is None or self.q < 1:
                raise SpecError("q", "rectangular ensembles need a positive q")
            if spec.size > min(self.p, self.q):
                raise SpecError("spectrum", f"at most min(p, q) = {min(self.p, self.q)} singular values")
            if spec[-1] < 0:
                raise SpecError("spectrum", "singular values must be nonnegative")
            limit = spec.size
        if not 1 <= self.r <= self.s <= limit:
            raise SpecError("r/s", f"need 1 <= r <= s <= {limit}, got r={self.r}, s={self.s}")

    @property
    def selection(self):
        return BlockSelection(int(self.r), int(self.s))

    def to_dict(self):
        return {
            "kind": self.kind, "p": int(self.p), "q": None if self.q is None else int(self.q),
            "spectrum": list(self.spectrum), "noise_scale": float(self.noise_scale),
            "trials": int(self.trials), "seed": int(self.seed), "r": int(self.r), "s": int(self.s),
        }


def spiked_spectrum(p, d, top, bulk=1.0):
    """``d`` copies of ``top`` followed by ``p - d`` copies of ``bulk``."""
    return tuple([float(top)] * d + [float(bulk)] * (p - d))


@dataclass
class TrialRecord:
    trial_index: int
    reports: dict
    wall_time: float = 0.0


@dataclass
class CampaignResult:
    spec: EnsembleSpec
    records: list
    summary: dict = field(default_factory=dict)


def trial_rng(seed, trial_index):
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(int(seed), spawn_key=(int(trial_index),))))


def haar_orthogonal(n, rng):
    """Haar-distributed ``n x n`` orthogonal matrix (QR of a Gaussian, sign-corrected)."""
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def gen_sharpness_diag(p, d, eps):
    """Diagonal pair whose top-``d`` eigenspaces are orthogonal.

    ``pop = diag(3 (d times), 1 (p - d times))`` and
    ``samp = diag(2 - eps (p - d times), 2 (d times))``.
    """
    if not (isinstance(p, (int, np.integer)) and isinstance(d, (int, np.integer))):
        raise SpecError("p/d", "must be integers")
    if not 1 <= d <= p // 2:
        raise SpecError("d", f"need 1 <= d <= floor(p/2) = {p // 2}, got d={d}")
    if not eps > 0:
        raise SpecError("epsilon", f"must be > 0, got {eps!r}")
    pop = np.diag([3.0] * d + [1.0] * (p - d))
    samp = np.diag([2.0 - eps] * (p - d) + [2.0] * d)
    return pop, samp


def gen_sharpness_rotation(eps):
    """``diag(3, 1)`` and its conjugate by the rotation with sine ``eps``."""
    if not 0 < eps < 1:
        raise SpecError("epsilon", f"must satisfy 0 < epsilon < 1, got {eps!r}")
    c = math.sqrt(1.0 - eps * eps)
    rot = np.array([[c, -eps], [eps, c]])
    pop = np.diag([3.0, 1.0])
    samp = as_symmetric(rot @ pop @ rot.T)
    return pop, samp


def gen_spiked_symmetric(spec, trial_index):
    """``pop = Q diag(spectrum) Q^T`` with Haar ``Q``; ``samp = pop + noise * W``.

    ``W = (G + G^T) / sqrt(2)`` for a standard Gaussian ``G``: off-diagonal
    entries have variance 1 and diagonal entries variance 2.
    """
    if spec.kind != "spiked_symmetric":
        raise SpecError("kind", f"expected spiked_symmetric, got {spec.kind!r}")
    rng = trial_rng(spec.seed, trial_index)
    p = spec.p
    q = haar_orthogonal(p, rng)
    pop = (q * np.array(spec.spectrum)) @ q.T
    pop = 0.5 * (pop + pop.T)
    g = rng.standard_normal((p, p))
    w = (g + g.T) / math.sqrt(2.0)
    return pop, pop + spec.noise_scale * w


def gen_rectangular(spec, trial_index):
    """``A = U diag(sigma) V^T`` with Haar factors; ``Ahat = A + noise * G``."""
    if spec.kind != "rectangular":
        raise SpecError("kind", f"expected rectangular, got {spec.kind!r}")
    rng = trial_rng(spec.seed, trial_index)
    p, q = spec.p, spec.q
    u = haar_orthogonal(p, rng)
    v = haar_orthogonal(q, rng)
    k = len(spec.spectrum)
    a = (u[:, :k] * np.array(spec.spectrum)) @ v[:, :k].T
    g = rng.standard_normal((p, q))
    return a, a + spec.noise_scale * g


def factor_report(pop, samp, sel):
    """Gram-difference factor inequalities as a report of two checks."""
    op_lhs, op_rhs, f_lhs, f_rhs = bounds.svd_factor_check(pop, samp)
    report = bounds.BoundReport(mode="svd-factor", sel=sel, dim=np.shape(pop)[1])
    report.add(bounds.BoundCheck("factor_op", op_lhs, op_rhs, tol=1e-10 * max(1.0, op_rhs)))
    report.add(bounds.BoundCheck("factor_frob", f_lhs, f_rhs, tol=1e-10 * max(1.0, f_rhs)))
    return report


def evaluate_pair(kind, pop, samp, sel, strict=False):
    """Reports for one matrix pair, as recorded in a campaign trial."""
    if kind == "spiked_symmetric":
        return {"symmetric": bounds.evaluate_symmetric(pop, samp, sel, strict=strict)}
    return {
        "svd-right": bounds.svd_variant_bounds(pop, samp, sel, "right", strict=strict),
        "svd-left": bounds.svd_variant_bounds(pop, samp, sel, "left", strict=strict),
        "svd-factor": factor_report(pop, samp, sel),
    }


def _generate(spec, trial_index):
    if spec.kind == "spiked_symmetric":
        return gen_spiked_symmetric(spec, trial_index)
    return gen_rectangular(spec, trial_index)


def run_trial(spec, trial_index):
    start = time.perf_counter()
    pop, samp = _generate(spec, trial_index)
    try:
        reports = evaluate_pair(spec.kind, pop, samp, spec.selection)
    except bounds.PreconditionError as exc:
        raise bounds.PreconditionError(f"trial {trial_index}: {exc}") from exc
    except Exception as exc:
        raise RuntimeError(f"trial {trial_index} failed: {exc}") from exc
    for report in reports.values():
        if report.violations():
            raise CampaignViolation(trial_index, spec, report, (pop, samp))
    return TrialRecord(trial_index, reports, time.perf_counter() - start)


def _run_trial_args(args):
    return run_trial(*args)


def summarize(records):
    """Tightness statistics per bound over all recorded trials.

    For each ``mode/check`` key: ``min``, ``mean`` and ``max`` of
    ``bound / observed`` over trials where it is defined, plus counts of
    trials where the ratio is undefined (observed 0) or the bound was
    inapplicable.  ``numerator_term`` counts which term attained the min in
    the numerator.
    """
    ratios = {}
    undefined = {}
    inapplicable = {}
    terms = {}
    for rec in records:
        for mode, report in rec.reports.items():
            if report.numerator_term:
                key = f"{mode}"
                terms.setdefault(key, {"operator": 0, "frobenius": 0})
                terms[key][report.numerator_term] += 1
            for check in report.checks.values():
                key = f"{mode}/{check.name}"
                ratios.setdefault(key, [])
                undefined.setdefault(key, 0)
                inapplicable.setdefault(key, 0)
                if not check.applicable:
                    inapplicable[key] += 1
                elif check.ratio is None:
                    undefined[key] += 1
                else:
                    ratios[key].append(check.ratio)
    per_bound = {}
    for key in sorted(ratios):
        vals = ratios[key]
        per_bound[key] = {
            "count": len(vals),
            "min": min(vals) if vals else None,
            "mean": math.fsum(vals) / len(vals) if vals else None,
            "max": max(vals) if vals else None,
            "undefined": undefined[key],
            "inapplicable": inapplicable[key],
        }
    return {
        "trials": len(records),
        "violations": 0,
        "ratios": per_bound,
        "numerator_term": {k: terms[k] for k in sorted(terms)},
    }


def run_campaign(spec, parallel=1):
    """Run every trial of ``spec`` and aggregate tightness statistics.

    Trials may run in ``parallel`` worker processes; records are merged in
    trial-index order, so the result does not depend on scheduling.

    Raises
    ------
    CampaignViolation
        On the first trial (lowest index) with a violated bound.
    """
    args = [(spec, i) for i in range(spec.trials)]
    if parallel > 1 and spec.trials > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            chunk = max(1, spec.trials // (4 * parallel))
            records = list(pool.map(_run_trial_args, args, chunksize=chunk))
    else:
        records = [run_trial(*a) for a in args]
    return CampaignResult(spec=spec, records=records, summary=summarize(records))


def sharpness_diag_row(p, d, eps):
    """Alignment distance against the variant bound for the diagonal example."""
    pop, samp = gen_sharpness_diag(p, d, eps)
    report = bounds.evaluate_symmetric(pop, samp, BlockSelection(1, d))
    check = report["variant_align"]
    return {
        "example": "diag", "p": p, "d": d, "epsilon": eps,
        "observed": check.observed, "bound": check.bound, "ratio": check.ratio,
        "observed_sin_theta": report["variant_sin"].observed,
        "expected_observed": math.sqrt(2 * d),
        "expected_bound": math.sqrt(2 * d) * (1 + eps),
        "expected_ratio": 1 + eps,
    }, report


def sharpness_rotation_row(eps):
    """Top-eigenvector sine against the corollary bound for the rotation example."""
    pop, samp = gen_sharpness_rotation(eps)
    report = bounds.evaluate_symmetric(pop, samp, BlockSelection(1, 1))
    check = report["corollary_sin"]
    dist = report["corollary_vector"].observed
    return {
        "example": "rotation", "epsilon": eps,
        "observed": check.observed, "bound": check.bound, "ratio": check.ratio,
        "vector_distance_sq": dist * dist,
        "expected_observed": eps,
        "expected_bound": 2 * eps,
        "expected_ratio": 2.0,
        "expected_vector_distance_sq": 2 - 2 * math.sqrt(1 - eps * eps),
    }, report
