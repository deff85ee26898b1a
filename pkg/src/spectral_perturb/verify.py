"""
Randomised property checks for the algebraic identities and inequalities
that underpin the bounds, plus bound soundness on random instances.

Each property is evaluated on ``trials`` independent random instances.
Instance ``i`` of property ``k`` (its position in the suite) draws from
``SeedSequence(seed, spawn_key=(k, i))``, so a failure can be replayed from
``(seed, property, trial)`` alone.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds, subspace
from .harness import EnsembleSpec, evaluate_pair, gen_rectangular, gen_spiked_symmetric, haar_orthogonal
from .matrix_core import (
    frobenius_norm,
    kron,
    operator_norm,
    sym_eig,
    vec,
    weyl_check,
    wielandt_hoffman_check,
)

ALGEBRAIC_TOL = 1e-12
IDENTITY_TOL = 1e-10
SPECTRAL_TOL = 1e-8


@dataclass
class PropertyResult:
    name: str
    trials: int = 0
    failures: int = 0
    first_failure: dict | None = None
    worst: float = 0.0

    @property
    def passed(self):
        return self.failures == 0


@dataclass
class SuiteResult:
    suite: str
    seed: int
    trials: int
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def lines(self):
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{status} {r.name}: {r.trials - r.failures}/{r.trials} instances, worst slack {r.worst:.3e}"
            out.append(line)
            if r.first_failure is not None:
                f = r.first_failure
                out.append(f"  first failure: seed={f['seed']} property={f['property']} "
                           f"trial={f['trial']} {f['detail']}")
        out.append(f"{'PASS' if self.passed else 'FAIL'} suite={self.suite} seed={self.seed} trials={self.trials}")
        return out


def _rng(seed, k, i):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(k, i))))


def _frame(rng, p, d):
    return haar_orthogonal(p, rng)[:, :d]


def _sym(rng, p):
    g = rng.standard_normal((p, p))
    return (g + g.T) / 2


# Each property takes (rng, corrupt) and returns (excess, detail) where
# excess > 0 means the property failed by that margin.

def lemma_columns(rng, corrupt):
    m, n = rng.integers(2, 8, size=2)
    p, q = rng.integers(1, m + 1), rng.integers(1, n + 1)
    if corrupt:
        p, q = m, n
    a = rng.standard_normal((m, n))
    u, w = _frame(rng, m, p), _frame(rng, n, q)
    if corrupt:
        u = 2 * u
    lhs, rhs = frobenius_norm(u.T @ a @ w), frobenius_norm(a)
    return lhs - rhs - ALGEBRAIC_TOL, f"||U^T A W||_F={lhs!r} ||A||_F={rhs!r}"


def lemma_rows(rng, corrupt):
    # orthonormal rows need at least as many columns as rows
    m, n = rng.integers(1, 6, size=2)
    p, q = rng.integers(m, 8), rng.integers(n, 8)
    a = rng.standard_normal((m, n))
    u, w = _frame(rng, p, m).T, _frame(rng, q, n).T
    if corrupt:
        u = 2 * u
    lhs, rhs = frobenius_norm(u.T @ a @ w), frobenius_norm(a)
    return abs(lhs - rhs) - IDENTITY_TOL, f"||U^T A W||_F={lhs!r} ||A||_F={rhs!r}"


def weyl(rng, corrupt):
    p = int(rng.integers(2, 10))
    s, e = _sym(rng, p), 0.3 * _sym(rng, p)
    diff = e if not corrupt else 0.5 * e
    lhs, rhs, _ = weyl_check(sym_eig(s), sym_eig(s + e), operator_norm(diff))
    return lhs - rhs - IDENTITY_TOL, f"max|dlam|={lhs!r} ||E||_op={rhs!r}"


def wielandt_hoffman(rng, corrupt):
    p = int(rng.integers(2, 10))
    s, e = _sym(rng, p), 0.3 * _sym(rng, p)
    diff = e if not corrupt else 0.5 * e
    lhs, rhs, _ = wielandt_hoffman_check(sym_eig(s), sym_eig(s + e), frobenius_norm(diff))
    return lhs - rhs - IDENTITY_TOL, f"||dlam||={lhs!r} ||E||_F={rhs!r}"


def vec_kron(rng, corrupt):
    m, n, k, l = rng.integers(1, 5, size=4)
    a = rng.standard_normal((m, n))
    b = rng.standard_normal((n, k))
    c = rng.standard_normal((k, l))
    left = vec(a @ b @ c)
    right = kron(c.T, a) @ vec(b if not corrupt else b.T.reshape(b.shape))
    err = float(np.linalg.norm(left - right))
    return err - ALGEBRAIC_TOL, f"||vec(ABC) - (C^T kron A) vec(B)||={err!r}"


def _frames_pair(rng):
    p = int(rng.integers(2, 9))
    d = int(rng.integers(1, p + 1))
    return _frame(rng, p, d), _frame(rng, p, d), d


def sin_theta_identity(rng, corrupt):
    vhat, v, d = _frames_pair(rng)
    sin = subspace.sin_theta_frobenius(vhat, v)
    ident = d - frobenius_norm(vhat.T @ v) ** 2
    angles = subspace.principal_angles(vhat, v).angles
    by_angles = math.fsum(np.sin(angles) ** 2)
    if corrupt:
        sin = sin + 1e-6
    err = max(abs(sin * sin - ident), abs(sin * sin - by_angles))
    return err - SPECTRAL_TOL, f"sin^2={sin * sin!r} d-||VhatTV||^2={ident!r} sum sin^2={by_angles!r}"


def alignment_chain(rng, corrupt):
    vhat, v, d = _frames_pair(rng)
    align = subspace.procrustes_align(vhat, v)
    cosines = subspace.principal_angles(vhat, v).cosines
    sin = subspace.sin_theta_frobenius(vhat, v)
    dist2 = align.distance**2 if not corrupt else align.distance**2 + 1e-6
    expected = 2 * d - 2 * math.fsum(cosines)
    err = max(abs(dist2 - expected) - SPECTRAL_TOL, dist2 - 2 * sin * sin - SPECTRAL_TOL)
    return err, f"dist^2={dist2!r} 2d-2sum cos={expected!r} 2 sin^2={2 * sin * sin!r}"


def sin2theta(rng, corrupt):
    p = int(rng.integers(2, 9))
    v = _frame(rng, p, 1)[:, 0]
    vhat = _frame(rng, p, 1)[:, 0]
    vhat = subspace.orient_sign(vhat, v)
    lhs, rhs, _ = subspace.sin2theta_identity_check(vhat, v)
    if corrupt:
        rhs += 1e-6
    return abs(lhs - rhs) - IDENTITY_TOL, f"lhs={lhs!r} rhs={rhs!r}"


def _spiked_instance(rng):
    p = int(rng.integers(3, 10))
    r = int(rng.integers(1, p + 1))
    s = int(rng.integers(r, p + 1))
    lam = np.sort(rng.standard_normal(p) * 3)[::-1]
    q = haar_orthogonal(p, rng)
    pop = (q * lam) @ q.T
    pop = (pop + pop.T) / 2
    samp = pop + float(rng.uniform(0.01, 0.5)) * _sym(rng, p)
    return pop, samp, bounds.BlockSelection(r, s)


def proof_chain(rng, corrupt):
    pop, samp, sel = _spiked_instance(rng)
    first, middle, last = bounds.proof_chain(pop, samp, sel)
    if corrupt:
        first = last + 1.0
    err = max(first - middle, middle - last) - SPECTRAL_TOL
    return err, f"gap*sin={first!r} middle={middle!r} ||Vhat Lam - Sigma Vhat||={last!r}"


IDENTITIES = {
    "lemma_orthonormal_columns": lemma_columns,
    "lemma_orthonormal_rows": lemma_rows,
    "weyl": weyl,
    "wielandt_hoffman": wielandt_hoffman,
    "vec_kron": vec_kron,
    "sin_theta_identity": sin_theta_identity,
    "alignment_chain": alignment_chain,
    "sin2theta_identity": sin2theta,
    "proof_chain_lower_bound": proof_chain,
}


def _bound_failures(reports):
    excess, detail = -math.inf, ""
    for mode, report in reports.items():
        for c in report.checks.values():
            if c.applicable:
                e = c.observed - c.bound - c.tol
                if e > excess:
                    excess, detail = e, f"{mode}/{c.name}: observed={c.observed!r} bound={c.bound!r}"
    return excess, detail


def symmetric_bounds(rng, corrupt):
    pop, samp, sel = _spiked_instance(rng)
    reports = evaluate_pair("spiked_symmetric", pop, samp, sel)
    if corrupt:
        reports["symmetric"].add(bounds.BoundCheck("forced", 1.0, 0.0))
    return _bound_failures(reports)


def rectangular_bounds(rng, corrupt):
    p, q = (int(x) for x in rng.integers(2, 8, size=2))
    k = min(p, q)
    sigma = tuple(np.sort(rng.uniform(0.5, 4.0, size=k))[::-1])
    r = int(rng.integers(1, k + 1))
    s = int(rng.integers(r, k + 1))
    spec = EnsembleSpec("rectangular", p, sigma, float(rng.uniform(0.005, 0.2)), 1,
                        int(rng.integers(0, 2**32)), r=r, s=s, q=q)
    a, ahat = gen_rectangular(spec, 0)
    try:
        reports = evaluate_pair("rectangular", a, ahat, spec.selection)
    except bounds.GapError:
        return -math.inf, "gap not positive (skipped)"
    if corrupt:
        reports["svd-right"].add(bounds.BoundCheck("forced", 1.0, 0.0))
    return _bound_failures(reports)


def spiked_bounds(rng, corrupt):
    p = int(rng.integers(4, 16))
    spec = EnsembleSpec("spiked_symmetric", p, (5.0,) + (1.0,) * (p - 1),
                        float(rng.uniform(0.01, 0.2)), 1, int(rng.integers(0, 2**32)))
    pop, samp = gen_spiked_symmetric(spec, 0)
    reports = evaluate_pair("spiked_symmetric", pop, samp, spec.selection)
    if corrupt:
        reports["symmetric"].add(bounds.BoundCheck("forced", 1.0, 0.0))
    return _bound_failures(reports)


BOUNDS = {
    "symmetric_bounds_random_spectrum": symmetric_bounds,
    "symmetric_bounds_spiked": spiked_bounds,
    "singular_vector_bounds": rectangular_bounds,
}

SUITES = {
    "identities": IDENTITIES,
    "bounds": BOUNDS,
    "all": {**IDENTITIES, **BOUNDS},
}


def run_property(name, fn, k, trials, seed, corrupt=False):
    res = PropertyResult(name)
    worst = -math.inf
    for i in range(trials):
        excess, detail = fn(_rng(seed, k, i), corrupt)
        res.trials += 1
        worst = max(worst, excess)
        if excess > 0:
            res.failures += 1
            if res.first_failure is None:
                res.first_failure = {"seed": int(seed), "property": k, "trial": i, "detail": detail}
    res.worst = worst
    return res


def run_suite(suite="all", trials=50, seed=0, corrupt=()):
    """Run a named suite; ``corrupt`` lists property names to sabotage (test hook).

    ``worst`` in each result is the largest ``lhs - rhs - tol`` seen, so a
    passing property has a negative value.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    props = SUITES[suite]
    order = list(SUITES["all"])
    out = SuiteResult(suite=suite, seed=int(seed), trials=int(trials))
    for name, fn in props.items():
        k = order.index(name)
        out.results.append(run_property(name, fn, k, trials, seed, corrupt=name in corrupt))
    return out
