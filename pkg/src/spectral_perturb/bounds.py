"""
Eigenvector and singular-vector perturbation bounds.

Every bound is packaged as a :class:`BoundCheck` (observed distance next to
the bound value), and checks are collected into a :class:`BoundReport` for
one (population, sample, r, s) instance.  Index conventions are 1-based to
match the usual statement of these results: the block ``r..s`` selects the
``r``-th to ``s``-th largest eigenvalues (or singular values).

Bounds implemented
------------------
classical
    ``||sin Theta||`` <= ``||Sigmahat - Sigma|| / delta`` where ``delta`` is the
    distance from the population interval ``[lam_s, lam_r]`` to the sample
    eigenvalues outside the block.  Frobenius or operator norm.
variant
    ``||sin Theta||_F`` <= ``2 min(sqrt(d) ||E||_op, ||E||_F) / gap`` with a
    population-only eigen-gap, and the alignment distance bound with an extra
    factor ``sqrt(2)``.
sharp numerator
    As ``variant`` with numerator ``||Vhat Lam - Sigma Vhat||_F``.
corollary
    The ``d = 1`` case, also bounding ``||vhat - v||`` for an oriented pair.
svd
    Singular-vector version with numerator multiplied by
    ``2 sigma_1 + ||Ahat - A||_op`` and a gap in squared singular values.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import subspace
from .matrix_core import (
    as_dense,
    as_symmetric,
    frobenius_norm,
    operator_norm,
    svd,
    sym_eig,
)

SOUNDNESS_TOL = 1e-8
ORDERING_TOL = 1e-10
RANK_TOL = 1e-10
SQRT2 = math.sqrt(2.0)


class PreconditionError(ValueError):
    """A theorem's hypothesis does not hold for the given input."""


class GapError(PreconditionError):
    """The population eigen-gap (or singular-value gap) is not positive."""

    def __init__(self, msg, gap=None):
        super().__init__(msg)
        self.gap = gap


class BoundViolation(RuntimeError):
    """An observed distance exceeded a bound whose preconditions held.

    This indicates a bug (or a numerical failure) and carries the offending
    report in ``report``.
    """

    def __init__(self, msg, report):
        super().__init__(msg)
        self.report = report


@dataclass(frozen=True)
class BlockSelection:
    r: int
    s: int

    def __post_init__(self):
        if not (isinstance(self.r, (int, np.integer)) and isinstance(self.s, (int, np.integer))):
            raise PreconditionError("block indices must be integers")
        if not 1 <= self.r <= self.s:
            raise PreconditionError(f"need 1 <= r <= s, got r={self.r}, s={self.s}")

    @property
    def d(self):
        return self.s - self.r + 1

    def check(self, p):
        if self.s > p:
            raise PreconditionError(f"block end s={self.s} exceeds dimension {p}")
        return self


@dataclass(frozen=True)
class GapInfo:
    upper_gap: float
    lower_gap: float
    classical_delta: float | None = None

    @property
    def population_gap(self):
        return min(self.upper_gap, self.lower_gap)


@dataclass(frozen=True)
class BoundCheck:
    """Observed distance against one bound.

    ``bound is None`` marks the bound as inapplicable; ``note`` then says why.
    """

    name: str
    observed: float
    bound: float | None
    note: str = ""
    tol: float = SOUNDNESS_TOL

    @property
    def applicable(self):
        return self.bound is not None

    @property
    def holds(self):
        if self.bound is None:
            return None
        return self.observed <= self.bound + self.tol

    @property
    def ratio(self):
        """Tightness ``bound / observed``; None when undefined."""
        if self.bound is None or self.observed == 0:
            return None
        return self.bound / self.observed


@dataclass
class BoundReport:
    mode: str
    sel: BlockSelection
    dim: int
    gap: GapInfo | None = None
    diff_op_norm: float = 0.0
    diff_frob_norm: float = 0.0
    numerator_term: str = ""
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    degenerate_full_block: bool = False

    def add(self, check):
        self.checks[check.name] = check
        return check

    def merge(self, other):
        for check in other.checks.values():
            self.add(check)
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)
        self.degenerate_full_block = self.degenerate_full_block or other.degenerate_full_block
        return self

    def __getitem__(self, name):
        return self.checks[name]

    @property
    def inapplicable(self):
        return {c.name: c.note for c in self.checks.values() if not c.applicable}

    def violations(self):
        return [c for c in self.checks.values() if c.holds is False]

    def raise_on_violation(self):
        bad = self.violations()
        if bad:
            desc = ", ".join(f"{c.name}: observed {c.observed!r} > bound {c.bound!r}" for c in bad)
            raise BoundViolation(f"bound violated ({desc})", self)
        return self


def population_gap(eigenvalues, sel):
    """Gaps ``lam_{r-1} - lam_r`` and ``lam_s - lam_{s+1}`` of a descending spectrum.

    ``lam_0 = +inf`` and ``lam_{p+1} = -inf``, so a block touching either end
    of the spectrum has an infinite gap on that side.
    """
    lam = np.asarray(eigenvalues, dtype=float).reshape(-1)
    if np.any(np.diff(lam) > 0):
        raise PreconditionError("spectrum must be sorted in nonincreasing order")
    sel.check(lam.size)
    r, s = sel.r, sel.s
    upper = math.inf if r == 1 else float(lam[r - 2] - lam[r - 1])
    lower = math.inf if s == lam.size else float(lam[s - 1] - lam[s])
    return GapInfo(upper_gap=upper, lower_gap=lower)


def classical_delta(pop_eigs, samp_eigs, sel):
    """Separation between ``[lam_s, lam_r]`` and the excluded sample eigenvalues.

    The infimum over the continuum reduces to the smallest distance from a
    sample eigenvalue with index outside ``r..s`` to the interval.  Returns
    ``inf`` when the block is the whole spectrum and ``0`` when some excluded
    sample eigenvalue falls inside the interval.
    """
    lam = np.asarray(pop_eigs, dtype=float).reshape(-1)
    lamhat = np.asarray(samp_eigs, dtype=float).reshape(-1)
    if lam.shape != lamhat.shape:
        raise PreconditionError(f"spectra differ in length: {lam.size} vs {lamhat.size}")
    for x in (lam, lamhat):
        if np.any(np.diff(x) > 0):
            raise PreconditionError("spectra must be sorted in nonincreasing order")
    sel.check(lam.size)
    lo, hi = lam[sel.s - 1], lam[sel.r - 1]
    mask = np.ones(lam.size, dtype=bool)
    mask[sel.r - 1:sel.s] = False
    excluded = lamhat[mask]
    if excluded.size == 0:
        return math.inf
    dist = np.maximum(0.0, np.maximum(lo - excluded, excluded - hi))
    return float(np.min(dist))


class _SymmetricInstance:
    """Decompositions and norms shared by all symmetric-case bounds."""

    def __init__(self, pop, samp, sel):
        self.pop = as_symmetric(pop)
        self.samp = as_symmetric(samp)
        if self.pop.shape != self.samp.shape:
            raise PreconditionError(
                f"matrices differ in shape: {self.pop.shape} vs {self.samp.shape}")
        self.p = self.pop.shape[0]
        self.sel = sel.check(self.p)
        self.pop_eig = sym_eig(self.pop)
        self.samp_eig = sym_eig(self.samp)
        diff = self.samp - self.pop
        self.diff_op = float(np.max(np.abs(sym_eig(diff).eigenvalues)))
        self.diff_frob = frobenius_norm(diff)
        gap = population_gap(self.pop_eig.eigenvalues, sel)
        delta = classical_delta(self.pop_eig.eigenvalues, self.samp_eig.eigenvalues, sel)
        self.gap = GapInfo(gap.upper_gap, gap.lower_gap, delta)
        self.v = self.pop_eig.block(sel.r, sel.s)
        self.vhat = self.samp_eig.block(sel.r, sel.s)

    def report(self, mode):
        d = self.sel.d
        op_term = math.sqrt(d) * self.diff_op
        term = "operator" if op_term <= self.diff_frob else "frobenius"
        return BoundReport(mode=mode, sel=self.sel, dim=self.p, gap=self.gap,
                           diff_op_norm=self.diff_op, diff_frob_norm=self.diff_frob,
                           numerator_term=term,
                           degenerate_full_block=(self.sel.r == 1 and self.sel.s == self.p))

    @property
    def numerator(self):
        return min(math.sqrt(self.sel.d) * self.diff_op, self.diff_frob)

    def observed_sin(self):
        return subspace.sin_theta_frobenius(self.vhat, self.v)

    def observed_sin_op(self):
        return subspace.sin_theta_operator(self.vhat, self.v)

    def observed_alignment(self):
        return subspace.procrustes_align(self.vhat, self.v).distance

    def sharp_numerator(self):
        lam = self.pop_eig.eigenvalues[self.sel.r - 1:self.sel.s]
        return frobenius_norm(self.vhat * lam - self.pop @ self.vhat)

    def require_gap(self):
        g = self.gap
        if not g.population_gap > 0:
            side = "upper (lam_{r-1} - lam_r)" if g.upper_gap <= g.lower_gap else "lower (lam_s - lam_{s+1})"
            raise GapError(
                f"population eigen-gap is not positive: {side} gap = {g.population_gap!r} "
                f"for r={self.sel.r}, s={self.sel.s}", g)


def _quotient(numerator, gap):
    # numerator / inf = 0 is the full-block convention
    if math.isinf(gap):
        return 0.0
    return numerator / gap


def _classical_check(inst, norm):
    if norm not in ("frobenius", "operator"):
        raise ValueError(f"norm must be 'frobenius' or 'operator', got {norm!r}")
    if norm == "frobenius":
        observed, diff = inst.observed_sin(), inst.diff_frob
    else:
        observed, diff = inst.observed_sin_op(), inst.diff_op
    delta = inst.gap.classical_delta
    name = f"classical_{norm}"
    if not delta > 0:
        return BoundCheck(name, observed, None, note=f"inapplicable: delta <= 0 (delta = {delta!r})")
    return BoundCheck(name, observed, _quotient(diff, delta))


def classical_dk_bound(pop, samp, sel, norm="frobenius"):
    """Classical sin-theta bound ``||Sigmahat - Sigma|| / delta``.

    Returns a :class:`BoundCheck` named ``classical_<norm>``.  When
    ``delta <= 0`` the theorem does not apply and the check carries
    ``bound=None`` with an explanatory note instead of raising.
    """
    inst = _SymmetricInstance(pop, samp, sel)
    check = _classical_check(inst, norm)
    if check.holds is False:
        raise BoundViolation(f"{check.name} violated", check)
    return check


def _variant(inst, report):
    inst.require_gap()
    gap = inst.gap.population_gap
    sin_bound = 2.0 * _quotient(inst.numerator, gap)
    report.add(BoundCheck("variant_sin", inst.observed_sin(), sin_bound))
    report.add(BoundCheck("variant_align", inst.observed_alignment(), SQRT2 * sin_bound))
    if report.degenerate_full_block:
        report.notes.append("full block (r = 1, s = p): both gaps infinite, bounds reported as 0")
    return report


def _sharp(inst, report):
    inst.require_gap()
    gap = inst.gap.population_gap
    sin_bound = _quotient(inst.sharp_numerator(), gap)
    report.add(BoundCheck("sharp_sin", inst.observed_sin(), sin_bound))
    report.add(BoundCheck("sharp_align", inst.observed_alignment(), SQRT2 * sin_bound))
    variant = 2.0 * _quotient(inst.numerator, gap)
    report.add(BoundCheck("sharp_le_variant", sin_bound, variant,
                          tol=ORDERING_TOL * max(1.0, variant)))
    return report


def variant_bounds(pop, samp, sel):
    """Population-gap sin-theta and alignment bounds.

    ``variant_sin``:   ``||sin Theta(Vhat, V)||_F <= 2 min(sqrt(d)||E||_op, ||E||_F) / gap``
    ``variant_align``: ``min_O ||Vhat O - V||_F <= sqrt(2)`` times the above

    where ``E = samp - pop`` and ``gap = min(lam_{r-1} - lam_r, lam_s - lam_{s+1})``.

    Raises
    ------
    GapError
        If the population gap is not positive.
    BoundViolation
        If an observed value exceeds its bound.
    """
    inst = _SymmetricInstance(pop, samp, sel)
    return _variant(inst, inst.report("symmetric")).raise_on_violation()


def sharp_numerator_bounds(pop, samp, sel):
    """Bounds with the smaller numerator ``||Vhat Lam - Sigma Vhat||_F``.

    Also records ``sharp_le_variant``, the ordering of this bound below the
    variant bound.
    """
    inst = _SymmetricInstance(pop, samp, sel)
    return _sharp(inst, inst.report("symmetric")).raise_on_violation()


def corollary_bounds(pop, samp, j):
    """Single-eigenvector bounds for index ``j``.

    ``corollary_sin``:    ``sin Theta(vhat_j, v_j) <= 2 ||E||_op / gap``
    ``corollary_vector``: ``||vhat_j - v_j|| <= 2^{3/2} ||E||_op / gap`` with
    ``vhat_j`` oriented so that ``vhat_j . v_j >= 0``.
    """
    inst = _SymmetricInstance(pop, samp, BlockSelection(j, j))
    report = inst.report("corollary")
    _corollary(inst, report)
    return report.raise_on_violation()


def _corollary(inst, report):
    inst.require_gap()
    gap = inst.gap.population_gap
    v = inst.v[:, 0]
    vhat = subspace.orient_sign(inst.vhat[:, 0], v)
    sin_bound = 2.0 * _quotient(inst.diff_op, gap)
    report.add(BoundCheck("corollary_sin", inst.observed_sin(), sin_bound))
    report.add(BoundCheck("corollary_vector", float(np.linalg.norm(vhat - v)), SQRT2 * sin_bound))
    return report


def evaluate_symmetric(pop, samp, sel, strict=True):
    """Every symmetric-case bound for one instance in a single report.

    Theorem preconditions that fail are recorded as inapplicable checks
    rather than raised.  With ``strict`` a soundness violation raises
    :class:`BoundViolation`.
    """
    inst = _SymmetricInstance(pop, samp, sel)
    report = inst.report("symmetric")
    for norm in ("frobenius", "operator"):
        report.add(_classical_check(inst, norm))
    try:
        _variant(inst, report)
        _sharp(inst, report)
        if sel.d == 1:
            _corollary(inst, report)
    except GapError as exc:
        sin = inst.observed_sin()
        align = inst.observed_alignment()
        note = f"inapplicable: {exc}"
        for name, obs in (("variant_sin", sin), ("variant_align", align),
                          ("sharp_sin", sin), ("sharp_align", align)):
            report.add(BoundCheck(name, obs, None, note=note))
        if sel.d == 1:
            report.add(BoundCheck("corollary_sin", sin, None, note=note))
    if strict:
        report.raise_on_violation()
    return report


def proof_chain(pop, samp, sel):
    """The three quantities of the lower-bound chain in the variant proof.

    Returns ``(gap * ||sin Theta||_F, ||V1^T Vhat Lam - Lam1 V1^T Vhat||_F,
    ||Vhat Lam - Sigma Vhat||_F)``, which are nondecreasing.  ``V1`` holds the
    population eigenvectors outside the block and ``Lam1`` their eigenvalues.
    """
    inst = _SymmetricInstance(pop, samp, sel)
    inst.require_gap()
    r, s = sel.r, sel.s
    idx = np.r_[0:r - 1, s:inst.p]
    v1 = inst.pop_eig.eigenvectors[:, idx]
    lam1 = inst.pop_eig.eigenvalues[idx]
    lam = inst.pop_eig.eigenvalues[r - 1:s]
    gap = inst.gap.population_gap
    sin = inst.observed_sin()
    # an infinite gap means the block is the whole space and sin Theta = 0
    first = 0.0 if math.isinf(gap) else gap * sin
    x = v1.T @ inst.vhat
    middle = frobenius_norm(x * lam - lam1[:, None] * x)
    return first, middle, inst.sharp_numerator()


def _svd_gap(sigma, dim, sel, rank):
    # population gap of the Gram matrix (A^T A or A A^T): squared singular
    # values padded with zeros up to the Gram dimension
    lam = np.zeros(dim)
    lam[: sigma.size] = sigma**2
    lam[rank:] = 0.0
    return population_gap(lam, sel)


def svd_factor_check(pop, samp):
    """Gram-difference norms against their factored upper bounds.

    Returns ``(op_lhs, op_rhs, frob_lhs, frob_rhs)`` with
    ``op_lhs = ||Ahat^T Ahat - A^T A||_op``,
    ``op_rhs = (2 sigma_1 + ||Ahat - A||_op) ||Ahat - A||_op`` and the
    Frobenius analogue.
    """
    a = as_dense(pop)
    ahat = as_dense(samp)
    if a.shape != ahat.shape:
        raise PreconditionError(f"matrices differ in shape: {a.shape} vs {ahat.shape}")
    e = ahat - a
    e_op = operator_norm(e)
    factor = 2.0 * operator_norm(a) + e_op
    gram_diff = ahat.T @ ahat - a.T @ a
    gram_diff = 0.5 * (gram_diff + gram_diff.T)
    return operator_norm(gram_diff), factor * e_op, frobenius_norm(gram_diff), factor * frobenius_norm(e)


def svd_variant_bounds(pop, samp, sel, side="right", strict=True):
    """Singular-subspace bounds for the block ``r..s`` of singular vectors.

    ``svd_sin``:   ``||sin Theta||_F <= 2 (2 sigma_1 + ||E||_op) min(sqrt(d)||E||_op, ||E||_F) / gap``
    ``svd_align``: ``sqrt(2)`` times the above

    with ``E = samp - pop`` and ``gap = min(sigma_{r-1}^2 - sigma_r^2,
    sigma_s^2 - sigma_{s+1}^2)``.  ``side`` picks right (``"right"``) or left
    (``"left"``) singular vectors.  The report also carries
    ``svd_reduction_sin``, the symmetric variant bound applied directly to the
    Gram matrices, together with ``svd_factored_ge_reduction`` recording that
    the factored bound dominates it.

    Raises
    ------
    PreconditionError
        If ``s`` exceeds the numerical rank of ``pop``.
    GapError
        If the squared-singular-value gap is not positive.
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    a = as_dense(pop)
    ahat = as_dense(samp)
    if a.shape != ahat.shape:
        raise PreconditionError(f"matrices differ in shape: {a.shape} vs {ahat.shape}")
    fa, fh = svd(a), svd(ahat)
    rank = fa.rank(RANK_TOL)
    if sel.s > rank:
        raise PreconditionError(f"block end s={sel.s} exceeds rank(A) = {rank}")
    if side == "right":
        v, vhat, dim = fa.right, fh.right, a.shape[1]
        gram, gram_hat = a.T @ a, ahat.T @ ahat
    else:
        v, vhat, dim = fa.left, fh.left, a.shape[0]
        gram, gram_hat = a @ a.T, ahat @ ahat.T
    gap = _svd_gap(fa.singular_values, dim, sel, rank)
    if not gap.population_gap > 0:
        raise GapError(
            f"squared singular-value gap is not positive ({gap.population_gap!r}) "
            f"for r={sel.r}, s={sel.s}", gap)

    e = ahat - a
    e_op = float(svd(e).singular_values[0])
    e_frob = frobenius_norm(e)
    d = sel.d
    numerator = min(math.sqrt(d) * e_op, e_frob)
    factor = 2.0 * fa.singular_values[0] + e_op
    report = BoundReport(mode=f"svd-{side}", sel=sel, dim=dim, gap=gap,
                         diff_op_norm=e_op, diff_frob_norm=e_frob,
                         numerator_term="operator" if math.sqrt(d) * e_op <= e_frob else "frobenius",
                         degenerate_full_block=(sel.r == 1 and sel.s == dim))

    V = v[:, sel.r - 1:sel.s]
    Vhat = vhat[:, sel.r - 1:sel.s]
    sin_obs = subspace.sin_theta_frobenius(Vhat, V)
    align_obs = subspace.procrustes_align(Vhat, V).distance
    sin_bound = 2.0 * factor * _quotient(numerator, gap.population_gap)
    report.add(BoundCheck("svd_sin", sin_obs, sin_bound))
    report.add(BoundCheck("svd_align", align_obs, SQRT2 * sin_bound))

    gram_diff = gram_hat - gram
    gram_diff = 0.5 * (gram_diff + gram_diff.T)
    g_op = operator_norm(gram_diff)
    g_num = min(math.sqrt(d) * g_op, frobenius_norm(gram_diff))
    reduction = 2.0 * _quotient(g_num, gap.population_gap)
    report.add(BoundCheck("svd_reduction_sin", sin_obs, reduction))
    report.add(BoundCheck("svd_factored_ge_reduction", reduction, sin_bound,
                          tol=ORDERING_TOL * max(1.0, sin_bound)))
    if strict:
        report.raise_on_violation()
    return report
