"""Share encoding and decoding for coded distributed matrix multiplication.

Each worker receives one evaluation of two block-coefficient polynomials,
F(z) built from A* and G(z) built from B*, and returns the product
F(z_p)G(z_p).  The exponent maps are chosen so that every output block
C_{i,l} of C = AB appears as one clean coefficient of F(z)G(z): interpolate
the product polynomial from any recovery_threshold evaluations, read the
extraction exponents, done.

Exponent layout per case (0-based indices throughout):

* non-secure: a(i,j) = s*i + j, b(k,l) = (s-1-k) + t*s*l.  Within an output
  column band the b offsets run in reverse so that block pairs with matching
  inner index j = k stack on one exponent.
* secure-tall (s < t): same a map over t* = t + ceil(P_C/s) block rows; the b
  map keeps the data bands with stride t*s and parks the appended random
  columns above every extraction exponent, at t*sd + s(l-d+1) - k - 1.
* secure-wide (s >= t): with w appended columns/rows the maps are the
  non-secure ones with s_w = s + w substituted.  When min(t, d) == 1 the b
  random rows ascend within each band, b(k>=s, l) = t*s_w*l + k, and the
  extraction stays at the data alignment s_w*i + s - 1 + t*s_w*l; together
  with the live strips chosen in the augmentation layout this keeps every
  random product off the extraction exponents.  When min(t, d) >= 2 the maps
  and extractions are plain GPD over the widened grid; correctness is
  structural there because each side's random band faces a zero band on the
  other side, so A*B* = AB exactly.

recovery_threshold is always derived from the construction: the degree of
F*G over live (non-masked) blocks, plus one.  Closed-form expressions exist
for most regimes and are cross-checked as diagnostics; where a closed form
disagrees, the construction value wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from pathlib import Path

import numpy as np

from .blocks import AugmentationLayout, AugmentedPair, BlockMatrix, augmentation_layout
from .errors import (
    ConfigurationError,
    FieldMismatchError,
    NotEnoughResults,
    WrongCaseError,
)
from .field import PrimeField

_CASE_LABELS = {"gpd": "non-secure", "tall": "secure-tall", "wide": "secure-wide"}


# ---------------------------------------------------------------------------
# exponent maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentMap:
    """One monomial exponent per block of A* and of B*, plus the read-out spots.

    ``a_live``/``b_live`` are False where a block is structurally zero (either
    a masked random block or a zero-facing band); those blocks contribute
    nothing to the product degree.
    """

    a_exponents: np.ndarray
    b_exponents: np.ndarray
    a_live: np.ndarray
    b_live: np.ndarray
    extraction: np.ndarray  # (t, d): coefficient of z**extraction[i,l] is C_{i,l}

    def __post_init__(self):
        for arr in (self.a_exponents, self.b_exponents, self.a_live, self.b_live, self.extraction):
            arr.setflags(write=False)

    @property
    def max_degree_a(self) -> int:
        return int(self.a_exponents[self.a_live].max())

    @property
    def max_degree_b(self) -> int:
        return int(self.b_exponents[self.b_live].max())


def _exponent_maps(layout: AugmentationLayout) -> ExponentMap:
    t, s, d = layout.t, layout.s, layout.d

    if layout.case == "gpd":
        a = s * np.arange(t)[:, None] + np.arange(s)[None, :]
        b = (s - 1 - np.arange(s))[:, None] + t * s * np.arange(d)[None, :]
        ext = s * (np.arange(t) + 1)[:, None] - 1 + t * s * np.arange(d)[None, :]
        return ExponentMap(a, b, np.ones((t, s), bool), np.ones((s, d), bool), ext)

    if layout.case == "tall":
        t_star, d_star, delta = layout.t_star, layout.d_star, layout.delta
        a = s * np.arange(t_star)[:, None] + np.arange(s)[None, :]
        a_live = np.ones((t_star, s), bool)
        a_live[t:, :] = ~layout.a_zero_mask
        b = np.empty((s, d_star), dtype=np.int64)
        k = np.arange(s)[:, None]
        b[:, :d] = (s - 1 - k) + t_star * s * np.arange(d)[None, :]
        if delta:
            cols = np.arange(d, d_star)[None, :]
            b[:, d:] = t_star * s * d + s * (cols - d + 1) - k - 1
        b_live = np.ones((s, d_star), bool)
        b_live[:, d:] = ~layout.b_zero_mask
        ext = s * (np.arange(t) + 1)[:, None] - 1 + t_star * s * np.arange(d)[None, :]
        return ExponentMap(a, b, a_live, b_live, ext)

    s_w = layout.s_wide
    a = s_w * np.arange(t)[:, None] + np.arange(s_w)[None, :]
    a_live = np.ones((t, s_w), bool)
    a_live[:, s:] = ~layout.a_zero_mask
    b = np.empty((s_w, d), dtype=np.int64)
    b_live = np.ones((s_w, d), bool)
    b_live[s:, :] = ~layout.b_zero_mask
    band = t * s_w * np.arange(d)[None, :]
    if min(t, d) == 1:
        b[:s, :] = (s - 1 - np.arange(s))[:, None] + band
        b[s:, :] = np.arange(s, s_w)[:, None] + band
        ext = s_w * np.arange(t)[:, None] + (s - 1) + t * s_w * np.arange(d)[None, :]
    else:
        b[:, :] = (s_w - 1 - np.arange(s_w))[:, None] + band
        ext = s_w * (np.arange(t) + 1)[:, None] - 1 + t * s_w * np.arange(d)[None, :]
    return ExponentMap(a, b, a_live, b_live, ext)


@dataclass(frozen=True)
class CodeGeometry:
    """Everything about a code that does not depend on the field or the pool.

    Built by :func:`code_geometry`, which imposes no worker-count constraint,
    so geometries remain available for audits and sweeps even when the pool
    is smaller than the recovery threshold.
    """

    t: int
    s: int
    d: int
    p_c: int
    layout: AugmentationLayout
    exponents: ExponentMap

    @property
    def case(self) -> str:
        return _CASE_LABELS[self.layout.case]

    @property
    def recovery_threshold(self) -> int:
        return self.exponents.max_degree_a + self.exponents.max_degree_b + 1

    @property
    def normalized_load(self) -> Fraction:
        """Downloaded elements per output element: P_R / (t*d)."""
        return Fraction(self.recovery_threshold, self.t * self.d)


def code_geometry(t: int, s: int, d: int, p_c: int) -> CodeGeometry:
    layout = augmentation_layout(t, s, d, p_c)
    return CodeGeometry(t, s, d, p_c, layout, _exponent_maps(layout))


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def closed_form_thresholds(t: int, s: int, d: int, p_c: int) -> dict:
    """Closed-form threshold expressions for cross-checking a construction.

    Keys ending in ``_variant`` are alternative printed forms of the same
    quantity that disagree with the construction for some parameters; they
    are evaluated for diagnostic reports and never asserted.
    """
    out: dict = {}
    if p_c == 0:
        out["unsecured"] = t * s * d + s - 1
        return out
    if s < t:
        delta = ceil(p_c / s)
        t_star, d_star = t + delta, d + delta
        z = s * delta - p_c
        if z == 0:
            out["tall"] = t_star * s * (d + 1) + s * delta - 1
            out["tall_degree_variant"] = t_star * s * (d + 1) + s * delta - 1
        else:
            out["tall"] = t_star * s * (d + 1) - s * delta + 2 * p_c - 1
            out["tall_degree_variant"] = d * s * t_star - s * delta + 2 * p_c + t - 2
        out["naive_tall"] = t_star * s * d_star + s - 1 - 2 * z
        if z > 0:
            out["naive_tall_variant"] = d * s * t_star + s - 1 - 2 * z
    else:
        delta_w = ceil(p_c / min(t, d))
        s_star = s + delta_w
        out["wide_general"] = t * d * s_star + s_star - 1
        if t == d:
            out["wide_special"] = s_star * (t * t + 1) - 3
            out["wide_special_applies_div_s"] = delta_w * s > p_c
            out["wide_special_applies_div_min"] = delta_w * min(t, d) > p_c
    return out


def naive_secure_threshold(t: int, s: int, d: int, p_c: int) -> int:
    """Threshold of the baseline that augments first and encodes with the
    plain construction, without rearranging the appended exponents.  Always
    >= the rearranged threshold; strictly larger once P_C > s."""
    if s >= t:
        raise WrongCaseError(f"baseline comparison is defined for s < t, got s={s}, t={t}")
    if p_c == 0:
        return t * s * d + s - 1
    delta = ceil(p_c / s)
    z = s * delta - p_c
    return (t + delta) * s * (d + delta) + s - 1 - 2 * z


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EncodingPlan:
    geometry: CodeGeometry
    field: PrimeField
    n_workers: int
    evaluation_points: np.ndarray
    diagnostics: tuple = ()

    def __post_init__(self):
        self.evaluation_points.setflags(write=False)

    @property
    def t(self) -> int:
        return self.geometry.t

    @property
    def s(self) -> int:
        return self.geometry.s

    @property
    def d(self) -> int:
        return self.geometry.d

    @property
    def p_c(self) -> int:
        return self.geometry.p_c

    @property
    def case(self) -> str:
        return self.geometry.case

    @property
    def layout(self) -> AugmentationLayout:
        return self.geometry.layout

    @property
    def exponent_map(self) -> ExponentMap:
        return self.geometry.exponents

    @property
    def recovery_threshold(self) -> int:
        return self.geometry.recovery_threshold

    @property
    def t_star(self):
        return self.layout.t_star if self.layout.case == "tall" else None

    @property
    def d_star(self):
        return self.layout.d_star if self.layout.case == "tall" else None

    @property
    def s_star(self):
        return self.layout.s_wide if self.layout.case == "wide" else None

    @property
    def normalized_load(self) -> Fraction:
        return self.geometry.normalized_load


def _threshold_diagnostics(geometry: CodeGeometry) -> tuple:
    p_r = geometry.recovery_threshold
    forms = closed_form_thresholds(geometry.t, geometry.s, geometry.d, geometry.p_c)
    notes = []
    for key in ("unsecured", "tall", "wide_general"):
        if key in forms and forms[key] != p_r:
            notes.append(
                f"closed form '{key}'={forms[key]} differs from construction "
                f"recovery_threshold={p_r}; construction value is authoritative"
            )
    if "wide_special" in forms and forms["wide_special"] != p_r:
        notes.append(
            f"closed form 'wide_special'={forms['wide_special']} "
            f"(applies_div_s={forms['wide_special_applies_div_s']}, "
            f"applies_div_min={forms['wide_special_applies_div_min']}) differs "
            f"from construction recovery_threshold={p_r}; recorded only"
        )
    return tuple(notes)


def build_plan(
    t: int,
    s: int,
    d: int,
    p_c: int,
    n_workers: int,
    field: PrimeField,
    evaluation_points=None,
) -> EncodingPlan:
    """Validate parameters and assemble the full code description.

    The recovery threshold comes from the exponent maps after masking; the
    closed forms are compared and any mismatch lands in plan.diagnostics.
    """
    geometry = code_geometry(t, s, d, p_c)
    p_r = geometry.recovery_threshold
    if n_workers < 1:
        raise ConfigurationError(f"need at least one worker, got {n_workers}")
    if p_c >= n_workers and p_c > 0:
        raise ConfigurationError(
            f"collusion level {p_c} must be below the pool size {n_workers}: "
            "privacy against every worker at once is unachievable"
        )
    if n_workers < p_r:
        raise ConfigurationError(
            f"recovery threshold is {p_r} but only {n_workers} workers are available"
        )
    if p_c >= 1 and p_r < 2 * p_c:
        raise ConfigurationError(
            f"recovery threshold {p_r} is below 2*P_C={2 * p_c}; the secrecy "
            "argument needs at least that many product coefficients"
        )
    if evaluation_points is None:
        if field.p <= n_workers:
            raise ConfigurationError(
                f"modulus {field.p} cannot supply {n_workers} distinct nonzero points"
            )
        points = np.arange(1, n_workers + 1, dtype=np.int64)
    else:
        points = np.asarray(list(evaluation_points), dtype=np.int64)
        if points.shape != (n_workers,):
            raise ConfigurationError(
                f"expected {n_workers} evaluation points, got {points.shape}"
            )
        points = points % field.p
        if np.any(points == 0) or len(np.unique(points)) != n_workers:
            raise ConfigurationError("evaluation points must be distinct and nonzero")
    return EncodingPlan(geometry, field, n_workers, points, _threshold_diagnostics(geometry))


# ---------------------------------------------------------------------------
# encode / compute / decode
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodedShare:
    worker_id: int  # 1-based
    point: int
    a_share: np.ndarray
    b_share: np.ndarray
    field: PrimeField

    def __post_init__(self):
        self.a_share.setflags(write=False)
        self.b_share.setflags(write=False)


@dataclass(frozen=True)
class WorkerResult:
    worker_id: int
    point: int
    product: np.ndarray
    completion_time: float = 0.0


def _block_stack(m: BlockMatrix) -> np.ndarray:
    """Blocks flattened to rows, in row-major grid order."""
    gr, gc = m.grid
    br, bc = m.block_shape
    return (
        m.data.reshape(gr, br, gc, bc).transpose(0, 2, 1, 3).reshape(gr * gc, br * bc)
    )


def _power_table(field: PrimeField, points: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """Matrix [w, k] = points[w] ** exponents[k] mod p."""
    top = int(exponents.max()) if exponents.size else 0
    rows = [field.powers(int(z), top + 1)[exponents] for z in points]
    return np.stack(rows)


def encode(plan: EncodingPlan, pair: AugmentedPair) -> list:
    """One CodedShare per worker: both polynomials evaluated at its point."""
    emap = plan.exponent_map
    if pair.a_star.field != plan.field or pair.b_star.field != plan.field:
        raise FieldMismatchError("augmented pair does not live in the plan's field")
    if (
        pair.a_star.grid != emap.a_exponents.shape
        or pair.b_star.grid != emap.b_exponents.shape
        or pair.layout != plan.layout
    ):
        raise ConfigurationError(
            f"augmented grids {pair.a_star.grid}/{pair.b_star.grid} do not match "
            f"the plan's maps {emap.a_exponents.shape}/{emap.b_exponents.shape}"
        )
    a_rows = _block_stack(pair.a_star)
    b_rows = _block_stack(pair.b_star)
    v_a = _power_table(plan.field, plan.evaluation_points, emap.a_exponents.ravel())
    v_b = _power_table(plan.field, plan.evaluation_points, emap.b_exponents.ravel())
    shares_a = plan.field.matmul(v_a, a_rows)
    shares_b = plan.field.matmul(v_b, b_rows)
    ab = pair.a_star.block_shape
    bb = pair.b_star.block_shape
    return [
        CodedShare(
            w + 1,
            int(z),
            shares_a[w].reshape(ab),
            shares_b[w].reshape(bb),
            plan.field,
        )
        for w, z in enumerate(plan.evaluation_points)
    ]


def worker_compute(share: CodedShare, completion_time: float = 0.0) -> WorkerResult:
    if share.a_share.shape[1] != share.b_share.shape[0]:
        raise ConfigurationError(
            f"share inner dimensions disagree: {share.a_share.shape} x {share.b_share.shape}"
        )
    product = share.field.matmul(share.a_share, share.b_share)
    return WorkerResult(share.worker_id, share.point, product, completion_time)


def _lagrange_coefficient_matrix(field: PrimeField, xs) -> np.ndarray:
    """L[e, i] = coefficient of z**e in the i-th Lagrange basis polynomial."""
    p = field.p
    points = [int(x) for x in xs]
    n = len(points)
    master = np.zeros(n + 1, dtype=np.int64)  # prod (z - x_i), low-to-high coeffs
    master[0] = 1
    for m, x in enumerate(points):
        shifted = np.zeros(n + 1, dtype=np.int64)
        shifted[1 : m + 2] = master[: m + 1]
        master = (shifted - x * master) % p
    out = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(points):
        q = np.zeros(n, dtype=np.int64)  # master / (z - x), synthetic division
        q[n - 1] = master[n]
        for j in range(n - 2, -1, -1):
            q[j] = (master[j + 1] + x * q[j + 1]) % p
        denom = 0
        for c in q[::-1]:
            denom = (denom * x + int(c)) % p
        if denom == 0:
            raise ConfigurationError("evaluation points are not distinct")
        out[:, i] = q * pow(denom, p - 2, p) % p
    return out


def decode(plan: EncodingPlan, results) -> BlockMatrix:
    """Interpolate the product polynomial and read the extraction coefficients.

    Exactly recovery_threshold results are consumed; any surplus is dropped
    deterministically, keeping the lowest worker ids.
    """
    by_id: dict = {}
    for r in results:
        if r.worker_id in by_id:
            raise ConfigurationError(f"duplicate result for worker {r.worker_id}")
        by_id[r.worker_id] = r
    p_r = plan.recovery_threshold
    if len(by_id) < p_r:
        raise NotEnoughResults(len(by_id), p_r)
    chosen = [by_id[w] for w in sorted(by_id)][:p_r]
    points = [r.point for r in chosen]
    if len(set(points)) != p_r:
        raise ConfigurationError("results carry duplicate evaluation points")
    shapes = {r.product.shape for r in chosen}
    if len(shapes) != 1:
        raise ConfigurationError(f"results disagree on product shape: {sorted(shapes)}")
    basis = _lagrange_coefficient_matrix(plan.field, points)
    values = np.stack([np.asarray(r.product, dtype=np.int64).reshape(-1) for r in chosen])
    coeffs = plan.field.matmul(basis, values)
    ext = plan.exponent_map.extraction
    t, d = ext.shape
    br, bc = chosen[0].product.shape
    out = np.empty((t * br, d * bc), dtype=np.int64)
    for i in range(t):
        for l in range(d):
            out[i * br : (i + 1) * br, l * bc : (l + 1) * bc] = coeffs[ext[i, l]].reshape(
                br, bc
            )
    return BlockMatrix(out, (t, d), plan.field)


# ---------------------------------------------------------------------------
# exponent audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentAuditReport:
    parameters: tuple
    checked_pairs: int
    collisions: tuple

    @property
    def clean(self) -> bool:
        return not self.collisions


def _classify_blocks(geometry: CodeGeometry):
    """Live blocks as (grid index, exponent, is_data, data row/col, inner index)."""
    emap = geometry.exponents
    s = geometry.s
    wide = geometry.layout.case == "wide"
    a_list = []
    for (i, j), e in np.ndenumerate(emap.a_exponents):
        if not emap.a_live[i, j]:
            continue
        is_data = (j < s) if wide else (i < geometry.t)
        a_list.append((int(e), is_data, i, j))
    b_list = []
    for (k, l), e in np.ndenumerate(emap.b_exponents):
        if not emap.b_live[k, l]:
            continue
        is_data = (k < s) if wide else (l < geometry.d)
        b_list.append((int(e), is_data, k, l))
    return a_list, b_list


def exponent_audit(plan_or_geometry) -> ExponentAuditReport:
    """Exhaustively check that extraction coefficients receive exactly the
    intended data products: one (A_{i,k}, B_{k,l}) pair per inner index k and
    nothing from any random block."""
    geometry = getattr(plan_or_geometry, "geometry", plan_or_geometry)
    emap = geometry.exponents
    s = geometry.s
    findings = []
    for name, arr in (("a", emap.a_exponents), ("b", emap.b_exponents)):
        flat = arr.ravel()
        if len(np.unique(flat)) != flat.size:
            findings.append(f"{name}-side exponents are not distinct")
    a_list, b_list = _classify_blocks(geometry)
    p_r = geometry.recovery_threshold
    ext = emap.extraction
    if len(np.unique(ext.ravel())) != ext.size:
        findings.append("extraction exponents are not distinct")
    if int(ext.max()) >= p_r:
        findings.append(
            f"extraction exponent {int(ext.max())} outside degree range {p_r - 1}"
        )
    for i in range(ext.shape[0]):
        for l in range(ext.shape[1]):
            target = int(ext[i, l])
            inner_seen = []
            for ea, a_data, ai, aj in a_list:
                for eb, b_data, bk, bl in b_list:
                    if ea + eb != target:
                        continue
                    if not (a_data and b_data):
                        findings.append(
                            f"C[{i},{l}] at exponent {target} receives "
                            f"a[{ai},{aj}] x b[{bk},{bl}] "
                            f"({'data' if a_data else 'random'} x "
                            f"{'data' if b_data else 'random'})"
                        )
                        continue
                    a_inner = aj
                    b_inner = bk
                    a_out = ai
                    b_out = bl
                    if a_out != i or b_out != l or a_inner != b_inner:
                        findings.append(
                            f"C[{i},{l}] at exponent {target} receives misaligned "
                            f"data pair a[{ai},{aj}] x b[{bk},{bl}]"
                        )
                        continue
                    inner_seen.append(a_inner)
            if sorted(inner_seen) != list(range(s)):
                findings.append(
                    f"C[{i},{l}] inner-sum terms {sorted(inner_seen)} != 0..{s - 1}"
                )
    return ExponentAuditReport(
        (geometry.t, geometry.s, geometry.d, geometry.p_c),
        len(a_list) * len(b_list),
        tuple(findings),
    )


# ---------------------------------------------------------------------------
# communication load
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LoadReport:
    elements: int  # total downloaded by the decoder
    lower_bound: int  # size of the product itself, T*D
    per_worker: int


def communication_load(plan: EncodingPlan, big_t: int, big_d: int) -> LoadReport:
    if big_t % plan.t or big_d % plan.d:
        raise ConfigurationError(
            f"output shape {big_t}x{big_d} is not divisible by the grid "
            f"{plan.t}x{plan.d}"
        )
    per_worker = (big_t // plan.t) * (big_d // plan.d)
    return LoadReport(plan.recovery_threshold * per_worker, big_t * big_d, per_worker)


# ---------------------------------------------------------------------------
# share serialization
# ---------------------------------------------------------------------------


def write_share(path, share: CodedShare) -> None:
    """Header "worker_id point rows_a cols_a rows_b cols_b", then row-major
    integers of the a-share followed by the b-share."""
    ra, ca = share.a_share.shape
    rb, cb = share.b_share.shape
    lines = [f"{share.worker_id} {share.point} {ra} {ca} {rb} {cb}"]
    for arr in (share.a_share, share.b_share):
        lines += [" ".join(str(v) for v in row) for row in arr]
    Path(path).write_text("\n".join(lines) + "\n")


def read_share(path, field: PrimeField) -> CodedShare:
    tokens = Path(path).read_text().split()
    if len(tokens) < 6:
        raise ConfigurationError(f"{path}: truncated share file")
    worker_id, point, ra, ca, rb, cb = (int(x) for x in tokens[:6])
    vals = [int(x) for x in tokens[6:]]
    if len(vals) != ra * ca + rb * cb:
        raise ConfigurationError(f"{path}: expected {ra * ca + rb * cb} entries")
    a = np.array(vals[: ra * ca], dtype=np.int64).reshape(ra, ca)
    b = np.array(vals[ra * ca :], dtype=np.int64).reshape(rb, cb)
    return CodedShare(worker_id, point, a, b, field)
