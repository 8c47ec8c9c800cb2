"""Time-frequency localization, convergence tables, smoothness and purity diagnostics, decay fits."""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, GridError, NumericalConsistencyError

FLOOR = 1e-13


# --------------------------------------------------------------------------- localization


@dataclass(frozen=True)
class LocalizationReport:
    time_centre: float
    freq_centre: float
    time_radius2: float
    freq_radius2: float
    norm2: float
    quadrature_error: float = 0.0

    @property
    def uc(self):
        return math.sqrt(self.time_radius2 * self.freq_radius2)


def _moments(w, f, df, weights, time_centre):
    a2 = np.abs(f) ** 2
    norm = np.sum(weights * a2)
    if not norm > 0:
        raise NumericalConsistencyError("transform has zero energy on the quadrature grid")
    wc = np.sum(weights * w * a2) / norm
    fr2 = np.sum(weights * (w - wc) ** 2 * a2) / norm
    # t |f|^2 integrates to Re int i f' conj(f) in frequency
    tc = np.sum(weights * np.real(1j * df * np.conj(f))) / norm if time_centre is None else time_centre
    tr2 = np.sum(weights * np.abs(df) ** 2) / norm - tc**2
    return tc, wc, tr2, fr2, norm / (2 * np.pi)


def localization(fhat, fhat_prime=None, *, time_centre=None, omega_max=64 * np.pi, samples=2**16, far_tol=1e-6):
    """Centres and squared radii of f and f-hat by trapezoidal quadrature on [-omega_max, omega_max].

    The time radius uses (2 pi)^-1 int |f-hat'|^2 = int t^2 |f|^2. If fhat_prime is None,
    fhat must return the pair (f-hat, f-hat'). time_centre fixes t0 instead of measuring it.
    """
    if samples < 16 or samples & (samples - 1):
        raise GridError("samples must be a power of two >= 16")
    w = np.linspace(-omega_max, omega_max, samples + 1)
    if fhat_prime is None:
        f, df = fhat(w)
    else:
        f, df = fhat(w), fhat_prime(w)
    f = np.asarray(f, dtype=complex)
    df = np.asarray(df, dtype=complex)
    edge = max(abs(f[0]), abs(f[-1]))
    if edge > far_tol * np.max(np.abs(f)):
        raise DomainError(f"transform has not decayed at |omega|={omega_max:.4g} (edge {edge:.2e}); raise omega_max")
    h = w[1] - w[0]
    weights = np.full(w.size, h)
    weights[[0, -1]] = h / 2
    tc, wc, tr2, fr2, norm = _moments(w, f, df, weights, time_centre)
    # coarse rule on every other node, for an error estimate
    weights2 = np.zeros_like(weights)
    weights2[::2] = 2 * h
    weights2[[0, -1]] = h
    _, _, tr2c, fr2c, _ = _moments(w, f, df, weights2, time_centre)
    err = max(abs(tr2 - tr2c), abs(fr2 - fr2c))
    if tr2 < 0 or fr2 < 0:
        raise NumericalConsistencyError(f"negative squared radius (time {tr2:.3e}, frequency {fr2:.3e})")
    return LocalizationReport(float(tc), float(wc), float(tr2), float(fr2), float(norm), float(err))


def _pairs(obj):
    """(scaling pair, wavelet pair, l, n) for a MeyerSystem or a QuasisplineSystem."""
    if hasattr(obj, "phi_hat_perp_with_prime"):
        return obj.phi_hat_perp_with_prime, obj.psi_hat_perp_with_prime, obj.l, obj.n
    return (
        lambda w: (obj.phi_hat(w), obj.phi_hat_prime(w)),
        lambda w: (obj.psi_hat(w), obj.psi_hat_prime(w)),
        0,
        0,
    )


def choose_grid(pairs, far_cut=1e-10, h_max=np.pi / 2**13, ladder=(8, 16, 32, 64), max_samples=2**20):
    """Smallest cutoff on the ladder (in units of pi) past which every transform stays below far_cut,
    and the smallest power-of-two sample count with step <= h_max."""
    for m in ladder:
        omega_max = m * np.pi
        probe = np.linspace(omega_max - 4 * np.pi, omega_max, 2049)
        if all(np.max(np.abs(p(probe)[0])) <= far_cut for p in pairs):
            break
    samples = 16
    while 2 * omega_max / samples > h_max and samples < max_samples:
        samples *= 2
    return omega_max, samples


@dataclass(frozen=True)
class GapRow:
    l: int
    n: int
    omega_max: float
    samples: int
    freq_scaling: float
    time_scaling: float
    freq_wavelet: float
    time_wavelet: float
    uc_scaling: float
    uc_wavelet: float


GAP_COLUMNS = ("freq_scaling", "time_scaling", "freq_wavelet", "time_wavelet")


@dataclass
class ConvergenceStudy:
    rows: list
    reference: dict = field(default_factory=dict)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])

    def records(self):
        return [asdict(r) for r in self.rows]

    def to_csv(self, extra=None):
        recs = self.records()
        if extra:
            recs = [{**r, **e} for r, e in zip(recs, extra)]
        return rows_to_csv(recs)

    def to_json(self, extra=None):
        recs = self.records()
        if extra:
            recs = [{**r, **e} for r, e in zip(recs, extra)]
        return json.dumps({"reference": self.reference, "rows": recs}, indent=2, sort_keys=True)


def uc_gap_table(family, meyer, **grid_options) -> ConvergenceStudy:
    """Gaps |Delta^2 - Delta^2_Meyer| of the four squared radii for each member of the family.

    Each member and the Meyer reference are integrated on the same grid, chosen per member
    fine enough to resolve the transition bands of the mask, so quadrature errors cancel
    to the size of the difference itself.
    """
    ref_phi, ref_psi, _, _ = _pairs(meyer)
    cache = {}
    rows = []
    for q in family:
        if getattr(q, "meyer", meyer) != meyer:
            raise ValueError("family members must share the reference Meyer system")
        phi, psi, l, n = _pairs(q)
        omega_max, samples = choose_grid((phi, psi), **grid_options)
        key = (omega_max, samples)
        if key not in cache:
            cache[key] = (
                localization(ref_phi, time_centre=0.0, omega_max=omega_max, samples=samples),
                localization(ref_psi, time_centre=0.5, omega_max=omega_max, samples=samples),
            )
        rp, rw = cache[key]
        a = localization(phi, time_centre=0.0, omega_max=omega_max, samples=samples)
        b = localization(psi, time_centre=0.5, omega_max=omega_max, samples=samples)
        rows.append(
            GapRow(
                l=l,
                n=n,
                omega_max=float(omega_max),
                samples=samples,
                freq_scaling=abs(a.freq_radius2 - rp.freq_radius2),
                time_scaling=abs(a.time_radius2 - rp.time_radius2),
                freq_wavelet=abs(b.freq_radius2 - rw.freq_radius2),
                time_wavelet=abs(b.time_radius2 - rw.time_radius2),
                uc_scaling=a.uc,
                uc_wavelet=b.uc,
            )
        )
    reference = {}
    if cache:
        rp, rw = next(iter(cache.values()))
        reference = {"uc_scaling": rp.uc, "uc_wavelet": rw.uc}
    return ConvergenceStudy(rows=rows, reference=reference)


# --------------------------------------------------------------------------- smoothness


@dataclass(frozen=True)
class SmoothnessReport:
    theta: tuple
    theta_estimate: float
    richardson: float
    holder_lower: float
    holder_upper: float
    trivial_cycle_multiplicity: int
    grid_change: float

    @property
    def k_max(self):
        return len(self.theta)


def holder_bounds(l, c=1.0, epsilon=0.0):
    """Sandwich for the Holder exponent of phi_l: 2l - 1 + log2(c / (1 + eps)) <= a <= 2l."""
    return 2 * l - 1 + math.log2(c / (1 + epsilon)), 2.0 * l


def _log_orbit(mc, y, k):
    """log2 |mc(y) mc(2y) ... mc(2^{k-1} y)| for a scalar y."""
    w = np.empty(k)
    x = y
    for j in range(k):
        w[j] = x
        x = (2 * x + np.pi) % (2 * np.pi) - np.pi
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log2(np.abs(mc(w)))))


def _theta_scan(mc, k_max, grid):
    y = np.linspace(-np.pi, np.pi, grid, endpoint=False)
    with np.errstate(divide="ignore"):
        # factors at y / 2^i for i = 1..k_max and along the doubling orbit of y
        inner = np.array([np.log2(np.abs(mc(y / 2.0**i))) for i in range(1, k_max + 1)])
        outer = np.empty((k_max, grid))
        x = y.copy()
        for j in range(k_max):
            outer[j] = np.log2(np.abs(mc(x)))
            x = (2 * x + np.pi) % (2 * np.pi) - np.pi
    A = np.vstack([np.zeros(grid), np.cumsum(inner, axis=0)])  # A[s] = sum_{i<=s}
    B = np.vstack([np.zeros(grid), np.cumsum(outer, axis=0)])  # B[r] = sum_{j<r}
    best = np.full(k_max, -np.inf)
    arg = [None] * k_max
    for k in range(1, k_max + 1):
        for s in range(0, k + 1):
            v = A[s] + B[k - s]
            i = int(np.argmax(v))
            if v[i] > best[k - 1]:
                best[k - 1] = v[i]
                arg[k - 1] = (s, y[i])
    return best, arg, 2 * np.pi / grid


def theta_k_sequence(mc, k_max=128, grid=2**14, refine=True, l=None, c=1.0, epsilon=0.0, stability=1e-3):
    """theta_k = -(1/k) log2 sup |mc(w) mc(2w) ... mc(2^{k-1} w)| for k = 1..k_max.

    The sup is searched over w = 2^{-s} y for every dyadic shell s <= k with y on a uniform
    grid of [-pi, pi); the orbit points of near-optimal w sit at all scales, so a single
    uniform grid of w cannot resolve them. The grid maximum is polished by a bounded
    golden-section search. Raises GridError if halving the grid moves any theta_k by
    more than `stability`.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    best, arg, h = _theta_scan(mc, k_max, grid)
    coarse, _, _ = _theta_scan(mc, k_max, grid // 2)
    if refine:
        for k in range(1, k_max + 1):
            s, y0 = arg[k - 1]
            res = minimize_scalar(
                lambda y: -_log_orbit(mc, y * 2.0**-s, k),
                bounds=(y0 - h, y0 + h),
                method="bounded",
                options={"xatol": 1e-12},
            )
            best[k - 1] = max(best[k - 1], -res.fun)
    theta = -best / np.arange(1, k_max + 1)
    coarse_theta = -coarse / np.arange(1, k_max + 1)
    change = float(np.max(np.abs(theta - coarse_theta)))
    if change >= stability:
        raise GridError(f"theta_k moved by {change:.2e} under grid halving; increase grid")
    lower, upper = holder_bounds(l, c, epsilon) if l is not None else (float("nan"), float("nan"))
    half = k_max // 2
    richardson = float(2 * theta[-1] - theta[half - 1]) if k_max % 2 == 0 and half else float(theta[-1])
    return SmoothnessReport(
        theta=tuple(float(t) for t in theta),
        theta_estimate=float(theta[-1]),
        richardson=richardson,
        holder_lower=lower,
        holder_upper=upper,
        trivial_cycle_multiplicity=2 * l if l is not None else 0,
        grid_change=change,
    )


def far_field_slope(fhat, start, octaves=4, per_octave=64):
    """Slope of log|fhat| peaks against log|w| over [start, start 2^octaves].

    Peaks are maxima over windows of width 2 pi, where the zeros of the infinite product repeat.
    """
    edges = start * 2.0 ** np.linspace(0, octaves, octaves * per_octave + 1)
    centres, peaks = [], []
    for a in edges:
        w = np.linspace(a, a + 2 * np.pi, 257)
        v = np.max(np.abs(fhat(w)))
        if v > 0:
            centres.append(a + np.pi)
            peaks.append(v)
    if len(peaks) < 3:
        raise DomainError("transform vanishes in the far field; nothing to fit")
    x, y = np.log(centres), np.log(peaks)
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


# --------------------------------------------------------------------------- purity


@dataclass(frozen=True)
class PurityReport:
    symmetric_pairs: tuple
    cycles: tuple
    trivial_cycle: bool
    roots_on_circle: int
    method: str

    @property
    def is_pure(self):
        return not self.symmetric_pairs and not self.cycles


ROOTS_MAX_DEGREE = 512


def _circle_roots_companion(p, tolerance):
    c = np.asarray(p.a, dtype=complex)
    c[1:] = (p.a[1:] - 1j * p.b[1:]) / 2  # coefficient of z^k
    c[0] = p.a[0] / 2
    full = np.concatenate([np.conj(c[:0:-1]), c])  # z^{-N} .. z^{N}
    full = np.trim_zeros(full)
    if full.size <= 1:
        return np.array([])
    try:
        roots = np.roots(full[::-1])
    except np.linalg.LinAlgError as exc:
        raise NumericalConsistencyError(f"root finding failed: {exc}") from exc
    near = roots[np.abs(np.abs(roots) - 1) < tolerance]
    return np.sort(np.angle(near))


def _circle_roots_grid(p, tolerance):
    """Sign changes give exact unit-circle roots; a touching minimum v of |p| counts when the
    nearby complex pair sits within tolerance of the circle, i.e. sqrt(2|v / p''|) < tolerance."""
    G = 1
    while G < 8 * (p.degree + 1):
        G *= 2
    w = -np.pi + 2 * np.pi * np.arange(G + 1) / G
    v = p(w)
    out = []
    for i in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]:
        out.append(brentq(lambda x: float(p(x)), w[i], w[i + 1], xtol=1e-15))
    out.extend(w[:-1][v[:-1] == 0])
    a = np.abs(v[:-1])
    h = 2 * np.pi / G
    d2 = p.derivative().derivative()
    for i in np.nonzero((a < np.roll(a, 1)) & (a < np.roll(a, -1)))[0]:
        res = minimize_scalar(lambda x: abs(float(p(x))), bounds=(w[i] - h, w[i] + h), method="bounded", options={"xatol": 1e-14})
        curv = abs(float(d2(res.x)))
        if res.fun == 0 or (curv > 0 and math.sqrt(2 * res.fun / curv) < tolerance):
            out.append(res.x)
    angles = np.sort((np.asarray(out, dtype=float) + np.pi) % (2 * np.pi) - np.pi)
    if angles.size:
        angles = angles[np.r_[True, np.diff(angles) > tolerance]]
    return angles


def _angle_gap(a, b):
    return np.abs((np.asarray(a) - b + np.pi) % (2 * np.pi) - np.pi)


def purity_check(p, tolerance=1e-6, max_period=8):
    """Symmetric zero pairs and cycles of a real trigonometric polynomial on the unit circle.

    A point of the circle counts as a zero when a root of z^N p(z) with ||z| - 1| < tolerance
    lies within `tolerance` of it in angle. Up to degree 512 the roots come from the companion
    matrix; beyond that they are located on a grid with 8 points per degree.
    """
    if not np.any(p.a) and not np.any(p.b):
        raise DomainError("zero polynomial")
    if p.degree <= ROOTS_MAX_DEGREE:
        angles, method = _circle_roots_companion(p, tolerance), "companion"
    else:
        angles, method = _circle_roots_grid(p, tolerance), "grid"

    def is_zero(x):
        return angles.size > 0 and bool(np.min(_angle_gap(angles, x)) < tolerance)

    pairs = []
    for a in angles:
        if is_zero(a + np.pi):
            rep = float(a % np.pi)
            if not any(abs(rep - r) < 1e-6 for r in pairs):
                pairs.append(rep)
    cycles = []
    seen = set()
    for n in range(1, max_period + 1):
        period = 2**n - 1
        for k in range(period):
            orbit = []
            m = k
            for _ in range(n):
                orbit.append(m)
                m = (2 * m) % period
            key = (period, min(orbit))
            if len(set(orbit)) != n or key in seen:
                continue
            seen.add(key)
            xi = 2 * np.pi * np.array(orbit) / period
            if all(is_zero(x + np.pi) for x in xi):
                cycles.append(tuple(float(x) for x in xi))
    trivial = any(c == (0.0,) for c in cycles)
    return PurityReport(tuple(pairs), tuple(cycles), trivial, int(len(angles)), method)


def min_abs_on(p, a, b, grid=2**14):
    w = np.linspace(a, b, grid + 1)
    return float(np.min(np.abs(p(w))))


# --------------------------------------------------------------------------- decay


@dataclass(frozen=True)
class DecayFit:
    beta: float
    intercept: float
    r2: float
    samples: int
    underflow: bool = False


def decay_fit(t, f, T, T_max=None, floor=FLOOR, envelope=True, min_samples=50):
    """Least-squares fit of log|f(t)| = intercept + beta |t| over T <= |t| <= T_max.

    With envelope=True the fit runs through the outer envelope max_{|s| >= |t|} |f(s)| (taken
    separately on each side of the origin), so the zeros of an oscillating tail do not drag the
    line down; for a monotone tail the envelope is the signal itself. If every tail sample is
    at or below `floor` the result is an underflow notice with beta = -inf.
    """
    t = np.asarray(t, dtype=float)
    a = np.abs(np.asarray(f))
    T_max = np.max(np.abs(t)) if T_max is None else T_max
    tail = (np.abs(t) >= T) & (np.abs(t) <= T_max)
    if not np.any(tail):
        raise DomainError("no samples in the tail window")
    if np.all(a[tail] <= floor):
        return DecayFit(-math.inf, math.nan, math.nan, 0, underflow=True)
    if envelope:
        env = a.copy()
        for side in (np.nonzero(t >= 0)[0], np.nonzero(t < 0)[0]):
            idx = side[np.argsort(np.abs(t[side]))]
            env[idx] = np.maximum.accumulate(a[idx][::-1])[::-1]
        a = env
    keep = tail & (a > floor)
    if keep.sum() < min_samples:
        raise DomainError(f"only {int(keep.sum())} tail samples above the floor; need {min_samples}")
    x, y = np.abs(t[keep]), np.log(a[keep])
    beta, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + beta * x)
    r2 = 1 - np.sum(resid**2) / np.sum((y - y.mean()) ** 2)
    return DecayFit(float(beta), float(intercept), float(r2), int(keep.sum()))


# --------------------------------------------------------------------------- serialization


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows, columns=None):
    rows = list(rows)
    columns = list(columns or (rows[0].keys() if rows else []))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def rows_to_json(rows, **meta):
    def clean(v):
        if isinstance(v, (np.floating, float)):
            v = float(v)
            return v if math.isfinite(v) else repr(v)
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.bool_,)):
            return bool(v)
        return v

    doc = {**{k: clean(v) for k, v in meta.items()}, "rows": [{k: clean(v) for k, v in r.items()} for r in rows]}
    return json.dumps(doc, indent=2, sort_keys=True)
