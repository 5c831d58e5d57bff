"""Complex-time saddle points and stationary-phase ionization amplitudes.

The direct (no-rescattering) transition amplitude to a final momentum
p = (p_x, p_y) is a time integral over the release time t',

    M(p) = -i  int dt'  e^{i S(t_end, t')}  E(t') d_x(p + A(t')),

with the semiclassical action

    S(t, t') = -(I_p + p_y^2/2) (t - t') - (1/2) [W(t) - W(t')],

where W is the closed-form antiderivative of v_x(tau)^2 and
v_x = p_x + A(tau).  Because A is a four-term trigonometric polynomial,
v_x^2 is a nine-term one and W needs no numerical contour integration.

Stationarity in t' gives the saddle equation

    v_x(t_sp)^2 + p_y^2 + 2 I_p = 0,

whose solutions come in two families v_x = +/- i kappa with
kappa = sqrt(2 I_p + p_y^2) > 0.  In u = e^{i omega t} each family is a
quartic; for a field that is real on the real axis the two root sets are
images of each other under u -> 1/conj(u), so one batched quartic solve
plus that reflection yields every saddle with Im(t_sp) > 0 -- exactly four
per fundamental period, one per half-cycle of the strong 2w drive.  A short
damped-Newton polish on the saddle equation removes the rounding left by
the eigenvalue root finder.

The stationary-phase amplitude sums sqrt(2 pi i / S'') e^{iS} E d_x over
the saddles in a time window.  The square root's branch is anchored at one
grid point (descent direction closest to the real axis) and continued
across the momentum grid so no spurious sign flips occur between
neighboring samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from qsfa.fields import AtomSpec, FieldConfig, vector_harmonics

# Acceptance thresholds for roots and amplitudes
RESIDUAL_TOL = 1e-12          # on |v_x^2 + p_y^2 + 2 Ip| / 2, times max(Ip, 1)
DEDUPE_TOL = 1e-8             # pairwise |dt| below which roots are duplicates
CAUSTIC_TOL = 1e-10           # |S''| below which the SPA prefactor is dropped
POLE_TOL = 1e-8               # |lam^2 + v.v| below which the dipole is flagged

_SQRT_2PI_I = math.sqrt(2.0 * math.pi) * np.exp(0.25j * math.pi)


@dataclass(frozen=True)
class TimeWindow:
    """Real release-time interval [t_start, t_end), atomic units."""

    t_start: float
    t_end: float

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(
                f"empty window: t_start={self.t_start} >= t_end={self.t_end}"
            )

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @classmethod
    def unit_cell(cls, cfg: FieldConfig) -> "TimeWindow":
        """One full fundamental period centered on the 2w field crest.

        The windowed amplitude depends on which period-copy of each release
        family falls inside the window (copies differ by the unit-modulus
        per-period phase e^{i T Phi}).  Centering the window on a crest of
        the strong field (t = T/8 for the sin(2wt) drive) makes the window
        map onto itself under the p_x -> -p_x reflection, which is what
        gives the unperturbed spectrum its left-right symmetry.  Copy
        selection is pinned to the field-only release times (see
        _yield_half), so the weak-field perturbation cannot push a family
        across the cut.
        """
        t_mid = cfg.period / 8.0
        return cls(t_mid - 0.5 * cfg.period, t_mid + 0.5 * cfg.period)

    @classmethod
    def half_cycles(cls, cfg: FieldConfig, start: int = 0, count: int = 1) -> "TimeWindow":
        """Window spanning `count` half-cycles of the 2w drive from index `start`."""
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        q = 0.25 * cfg.period
        return cls(start * q, (start + count) * q)

    def halfcycle_span(self, cfg: FieldConfig) -> int:
        """Number of 2w half-cycles covered; raises if not an integer."""
        q = 0.25 * cfg.period
        n = self.duration / q
        if abs(n - round(n)) > 1e-9:
            raise ValueError(
                f"window duration {self.duration} is not an integer number "
                f"of 2w half-cycles ({q} a.u. each)"
            )
        return int(round(n))


@dataclass(frozen=True)
class SaddleSolution:
    """One complex release time with its bookkeeping labels."""

    t_sp: complex
    event: int            # 1..4, half-cycle of the 2w drive within the period
    orbit: str            # "short" (after the field extremum) or "long"
    residual: float       # |v_x(t_sp)^2 + p_y^2 + 2 Ip| / 2
    halfcycle_index: int  # global half-cycle index floor(Re t / (T/4))
    sigma: int            # sign of Im v_x(t_sp): +1 or -1


@dataclass
class YieldDiagnostics:
    """Tallies accumulated while evaluating SPA yields."""

    dropped: int = 0        # roots failing the residual gate
    duplicates: int = 0     # deduplicated root pairs
    caustic: int = 0        # |S''| below CAUSTIC_TOL, term dropped
    pole_flags: int = 0     # dipole denominator within POLE_TOL of zero
    max_residual: float = 0.0

    def merge(self, other: "YieldDiagnostics") -> None:
        self.dropped += other.dropped
        self.duplicates += other.duplicates
        self.caustic += other.caustic
        self.pole_flags += other.pole_flags
        self.max_residual = max(self.max_residual, other.max_residual)


# --- harmonic helpers -----------------------------------------------------

def _velocity_coeffs(acoeffs: np.ndarray, px: np.ndarray) -> np.ndarray:
    """Harmonics of v_x = p_x + A: shape (..., 5), index k+2."""
    px = np.asarray(px, dtype=np.complex128)
    vc = np.broadcast_to(acoeffs, px.shape + (5,)).copy()
    vc[..., 2] = vc[..., 2] + px
    return vc


def _vsq_coeffs(vc: np.ndarray) -> np.ndarray:
    """Harmonics of v_x^2: shape (..., 9), index m+4."""
    wc = np.zeros(vc.shape[:-1] + (9,), dtype=np.complex128)
    for i in range(5):
        for j in range(5):
            wc[..., i + j] += vc[..., i] * vc[..., j]
    return wc


def _eval_harmonics(coeffs: np.ndarray, kmin: int, omega: float, t: np.ndarray) -> np.ndarray:
    """sum_k coeffs[..., k - kmin] e^{i k omega t}, broadcast over t."""
    u = np.exp(1j * omega * np.asarray(t, dtype=np.complex128))
    nk = coeffs.shape[-1]
    acc = np.zeros(np.broadcast_shapes(u.shape, coeffs.shape[:-1]), dtype=np.complex128)
    for idx in range(nk):
        k = kmin + idx
        if k == 0:
            acc = acc + coeffs[..., idx]
        else:
            acc = acc + coeffs[..., idx] * u ** k
    return acc


def _vsq_antideriv(wc: np.ndarray, omega: float, t: np.ndarray) -> np.ndarray:
    """W(t) with W' = v_x^2: the m = 0 term integrates to W_0 t."""
    t = np.asarray(t, dtype=np.complex128)
    u = np.exp(1j * omega * t)
    acc = wc[..., 4] * t
    for idx in range(9):
        m = idx - 4
        if m == 0:
            continue
        acc = acc + wc[..., idx] * u ** m / (1j * m * omega)
    return acc


def _vel_at(vc: np.ndarray, omega: float, t: np.ndarray) -> np.ndarray:
    return _eval_harmonics(vc, -2, omega, t)


def _dvel_at(vc: np.ndarray, omega: float, t: np.ndarray) -> np.ndarray:
    k = np.arange(-2, 3)
    return _eval_harmonics(vc * (1j * k * omega), -2, omega, t)


# --- action and dipole ----------------------------------------------------

def action(p, t, t_prime, alpha, cfg: FieldConfig, atom: AtomSpec):
    """S(t, t') = -(Ip + p_y^2/2)(t - t') - (1/2)[W(t) - W(t')].

    Accepts real or complex times (scalars or arrays, broadcastable).
    """
    px, py = p
    vc = _velocity_coeffs(vector_harmonics(cfg, alpha), np.asarray(px))
    wc = _vsq_coeffs(vc)
    t = np.asarray(t, dtype=np.complex128)
    tp = np.asarray(t_prime, dtype=np.complex128)
    s = -(atom.ip + 0.5 * py ** 2) * (t - tp)
    s = s - 0.5 * (_vsq_antideriv(wc, cfg.omega, t) - _vsq_antideriv(wc, cfg.omega, tp))
    return s if s.ndim else complex(s)


def action_dt_prime(p, t_prime, alpha, cfg: FieldConfig, atom: AtomSpec):
    """dS/dt' = Ip + p_y^2/2 + v_x(t')^2 / 2 (vanishes at a saddle)."""
    px, py = p
    vc = _velocity_coeffs(vector_harmonics(cfg, alpha), np.asarray(px))
    vx = _vel_at(vc, cfg.omega, np.asarray(t_prime, dtype=np.complex128))
    out = atom.ip + 0.5 * py ** 2 + 0.5 * vx ** 2
    return out if out.ndim else complex(out)


def action_dt(p, t, alpha, cfg: FieldConfig, atom: AtomSpec):
    """dS/dt = -(Ip + p_y^2/2 + v_x(t)^2 / 2)."""
    return -action_dt_prime(p, t, alpha, cfg, atom)


def dipole_element(v, lam: float):
    """Bound-continuum dipole d(v) = i sqrt(lam^3/2) (16 lam / pi) (-v) / (lam^2 + v.v)^3.

    v is a 2-vector (v_x, v_y), possibly complex.  Returns (d_x, d_y) and a
    pole-proximity flag for |lam^2 + v.v| < 1e-8.
    """
    if not lam > 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    vx, vy = v
    denom = lam ** 2 + vx * vx + vy * vy
    flagged = bool(np.any(np.abs(denom) < POLE_TOL))
    c = 1j * math.sqrt(lam ** 3 / 2.0) * (16.0 * lam / math.pi)
    dx = c * (-vx) / denom ** 3
    dy = c * (-vy) / denom ** 3
    return (dx, dy), flagged


def _dipole_x(vx, py2, lam: float):
    denom = lam ** 2 + vx * vx + py2
    c = 1j * math.sqrt(lam ** 3 / 2.0) * (16.0 * lam / math.pi)
    return c * (-vx) / denom ** 3, denom


# --- root finding ---------------------------------------------------------

def _quartic_roots(c4, c3, c2, c1, c0) -> np.ndarray:
    """Roots of c4 u^4 + ... + c0, batched over the shape of c2.

    c4, c3, c1, c0 are scalars (per-node constants); c2 varies per grid
    point.  Uses batched companion-matrix eigenvalues.
    """
    c2 = np.asarray(c2, dtype=np.complex128)
    shape = c2.shape
    comp = np.zeros(shape + (4, 4), dtype=np.complex128)
    comp[..., 1, 0] = 1.0
    comp[..., 2, 1] = 1.0
    comp[..., 3, 2] = 1.0
    comp[..., 0, 3] = -c0 / c4
    comp[..., 1, 3] = -c1 / c4
    comp[..., 2, 3] = -c2 / c4
    comp[..., 3, 3] = -c3 / c4
    return np.linalg.eigvals(comp)


@dataclass
class _CellSaddles:
    """Per-point saddle data over one fundamental period, slot-sorted by Re t."""

    t: np.ndarray          # (..., 4) complex
    vx: np.ndarray         # velocity at the saddles
    dvx: np.ndarray        # velocity derivative (= -E_x)
    residual: np.ndarray   # (..., 4) real
    ok: np.ndarray         # (..., 4) bool, accepted roots
    diag: YieldDiagnostics = field(default_factory=YieldDiagnostics)


def _cell_saddles(cfg: FieldConfig, atom: AtomSpec, alpha, px, py2) -> _CellSaddles:
    """All Im(t) > 0 saddles with Re(t) in [0, T), batched over px/py2.

    px and py2 must broadcast to a common shape; returns arrays of that
    shape plus a trailing slot axis of length 4.
    """
    omega = cfg.omega
    period = cfg.period
    acoeffs = vector_harmonics(cfg, alpha)
    px = np.asarray(px, dtype=np.float64)
    py2 = np.asarray(py2, dtype=np.float64)
    px, py2 = np.broadcast_arrays(px, py2)
    kperp2 = 2.0 * atom.ip + py2
    kperp = np.sqrt(kperp2)

    a2 = acoeffs[4]
    if abs(a2) == 0.0:
        raise ValueError("saddle finding requires a nonzero 2w drive (alpha_2w > 0)")
    c2 = px - 1j * kperp
    u = _quartic_roots(a2, acoeffs[3], c2, acoeffs[1], a2)

    # Reflect |u| > 1 roots into the unit disk: for a field that is real on
    # the real axis these are exactly the Im(t) > 0 saddles of the opposite
    # velocity branch, so one solve covers both families.
    outside = np.abs(u) > 1.0
    u = np.where(outside, 1.0 / np.conj(u), u)
    t = (np.mod(np.angle(u), 2.0 * math.pi) - 1j * np.log(np.abs(u))) / omega

    # Newton polish of f = v_x^2 + kperp^2 (damped, all slots at once)
    vc = _velocity_coeffs(acoeffs, px)[..., None, :]  # (..., 1, 5)
    k2 = kperp2[..., None]
    tol = RESIDUAL_TOL * max(atom.ip, 1.0)
    stalled = np.zeros(t.shape, dtype=bool)
    for _ in range(50):
        vx = _vel_at(vc, omega, t)
        f = vx * vx + k2
        if np.all((np.abs(f) <= 0.05 * tol) | stalled):
            break
        dvx = _dvel_at(vc, omega, t)
        fp = 2.0 * vx * dvx
        small = np.abs(fp) < 1e-300
        stalled |= small
        dt = np.where(small | stalled, 0.0, -f / np.where(small, 1.0, fp))
        # backtrack where the full step does not decrease |f|
        for _ in range(8):
            fnew = _sq_residual(vc, omega, t + dt, k2)
            worse = (fnew > np.abs(f)) & (np.abs(dt) > 1e-16)
            if not np.any(worse):
                break
            dt = np.where(worse, 0.5 * dt, dt)
        t = t + dt
        if np.all(np.abs(dt) < 1e-15 * (1.0 + np.abs(t))):
            vx = _vel_at(vc, omega, t)
            break

    t = t - period * np.floor(t.real / period)
    order = np.argsort(t.real, axis=-1, kind="stable")
    t = np.take_along_axis(t, order, axis=-1)

    vx = _vel_at(vc, omega, t)
    dvx = _dvel_at(vc, omega, t)
    residual = 0.5 * np.abs(vx * vx + k2)

    diag = YieldDiagnostics()
    ok = (residual <= tol) & (t.imag > 0.0)
    diag.dropped = int(np.sum(~ok))
    diag.max_residual = float(np.max(residual[ok])) if np.any(ok) else float("inf")

    # duplicates: adjacent slots (and the wrap-around pair) closer than tol
    close = np.abs(np.diff(t, axis=-1)) < DEDUPE_TOL
    wrap = np.abs(t[..., 0] + period - t[..., 3]) < DEDUPE_TOL
    dup = np.concatenate([wrap[..., None], close], axis=-1)
    diag.duplicates = int(np.sum(dup))
    ok &= ~dup

    return _CellSaddles(t=t, vx=vx, dvx=dvx, residual=residual, ok=ok, diag=diag)


def _sq_residual(vc, omega, t, k2):
    vx = _vel_at(vc, omega, t)
    return np.abs(vx * vx + k2)


def _event_labels(re_t: np.ndarray, period: float):
    """(halfcycle_index, event 1..4, short mask) from the real release time."""
    q = 0.25 * period
    idx = np.floor(re_t / q).astype(int)
    event = np.mod(idx, 4) + 1
    center = (idx + 0.5) * q
    short = re_t >= center
    return idx, event, short


def find_saddles(p, alpha, cfg: FieldConfig, atom: AtomSpec,
                 window: TimeWindow) -> list[SaddleSolution]:
    """All saddles with Re(t_sp) in the window and Im(t_sp) > 0, sorted by Re.

    The window must span an integer number of 2w half-cycles.
    """
    window.halfcycle_span(cfg)
    px, py = p
    cell = _cell_saddles(cfg, atom, alpha, np.asarray(px, dtype=float), py ** 2)
    period = cfg.period
    out: list[SaddleSolution] = []
    n_lo = math.floor(window.t_start / period) - 1
    n_hi = math.ceil(window.t_end / period) + 1
    for n in range(n_lo, n_hi):
        for slot in range(4):
            if not cell.ok[slot]:
                continue
            t = complex(cell.t[slot]) + n * period
            if not (window.t_start <= t.real < window.t_end):
                continue
            idx, event, short = _event_labels(np.asarray(t.real), period)
            out.append(SaddleSolution(
                t_sp=t,
                event=int(event),
                orbit="short" if bool(short) else "long",
                residual=float(cell.residual[slot]),
                halfcycle_index=int(idx),
                sigma=+1 if cell.vx[slot].imag > 0 else -1,
            ))
    out.sort(key=lambda s: s.t_sp.real)
    return out


# --- SPA amplitudes -------------------------------------------------------

def _rightward_root(s2: np.ndarray) -> np.ndarray:
    """Square root of S'' whose descent direction crosses left-to-right.

    Picks the root with arg in [-pi/4, 3pi/4), i.e. the steepest-descent
    direction chi = pi/4 - arg(root) lying in (-pi/2, pi/2].
    """
    s = np.sqrt(s2)
    return np.where(np.angle(s) < -0.25 * math.pi, -s, s)


def _continue_root(prev: np.ndarray, s2_next: np.ndarray) -> np.ndarray:
    """Branch of sqrt(s2_next) continuous with the previously chosen root."""
    s = np.sqrt(s2_next)
    flip = (s * np.conj(prev)).real < 0.0
    return np.where(flip, -s, s)


def _tracked_roots(s2: np.ndarray, anchor_ix: int, sabotage: bool = False) -> np.ndarray:
    """Branch-continued sqrt(S'') over a grid, shape (nx, ny, nslot).

    Anchored with the rightward rule at (anchor_ix, 0), continued first up
    the anchor column, then along each row away from the anchor column.
    """
    nx, ny, _ = s2.shape
    s = np.empty_like(s2)
    s[anchor_ix, 0] = _rightward_root(s2[anchor_ix, 0])
    for iy in range(1, ny):
        s[anchor_ix, iy] = _continue_root(s[anchor_ix, iy - 1], s2[anchor_ix, iy])
    for ix in range(anchor_ix + 1, nx):
        s[ix, :] = _continue_root(s[ix - 1, :], s2[ix, :])
    for ix in range(anchor_ix - 1, -1, -1):
        s[ix, :] = _continue_root(s[ix + 1, :], s2[ix, :])
    if sabotage:
        # Test hook: pick the wrong sqrt branch for half the slots on every
        # other momentum column.  This corrupts the relative phases between
        # interfering trajectories (a column-global sign would cancel in the
        # modulus) and must be caught by the oracle-correlation gate.
        flip = np.where(np.arange(nx) % 2 == 1, -1.0, 1.0)
        s = s.copy()
        s[..., 1::2] = s[..., 1::2] * flip[:, None, None]
    return s


def _slot_terms(cfg, atom, alpha, px, py2, cell: _CellSaddles, t_end: float,
                t_shift: float = 0.0):
    """Per-slot SPA pieces: (amp_without_prefactor, S'') at t_sp + t_shift."""
    omega = cfg.omega
    vc = _velocity_coeffs(vector_harmonics(cfg, alpha), px)
    wc = _vsq_coeffs(vc)
    t = cell.t + t_shift
    ip_term = atom.ip + 0.5 * py2
    w_end = _vsq_antideriv(wc, omega, np.asarray(t_end, dtype=np.complex128))
    s_val = -ip_term[..., None] * (t_end - t) - 0.5 * (w_end[..., None] - _vsq_antideriv(wc[..., None, :], omega, t))
    dip, denom = _dipole_x(cell.vx, py2[..., None], atom.lam)
    e_x = -cell.dvx
    s2 = cell.vx * cell.dvx
    amp = np.exp(1j * s_val) * dip * e_x
    pole = np.abs(denom) < POLE_TOL
    return amp, s2, pole


def _half_rows(py_axis: np.ndarray) -> tuple[np.ndarray, bool]:
    """Rows actually evaluated: the p_y >= 0 half when the axis is symmetric."""
    ny = py_axis.size
    half = ny > 1 and bool(np.all(py_axis[::-1] == -py_axis))
    return (py_axis[ny // 2:] if half else py_axis), half


def grid_seeds(px_axis: np.ndarray, py_axis: np.ndarray, cfg: FieldConfig,
               atom: AtomSpec) -> _CellSaddles:
    """Field-only (alpha = 0) release times for a momentum grid.

    yield_grid assigns period copies to the window by these alpha-independent
    positions, so an ensemble sweep can compute them once per grid and pass
    them to every node evaluation via the seeds argument.
    """
    px_axis = np.asarray(px_axis, dtype=np.float64)
    rows, _ = _half_rows(np.asarray(py_axis, dtype=np.float64))
    return _cell_saddles(cfg, atom, 0j, px_axis[:, None], (rows ** 2)[None, :])


def yield_grid(px_axis: np.ndarray, py_axis: np.ndarray, alpha, cfg: FieldConfig,
               atom: AtomSpec, window: TimeWindow | None = None, *,
               seeds: _CellSaddles | None = None,
               sabotage_branches: bool = False,
               collect_diag: YieldDiagnostics | None = None) -> np.ndarray:
    """SPA yield on a momentum grid for one field amplitude alpha.

    Returns shape (nx, ny).  The window defaults to the unit cell; it may
    span any integer number of 2w half-cycles.  Each release family
    contributes the period copy whose field-only (alpha = 0) release time
    lies inside the window; pinning the copy choice to the unperturbed
    positions keeps the yield a smooth function of alpha even when the node
    field shifts a release time across the window cut (a membership test on
    the shifted times would jump by the per-period phase there, which
    destroys quadrature convergence of the ensemble average).  Exploits the
    exact p_y -> -p_y symmetry by computing the upper half-plane only when
    the p_y axis is symmetric about zero.
    """
    px_axis = np.asarray(px_axis, dtype=np.float64)
    py_axis = np.asarray(py_axis, dtype=np.float64)
    if window is None:
        window = TimeWindow.unit_cell(cfg)
    window.halfcycle_span(cfg)

    rows, half = _half_rows(py_axis)
    y = _yield_half(px_axis, rows, alpha, cfg, atom, window,
                    sabotage_branches, collect_diag, seeds)
    if half:
        ny = py_axis.size
        y = np.concatenate([y[:, ::-1][:, : ny // 2], y], axis=1)
    return y


def _yield_half(px_axis, rows, alpha, cfg, atom, window, sabotage, collect_diag,
                seeds: _CellSaddles | None = None):
    period = cfg.period
    px = px_axis[:, None]
    py2 = (rows ** 2)[None, :]
    cell = _cell_saddles(cfg, atom, alpha, px, py2)
    if collect_diag is not None:
        collect_diag.merge(cell.diag)
    if seeds is None:
        seeds = cell if alpha == 0 else _cell_saddles(cfg, atom, 0j, px, py2)
    if seeds.t.shape != cell.t.shape:
        raise ValueError(
            f"seeds were built for a different grid: shape {seeds.t.shape} "
            f"vs {cell.t.shape}"
        )

    # Slot k of the alpha cell is matched to slot k of the seed cell: both
    # are sorted by Re(t) within [0, T), the perturbed times stay within a
    # couple of a.u. of their seeds over the sampled node range, and the
    # only near-degenerate seed pairs (orbits coalescing at the cutoff
    # momentum) sit a quarter 2w-cycle away from any unit-cell cut, so an
    # order swap there never splits a pair across the window edge.
    px_b, py2_b = np.broadcast_arrays(px, py2)
    m_total = np.zeros(px_b.shape, dtype=np.complex128)
    n_lo = math.floor(window.t_start / period) - 1
    n_hi = math.ceil(window.t_end / period) + 1
    anchor_ix = px_axis.size // 2
    for n in range(n_lo, n_hi):
        shift = n * period
        re_seed = seeds.t.real + shift
        in_win = (re_seed >= window.t_start) & (re_seed < window.t_end) & cell.ok
        if not np.any(in_win):
            continue
        amp, s2, pole = _slot_terms(cfg, atom, alpha, px_b, py2_b, cell,
                                    window.t_end, t_shift=shift)
        caustic = np.abs(s2) < CAUSTIC_TOL
        use = in_win & ~caustic
        if collect_diag is not None:
            collect_diag.pole_flags += int(np.sum(pole & in_win))
            collect_diag.caustic += int(np.sum(caustic & in_win))
        root = _tracked_roots(np.where(caustic, 1.0, s2), anchor_ix,
                              sabotage=sabotage)
        m_total += np.sum(np.where(use, _SQRT_2PI_I / root * amp, 0.0), axis=-1)
    return np.abs(m_total) ** 2


def pmd_single(p, alpha, cfg: FieldConfig, atom: AtomSpec,
               window: TimeWindow | None = None) -> float:
    """Yield |SPA sum|^2 at one momentum over one full fundamental period."""
    if window is None:
        window = TimeWindow.unit_cell(cfg)
    if abs(window.duration - cfg.period) > 1e-9 * cfg.period:
        raise ValueError("pmd_single requires a window of exactly one period")
    return differential_yield(p, alpha, cfg, atom, window)


def differential_yield(p, alpha, cfg: FieldConfig, atom: AtomSpec,
                       window: TimeWindow) -> float:
    """Yield from saddles released inside the window (coherent sum)."""
    px, py = p
    y = yield_grid(np.asarray([px], dtype=float), np.asarray([py], dtype=float),
                   alpha, cfg, atom, window)
    return float(y[0, 0])


# --- validation oracle ----------------------------------------------------

def _release_integrand(p, alpha, cfg: FieldConfig, atom: AtomSpec, t_end: float):
    """Closure evaluating e^{i S(t_end, t')} E_x(t') d_x(v(t')) at complex t'."""
    px, py = p
    omega = cfg.omega
    vc = _velocity_coeffs(vector_harmonics(cfg, alpha), np.asarray(px, dtype=float))
    wc = _vsq_coeffs(vc)
    ip_term = atom.ip + 0.5 * py ** 2
    w_end = complex(_vsq_antideriv(wc, omega, np.asarray(t_end, dtype=np.complex128)))

    def integrand(tp: complex) -> complex:
        tpa = np.asarray(tp, dtype=np.complex128)
        vx = complex(_vel_at(vc, omega, tpa))
        s = -ip_term * (t_end - tp) - 0.5 * (w_end - complex(_vsq_antideriv(wc, omega, tpa)))
        dip, _ = _dipole_x(vx, py ** 2, atom.lam)
        e_x = complex(-_dvel_at(vc, omega, tpa))
        return np.exp(1j * s) * e_x * dip

    return integrand


def _sheet_times(cfg: FieldConfig, alpha, px: float, kappa: float) -> np.ndarray:
    """Upper-half-plane times where v_x^2 = -kappa^2, one period, shape (4,).

    kappa = sqrt(2 Ip + p_y^2) gives the release saddles; kappa built from
    the dipole's lambda gives the dipole pole times instead.
    """
    acoeffs = vector_harmonics(cfg, alpha)
    a2 = acoeffs[4]
    c2 = np.asarray([px - 1j * kappa], dtype=np.complex128)
    u = _quartic_roots(a2, acoeffs[3], c2, acoeffs[1], a2)[0]
    outside = np.abs(u) > 1.0
    u = np.where(outside, 1.0 / np.conj(u), u)
    return (np.mod(np.angle(u), 2.0 * math.pi) - 1j * np.log(np.abs(u))) / cfg.omega


def _safe_edge_height(p, alpha, cfg: FieldConfig, atom: AtomSpec,
                      window: TimeWindow | None = None) -> float:
    """Contour height between the release-saddle row and the dipole-pole row.

    Verticals must stay below the dipole poles (v_x = +/- i lambda_perp) or
    the closed rectangle picks up their residues; they must pass above the
    saddles to capture the full steepest-descent content.  Only singular
    times whose real part falls inside the closed rectangle matter, so when
    a window is given the rows are restricted to it (plus a small margin
    that keeps the verticals clear of near-edge poles).
    """
    px, py = p
    kappa = math.sqrt(2.0 * atom.ip + py ** 2)
    lam_perp = math.sqrt(atom.lam ** 2 + py ** 2)
    saddle_row = _sheet_times(cfg, alpha, px, kappa)
    pole_row = _sheet_times(cfg, alpha, px, lam_perp)
    if window is not None:
        margin = cfg.period / 32.0
        lo, hi = window.t_start - margin, window.t_end + margin

        def local(ts: np.ndarray) -> np.ndarray:
            copies = ts[:, None] + cfg.period * np.arange(-2, 3)[None, :]
            keep = copies[(copies.real >= lo) & (copies.real <= hi)]
            return keep if keep.size else ts

        saddle_row = local(saddle_row)
        pole_row = local(pole_row)
    top = float(np.max(saddle_row.imag))
    bottom = float(np.min(pole_row.imag))
    if bottom <= top:
        raise ValueError(
            f"dipole pole row (Im={bottom:.3f}) not above saddle row "
            f"(Im={top:.3f}); edge correction is ill-defined here"
        )
    return 0.5 * (top + bottom)


def window_edge_term(p, alpha, cfg: FieldConfig, atom: AtomSpec,
                     window: TimeWindow, edge: str, *,
                     abs_tol: float = 1e-13,
                     y_max: float | None = None) -> complex:
    """Vertical contour integral rising from one window edge.

    A finite release window contributes endpoint pieces on top of the saddle
    structure.  Closing the contour upward at a window edge isolates that
    piece exactly: this returns integral_0^ymax i * integrand(a + i y) dy
    with a the requested edge.  The height defaults to halfway between the
    saddle row and the dipole-pole row, so the corrected amplitude
    oracle - term(start) + term(end) equals the horizontal contour through
    the saddles (no pole residues) and is what the stationary-phase sum
    approximates.
    """
    if edge not in ("start", "end"):
        raise ValueError("edge must be 'start' or 'end'")
    if y_max is None:
        y_max = _safe_edge_height(p, alpha, cfg, atom, window)
    a = window.t_start if edge == "start" else window.t_end
    integrand = _release_integrand(p, alpha, cfg, atom, window.t_end)

    def vert(y: float, part: int) -> float:
        val = 1j * integrand(a + 1j * y)
        return val.real if part == 0 else val.imag

    re, _ = quad(lambda y: vert(y, 0), 0.0, y_max,
                 epsabs=abs_tol, epsrel=1e-11, limit=500)
    im, _ = quad(lambda y: vert(y, 1), 0.0, y_max,
                 epsabs=abs_tol, epsrel=1e-11, limit=500)
    return complex(re, im)


def oracle_amplitude(p, alpha, cfg: FieldConfig, atom: AtomSpec,
                     window: TimeWindow, abs_tol: float = 1e-10,
                     full_output: bool = False, subtract_edges: bool = False):
    """Direct adaptive quadrature of the release-time integral (no SPA).

    Integrates e^{i S(t_end, t')} E(t') d_x(p + A(t')) for real t' over the
    window; used only to validate the stationary-phase result.  With
    subtract_edges=True the two window-edge contour terms are removed so the
    result carries only the interior saddle content (see window_edge_term).
    """
    integrand = _release_integrand(p, alpha, cfg, atom, window.t_end)
    re, re_err = quad(lambda tp: integrand(tp).real, window.t_start, window.t_end,
                      epsabs=abs_tol, epsrel=1e-10, limit=4000)
    im, im_err = quad(lambda tp: integrand(tp).imag, window.t_start, window.t_end,
                      epsabs=abs_tol, epsrel=1e-10, limit=4000)
    err = math.hypot(re_err, im_err)
    if err > 100.0 * abs_tol and err > 1e-6 * math.hypot(re, im):
        raise RuntimeError(
            f"oracle quadrature did not reach tolerance: error estimate {err:.3e}"
        )
    amp = complex(re, im)
    if subtract_edges:
        amp = (amp
               - window_edge_term(p, alpha, cfg, atom, window, "start")
               + window_edge_term(p, alpha, cfg, atom, window, "end"))
    return (amp, err) if full_output else amp
