"""Field propagation across the medium: coupling-beam attenuation,
probe/signal transfer matrices, steady-state observables and swept
spectra.

Propagation works on flux-normalized amplitudes

    u_p = omega_p / sqrt(gamma21 * alpha_p)
    u_s = omega_s / sqrt(gamma43 * alpha_s)

whose squared magnitudes are proportional to photon flux, so that
|C|^2 is a true photon-number conversion efficiency.  The coupled
equations along zeta in [0, 1] are

    d/dzeta (u_p, u_s) = M(zeta, omega) (u_p, u_s)

with M assembled from the local linear response at the attenuated
coupling field omega_c(zeta).  Everything is integrated with fixed-step
RK4; the coupling profile is sampled at half-step resolution so the
transfer-matrix integrator finds its midpoint values on the same grid.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .config import ConfigBundle, SWEEP_MODES, with_mode
from .errors import ConfigValidationError
from .response import _chi_arrays, _two_level_arrays

_PAIR_CHUNK = 64   # frequency points per vectorized block, keeps temporaries small


def _profile_kernel(w0, n_half, h, num, den0, slope):
    """RK4 integration of d w/d zeta = num * w / (den0 + slope*|w|^2).

    ``w0`` is a batch of initial coupling amplitudes; returns the
    half-step profile of shape (batch, n_half + 1).
    """
    out = np.empty((w0.shape[0], n_half + 1), dtype=np.complex128)
    for b in range(w0.shape[0]):
        w = w0[b]
        out[b, 0] = w
        for i in range(n_half):
            d = den0 + slope * (w.real * w.real + w.imag * w.imag)
            k1 = num * w / d if d != 0.0 else 0.0j
            w2 = w + 0.5 * h * k1
            d = den0 + slope * (w2.real * w2.real + w2.imag * w2.imag)
            k2 = num * w2 / d if d != 0.0 else 0.0j
            w3 = w + 0.5 * h * k2
            d = den0 + slope * (w3.real * w3.real + w3.imag * w3.imag)
            k3 = num * w3 / d if d != 0.0 else 0.0j
            w4 = w + h * k3
            d = den0 + slope * (w4.real * w4.real + w4.imag * w4.imag)
            k4 = num * w4 / d if d != 0.0 else 0.0j
            w = w + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[b, i + 1] = w
    return out


try:  # optional JIT; the interpreted fallback is identical
    from numba import njit

    _profile_kernel = njit(cache=True)(_profile_kernel)
except ImportError:  # pragma: no cover
    pass


@dataclass(frozen=True)
class CouplingProfile:
    """Coupling Rabi frequency sampled on the half-step spatial grid.

    ``zeta`` and ``omega_c`` have 2*n_steps + 1 entries; even indices are
    the RK4 nodes, odd indices the midpoints.
    """

    zeta: np.ndarray
    omega_c: np.ndarray
    n_steps: int

    def __post_init__(self):
        self.zeta.setflags(write=False)
        self.omega_c.setflags(write=False)

    def at_nodes(self) -> np.ndarray:
        return self.omega_c[::2]


@dataclass(frozen=True)
class Observables:
    """Steady-state transmissions and conversion efficiencies."""

    T_p: float
    eta_s: float
    T_s: float
    eta_p: float


@dataclass(frozen=True)
class TransferMatrix:
    """Frequency-domain map from input to output flux amplitudes.

    (u_p, u_s)_out = [[a, b], [c, d]] (u_p, u_s)_in; a and d preserve the
    mode, b and c convert between probe and signal.
    """

    omega: float
    a: complex
    b: complex
    c: complex
    d: complex

    @property
    def passivity_defect(self) -> float:
        """max(column photon gain, 0); should stay <= ~1e-9 for an
        absorptive medium."""
        col_p = abs(self.a) ** 2 + abs(self.c) ** 2
        col_s = abs(self.b) ** 2 + abs(self.d) ** 2
        return max(col_p - 1.0, col_s - 1.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])


def coupling_profile(bundle: ConfigBundle, omega_c0: Optional[complex] = None) -> CouplingProfile:
    """Integrate the coupling-field envelope across the medium.

    Solves d omega_c/d zeta = (i gamma31 alpha_c / 2) rho_31 with the
    local two-level steady state slaved to omega_c(zeta) (the coupling
    beam reaches steady state long before the probe arrives).
    """
    if omega_c0 is None:
        if bundle.drive is None:
            raise ConfigValidationError("fields", "this config has no drive fields")
        omega_c0 = bundle.drive.omega_c
    rates, medium = bundle.rates, bundle.medium
    n = medium.n_z
    n_half = 2 * n
    zeta = np.linspace(0.0, 1.0, n_half + 1)
    if medium.alpha_c == 0.0 or omega_c0 == 0.0:
        return CouplingProfile(zeta=zeta,
                               omega_c=np.full(n_half + 1, complex(omega_c0)),
                               n_steps=n)
    g31, G3 = rates.gamma31, rates.Gamma3_total
    dc = bundle.drive.delta_c if bundle.drive is not None else 0.0
    # rhs(w) = (i g31 ac / 2) * (i/2) w (1 - 2 rho33) / (g31 - i dc)
    #        = num * w / (den0 + g31 |w|^2),  den0 = G3 (g31^2 + dc^2)
    den0 = G3 * (g31 ** 2 + dc ** 2)
    num = -0.25 * g31 * medium.alpha_c * den0 / (g31 - 1j * dc)
    w0 = np.array([complex(omega_c0)], dtype=np.complex128)
    prof = _profile_kernel(w0, n_half, 1.0 / n_half, num, den0, g31)[0]
    return CouplingProfile(zeta=zeta, omega_c=prof, n_steps=n)


def _mat_mul(a11, a12, a21, a22, b11, b12, b21, b22):
    return (a11 * b11 + a12 * b21, a11 * b12 + a12 * b22,
            a21 * b11 + a22 * b21, a21 * b12 + a22 * b22)


def _step_propagators(Mpp, Mps, Msp, Mss, h):
    """Per-step RK4 propagators R_i for dU/dzeta = M U on the half grid.

    For a linear system the RK4 update is U_{i+1} = R_i U_i with

        k1 = M0;  k2 = Mm (I + h/2 k1);  k3 = Mm (I + h/2 k2)
        k4 = M1 (I + h k3);  R = I + h/6 (k1 + 2k2 + 2k3 + k4)

    where M0, Mm, M1 sample the node, midpoint and next node.
    """
    def sample(sl):
        return tuple(np.ascontiguousarray(m[sl]) for m in (Mpp, Mps, Msp, Mss))

    A0 = sample(slice(0, -2, 2))
    Am = sample(slice(1, -1, 2))
    A1 = sample(slice(2, None, 2))

    def plus_eye(mats, scale):
        return (1.0 + scale * mats[0], scale * mats[1], scale * mats[2], 1.0 + scale * mats[3])

    k1 = A0
    k2 = _mat_mul(*Am, *plus_eye(k1, 0.5 * h))
    k3 = _mat_mul(*Am, *plus_eye(k2, 0.5 * h))
    k4 = _mat_mul(*A1, *plus_eye(k3, h))
    c = h / 6.0
    r11 = 1.0 + c * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    r12 = c * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    r21 = c * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
    r22 = 1.0 + c * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
    return r11, r12, r21, r22


def _ordered_product(r11, r12, r21, r22):
    """Product R_{n-1} @ ... @ R_0 by pairwise reduction along axis 0."""
    while r11.shape[0] > 1:
        m = r11.shape[0] // 2
        head = (r11[1:2 * m:2], r12[1:2 * m:2], r21[1:2 * m:2], r22[1:2 * m:2])
        tail = (r11[0:2 * m:2], r12[0:2 * m:2], r21[0:2 * m:2], r22[0:2 * m:2])
        prod = _mat_mul(*head, *tail)
        if r11.shape[0] % 2:
            prod = tuple(np.concatenate([p, q[-1:]], axis=0)
                         for p, q in zip(prod, (r11, r12, r21, r22)))
        r11, r12, r21, r22 = prod
    return r11[0], r12[0], r21[0], r22[0]


def _transfer_components(bundle: ConfigBundle, profile: CouplingProfile,
                         delta_p, omega, step_range=None, threads: int = 1):
    """Transfer-matrix entries (a, b, c, d) for arrays of detuning pairs.

    ``delta_p`` and ``omega`` are broadcast to a common 1-D batch; the
    result arrays have that batch shape.  ``step_range`` selects a slice
    [i0, i1) of the n_z RK4 steps (used for compositionality checks).
    """
    if bundle.drive is None:
        raise ConfigValidationError("fields", "this config has no drive fields")
    rates, medium, drive = bundle.rates, bundle.medium, bundle.drive
    delta_p, omega = np.broadcast_arrays(np.atleast_1d(np.asarray(delta_p, float)),
                                         np.atleast_1d(np.asarray(omega, float)))
    n = profile.n_steps
    i0, i1 = step_range if step_range is not None else (0, n)
    if not (0 <= i0 <= i1 <= n):
        raise ValueError(f"step range {(i0, i1)} outside [0, {n}]")
    h = 1.0 / n

    wc = profile.omega_c[2 * i0:2 * i1 + 1][:, None]
    rho33, rho31 = _two_level_arrays(wc, drive.delta_c, rates.gamma31, rates.Gamma3_total)
    rho11 = 1.0 - rho33
    rho13 = np.conj(rho31)

    cp = 0.5 * rates.gamma21 * medium.alpha_p
    cs = 0.5 * rates.gamma43 * medium.alpha_s
    cx = 0.5 * math.sqrt(rates.gamma21 * medium.alpha_p * rates.gamma43 * medium.alpha_s)

    out = [np.empty(delta_p.shape, dtype=np.complex128) for _ in range(4)]

    def run_chunk(sl):
        chi_pp, chi_ps, chi_sp, chi_ss = _chi_arrays(
            wc, rho11, rho13, rho31, rho33,
            delta_p[sl][None, :], omega[sl][None, :],
            drive.delta_c, drive.delta_d, drive.omega_d, rates)
        props = _step_propagators(1j * cp * chi_pp, 1j * cx * chi_ps,
                                  1j * cx * chi_sp, 1j * cs * chi_ss, h)
        if props[0].shape[0] == 0:   # empty step range: identity
            shape = delta_p[sl].shape
            a = np.ones(shape, dtype=np.complex128)
            z = np.zeros(shape, dtype=np.complex128)
            comps = (a, z, z, a.copy())
        else:
            comps = _ordered_product(*props)
        for dst, src in zip(out, comps):
            dst[sl] = src

    slices = [slice(k, min(k + _PAIR_CHUNK, delta_p.size))
              for k in range(0, delta_p.size, _PAIR_CHUNK)]
    if threads > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_chunk, slices))
    else:
        for sl in slices:
            run_chunk(sl)
    return tuple(out)


def transfer_matrix(omega: float, bundle: ConfigBundle,
                    profile: Optional[CouplingProfile] = None,
                    delta_p: Optional[float] = None,
                    zeta_span=(0.0, 1.0)) -> TransferMatrix:
    """Transfer matrix at one sideband frequency.

    ``zeta_span`` is snapped to the nearest RK4 step boundaries; the
    default covers the whole medium.
    """
    if profile is None:
        profile = coupling_profile(bundle)
    if delta_p is None:
        delta_p = bundle.drive.delta_p if bundle.drive is not None else 0.0
    n = profile.n_steps
    i0 = round(zeta_span[0] * n)
    i1 = round(zeta_span[1] * n)
    a, b, c, d = _transfer_components(bundle, profile, [delta_p], [omega],
                                      step_range=(i0, i1))
    return TransferMatrix(omega=float(omega), a=complex(a[0]), b=complex(b[0]),
                          c=complex(c[0]), d=complex(d[0]))


def observables_at(bundle: ConfigBundle, delta_p: Optional[float] = None,
                   omega: float = 0.0,
                   profile: Optional[CouplingProfile] = None) -> Observables:
    """Steady-state observables T_p = |a|^2, eta_s = |c|^2, T_s = |d|^2,
    eta_p = |b|^2 at the carrier detuning."""
    tm = transfer_matrix(omega, bundle, profile=profile, delta_p=delta_p)
    return Observables(T_p=abs(tm.a) ** 2, eta_s=abs(tm.c) ** 2,
                       T_s=abs(tm.d) ** 2, eta_p=abs(tm.b) ** 2)


@dataclass(frozen=True)
class SpectrumTable:
    """Swept steady-state observables, one row per probe detuning."""

    mode: str
    delta_p: np.ndarray
    T_p: np.ndarray
    eta_s: np.ndarray
    T_s: np.ndarray
    eta_p: np.ndarray
    linewidth: Optional[float] = None
    T_p_conv: Optional[np.ndarray] = None
    eta_s_conv: Optional[np.ndarray] = None

    def columns(self):
        cols = {"delta_p_over_gamma": self.delta_p, "T_p": self.T_p,
                "eta_s": self.eta_s, "T_s": self.T_s, "eta_p": self.eta_p}
        if self.T_p_conv is not None:
            cols["T_p_conv"] = self.T_p_conv
            cols["eta_s_conv"] = self.eta_s_conv
        return cols

    def peak_delta_p(self, column: str = "T_p") -> float:
        """Location of the highest interior local maximum of a column.

        Off-resonant transmission rises toward the sweep edges, so the
        physically meaningful transparency/conversion peak is the best
        interior local maximum; if none exists the global argmax is
        returned.
        """
        y = getattr(self, column)
        return float(self.delta_p[_peak_index(y)])


def _peak_index(y: np.ndarray) -> int:
    if y.size < 3:
        return int(np.argmax(y))
    interior = np.where((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    if interior.size == 0:
        return int(np.argmax(y))
    return int(interior[np.argmax(y[interior])])


def lorentzian_convolve(x: np.ndarray, y: np.ndarray, fwhm: float) -> np.ndarray:
    """Convolve samples on a uniform grid with a unit-area Lorentzian.

    The kernel is renormalized over the in-range samples at every point,
    so a constant input is returned unchanged at the edges.
    """
    half = 0.5 * fwhm
    diff = x[:, None] - x[None, :]
    kernel = half / (diff ** 2 + half ** 2)   # 1/pi absorbed by normalization
    return kernel @ y / kernel.sum(axis=1)


def spectrum_sweep(mode: str, bundle: ConfigBundle, start: Optional[float] = None,
                   stop: Optional[float] = None, step: Optional[float] = None,
                   linewidth: Optional[float] = None, threads: int = 1) -> SpectrumTable:
    """Sweep the probe detuning at omega = 0 in one of the four modes.

    Modes zero out strong fields: v_type drops the driving field,
    cascade drops the coupling field, two_level drops both, fwm keeps
    the configured drive.  When ``linewidth`` (or the config's
    sweep.linewidth) is set, T_p and eta_s are additionally convolved
    with a Lorentzian of that FWHM and emitted as extra columns.
    """
    if mode not in SWEEP_MODES:
        raise ConfigValidationError("sweep.mode",
                                    f"must be one of {SWEEP_MODES}, got {mode!r}")
    start = bundle.sweep.start if start is None else float(start)
    stop = bundle.sweep.stop if stop is None else float(stop)
    step = bundle.sweep.step if step is None else float(step)
    if linewidth is None:
        linewidth = bundle.sweep.linewidth
    if step <= 0.0:
        raise ConfigValidationError("sweep.step", "must be > 0")
    n_pts = int(math.floor((stop - start) / step + 1e-9)) + 1
    if n_pts < 1:
        raise ConfigValidationError("sweep.from", f"empty sweep range [{start}, {stop}]")
    delta_ps = start + step * np.arange(n_pts)

    run = with_mode(bundle, mode)
    profile = coupling_profile(run)
    a, b, c, d = _transfer_components(run, profile, delta_ps,
                                      np.zeros_like(delta_ps), threads=threads)
    table = SpectrumTable(mode=mode, delta_p=delta_ps,
                          T_p=np.abs(a) ** 2, eta_s=np.abs(c) ** 2,
                          T_s=np.abs(d) ** 2, eta_p=np.abs(b) ** 2)
    if linewidth is not None:
        table = replace(table, linewidth=float(linewidth),
                        T_p_conv=lorentzian_convolve(delta_ps, table.T_p, linewidth),
                        eta_s_conv=lorentzian_convolve(delta_ps, table.eta_s, linewidth))
    return table
