"""Steady state of the driven coupling transition and the weak-field
linear response of the four-level medium.

Index convention: density-matrix elements are written rho_jk = <j|rho|k>
with levels numbered 1..4, so the collective lowering operator for the
|k> -> |j> transition has expectation value rho_kj.  Arrays use 0-based
indices, i.e. rho_21 lives at ``rho[1, 0]``.

The rotating frame places |1> at zero, |2> at the probe frequency,
|3> at the coupling frequency and |4> at probe + driving.  In that frame

    H = -delta_p |2><2| - delta_c |3><3| - delta |4><4|
        - (omega_p |2><1| + omega_c |3><1| + omega_d |4><2|
           + omega_s |4><3|) / 2 + h.c.

with delta = delta_p + delta_d.  A weak-field component oscillating as
exp(-i omega t) relative to its carrier sees every detuning shifted by
the sideband frequency omega.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DriveConfig, RateTable
from .errors import NoUniqueSteadyStateError, SingularResponseError

_DET_TOL = 1e-28   # singularity threshold on |det|, scaled by matrix magnitude


@dataclass(frozen=True)
class ZerothOrderState:
    """Steady state of the coupling-driven |1> <-> |3> subsystem."""

    rho33: float
    rho31: complex

    @property
    def rho11(self) -> float:
        return 1.0 - self.rho33

    @property
    def rho13(self) -> complex:
        return np.conj(self.rho31)


@dataclass(frozen=True)
class ResponseMatrix:
    """Linear susceptibility coefficients of the two weak coherences.

    rho_21 = chi_pp * omega_p + chi_ps * omega_s
    rho_43 = chi_sp * omega_p + chi_ss * omega_s
    """

    chi_pp: complex
    chi_ps: complex
    chi_sp: complex
    chi_ss: complex


def _two_level_arrays(omega_c, delta_c, gamma31, Gamma3):
    """Vectorized closed-form steady state of the driven two-level pair.

    From the optical Bloch equations with total decay Gamma3 back to the
    ground state (closed transition):

        rho33 = (s/2) * gamma31 / (Gamma3*(gamma31^2 + delta_c^2) + s*gamma31)
        rho31 = (i/2) omega_c (1 - 2 rho33) / (gamma31 - i delta_c)

    with s = |omega_c|^2.  The form above stays finite for Gamma3 -> 0
    (full saturation, rho33 -> 1/2).
    """
    omega_c = np.asarray(omega_c, dtype=np.complex128)
    s = omega_c.real ** 2 + omega_c.imag ** 2
    den = Gamma3 * (gamma31 ** 2 + delta_c ** 2) + s * gamma31
    with np.errstate(invalid="ignore", divide="ignore"):
        rho33 = np.where(den > 0.0, 0.5 * s * gamma31 / np.where(den > 0.0, den, 1.0), 0.0)
        rho31 = 0.5j * omega_c * (1.0 - 2.0 * rho33) / (gamma31 - 1j * delta_c)
    return rho33, rho31


def two_level_steady_state(omega_c_local: complex, delta_c: float,
                           rates: RateTable) -> ZerothOrderState:
    """Steady state of the coupling transition at a (possibly complex)
    local Rabi frequency."""
    rho33, rho31 = _two_level_arrays(omega_c_local, delta_c,
                                     rates.gamma31, rates.Gamma3_total)
    return ZerothOrderState(rho33=float(rho33), rho31=complex(rho31))


def _chi_arrays(omega_c, rho11, rho13, rho31, rho33,
                delta_p, omega, delta_c, delta_d, omega_d, rates):
    """Susceptibility coefficients on broadcastable arrays.

    Solves, at sideband frequency omega, the steady-state system for the
    first-order coherences X = (rho_21, rho_23, rho_41, rho_43):

        0 = [i(dp+w) - g21] r21 + (i/2)(-Wc r23 + Wd* r41) + (i/2) Wp rho11
        0 = [i(dp-dc+w) - g23] r23 + (i/2)(-Wc* r21 + Wd* r43) + (i/2) Wp rho13
        0 = [i(d+w) - g41] r41 + (i/2)(Wd r21 - Wc r43) + (i/2) Ws rho31
        0 = [i(d-dc+w) - g43] r43 + (i/2)(Wd r23 - Wc* r41) + (i/2) Ws rho33

    The system splits into 2x2 blocks coupled by scalar multiples of the
    identity ((i/2) Wd), so it is eliminated in closed form; this is
    exact dense elimination specialized to the block structure and
    vectorizes over position and frequency.
    """
    delta = delta_p + delta_d
    d1 = 1j * (delta_p + omega) - rates.gamma21
    d2 = 1j * (delta_p - delta_c + omega) - rates.gamma23
    d3 = 1j * (delta + omega) - rates.gamma41
    d4 = 1j * (delta - delta_c + omega) - rates.gamma43

    oc = -0.5j * omega_c          # upper off-diagonal of each 2x2 block
    occ = -0.5j * np.conj(omega_c)
    w = 0.5j * np.conj(omega_d)   # couples P=(r21,r23) to Q=(r41,r43)
    v = 0.5j * omega_d
    e = w * v                     # = -|omega_d|^2 / 4
    g = oc * occ                  # = -|omega_c|^2 / 4

    det_q = d3 * d4 - g
    scale2 = (1.0 + np.abs(d1) + np.abs(d2) + np.abs(d3) + np.abs(d4)
              + np.abs(omega_c) + abs(omega_d)) ** 2
    if np.any(np.abs(det_q) < _DET_TOL * scale2):
        raise SingularResponseError(
            "lower coherence block is singular (zero decoherence with coincident resonances)")
    inv_q = 1.0 / det_q

    # Schur complement of the Q block: S = Dp - e Dq^{-1}
    f = e * inv_q
    s11 = d1 - f * d4
    s22 = d2 - f * d3
    fac = 1.0 + f                 # off-diagonals become oc*fac, occ*fac
    det_p = s11 * s22 - g * fac * fac
    if np.any(np.abs(det_p) < _DET_TOL * scale2):
        raise SingularResponseError(
            "reduced probe block is singular (zero decoherence with coincident resonances)")
    inv_p = 1.0 / det_p

    # probe source: bp = -(i/2)(rho11, rho13), bq = 0
    bp1 = -0.5j * rho11
    bp2 = -0.5j * rho13
    chi_pp = (s22 * bp1 - oc * fac * bp2) * inv_p
    p2 = (s11 * bp2 - occ * fac * bp1) * inv_p
    chi_sp = -v * (d3 * p2 - occ * chi_pp) * inv_q

    # signal source: bp = 0, bq = -(i/2)(rho31, rho33)
    bq1 = -0.5j * rho31
    bq2 = -0.5j * rho33
    rp1 = -w * (d4 * bq1 - oc * bq2) * inv_q
    rp2 = -w * (d3 * bq2 - occ * bq1) * inv_q
    chi_ps = (s22 * rp1 - oc * fac * rp2) * inv_p
    p2 = (s11 * rp2 - occ * fac * rp1) * inv_p
    chi_ss = (d3 * (bq2 - v * p2) - occ * (bq1 - v * chi_ps)) * inv_q
    return chi_pp, chi_ps, chi_sp, chi_ss


def linear_response(omega: float, drive: DriveConfig, omega_c_local: complex,
                    zeroth: ZerothOrderState, rates: RateTable) -> ResponseMatrix:
    """First-order response of the four weak-field coherences at sideband
    frequency ``omega``, for the given local coupling Rabi frequency and
    the zeroth-order state consistent with it."""
    chi = _chi_arrays(np.complex128(omega_c_local),
                      zeroth.rho11, zeroth.rho13, zeroth.rho31, zeroth.rho33,
                      float(drive.delta_p), float(omega), drive.delta_c,
                      drive.delta_d, drive.omega_d, rates)
    return ResponseMatrix(*(complex(c) for c in chi))


def liouvillian_generator(omega_p: complex, omega_s: complex, omega_c: complex,
                          omega_d: complex, delta_p: float, delta_c: float,
                          delta_d: float, rates: RateTable) -> np.ndarray:
    """Full 16x16 generator of the four-level master equation.

    Coherent part from the rotating-frame Hamiltonian above; relaxation
    from the four population decay channels as Lindblad dissipators plus
    a uniform ``gamma_extra`` dephasing of every coherence.  With the
    default rate table (partials summing to totals, coherence rates at
    their half-sum defaults) this reproduces exactly the gamma_jk used
    by the linear response.
    """
    delta = delta_p + delta_d
    H = np.zeros((4, 4), dtype=np.complex128)
    H[1, 1] = -delta_p
    H[2, 2] = -delta_c
    H[3, 3] = -delta
    for (j, k, w) in ((1, 0, omega_p), (2, 0, omega_c), (3, 1, omega_d), (3, 2, omega_s)):
        H[j, k] = -0.5 * w
        H[k, j] = -0.5 * np.conj(w)
    eye = np.eye(4)
    gen = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    channels = ((1, 0, rates.Gamma21), (2, 0, rates.Gamma31),
                (3, 1, rates.Gamma42), (3, 2, rates.Gamma43))
    for j, k, rate in channels:
        if rate == 0.0:
            continue
        c = np.zeros((4, 4))
        c[k, j] = 1.0
        cc = c.T @ c
        gen += rate * (np.kron(c, c.conj()) - 0.5 * np.kron(cc, eye) - 0.5 * np.kron(eye, cc.T))
    if rates.gamma_extra:
        for a in range(4):
            for b in range(4):
                if a != b:
                    gen[4 * a + b, 4 * a + b] -= rates.gamma_extra
    return gen


def liouvillian_steady_state(drive: DriveConfig, omega_c_local: complex,
                             rates: RateTable, omega_p: complex = 0.0,
                             omega_s: complex = 0.0) -> np.ndarray:
    """Brute-force steady state of the full master equation.

    Returns the 4x4 density matrix (trace one) found from the null space
    of the generator.  This is the test oracle for the perturbative
    linear response; the probe/signal amplitudes should stay <= 1e-2 for
    meaningful comparisons.
    """
    gen = liouvillian_generator(omega_p, omega_s, omega_c_local, drive.omega_d,
                                drive.delta_p, drive.delta_c, drive.delta_d, rates)
    _, svals, vh = np.linalg.svd(gen)
    tol = 1e-10 * max(1.0, svals[0])
    nullity = int(np.sum(svals < tol))
    if nullity != 1:
        raise NoUniqueSteadyStateError(
            f"generator nullity is {nullity}, steady state is not unique")
    rho = vh[-1].conj().reshape(4, 4)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)
