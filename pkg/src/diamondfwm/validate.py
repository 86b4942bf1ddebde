"""Self-check suite: model invariants evaluated on a given config.

These are the same invariants the test suite pins down, packaged so a
run can be sanity-checked from the command line: passivity of the
transfer matrix over a detuning/sideband grid, conjugation symmetry
under sign reversal of all detunings, agreement of the linear response
with the brute-force master-equation steady state, grid convergence of
the spatial integrator, resonant two-level absorption against the
closed form, and compositionality of transfer matrices over sub-ranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import ConfigBundle
from .propagation import (_transfer_components, coupling_profile, observables_at,
                          transfer_matrix, with_mode)
from .response import _two_level_arrays, linear_response, liouvillian_steady_state, \
    two_level_steady_state


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check_passivity(bundle: ConfigBundle, n_delta: int = 50, n_omega: int = 10,
                    tol: float = 1e-9) -> CheckResult:
    profile = coupling_profile(bundle)
    deltas = np.linspace(bundle.sweep.start, bundle.sweep.stop, n_delta)
    omegas = np.linspace(-5.0, 5.0, n_omega)
    dp, om = [x.ravel() for x in np.meshgrid(deltas, omegas)]
    a, b, c, d = _transfer_components(bundle, profile, dp, om)
    defect = float(max(np.max(np.abs(a) ** 2 + np.abs(c) ** 2) - 1.0,
                       np.max(np.abs(b) ** 2 + np.abs(d) ** 2) - 1.0))
    return CheckResult("passivity", bool(defect <= tol),
                       f"max photon gain {defect:.3e} over {dp.size} "
                       f"(delta_p, omega) points (tol {tol:g})")


def check_conjugation_symmetry(bundle: ConfigBundle, tol: float = 1e-9) -> CheckResult:
    drive = bundle.drive
    flipped = replace(bundle, drive=replace(
        drive, delta_p=-drive.delta_p, delta_c=-drive.delta_c, delta_d=-drive.delta_d))
    prof = coupling_profile(bundle)
    prof_f = coupling_profile(flipped)
    worst = 0.0
    for omega in (-2.0, 0.0, 1.3):
        tm = transfer_matrix(omega, bundle, profile=prof)
        tf = transfer_matrix(-omega, flipped, profile=prof_f)
        worst = max(worst, float(np.max(np.abs(tf.as_array() - tm.as_array().conj()))))
    return CheckResult("conjugation_symmetry", bool(worst <= tol),
                       f"max |T(-) - conj(T)| = {worst:.3e} (tol {tol:g})")


def check_oracle_agreement(bundle: ConfigBundle, draws: int = 5, probe: float = 2.5e-4,
                           tol: float = 1e-6, seed: int = 2024) -> CheckResult:
    """Spot-check the linear response against the master-equation oracle.

    The oracle deviates from the linearization by a physical O(probe^2)
    saturation term, so the default probe amplitude is chosen small
    enough that the truncation floor sits well below the tolerance for
    any parameter draw.
    """
    rng = np.random.default_rng(seed)
    rates = bundle.rates
    worst = 0.0
    for _ in range(draws):
        drive = replace(bundle.drive,
                        omega_c=rng.uniform(1.0, 30.0), omega_d=rng.uniform(1.0, 30.0),
                        delta_p=rng.uniform(-15, 15), delta_c=rng.uniform(-15, 15),
                        delta_d=rng.uniform(-15, 15))
        zeroth = two_level_steady_state(drive.omega_c, drive.delta_c, rates)
        chi = linear_response(0.0, drive, drive.omega_c, zeroth, rates)
        rho_p = liouvillian_steady_state(drive, drive.omega_c, rates, omega_p=probe)
        rho_s = liouvillian_steady_state(drive, drive.omega_c, rates, omega_s=probe)
        pairs = ((rho_p[1, 0] / probe, chi.chi_pp), (rho_p[3, 2] / probe, chi.chi_sp),
                 (rho_s[1, 0] / probe, chi.chi_ps), (rho_s[3, 2] / probe, chi.chi_ss))
        for got, want in pairs:
            worst = max(worst, abs(got - want) / max(abs(want), 1e-30))
    return CheckResult("oracle_agreement", bool(worst <= tol),
                       f"worst relative deviation {worst:.3e} over {draws} "
                       f"parameter draws at probe {probe:g} (tol {tol:g})")


def check_grid_convergence(bundle: ConfigBundle, tol: float = 1e-6) -> CheckResult:
    obs1 = observables_at(bundle)
    fine = replace(bundle, medium=replace(bundle.medium, n_z=2 * bundle.medium.n_z))
    obs2 = observables_at(fine)
    diff = float(max(abs(obs1.T_p - obs2.T_p), abs(obs1.eta_s - obs2.eta_s)))
    return CheckResult("grid_convergence", bool(diff < tol),
                       f"doubling n_z moves (T_p, eta_s) by {diff:.3e} (tol {tol:g})")


def check_beer_absorption(bundle: ConfigBundle, tol: float = 1e-6) -> CheckResult:
    bare = with_mode(replace(bundle, drive=replace(bundle.drive, delta_p=0.0)), "two_level")
    t_p = observables_at(bare, delta_p=0.0).T_p
    want = math.exp(-bundle.medium.alpha_p / 2.0)
    rel = abs(t_p / want - 1.0) if want > 0 else abs(t_p - want)
    return CheckResult("beer_absorption", bool(rel <= tol),
                       f"resonant two-level |A|^2 off by {rel:.3e} relative "
                       f"from exp(-alpha_p/2) (tol {tol:g})")


def check_compositionality(bundle: ConfigBundle, tol: float = 1e-8) -> CheckResult:
    prof = coupling_profile(bundle)
    full = transfer_matrix(0.0, bundle, profile=prof).as_array()
    first = transfer_matrix(0.0, bundle, profile=prof, zeta_span=(0.0, 0.5)).as_array()
    second = transfer_matrix(0.0, bundle, profile=prof, zeta_span=(0.5, 1.0)).as_array()
    diff = float(np.max(np.abs(second @ first - full)))
    return CheckResult("compositionality", bool(diff <= tol),
                       f"split-product deviation {diff:.3e} (tol {tol:g})")


def check_zeroth_order(bundle: ConfigBundle, tol: float = 1e-9) -> CheckResult:
    wc = np.linspace(0.0, 30.0, 31)
    rho33, rho31 = _two_level_arrays(wc, bundle.drive.delta_c,
                                     bundle.rates.gamma31, bundle.rates.Gamma3_total)
    ok = np.all(rho33 >= -tol) and np.all(rho33 <= 0.5 + tol) \
        and np.all(np.abs(rho31) <= 0.5 + tol)
    return CheckResult("zeroth_order_bounds", bool(ok),
                       f"rho33 in [0, 1/2], |rho31| <= 1/2 over {wc.size} drive strengths")


def run_checks(bundle: ConfigBundle) -> list:
    """Run the whole invariant suite on one config."""
    return [
        check_passivity(bundle),
        check_conjugation_symmetry(bundle),
        check_oracle_agreement(bundle),
        check_grid_convergence(bundle),
        check_beer_absorption(bundle),
        check_compositionality(bundle),
        check_zeroth_order(bundle),
    ]
