"""Time-domain probe-pulse conversion by spectral synthesis.

A square input envelope is decomposed into sideband components
exp(-i omega t), each component is multiplied by the transfer-matrix
entries A(omega) (transmitted probe) and C(omega) (generated signal),
and the outputs are resynthesized.  All times are in 1/Gamma units and
the returned traces are intensity envelopes normalized to unit peak
input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import ConfigBundle
from .errors import ConfigValidationError, PulseGridError
from .propagation import CouplingProfile, _transfer_components, coupling_profile

MIN_SPAN_GAMMA = 40.0   # the frequency grid must reach at least +-40 Gamma


@dataclass(frozen=True)
class PulseResult:
    """Input and output intensity envelopes on the synthesis time grid."""

    time: np.ndarray
    input_probe: np.ndarray
    output_probe: np.ndarray
    output_signal: np.ndarray
    delta_p: float
    duration: float
    onset: float
    window: float
    n_freq: int

    def plateau(self, trace: str = "output_signal") -> float:
        """Mean of a trace over the final third of the input pulse."""
        y = getattr(self, trace)
        lo = self.onset + 2.0 * self.duration / 3.0
        hi = self.onset + self.duration
        mask = (self.time >= lo) & (self.time < hi)
        return float(np.mean(y[mask]))

    def columns(self):
        return {"time_over_gamma_inv": self.time,
                "input_probe": self.input_probe,
                "output_probe": self.output_probe,
                "output_signal": self.output_signal}


def propagate_pulse(bundle: ConfigBundle, duration: Optional[float] = None,
                    delta_p: Optional[float] = None, shape: Optional[str] = None,
                    window: Optional[float] = None, n_freq: Optional[int] = None,
                    amplitude: float = 1.0,
                    profile: Optional[CouplingProfile] = None,
                    threads: int = 1) -> PulseResult:
    """Propagate a square probe pulse through the medium.

    The synthesis window defaults to 8x the pulse duration with the
    pulse switched on at window/8, leaving most of the window for the
    causal medium response to ring down before it wraps around.
    """
    opts = bundle.pulse
    duration = opts.duration if duration is None else float(duration)
    shape = opts.shape if shape is None else shape
    window = (opts.window if opts.window is not None else 8.0 * duration) \
        if window is None else float(window)
    n_freq = opts.n_freq if n_freq is None else int(n_freq)
    if bundle.drive is None:
        raise ConfigValidationError("fields", "this config has no drive fields")
    if delta_p is None:
        delta_p = bundle.drive.delta_p
    if shape != "square":
        raise ConfigValidationError("pulse.shape",
                                    f"only 'square' is implemented, got {shape!r}")
    if duration <= 0.0:
        raise ConfigValidationError("pulse.duration", "must be > 0")
    if window < 4.0 * duration:
        raise PulseGridError(
            "pulse.window",
            f"window {window:g} is shorter than 4x the pulse duration {duration:g}; "
            "the wrapped medium response would alias into the pulse")
    if n_freq < 16:
        raise PulseGridError("pulse.n_freq", "needs at least 16 frequency samples")
    dt = window / n_freq
    omega_max = np.pi / dt
    if omega_max < MIN_SPAN_GAMMA:
        raise PulseGridError(
            "pulse.n_freq",
            f"frequency grid spans only +-{omega_max:.1f} Gamma; "
            f"needs +-{MIN_SPAN_GAMMA:.0f} (raise n_freq or shrink window)")

    t = dt * np.arange(n_freq)
    onset = window / 8.0
    envelope = np.where((t >= onset) & (t < onset + duration), amplitude, 0.0)

    # components f(t) = sum_k F_k exp(-i omega_k t): analysis via ifft
    spectrum = np.fft.ifft(envelope)
    omegas = 2.0 * np.pi * np.fft.fftfreq(n_freq, d=dt)

    if profile is None:
        profile = coupling_profile(bundle)
    a, _, c, _ = _transfer_components(bundle, profile,
                                      np.full(n_freq, float(delta_p)), omegas,
                                      threads=threads)
    out_p = np.fft.fft(spectrum * a)
    out_s = np.fft.fft(spectrum * c)
    return PulseResult(time=t,
                       input_probe=np.abs(envelope) ** 2,
                       output_probe=np.abs(out_p) ** 2,
                       output_signal=np.abs(out_s) ** 2,
                       delta_p=float(delta_p), duration=duration,
                       onset=onset, window=window, n_freq=n_freq)
