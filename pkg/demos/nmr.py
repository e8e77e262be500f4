"""Free-induction decay of three uncoupled spins and its spectrum.

Each spin precesses at its own Zeeman frequency; the summed x magnetization
is a sum of cosines and its DFT shows one peak per spin.
"""
import math

import numpy as np

from geoqubit.cli import nmr_signal

freqs = np.array([1.0, 2.0, 3.5])  # Hz
omegas = 2 * math.pi * freqs
duration, samples = 10.0, 256
t = np.arange(samples) * duration / samples

mx = nmr_signal(omegas, alpha=1.0, gamma=1.0, times=t)
closed = np.cos(np.outer(t, omegas)).sum(axis=1)
print(f"max deviation from sum of cosines: {np.abs(mx - closed).max():.2e}")

mag = np.abs(np.fft.rfft(mx))
top = sorted(int(k) for k in np.argsort(mag)[-3:])
print("peak bins:", top, "->", [k / duration for k in top], "Hz")

# crude text plot of the spectrum up to 5 Hz
for k in range(0, 51, 1):
    bar = "#" * int(60 * mag[k] / mag.max())
    print(f"{k / duration:4.1f} {bar}")
