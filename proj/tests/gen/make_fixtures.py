# Copyright 2026 The augpipe Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Regenerates the reference fixtures in tests/data with numpy.

    python3 tests/gen/make_fixtures.py

The outputs are checked in; the C++ tests only read them.
"""

import os
import wave

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")


# ---- log-mel reference ------------------------------------------------------

def hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + hz / 700.0)


def logmel(samples, rate, n_mels=40, win_ms=25.0, hop_ms=10.0, fmin=20.0,
           fmax=None, n_fft=None, floor=1e-10):
    win = int(round(rate * win_ms / 1000.0))
    hop = int(round(rate * hop_ms / 1000.0))
    if n_fft is None:
        n_fft = 1 << (win - 1).bit_length()
    if fmax is None:
        fmax = rate / 2.0
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(win) / (win - 1))
    frames = 1 + (len(samples) - win) // hop

    bins = np.arange(n_fft // 2 + 1) * (rate / n_fft)
    mel_bins = hz_to_mel(bins)
    edges = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_mels + 2)
    fb = np.zeros((n_mels, len(bins)))
    for c in range(n_mels):
        lo, mid, hi = edges[c], edges[c + 1], edges[c + 2]
        up = (mel_bins - lo) / (mid - lo)
        down = (hi - mel_bins) / (hi - mid)
        fb[c] = np.where((mel_bins > lo) & (mel_bins < hi),
                         np.where(mel_bins <= mid, up, down), 0.0)

    out = np.zeros((frames, n_mels))
    x = samples.astype(np.float64)
    for t in range(frames):
        seg = x[t * hop:t * hop + win] * window
        spec = np.fft.rfft(seg, n_fft)
        power = spec.real ** 2 + spec.imag ** 2
        out[t] = np.log(np.maximum(fb @ power, floor))
    return out


def write_wav(path, samples, rate):
    with wave.open(path, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(samples.astype("<i2").tobytes())


def write_matrix(path, m):
    with open(path, "w") as f:
        f.write("%d %d\n" % m.shape)
        for row in m:
            f.write(" ".join("%.17g" % v for v in row) + "\n")


def chirp(rate, seconds, seed):
    rng = np.random.default_rng(seed)
    n = int(rate * seconds)
    t = np.arange(n) / rate
    sig = 6000.0 * np.sin(2 * np.pi * (200.0 * t + 900.0 * t * t))
    sig += rng.normal(0.0, 300.0, n)
    return np.clip(np.round(sig), -32768, 32767).astype(np.int16)


def make_logmel():
    s8 = chirp(8000, 0.5, 1)
    write_wav(os.path.join(DATA, "chirp_8k.wav"), s8, 8000)
    write_matrix(os.path.join(DATA, "chirp_8k.logmel.txt"), logmel(s8, 8000))

    s16 = chirp(16000, 0.3, 2)
    write_wav(os.path.join(DATA, "chirp_16k.wav"), s16, 16000)
    write_matrix(os.path.join(DATA, "chirp_16k.logmel.txt"),
                 logmel(s16, 16000, n_mels=23, fmin=64.0, fmax=7000.0,
                        n_fft=1024))


# ---- time-stretch reference -------------------------------------------------

def stretch(T, w, factors):
    """The reference listing, run on numpy."""
    if w is None:
        w = T
        count = 1
    else:
        count = T // w + 1
    out = []
    for i in range(count):
        e = min(T, w * (i + 1))
        out.extend(np.round(np.arange(w * i, e - 1, factors[i])).astype(int))
    return out


def make_stretch():
    rng = np.random.default_rng(7)
    lines = []
    cases = [(10, 5, [1.0, 1.0, 1.0]), (8, 4, [0.8, 1.25, 1.0]),
             (5, None, [1.0])]
    for _ in range(400):
        T = int(rng.integers(1, 600))
        w = [None, 3, 7, 50, 100, 200][int(rng.integers(0, 6))]
        n = 1 if w is None else T // w + 1
        lo, hi = [(0.8, 1.25), (0.5, 2.0), (0.95, 1.05)][int(rng.integers(0, 3))]
        cases.append((T, w, list(lo + (hi - lo) * rng.random(n))))
    # Exact halves to exercise ties.
    cases.append((12, 6, [0.5, 0.5, 0.5]))
    cases.append((20, None, [1.5]))
    cases.append((40, 10, [1.25, 0.75, 2.5, 0.625, 1.0]))
    for T, w, factors in cases:
        idx = stretch(T, w, factors)
        lines.append("%d %s %d %s | %d %s" % (
            T, "inf" if w is None else str(w), len(factors),
            " ".join("%.17g" % f for f in factors), len(idx),
            " ".join(str(i) for i in idx)))
    with open(os.path.join(DATA, "stretch_numpy.txt"), "w") as f:
        f.write("# T w n_factors factors... | n_indices indices...\n")
        f.write("\n".join(lines) + "\n")


def main():
    os.makedirs(DATA, exist_ok=True)
    make_logmel()
    make_stretch()


if __name__ == "__main__":
    main()
