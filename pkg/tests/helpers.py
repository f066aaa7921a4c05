"""Shared test utilities: signal constructions and independent oracles."""

import numpy as np

from auricle import STEM_NAMES, AudioBuffer, write_wav


def shift_zero_fill(x: np.ndarray, delay: int) -> np.ndarray:
    """Delay (positive) or advance (negative) a 1-D signal, zero-filling edges."""
    out = np.zeros_like(x)
    if delay > 0:
        out[delay:] = x[:-delay]
    elif delay < 0:
        out[:delay] = x[-delay:]
    else:
        out[:] = x
    return out


def noise_buffer(rng, seconds=1.0, fs=44100, amplitude=0.1, channels=2, diotic=False):
    """Stereo (or mono) white noise; diotic=True duplicates one channel."""
    n = int(round(seconds * fs))
    if diotic:
        x = rng.normal(size=n) * amplitude
        data = np.stack([x] * channels)
    else:
        data = rng.normal(size=(channels, n)) * amplitude
    return AudioBuffer(data, fs)


def direct_convolve(signal, kernel):
    """Convolution oracle: superposition of shifted, scaled copies.

    Purely additive time-domain construction, independent of any FFT path.
    """
    x = np.asarray(signal, dtype=np.float64)
    k = np.asarray(kernel, dtype=np.float64)
    out = np.zeros(x.size + k.size - 1)
    for j in range(k.size):
        out[j : j + x.size] += k[j] * x
    return out


def brute_xcorr_lag(left, right, max_lag):
    """TDOA oracle: argmax over lags of sum_k left[k] * right[k + lag].

    Positive lag means the left channel leads (right is a delayed copy).
    """
    best_lag, best = 0, -np.inf
    n = left.size
    for lag in range(-max_lag, max_lag + 1):
        if lag >= 0:
            score = float(np.dot(left[: n - lag], right[lag:]))
        else:
            score = float(np.dot(left[-lag:], right[: n + lag]))
        if score > best:
            best, best_lag = score, lag
    return best_lag


def make_song_dir(root, name, rng, fs=44100, seconds=1.5, encoding="pcm16"):
    """Write a four-stem song directory with distinct, non-silent content."""
    song = root / name
    song.mkdir(parents=True, exist_ok=True)
    n = int(round(seconds * fs))
    t = np.arange(n) / fs
    content = {
        "vocals": 0.2 * rng.normal(size=(2, n)) * np.sin(2 * np.pi * 3.0 * t),
        "bass": 0.3 * np.stack([np.sin(2 * np.pi * 80.0 * t)] * 2) + 0.01 * rng.normal(size=(2, n)),
        "drums": 0.15 * rng.normal(size=(2, n)) * (rng.random(n) > 0.6),
        "other": 0.1 * rng.normal(size=(2, n)),
    }
    for stem in STEM_NAMES:
        data = np.clip(content[stem], -0.99, 0.99)
        write_wav(song / f"{stem}.wav", AudioBuffer(data, fs), encoding=encoding)
    return song
