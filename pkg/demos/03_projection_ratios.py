#!/usr/bin/env python3
"""SSR/SRR energy ratios under controlled degradations.

The gain+delay projection splits an estimate's error into a spatial part
(what moved or changed level) and a residual part (everything else, e.g.
interference or artifacts). SSR reads on the former, SRR on the latter:

* gain/delay changes alone   -> finite SSR, infinite SRR
* additive noise alone       -> SRR equals the SNR, SSR stays high
* both                       -> both ratios finite
"""

import numpy as np

from auricle import AudioBuffer, ssr_srr

FS = 44100


def shifted(x, d):
    out = np.zeros_like(x)
    if d > 0:
        out[d:] = x[:-d]
    elif d < 0:
        out[:d] = x[-d:]
    else:
        out[:] = x
    return out


def fmt(v):
    return "inf" if v.is_infinite else f"{v.value:6.2f} dB"


def main():
    rng = np.random.default_rng(11)
    x = rng.normal(size=(2, 3 * FS)) * 0.1
    ref = AudioBuffer(x, FS)

    def noisy(data, snr_db):
        w = rng.normal(size=data.shape)
        w *= np.sqrt(np.sum(data**2, axis=1, keepdims=True) / np.sum(w**2, axis=1, keepdims=True))
        return data + w * 10 ** (-snr_db / 20)

    cases = [
        ("estimate == reference", x.copy()),
        ("right channel delayed 5, x0.8", np.stack([x[0], 0.8 * shifted(x[1], 5)])),
        ("both channels x0.5, delays +-3", np.stack([0.5 * shifted(x[0], 3), 0.5 * shifted(x[1], -3)])),
        ("additive noise, 20 dB SNR", noisy(x, 20.0)),
        ("additive noise, 10 dB SNR", noisy(x, 10.0)),
        ("delay 5 AND noise 20 dB", noisy(np.stack([x[0], shifted(x[1], 5)]), 20.0)),
    ]
    print(f"{'case':<32} {'SSR':>10} {'SRR':>10}")
    for label, est in cases:
        ssr, srr = ssr_srr(ref, AudioBuffer(est, FS))
        print(f"{label:<32} {fmt(ssr):>10} {fmt(srr):>10}")

    print("\nSRR tracks the injected SNR because the projection absorbs the")
    print("(near-unity) best gain and zero delay, leaving the noise as residual.")


if __name__ == "__main__":
    main()
