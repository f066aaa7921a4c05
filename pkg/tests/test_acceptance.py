"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``. Criterion 9 is an
integration path that needs externally produced separator outputs and is
skipped unless AURICLE_REFERENCE / AURICLE_ESTIMATES point at real trees.
"""

import hashlib
import math
import os

import numpy as np
import pytest
from scipy.signal import lfilter

from auricle import (
    STEM_NAMES,
    AudioBuffer,
    MetricConfig,
    aggregate_medians,
    delta_ild,
    delta_itd,
    evaluate_tree,
    fft_convolve,
    frame_signal,
    project_gain_delay,
    read_wav,
    sample_layout,
    signal_itd,
    signal_itd_lag,
    spherical_head_database,
    ssr_srr,
    synthesize_dataset,
    write_report,
)
from auricle.hrir import GRID_DEGREES

from helpers import direct_convolve, make_song_dir, shift_zero_fill

FS = 44100
QUANTUM_US = 1e6 / FS


def _assert_itd_quantized(value_us):
    ratio = value_us / QUANTUM_US
    assert abs(ratio - round(ratio)) <= 1e-9, value_us


def test_criterion_1_convolution_oracle():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 10_001))
        m = int(rng.integers(1, 513))
        x = rng.normal(size=n)
        k = rng.normal(size=m)
        err = float(np.max(np.abs(fft_convolve(x, k) - direct_convolve(x, k))))
        worst = max(worst, err)
        assert err <= 1e-9
    print(f"\ncriterion 1 PASS: 200 instances, worst |fft - direct| = {worst:.3e}")


def test_criterion_2_itd_integer_delay_sweep():
    rng = np.random.default_rng(202)
    noise = rng.normal(size=5 * FS) * 0.1
    for d in range(-44, 45):
        delayed = shift_zero_fill(noise, d)
        buf = AudioBuffer(np.stack([noise, delayed]), FS)
        itd = signal_itd(buf)
        assert itd.value == d / FS, f"delay {d}: got {itd.value}"
    print("criterion 2 PASS: exact lag recovery for every delay in [-44, 44]")


def test_criterion_3_itd_quantization_invariant():
    rng = np.random.default_rng(303)
    noise = rng.normal(size=2 * FS) * 0.1
    ref = AudioBuffer(np.stack([noise, shift_zero_fill(noise, 4)]), FS)
    checked = 0
    for shift in (1, 3, 21, 40):
        est = AudioBuffer(np.stack([noise, shift_zero_fill(noise, 4 + shift)]), FS)
        d = delta_itd(ref, est)
        _assert_itd_quantized(d.value)
        assert d.value == pytest.approx(shift * QUANTUM_US, rel=1e-12)
        checked += 1
    # a lag beyond the +-1 ms search range saturates but stays on the grid
    beyond = AudioBuffer(np.stack([noise, shift_zero_fill(noise, 48)]), FS)
    _assert_itd_quantized(delta_itd(ref, beyond).value)
    checked += 1
    # perturbations that do not land on a constructed lag still quantize
    for snr_db in (30.0, 10.0):
        noisy = ref.samples + rng.normal(size=ref.samples.shape) * 0.1 * 10 ** (-snr_db / 20)
        d = delta_itd(ref, AudioBuffer(noisy, FS))
        _assert_itd_quantized(d.value)
        checked += 1
    print(f"criterion 3 PASS: {checked} delta-ITD values all multiples of {QUANTUM_US:.4f} us")


def test_criterion_4_ild_analytic_shift():
    rng = np.random.default_rng(404)
    x = rng.normal(size=(2, FS)) * 0.2
    ref = AudioBuffer(x, FS)
    for g in (0.25, 0.5, 0.8):
        est = AudioBuffer(np.stack([x[0], g * x[1]]), FS)
        want = -20.0 * math.log10(g)
        assert delta_ild(ref, est).value == pytest.approx(want, abs=1e-6)
    print("criterion 4 PASS: channel gains shift ILD by exactly -20*log10(g)")


def test_criterion_5_projection_exactness():
    rng = np.random.default_rng(505)
    x = rng.normal(size=(2, 3 * FS)) * 0.1
    ref = AudioBuffer(x, FS)

    # estimate = reference: both ratios are exactly infinite
    ssr, srr = ssr_srr(ref, ref)
    assert ssr.is_infinite and srr.is_infinite

    cases = [((1.0, 7), (0.8, -5)), ((0.5, 3), (1.5, 44)), ((1.3, 0), (1.0, -44))]
    for (gl, dl), (gr, dr) in cases:
        est = AudioBuffer(
            np.stack([gl * shift_zero_fill(x[0], dl), gr * shift_zero_fill(x[1], dr)]), FS
        )
        ssr, srr = ssr_srr(ref, est)
        assert ssr.is_finite, (gl, dl, gr, dr)
        # SRR >= 100 dB is the frame residual at <= 1e-10 relative energy
        assert srr.is_infinite or srr.value >= 100.0, (gl, dl, gr, dr, srr.value)

    # frame-level in-model estimates leave no residual
    for gain, d in ((0.8, 5), (1.5, -44), (0.5, 13)):
        frame = frame_signal(ref, 1.0, 1.0, window="rectangular")[1]
        est_samples = gain * np.stack(
            [shift_zero_fill(frame.samples[0], d), shift_zero_fill(frame.samples[1], d)]
        )
        est_frame = frame_signal(AudioBuffer(est_samples, FS), 1.0, 1.0, "rectangular")[0]
        dec = project_gain_delay(frame, est_frame)
        rel = np.sum(dec.residual_error**2) / np.sum(est_samples**2)
        assert rel <= 1e-10, (gain, d, rel)
    print("criterion 5 PASS: in-model estimates project with zero residual, SSR stays finite")


def test_criterion_6_srr_noise_calibration():
    rng = np.random.default_rng(606)
    trials = 100
    snrs = (10.0, 20.0, 30.0)
    srr_by_snr = {s: [] for s in snrs}
    for _ in range(trials):
        x = rng.normal(size=(2, 2 * FS)) * 0.1
        ref = AudioBuffer(x, FS)
        for snr in snrs:
            noise = rng.normal(size=x.shape)
            noise *= np.sqrt(
                np.sum(x**2, axis=1, keepdims=True) / np.sum(noise**2, axis=1, keepdims=True)
            ) * 10 ** (-snr / 20)
            _, srr = ssr_srr(ref, AudioBuffer(x + noise, FS))
            srr_by_snr[snr].append(srr.value)
    medians = {s: float(np.median(v)) for s, v in srr_by_snr.items()}
    for snr in snrs:
        assert abs(medians[snr] - snr) <= 1.0, medians
    assert medians[10.0] < medians[20.0] < medians[30.0]

    # companion invariant: SSR falls as injected interchannel delay error grows
    ssr_by_delay = {d: [] for d in (0, 5, 20)}
    for _ in range(trials):
        data = lfilter([1.0], [1.0, -0.98], rng.normal(size=(2, FS)), axis=1)
        data *= 0.1 / np.max(np.abs(data))
        ref = AudioBuffer(data, FS)
        for d in ssr_by_delay:
            est = np.stack([data[0], shift_zero_fill(data[1], d)])
            est = est + rng.normal(size=est.shape) * 1e-5
            ssr, _ = ssr_srr(ref, AudioBuffer(est, FS))
            ssr_by_delay[d].append(ssr.value)
    ssr_medians = [float(np.median(ssr_by_delay[d])) for d in (0, 5, 20)]
    assert ssr_medians[0] > ssr_medians[1] > ssr_medians[2]
    print(
        "criterion 6 PASS: median SRR "
        + ", ".join(f"{s} dB -> {medians[s]:.2f}" for s in snrs)
        + f"; SSR medians by delay {[round(v, 2) for v in ssr_medians]}"
    )


def test_criterion_7_synthesis_end_to_end(tmp_path):
    rng = np.random.default_rng(707)
    db = spherical_head_database()
    for name in ("fixture1", "fixture2"):
        make_song_dir(tmp_path / "musdb" / "test", name, rng, seconds=1.5)

    manifests = synthesize_dataset(tmp_path / "musdb", db, tmp_path / "out_a", master_seed=42)
    assert len(manifests) == 2

    rows = evaluate_tree(tmp_path / "out_a", tmp_path / "out_a")
    assert len(rows) == 8
    for row in rows:
        assert row.delta_itd_us.value == 0.0
        assert row.delta_ild_db.value == 0.0
        assert row.ssr_db.is_infinite and row.srr_db.is_infinite

    for name in ("fixture1", "fixture2"):
        song = tmp_path / "out_a" / "test" / name
        mixture = read_wav(song / "mixture.wav")
        total = np.zeros_like(mixture.samples)
        for stem in STEM_NAMES:
            total += read_wav(song / f"{stem}.wav").samples
        assert np.max(np.abs(mixture.samples - total)) <= 1e-6

    synthesize_dataset(tmp_path / "musdb", db, tmp_path / "out_b", master_seed=42)
    for name in ("fixture1", "fixture2"):
        for fname in ["layout.json", "mixture.wav"] + [f"{s}.wav" for s in STEM_NAMES]:
            a = hashlib.sha256((tmp_path / "out_a" / "test" / name / fname).read_bytes()).digest()
            b = hashlib.sha256((tmp_path / "out_b" / "test" / name / fname).read_bytes()).digest()
            assert a == b, fname
    print("criterion 7 PASS: self-evaluation identity, mixture additivity, reproducible bytes")


def test_criterion_8_layout_sampler_statistics():
    for seed in range(10_000):
        angles = sorted(sample_layout(seed).assignments.values())
        assert len(set(angles)) == 4
        assert all(a in GRID_DEGREES for a in angles)
        assert min(b - a for a, b in zip(angles, angles[1:])) >= 10

    draws = 100_000
    counts = {stem: dict.fromkeys(GRID_DEGREES, 0) for stem in STEM_NAMES}
    for seed in range(draws):
        for stem, angle in sample_layout(seed).assignments.items():
            counts[stem][angle] += 1
    expect = draws / 19
    sigma = math.sqrt(draws * (1 / 19) * (18 / 19))
    worst = 0.0
    for stem in STEM_NAMES:
        for angle, c in counts[stem].items():
            dev = abs(c - expect) / sigma
            worst = max(worst, dev)
            assert dev <= 3.0, (stem, angle, c, dev)
    print(f"criterion 8 PASS: 10^4 layouts valid; marginals uniform, worst |z| = {worst:.2f}")


@pytest.mark.skipif(
    not (os.environ.get("AURICLE_REFERENCE") and os.environ.get("AURICLE_ESTIMATES")),
    reason="integration path: set AURICLE_REFERENCE and AURICLE_ESTIMATES to separator output trees",
)
def test_criterion_9_separator_output_tables(tmp_path):
    """Shape check for externally produced separator estimates.

    Numerical parity with published medians is not asserted: the gain+delay
    projection here is a documented stand-in for the metric implementation
    those numbers came from. Inspect the rendered tables for the directional
    sanity checks (stereo delta-ITD medians at 0, binaural delta-ILD above
    stereo).
    """
    rows = evaluate_tree(os.environ["AURICLE_REFERENCE"], os.environ["AURICLE_ESTIMATES"], jobs=4)
    report = aggregate_medians(rows)
    write_report(report, "markdown", tmp_path / "tables.md")
    write_report(report, "csv", tmp_path / "tables.csv")
    text = (tmp_path / "tables.csv").read_text()
    assert "group,metric,bass,drums,other,vocals,overall" in text
    for metric in ("ssr_db", "srr_db", "delta_itd_us", "delta_ild_db"):
        assert f"all,{metric}," in text
    print(f"criterion 9 PASS: tables rendered at {tmp_path}")
