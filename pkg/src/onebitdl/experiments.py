"""Monte-Carlo experiment runners and their CSV output.

Every trial draws all randomness from an RngStream addressed by
(master_seed, experiment, trial, purpose), so results are bit-reproducible and
independent of how trials are distributed over worker processes. Reductions run
over trial-indexed arrays in trial order, which makes the emitted CSV
byte-identical across reruns and across --threads settings.

Pairing: within a trial, the channel, frame payload, guard symbols, offsets and
noise draws are shared between the two DAC modes (the streams are re-addressed,
not reused), so mode comparisons are paired sample-by-sample.
"""
from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .airlink import OffsetState, draw_offsets, propagate
from .channel import draw_channel
from .config import ExperimentSpec, SystemConfig
from .errors import ConfigError
from .frame import (FramePlan, add_default_guard, build_frame_plan, modulate_frame,
                    pad_stream, random_qpsk)
from .numerics import RngStream, sample_cn
from .precoding import flat_covariance, zf_precode
from .quantization import BussgangModel
from .receiver import demap_and_count, equalize, estimate_gain, extract_windows, measure_sindr
from .sindr import bin_phase, coherent_gain, sindr
from .sync import compensate, correlate, estimate_cfo, estimate_sto

__all__ = ["run_sindr_sweep", "run_sync_rmse", "run_ber_curve", "write_csv",
           "sync_metric_trace"]

_MODES = ("one_bit", "infinite")
_SYNC_MODES = ("schmidl_cox", "perfect")


# ---------------------------------------------------------------------------
# CSV

def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    if f == 0:
        f = 0.0  # normalize -0.0
    return format(f, ".9g")


def write_csv(path, header, rows) -> None:
    """Fixed column order, 9-significant-digit floats, LF endings."""
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def _unpin_cpus():
    # Some BLAS builds pin the importing process (and therefore every forked
    # worker) to one core; undo that so trial parallelism actually scales.
    try:
        os.sched_setaffinity(0, range(os.cpu_count() or 1))
    except (AttributeError, OSError):
        pass


def _map_trials(fn, count: int, threads: int) -> list:
    if threads <= 1:
        return [fn(r) for r in range(count)]
    _unpin_cpus()
    chunk = max(1, count // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads, initializer=_unpin_cpus) as ex:
        return list(ex.map(fn, range(count), chunksize=chunk))


# ---------------------------------------------------------------------------
# Residual-offset SINDR sweep (forced residuals, synchronization bypassed)

def _sweep_trial(r: int, points, cfg: SystemConfig):
    n, g = cfg.fft_size, cfg.cp_len
    nue, d = cfg.num_ues, cfg.data_symbols
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    base = RngStream(cfg.master_seed, ("sweep", r))

    ch = draw_channel(cfg, base.substream("chan"))
    ps = zf_precode(ch, cfg)
    bm = BussgangModel.from_covariance(flat_covariance(ps))
    h = ch.taps[0]                                   # (U, B), flat channel rows

    data = np.zeros((d, nue, n), dtype=complex)
    data[:, :, ks] = random_qpsk(base.substream("frame"), (d, nue, ks.size))
    plan = FramePlan(None, np.zeros((0, nue, n), dtype=complex), data)

    # One noise draw per trial, added per demodulation window in the frequency
    # domain (unitary DFT of white CN noise); shared by every grid point and both
    # DAC modes so all comparisons are paired.
    noise = sample_cn(base.substream("noise"), cfg.noise_power, (nue, d, ks.size))

    sim = np.zeros((len(_MODES), len(points), nue))
    ana = np.zeros_like(sim)
    win_len = (d - 1) * (n + g) + n
    for mi, mode in enumerate(_MODES):
        tx = modulate_frame(plan, ps, cfg, mode)
        txp = pad_stream(tx, n + g, n + g, "random_data", ps=ps, cfg=cfg,
                         rng=base.substream("pad"), dac_mode=mode)
        model = bm if mode == "one_bit" else None
        eff = (h * np.diag(bm.a)) @ ps.matrices[0] if model else h @ ps.matrices[0]
        for pi, (dtau, deps) in enumerate(points):
            offs = [OffsetState(tau=-dtau, eps=-deps)] * nue
            ys = propagate(txp, ch, offs, 0.0, cfg, None, -(g // 2), win_len)
            gain = coherent_gain(dtau, deps, n, g)
            phases = bin_phase(dtau, deps, ks[None, :], np.arange(d)[:, None], n, g)
            for u in range(nue):
                grid = extract_windows(ys[u], cfg, range(d))
                grid.values = grid.values + noise[u]
                coeff = gain * np.exp(1j * phases) * eff[u, u]
                sig, err = measure_sindr(grid, data[:, u, ks], coeff)
                sim[mi, pi, u] = sig / err
                ana[mi, pi, u] = sindr(h[u], model, ps, u, dtau, deps,
                                       cfg.noise_power, cfg).sindr
    return sim, ana


def run_sindr_sweep(spec: ExperimentSpec, cfg: SystemConfig, threads: int = 1):
    """Analytical vs simulated SINDR over a residual-offset grid, both DAC modes.

    Returns (header, rows); SINDRs are averaged in linear scale over
    (realization, UE) and reported in dB.
    """
    if spec.kind != "sindr-sweep":
        raise ConfigError(f"expected a sindr-sweep spec, got {spec.kind!r}")
    if cfg.num_taps != 1:
        raise ConfigError("the residual-offset sweep requires a single-tap channel")
    if len(cfg.used_subcarriers) != cfg.fft_size:
        raise ConfigError("the residual-offset sweep requires a fully loaded band")
    points = spec.sindr_grid()
    lim = cfg.max_timing_offset
    for dtau, deps in points:
        if abs(dtau) > lim or abs(deps) >= 1:
            raise ConfigError(f"grid point (dtau={dtau}, deps={deps}) is outside "
                              f"|dtau| <= {lim}, |deps| < 1")

    parts = _map_trials(partial(_sweep_trial, points=points, cfg=cfg),
                        cfg.trials, threads)
    sim = np.stack([p[0] for p in parts])            # (R, modes, points, U)
    ana = np.stack([p[1] for p in parts])
    sim_db = 10 * np.log10(sim.mean(axis=(0, 3)))    # linear mean, then dB
    ana_db = 10 * np.log10(ana.mean(axis=(0, 3)))

    header = ("dtau", "deps", "analytical_sindr_db", "simulated_sindr_db", "dac_mode")
    rows = []
    for pi, (dtau, deps) in enumerate(points):
        for mi, mode in enumerate(_MODES):
            rows.append((dtau, deps, ana_db[mi, pi], sim_db[mi, pi], mode))
    return header, rows


# ---------------------------------------------------------------------------
# Synchronization experiments (full frames, preamble-based estimation)

def _rx_range(cfg: SystemConfig):
    """Absolute receive range covering the lag search and every demodulation
    window at any timing estimate the search can return."""
    n, g = cfg.fft_size, cfg.cp_len
    lim = cfg.max_timing_offset
    frame_syms = 1 + cfg.training_symbols + cfg.data_symbols
    start = min(-lim - g, (n + g) - g // 2 - lim)
    stop = max(lim + n, (frame_syms - 1) * (n + g) - g // 2 + n + lim)
    return start, stop - start


def _demod_ber(y, tau_c, eps_c, plan, u, cfg):
    r = compensate(y, tau_c, eps_c, cfg)
    ks = np.asarray(cfg.used_subcarriers, dtype=int)
    grid = extract_windows(r, cfg, list(plan.training_indices) + list(plan.data_indices))
    gain = estimate_gain(grid.select(plan.training_indices), plan.training[:, u, :][:, ks])
    eq = equalize(grid.select(plan.data_indices), gain)
    return demap_and_count(eq, plan.data[:, u, :][:, ks], gain.erased)


def _sync_trial(r: int, snrs, cfg: SystemConfig, want_ber: bool):
    base = RngStream(cfg.master_seed, ("sync", r))
    ch = draw_channel(cfg, base.substream("chan"))
    ps = zf_precode(ch, cfg)
    plan = build_frame_plan(cfg, base.substream("frame"))
    offs = draw_offsets(cfg, base.substream("offsets"))
    lim = cfg.max_timing_offset
    start, length = _rx_range(cfg)

    txs = {}
    for mode in _MODES:
        tx = modulate_frame(plan, ps, cfg, mode)
        txs[mode] = add_default_guard(tx, ps, cfg, base.substream("pad"), mode,
                                      extra_zeros=cfg.num_taps + 2)

    err = np.zeros((len(snrs), len(_MODES), cfg.num_ues, 2))
    ber = np.zeros((len(snrs), len(_MODES), len(_SYNC_MODES), 2))
    for si, snr in enumerate(snrs):
        n0 = 10.0 ** (-snr / 10.0)
        for mi, mode in enumerate(_MODES):
            ys = propagate(txs[mode], ch, offs, n0, cfg,
                           base.substream("noise", si), start, length)
            for u in range(cfg.num_ues):
                metrics = correlate(ys[u], (-lim, lim), cfg)
                t_est = estimate_sto(metrics)
                e_est = estimate_cfo(metrics, t_est)
                err[si, mi, u, 0] = t_est - offs[u].tau
                # The arg-based CFO estimate lives on a circle of circumference
                # 2; score it by circular error so a draw near +/-1 is not
                # charged the full wrap distance.
                err[si, mi, u, 1] = (e_est - offs[u].eps + 1.0) % 2.0 - 1.0
                if want_ber:
                    picks = ((t_est, e_est), (offs[u].tau, offs[u].eps))
                    for gi, (tc, ec) in enumerate(picks):
                        stats = _demod_ber(ys[u], tc, ec, plan, u, cfg)
                        ber[si, mi, gi, 0] += stats.bit_errors
                        ber[si, mi, gi, 1] += stats.total_bits
    return err, ber


def run_sync_rmse(spec: ExperimentSpec, cfg: SystemConfig, threads: int = 1):
    """Timing/carrier estimation RMSE vs SNR, both DAC modes, random offsets."""
    if spec.kind != "sync-rmse":
        raise ConfigError(f"expected a sync-rmse spec, got {spec.kind!r}")
    parts = _map_trials(partial(_sync_trial, snrs=spec.snr_db, cfg=cfg, want_ber=False),
                        cfg.trials, threads)
    mean = (np.stack([p[0] for p in parts]) ** 2).mean(axis=(0, 3))  # (S, modes, 2)
    header = ("snr_db", "dac_mode", "sto_rmse_samples", "cfo_rmse")
    rows = []
    for si, snr in enumerate(spec.snr_db):
        for mi, mode in enumerate(_MODES):
            rows.append((float(snr), mode,
                         float(np.sqrt(mean[si, mi, 0])),
                         float(np.sqrt(mean[si, mi, 1]))))
    return header, rows


def run_ber_curve(spec: ExperimentSpec, cfg: SystemConfig, threads: int = 1):
    """Uncoded BER vs SNR for the full chain, estimated vs known offsets."""
    if spec.kind != "ber-curve":
        raise ConfigError(f"expected a ber-curve spec, got {spec.kind!r}")
    if cfg.gain_mode != "ls":
        raise ConfigError("the BER chain estimates its gain from training (gain_mode='ls'); "
                          "the genie gain only exists for the flat-channel sweep")
    if cfg.training_symbols < 1:
        raise ConfigError("the BER chain needs at least one training symbol")
    parts = _map_trials(partial(_sync_trial, snrs=spec.snr_db, cfg=cfg, want_ber=True),
                        cfg.trials, threads)
    tallies = np.sum([p[1] for p in parts], axis=0)  # (S, modes, sync, 2)
    header = ("snr_db", "dac_mode", "sync_mode", "ber")
    rows = []
    for si, snr in enumerate(spec.snr_db):
        for mi, mode in enumerate(_MODES):
            for gi, sync_mode in enumerate(_SYNC_MODES):
                errors, bits = tallies[si, mi, gi]
                rows.append((float(snr), mode, sync_mode, errors / bits))
    return header, rows


# ---------------------------------------------------------------------------
# Metric trace (debug dump for the CLI)

def sync_metric_trace(cfg: SystemConfig, seed=None):
    """One trial's averaged sync metric per UE and lag: rows (lag, gamma, ue)."""
    work = cfg if seed is None else dataclasses.replace(cfg, master_seed=seed)
    base = RngStream(work.master_seed, ("trace",))
    ch = draw_channel(work, base.substream("chan"))
    ps = zf_precode(ch, work)
    plan = build_frame_plan(work, base.substream("frame"))
    offs = draw_offsets(work, base.substream("offsets"))
    tx = modulate_frame(plan, ps, work, work.dac_mode)
    txg = add_default_guard(tx, ps, work, base.substream("pad"), work.dac_mode,
                            extra_zeros=work.num_taps + 2)
    lim = work.max_timing_offset
    start, length = _rx_range(work)
    ys = propagate(txg, ch, offs, work.noise_power, work,
                   base.substream("noise", 0), start, length)
    header = ("lag", "gamma", "ue")
    rows = []
    for u in range(work.num_ues):
        metrics = correlate(ys[u], (-lim, lim), work)
        for i, g in enumerate(metrics.gamma):
            rows.append((metrics.first_lag + i, float(g), u))
    return header, rows
