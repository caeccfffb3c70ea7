"""End-to-end source-through-chain measurement runs.

Work is split into fixed-size block chunks with per-chunk seeds derived
from one master seed, so results are bit-identical for any worker count;
chunk accumulators merge by summation in chunk order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..dynamics import SourceParams, events_to_envelope, simulate_source
from .chain import ChainModel, on_off_input, simulate_chain
from .correlate import CorrelatorAccumulator, RawCorrelators
from .demod import demodulate_envelopes


@dataclass
class EndToEndConfig:
    source: SourceParams
    kappa: float
    chain: ChainModel
    n_blocks: int
    seed: int
    n_groups: int = 24
    chunk_blocks: int = 50_000
    workers: int = 1


def _chunk_sums(cfg: EndToEndConfig, chunk_index: int, n_blocks: int):
    seed = np.random.SeedSequence([cfg.seed, chunk_index])
    s_src, s_phase, s_chain = seed.spawn(3)
    chain = cfg.chain
    adc_per = 2 * chain.block_size
    n_adc = n_blocks * adc_per
    duration = n_adc * chain.dt
    rec = simulate_source(cfg.source, duration,
                          int(s_src.generate_state(1)[0] % 2**31))
    env_sig = events_to_envelope(rec.times, cfg.kappa, chain.dt, duration,
                                 seed=int(s_phase.generate_state(1)[0] % 2**31))
    gated, tags = on_off_input(env_sig, chain, n_blocks)
    rng = np.random.default_rng(s_chain)
    v0, v1 = simulate_chain(gated, chain, n_adc, rng=rng)
    env = demodulate_envelopes(v0, v1, chain, block_tags=tags)
    acc = CorrelatorAccumulator(chain.block_size, chain.envelope_interval,
                                cfg.n_groups)
    acc._next_block = chunk_index * cfg.chunk_blocks
    acc.add(env)
    return (acc._a1[True], acc._a1[False], acc._a2[True], acc._a2[False],
            acc._count[True], acc._count[False], rec.times.size)


def run_source_through_chain(cfg: EndToEndConfig) -> tuple[RawCorrelators, dict]:
    """Simulate, digitize and correlate cfg.n_blocks blocks.

    Returns the raw correlators plus bookkeeping (total events, blocks).
    """
    chain = cfg.chain
    acc = CorrelatorAccumulator(chain.block_size, chain.envelope_interval,
                                cfg.n_groups)
    chunks = []
    start = 0
    idx = 0
    while start < cfg.n_blocks:
        n = min(cfg.chunk_blocks, cfg.n_blocks - start)
        chunks.append((idx, n))
        start += n
        idx += 1
    total_events = 0
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = pool.map(_chunk_worker, [(cfg, i, n) for i, n in chunks])
            for out in results:
                total_events = _merge(acc, out, total_events)
    else:
        for i, n in chunks:
            total_events = _merge(acc, _chunk_sums(cfg, i, n), total_events)
    raw = acc.finalize()
    return raw, {"n_events": total_events, "n_blocks": cfg.n_blocks}


def _merge(acc, out, total_events):
    a1_on, a1_off, a2_on, a2_off, c_on, c_off, n_ev = out
    acc._a1[True] += a1_on
    acc._a1[False] += a1_off
    acc._a2[True] += a2_on
    acc._a2[False] += a2_off
    acc._count[True] += c_on
    acc._count[False] += c_off
    return total_events + n_ev


def _chunk_worker(args):
    cfg, i, n = args
    return _chunk_sums(cfg, i, n)
