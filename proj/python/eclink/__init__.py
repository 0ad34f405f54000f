"""QoS-constrained throughput analysis for fixed-rate wireless links.

Thin re-export of the compiled core: effective bandwidth of Markovian
sources, effective capacity of an ON/OFF Rayleigh link, rate matching,
the operating QoS exponent, a Monte Carlo queue oracle, and the figure
sweeps.  All rates are bits per block; SNR is linear here (use
``from_db``/``to_db`` to convert).
"""

from ._core import (  # noqa: F401
    AnalyzeRequest,
    ChannelSpec,
    DelayResult,
    DelaySpec,
    DtmsSource,
    FmsSource,
    LinkReport,
    McEstimate,
    MmpsSource,
    MomentEstimate,
    QosSolution,
    RateOptimum,
    SimConfig,
    SimTrace,
    SolveStatus,
    SteadyState,
    SweepTable,
    TailFit,
    analyze_link,
    delay_violation,
    derive_seed,
    dump_trace_csv,
    eb_from_horizon_sums,
    ec_from_horizon_sums,
    ec_rate_curvature,
    ec_rate_gradient,
    effective_bandwidth,
    effective_capacity,
    estimate_arrival_rate,
    estimate_eb,
    estimate_ec,
    estimate_on_fraction,
    fit_delay_tail,
    from_db,
    gen_arrivals,
    gen_channel_states,
    max_avg_rate,
    max_on_rate,
    max_on_rate_dtms,
    max_on_rate_fms,
    max_on_rate_mmps,
    optimal_rate,
    peak_rate,
    simulate_queue,
    solve_qos_exponent,
    source_kind,
    steady_state,
    sweep_fig3,
    sweep_fig4,
    sweep_fig5,
    sweep_fig6,
    to_db,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
