"""Link-level simulator and closed-form quality analysis for a coarsely
quantized multi-user OFDM downlink.

The package covers the full chain: zero-forcing precoding over a multipath
Rayleigh channel, OFDM modulation with cyclic prefix, an optional 1-bit DAC at
the transmit array, timing/frequency offsets, Schmidl-Cox style estimation and
compensation, least-squares gain tracking and QPSK demapping — plus a
Bussgang-based closed-form SINDR model for the frequency-flat case, and the
Monte-Carlo experiment harness that cross-validates the two.
"""
from .airlink import OffsetState, draw_offsets, propagate
from .channel import ChannelRealization, draw_channel, dump_taps, freq_response, freq_response_many, load_taps
from .config import (ExperimentSpec, SystemConfig, centered_band, desk_scale,
                     full_band, load_scenario, full_scale)
from .errors import (AnalysisDomainError, ConfigError, DegenerateInputError,
                     SingularChannelError, StreamRangeError)
from .frame import (FramePlan, SampleStream, add_default_guard, build_frame_plan,
                    build_preamble, modulate_frame, modulate_symbols, pad_stream,
                    random_qpsk)
from .numerics import RngStream, dft, idft, sample_cn
from .precoding import PrecoderSet, flat_covariance, zf_precode
from .quantization import BussgangModel, bussgang_gain, error_covariance, quantize
from .receiver import (BerStats, EffectiveGain, SymbolGrid, demap_and_count,
                       equalize, estimate_gain, extract_windows, measure_sindr)
from .sindr import SindrReport, bin_phase, coherent_gain, sindr, window_leak
from .sync import SyncMetrics, compensate, correlate, estimate_cfo, estimate_sto
from .experiments import (run_ber_curve, run_sindr_sweep, run_sync_rmse,
                          sync_metric_trace, write_csv)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
