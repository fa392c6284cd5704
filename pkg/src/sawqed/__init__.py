"""sawqed: transmon-on-a-SAW-channel scattering and routing simulator.

Semiclassical toolkit for a single flux-tunable transmon coupled to a 1D
surface-acoustic-wave channel through an interdigital transducer: steady-state
scattering, time-domain Lindblad routing dynamics, channel propagation with
transducer filtering and multi-transit echoes, a two-transmon catch-and-release
trap, and least-squares recovery of drive calibration and dephasing from power
sweeps.
"""

__version__ = "0.1.0"

from .device import DeviceConfig, load_config, paper_device

__all__ = ["DeviceConfig", "load_config", "paper_device", "__version__"]
