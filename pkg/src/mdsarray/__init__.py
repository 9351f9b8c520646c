"""MDS array codes with repair-optimal download.

Library layout:

* :mod:`mdsarray.gf` - prime-field arithmetic
* :mod:`mdsarray.codespec` - the seven construction families
* :mod:`mdsarray.codec` - encode / verify / decode / update
* :mod:`mdsarray.repair` - repair engines and their meters
* :mod:`mdsarray.grsa` - the operator algebra behind the parity checks
* :mod:`mdsarray.sim` - cluster simulation with replayable event logs
* :mod:`mdsarray.cli` - the ``mdsarray`` command
"""

from . import errors
from . import repair
from .codec import (Codeword, decode_erasures, encode_systematic,
                    random_message, update_symbol, verify)
from .codespec import CodeSpec, build, supported_d
from .gf import Field
from .repair import (RepairTrace, bound_bandwidth, repair_access, repair_d,
                     repair_multi, repair_single)
from .sim import Cluster, cluster_new, corrupt, fail, replay, run_repair

__version__ = "0.1.0"

__all__ = [
    "errors", "Field", "CodeSpec", "build", "supported_d",
    "Codeword", "encode_systematic", "verify", "decode_erasures",
    "random_message", "update_symbol", "repair",
    "RepairTrace", "bound_bandwidth", "repair_single", "repair_d",
    "repair_access", "repair_multi",
    "Cluster", "cluster_new", "fail", "corrupt", "run_repair", "replay",
    "__version__",
]
