"""Fisher information of quantum states and channels.

Computes SLD and RLD Fisher information (single- and multi-parameter) for
differentiable families of states and channels, evaluates the associated
Cramer-Rao bounds and Heisenberg-scaling verdicts, reproduces the
generalized-amplitude-damping worked example, and builds, exports, and
certifies the corresponding semi-definite programs.
"""

__version__ = "0.1.0"

from .bounds import BoundReport, HeisenbergVerdict, crb, heisenberg_verdict
from .families import (
    ChannelFamily,
    StateFamily,
    apply_channel,
    choi_from_kraus,
    compose,
    kraus_from_choi,
    validate,
)
from .fisher_channel import (
    OptimizerConfig,
    ProbeResult,
    cq_channel_fisher,
    inequality_gap,
    rld_fisher_channel,
    rld_value_channel,
    sld_fisher_channel,
)
from .fisher_state import (
    FisherMatrix,
    FisherValue,
    check_weight_matrix,
    classical_fisher,
    cq_fisher_decomposition,
    rld_fisher,
    rld_matrix,
    rld_value,
    root_sld_witness,
    sld_fisher,
    sld_matrix,
    sld_operator,
    smoothed_fisher,
)
from .gadc import (
    CurveConfig,
    GadcParams,
    gadc_channel,
    gadc_choi,
    gadc_closed_form,
    gadc_curve,
    gadc_kraus,
    gadc_sld_probe,
)
from .linalg import (
    Spectrum,
    hermitian_eig,
    max_entangled_vector,
    partial_trace,
    support_pinv,
)
from .sdp import (
    Certificate,
    SdpProblem,
    build,
    export_sdpa,
    read_sdpa,
    sandwich_gap,
    seesaw_sld_channel,
    verify_candidate,
)

__all__ = [
    "BoundReport",
    "Certificate",
    "ChannelFamily",
    "CurveConfig",
    "FisherMatrix",
    "FisherValue",
    "GadcParams",
    "HeisenbergVerdict",
    "OptimizerConfig",
    "ProbeResult",
    "SdpProblem",
    "Spectrum",
    "StateFamily",
    "apply_channel",
    "build",
    "check_weight_matrix",
    "choi_from_kraus",
    "classical_fisher",
    "compose",
    "cq_channel_fisher",
    "cq_fisher_decomposition",
    "crb",
    "export_sdpa",
    "gadc_channel",
    "gadc_choi",
    "gadc_closed_form",
    "gadc_curve",
    "gadc_kraus",
    "gadc_sld_probe",
    "heisenberg_verdict",
    "hermitian_eig",
    "inequality_gap",
    "kraus_from_choi",
    "max_entangled_vector",
    "partial_trace",
    "read_sdpa",
    "rld_fisher",
    "rld_fisher_channel",
    "rld_matrix",
    "rld_value",
    "rld_value_channel",
    "root_sld_witness",
    "sandwich_gap",
    "seesaw_sld_channel",
    "sld_fisher",
    "sld_fisher_channel",
    "sld_matrix",
    "sld_operator",
    "smoothed_fisher",
    "support_pinv",
    "validate",
    "verify_candidate",
]
