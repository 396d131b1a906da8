"""Exact verification of transformation contextuality in the single-qubit stabilizer subtheory."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    HADAMARD, IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, PHASE, Axis, CliffordElement,
    SignedPauli, act, all_cliffords, compose, enumerate_group, parity_character,
)
from .operational import (  # noqa: E402
    BlochState, Channel, Effect, Measurement, apply_channel, born_probability,
    channel_equivalent, effect_equivalent, make_T1, make_T2, prep_equivalent,
)
from .ontology import gamma, gamma_channel, mu, predict, verify_against_born, xi  # noqa: E402
from .nogo import (  # noqa: E402
    build_ks_partition, build_pnc_partition, coarse_map, exhaustive_relabel_search,
    forced_cell_permutation, theorem1_certificate, theorem2_certificate,
)
