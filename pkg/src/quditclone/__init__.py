"""quditclone: simulate and verify encrypted cloning of qudit states.

Dense, desk-scale numerics: build the encryption/decryption unitaries
for any dimension d >= 2 and party count n >= 1, run the protocol on
state vectors, check every supporting operator identity, and export the
gate-count and autocorrelation tables.
"""

__version__ = "0.1.0"

from .linalg import (
    DEFAULT_TOL,
    OPERATOR_DIM_CAP,
    STATE_AMPLITUDE_CAP,
    DensityMatrix,
    Register,
    SizeCapError,
    StateVector,
    UnitaryCheck,
    basis_state,
    embed_apply,
    is_unitary,
    kron,
    kron_all,
    max_abs_diff,
    overlap,
    partial_trace,
    product_state,
    reduced_density,
)
from .gates import (
    WeylIndex,
    bell_basis_state,
    bell_state,
    controlled_power,
    fourier,
    p_controlled,
    phase_z,
    shift_x,
    swap_gate,
    weyl_displacement,
    x_power,
    z_power,
)
from .cazac import (
    ChuSequence,
    CoeffGrid,
    autocorr2d,
    chu,
    coeff_grid,
    gauss_sum,
    periodic_autocorr,
    zadoff_chu,
)
from .protocol import (
    IdentityCheck,
    IdentitySuiteReport,
    ProtocolParams,
    ProtocolReport,
    c_gate,
    dec_projector_sum,
    exp_generalization,
    pauli_product,
    protocol_register,
    random_state,
    run_protocol,
    u_dec_dense,
    u_enc,
    v_of_p,
    verify_identities,
)
from .circuits import (
    Circuit,
    GateCounts,
    GateOp,
    build_tbar,
    build_tkl,
    build_udec_circuit,
    build_vpx_circuit,
    build_vpz_circuit,
    circuit_to_unitary,
    counts_csv,
    counts_table,
    gate_counts,
    q_entries,
    q_gate,
    tally_gates,
)

__all__ = [name for name in dir() if not name.startswith("_")]
