"""gyrotop: verification toolkit for gyrogroups and their topologies."""

from .core import (
    DiskPoint,
    FiniteContext,
    GyroContext,
    IdentityReport,
    MobiusContext,
    UnitComplex,
    coadd,
    cosub,
    gyr_apply,
    mobius_add,
    mobius_gyr_factor,
    mobius_neg,
    verify_gyro_identities,
)
from .diskbase import (
    DiskBall,
    VerificationReport,
    WitnessParams,
    ball_add_radius,
    condition_witness,
    disk_base,
    sample_verify,
)
from .finite import (
    AxiomError,
    CayleyTable,
    FiniteGyrogroup,
    check_axioms,
    find_subgyrogroups,
    from_group,
    load_cayley_table,
)
from .topology import (
    ConditionReport,
    FiniteTopology,
    NeighborhoodFamily,
    check_conditions,
    check_topology_properties,
    generate_topology,
    normal_subgyrogroup_base,
)
from .urysohn import (
    DyadicRational,
    DyadicVFamily,
    UrysohnSchedule,
    build_schedule,
    build_vsets,
    separation_demo,
    urysohn_eval,
    urysohn_oracle,
    verify_vset_facts,
)

__version__ = "0.1.0"
