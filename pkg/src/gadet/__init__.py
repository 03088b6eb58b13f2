"""Integer group determinants of the affine groups GA(1, q)."""

from .achievers import (
    TargetPair,
    Witness,
    achieve,
    achieve_coprime,
    achieve_square,
    cyclotomic_witness,
    decide_membership,
    q9_special_witness,
    q27_special_witness,
    zq1_achievable,
)
from .detengine import (
    DetReport,
    GroupRingElement,
    compute_A,
    compute_B,
    compute_report,
    group_ring_det_with_first_row_ones,
    symbolic_B_polynomial,
)
from .field import FieldSpec, field_for_q, find_field_spec, orbit
from .oracle import brute_force_D, cyclic_det
from .rings import AbRingElement, CycInt
from .search import ProcedureResult, base_element_catalog, reproduce, run_procedure

__version__ = "0.1.0"
