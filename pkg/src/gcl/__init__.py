"""Exact symbolic engine for gerbe-twisted convolution algebras.

The package verifies, in exact cyclotomic arithmetic, the differential
and homological identities of connective structures on translation
groupoids over desk-scale models (a point or a flat torus with a finite
group acting by affine maps), and evaluates the resulting cyclic
cocycles.  All arithmetic is over Q(zeta_N); nothing is floating point.
"""

__version__ = "0.1.0"

from .cyclotomic import Cyc, cyclotomic_polynomial, degree
from .manifold import ModelManifold, Unit
from .groups import GroupData, GroupValidationError, cyclic_group, product_of_cyclics
from .forms import Form
from .endo import (
    EndMatrix,
    curvature3,
    curvature3_via_nabla,
    graded_commutator,
    nabla_apply,
    nabla_u_apply,
    vartheta,
    vartheta_u,
)
from .gerbe import DDCocycle, GerbeDatum, dd_from_curvature
from .windows import (
    CompatibleWindow,
    TwistTriple,
    UForm,
    WindowError,
    check_compatible,
    d_twisted,
    gauge_transform,
    invariant_extend,
)
from .homology import (
    B_apply,
    Cochain,
    ConvSection,
    GroupCochain,
    ULaurent,
    Unitized,
    b_apply,
    boundary_bB,
    check_invariant,
    delta_group,
    delta_group_primed,
    delta_homog,
    delta_homog_primed,
    group_average,
    homotopy_h,
    psi0,
    psi0_inverse,
    psi1,
    psi2,
    psi_half,
    vertical_boundary,
)
from .jlo import (
    JLOQuery,
    SigmaSeries,
    composite_cochain,
    composite_pair,
    duhamel_pair,
    exp_vartheta,
    sigma_integral,
    tau_chain_check,
    tau_eval,
    tau_level,
)
from .scenarios import (
    Scenario,
    ScenarioError,
    build,
    bundled_scenario_path,
    load_bundled,
    load_scenario,
)
from .suites import (
    cdga_suite,
    chain_suite,
    dd_tables,
    gerbe_suite,
    homological_suite,
    pair_suite,
    run_command,
    vartheta_suite,
)
from .report import build_report, render_text, write_report

__all__ = [
    "Cyc",
    "cyclotomic_polynomial",
    "degree",
    "ModelManifold",
    "Unit",
    "GroupData",
    "GroupValidationError",
    "cyclic_group",
    "product_of_cyclics",
    "Form",
    "EndMatrix",
    "graded_commutator",
    "nabla_apply",
    "nabla_u_apply",
    "vartheta",
    "vartheta_u",
    "curvature3",
    "curvature3_via_nabla",
    "GerbeDatum",
    "DDCocycle",
    "dd_from_curvature",
    "CompatibleWindow",
    "TwistTriple",
    "UForm",
    "WindowError",
    "check_compatible",
    "d_twisted",
    "gauge_transform",
    "invariant_extend",
    "B_apply",
    "Cochain",
    "ConvSection",
    "GroupCochain",
    "ULaurent",
    "Unitized",
    "b_apply",
    "boundary_bB",
    "check_invariant",
    "delta_group",
    "delta_group_primed",
    "delta_homog",
    "delta_homog_primed",
    "group_average",
    "homotopy_h",
    "psi0",
    "psi0_inverse",
    "psi1",
    "psi2",
    "psi_half",
    "vertical_boundary",
    "JLOQuery",
    "SigmaSeries",
    "composite_cochain",
    "composite_pair",
    "duhamel_pair",
    "exp_vartheta",
    "sigma_integral",
    "tau_chain_check",
    "tau_eval",
    "tau_level",
    "Scenario",
    "ScenarioError",
    "build",
    "bundled_scenario_path",
    "load_bundled",
    "load_scenario",
    "cdga_suite",
    "chain_suite",
    "dd_tables",
    "gerbe_suite",
    "homological_suite",
    "pair_suite",
    "run_command",
    "vartheta_suite",
    "build_report",
    "render_text",
    "write_report",
    "__version__",
]
