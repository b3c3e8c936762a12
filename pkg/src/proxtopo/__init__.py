"""Proximity-topology checks on finite planar spaces."""
from .cycles import (
    CycleSystem,
    Graph,
    PathCycle,
    PathEdge,
    betti_graph,
    free_group_presentation,
    system_common_vertex,
    system_realization,
    to_graph,
    validate_cycle,
    validate_system,
)
from .descriptive import (
    DescriptiveSpace,
    ProbeTable,
    ProductSpace,
    check_descriptive_axioms,
    open_descriptive_cover,
    product_space,
)
from .errors import ProxTopoError
from .homotopy import (
    DiscreteHomotopy,
    ProximalPath,
    concat,
    is_contractible,
    verify_homotopy,
    verify_homotopy_equivalence,
    verify_path,
)
from .jordan import (
    PlanarCurve,
    common_boundary_check,
    is_simple_closed,
    jordan_check,
    point_in_polygon,
    region_count,
)
from .maps import (
    SpaceMap,
    check_continuity,
    compose,
    glue,
    is_degenerate_descriptive_constant,
    is_dpc,
    is_proximally_continuous,
)
from .nerves import Cover, betti_complex, is_cover, is_good_cover, nerve, nerve_theorem_check
from .persist import FrameRecord, ShapeDescriptor, frame_descriptor, match_shapes, track
from .space_core import FiniteSpace, Point, check_cech_axioms

__version__ = "0.1.0"
